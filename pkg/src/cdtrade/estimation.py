"""Bayes state estimators and distortion evaluation on finite joints."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import as_name_tuple, check_unit_interval
from .prob import DistortionFn, JointTable, conditional

__all__ = [
    "Estimator",
    "BayesStateEstimator",
    "bayes_estimator",
    "bayes_distortion",
    "posterior_costs",
    "expected_distortion",
    "bern_xor_joint",
    "bern_xor_min_distortion",
    "markov_reduction_check",
    "monte_carlo_distortion",
    "MarkovViolationError",
]

MARKOV_TOL = 1e-9
# Relative slack under which two posterior costs count as a tie.
TIE_RTOL = 1e-12


class MarkovViolationError(ValueError):
    pass


@dataclass(frozen=True)
class Estimator:
    """Deterministic map from an observation tuple to a reconstruction.

    ``table`` is indexed by observation symbol indices (in ``obs_axes``
    order) and holds indices into ``recon``.
    """

    state: str
    obs_axes: tuple
    obs_alphabets: tuple
    recon: tuple
    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.intp)
        shape = tuple(len(a) for a in self.obs_alphabets)
        if table.shape != shape:
            raise ValueError(f"estimator table shape {table.shape} does not match {shape}")
        if table.size and (table.min() < 0 or table.max() >= len(self.recon)):
            raise ValueError("estimator output outside reconstruction alphabet")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def __call__(self, *obs_labels):
        idx = tuple(a.index(l) for a, l in zip(self.obs_alphabets, obs_labels))
        return self.recon[int(self.table[idx])]

    def as_dict(self) -> dict:
        out = {}
        for idx in np.ndindex(*self.table.shape):
            key = tuple(a[i] for a, i in zip(self.obs_alphabets, idx))
            out[key] = self.recon[int(self.table[idx])]
        return out


def _check_state_obs(joint: JointTable, state: str, obs):
    obs = as_name_tuple(obs)
    joint.axis(state)
    for n in obs:
        joint.axis(n)
    if state in obs:
        raise ValueError("state axis must not be among the observation axes")
    if len(set(obs)) != len(obs):
        raise ValueError("repeated observation axis")
    return obs


def posterior_costs(joint: JointTable, state: str, obs, d: DistortionFn) -> np.ndarray:
    """Unnormalized posterior risk ``sum_s P(s, obs) d(s, s_hat)``, shaped ``obs + (|S_hat|,)``."""
    obs = _check_state_obs(joint, state, obs)
    if d.n_states != len(joint.alphabet(state)):
        raise ValueError(
            f"distortion has {d.n_states} rows but state {state!r} has "
            f"{len(joint.alphabet(state))} symbols"
        )
    arr = joint.array(obs + (state,))
    return arr @ d.table


def _argmin_low(costs: np.ndarray) -> np.ndarray:
    lo = costs.min(axis=-1, keepdims=True)
    scale = np.maximum(np.abs(costs).max(axis=-1, keepdims=True), 1e-300)
    return np.argmax(costs <= lo + TIE_RTOL * scale, axis=-1)


def _bayes_table(joint: JointTable, state: str, obs, d: DistortionFn) -> np.ndarray:
    costs = posterior_costs(joint, state, obs, d)
    table = _argmin_low(costs)
    prior = joint.array((state,)) @ d.table
    prior_choice = int(_argmin_low(prior[None, :])[0])
    mass = joint.array(obs) if obs else np.array(1.0)
    return np.where(mass > 0, table, prior_choice)


def bayes_estimator(joint: JointTable, state: str, obs, d: DistortionFn) -> Estimator:
    """Posterior-risk minimizer; ties go to the lowest reconstruction index."""
    obs = _check_state_obs(joint, state, obs)
    table = _bayes_table(joint, state, obs, d)
    return Estimator(state, obs, tuple(joint.alphabet(n) for n in obs), d.recon, table)


def bayes_distortion(joint: JointTable, state: str, obs, d: DistortionFn) -> float:
    """Minimum expected distortion ``sum_obs min_s_hat sum_s P(s, obs) d(s, s_hat)``."""
    costs = posterior_costs(joint, state, obs, d)
    return float(costs.min(axis=-1).sum())


def expected_distortion(joint: JointTable, est: Estimator, d: DistortionFn) -> float:
    for n, a in zip(est.obs_axes, est.obs_alphabets):
        if joint.alphabet(n) != a:
            raise ValueError(f"estimator alphabet for {n!r} does not match the joint")
    if tuple(d.recon) != tuple(est.recon):
        raise ValueError("estimator and distortion disagree on the reconstruction alphabet")
    costs = posterior_costs(joint, est.state, est.obs_axes, d)
    picked = np.take_along_axis(costs, est.table[..., None], axis=-1)
    return float(picked.sum())


def bern_xor_joint(p1: float, p2: float) -> JointTable:
    """Joint of ``S ~ Bern(p1)`` and ``V = S xor W`` with ``W ~ Bern(p2)``."""
    p1 = check_unit_interval(p1, "p1")
    p2 = check_unit_interval(p2, "p2")
    values = np.array([
        [(1 - p1) * (1 - p2), (1 - p1) * p2],
        [p1 * p2, p1 * (1 - p2)],
    ])
    return JointTable((("S", (0, 1)), ("V", (0, 1))), values)


def bern_xor_min_distortion(p1: float, p2: float) -> float:
    """Minimum Hamming distortion estimating ``S`` from ``S xor W``: ``min(p1, p2)``."""
    p1 = check_unit_interval(p1, "p1", hi=0.5)
    p2 = check_unit_interval(p2, "p2", hi=0.5)
    return min(p1, p2)


def markov_reduction_check(joint: JointTable, s: str, v, w, d: DistortionFn) -> tuple[float, float]:
    """Bayes distortions from ``(v, w)`` and from ``v`` alone under ``S - V - W``.

    Raises :class:`MarkovViolationError` when ``P(w | v, s)`` and ``P(w | v)``
    differ in total variation by more than ``MARKOV_TOL`` on the support.
    """
    v, w = as_name_tuple(v), as_name_tuple(w)
    _check_state_obs(joint, s, v + w)
    full = conditional(joint, w, v + (s,))
    reduced = conditional(joint, w, v)
    reduced = np.expand_dims(reduced, axis=len(v))
    w_axes = tuple(range(len(v) + 1, full.ndim))
    tv = 0.5 * np.abs(full - reduced).sum(axis=w_axes)
    support = joint.array(v + (s,)) > 0
    worst = float(np.nanmax(np.where(support, tv, 0.0))) if support.any() else 0.0
    if worst > MARKOV_TOL:
        raise MarkovViolationError(f"S - V - W violated (total variation {worst:g})")
    return bayes_distortion(joint, s, v + w, d), bayes_distortion(joint, s, v, d)


def monte_carlo_distortion(system: JointTable, est: Estimator, d: DistortionFn, n: int,
                           seed: int) -> tuple[float, float]:
    """Sample-mean distortion of ``est`` over ``n`` i.i.d. draws from ``system``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    flat = system.values.ravel()
    draws = rng.choice(flat.size, size=n, p=flat / flat.sum())
    coords = np.unravel_index(draws, system.shape)
    s_idx = coords[system.axis(est.state)]
    obs_idx = tuple(coords[system.axis(a)] for a in est.obs_axes)
    recon_idx = est.table[obs_idx] if obs_idx else np.full(n, int(est.table))
    losses = d.table[s_idx, recon_idx]
    mean = float(losses.mean())
    stderr = float(losses.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return mean, stderr


class BayesStateEstimator(BaseEstimator):
    """Scikit-learn style wrapper: ``fit`` on a joint, ``predict`` reconstructions.

    ``predict`` takes an integer array of observation indices, one column per
    observation axis.
    """

    def __init__(self, state="S", obs=("Y",), distortion=None):
        self.state = state
        self.obs = obs
        self.distortion = distortion

    def fit(self, joint: JointTable, y=None):
        if self.distortion is None:
            raise ValueError("distortion must be set before fitting")
        self.estimator_ = bayes_estimator(joint, self.state, self.obs, self.distortion)
        self.distortion_ = expected_distortion(joint, self.estimator_, self.distortion)
        return self

    def predict(self, obs_indices) -> np.ndarray:
        check_is_fitted(self, "estimator_")
        idx = np.atleast_2d(np.asarray(obs_indices, dtype=np.intp))
        if idx.shape[1] != len(self.estimator_.obs_axes):
            raise ValueError(
                f"expected {len(self.estimator_.obs_axes)} observation columns, got {idx.shape[1]}"
            )
        return self.estimator_.table[tuple(idx.T)]

    def score(self, joint: JointTable, y=None) -> float:
        """Negative expected distortion (higher is better)."""
        check_is_fitted(self, "estimator_")
        return -expected_distortion(joint, self.estimator_, self.distortion)
