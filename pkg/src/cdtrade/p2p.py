"""Point-to-point capacity-distortion solver.

For a fixed multiplier ``rho`` the Lagrangian ``I(X;Y) - I(V;S_T|X,Y) - rho D``
splits across input symbols: the compression kernel for ``X = x`` only sees
``P(s, s_T, y | x)``. Each per-symbol problem ``min I(V;S_T|Y,X=x) + rho D_x``
is solved by alternating minimization from many starts, and the input law by
Blahut-Arimoto with the per-symbol penalty as a cost. Constrained points come
from the upper concave envelope over the ``rho`` sweep, realized by an
explicit time-sharing joint so every reported rate is evaluated, not
interpolated.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._blahut import ba_with_cost, mutual_info_nats
from .estimation import Estimator, bayes_distortion, bayes_estimator
from .exceptions import InfeasibleError
from .geometry import concave_envelope, upper_hull
from .prob import (
    DeterministicMap,
    DistortionFn,
    FiniteDist,
    JointTable,
    Kernel,
    _from_nats,
    build_joint_p2p,
    cond_mutual_information,
    mutual_information,
)

__all__ = [
    "P2PScenario",
    "CDPoint",
    "CapacityDistortion",
    "CausalCapacityDistortion",
    "cd_objective",
    "solve_cd",
    "cd_curve",
    "d_min",
    "causal_cd",
    "causal_scenario",
    "radar_distortions",
    "radar_min_distortion",
    "DEFAULT_RHO_GRID",
]

LN2 = math.log(2.0)
DEFAULT_RHO_GRID = (0.0,) + tuple(2.0 ** k for k in range(-6, 11))
D_TOL = 1e-9


@dataclass(frozen=True)
class P2PScenario:
    """Channel ``P(y|x,s)``, state/SIT law, feedback map and distortion."""

    pss_t: JointTable
    chan: Kernel
    feedback: DeterministicMap
    distortion: DistortionFn

    def __post_init__(self):
        if len(self.pss_t.axes) != 2:
            raise ValueError("pss_t must be a joint over (S, S_T)")
        if len(self.chan.inputs) != 2 or len(self.chan.outputs) != 1:
            raise ValueError("chan must be a kernel (X, S) -> Y")
        if self.chan.inputs[1] != self.pss_t.axes[0][1]:
            raise ValueError("channel state alphabet does not match pss_t")
        if tuple(self.feedback.inputs) != (self.chan.outputs[0],):
            raise ValueError("feedback map must take the channel output alphabet")
        if self.distortion.n_states != len(self.pss_t.axes[0][1]):
            raise ValueError("distortion rows must match the state alphabet")

    @property
    def x_alphabet(self):
        return self.chan.inputs[0]

    @property
    def sizes(self) -> dict:
        return {
            "S": len(self.pss_t.axes[0][1]),
            "ST": len(self.pss_t.axes[1][1]),
            "X": len(self.chan.inputs[0]),
            "Y": len(self.chan.outputs[0]),
            "Z": len(self.feedback.output),
        }

    @classmethod
    def from_arrays(cls, pss_t, W, phi=None, d=None, n_z=None) -> "P2PScenario":
        """Integer-labeled scenario from raw arrays.

        ``pss_t[s, t]``, ``W[x, s, y]``, ``phi[y]`` (index into Z; default
        constant), ``d[s, s_hat]`` (default Hamming on S).
        """
        pss_t = np.asarray(pss_t, dtype=float)
        W = np.asarray(W, dtype=float)
        ns, nt = pss_t.shape
        nx, _, ny = W.shape
        rng = lambda n: tuple(range(n))
        phi = np.zeros(ny, dtype=int) if phi is None else np.asarray(phi, dtype=int)
        nz = int(phi.max()) + 1 if n_z is None else n_z
        dist = DistortionFn.hamming(rng(ns)) if d is None else DistortionFn(np.asarray(d, dtype=float))
        return cls(
            JointTable((("S", rng(ns)), ("ST", rng(nt))), pss_t),
            Kernel((rng(nx), rng(ns)), (rng(ny),), W),
            DeterministicMap((rng(ny),), rng(nz), phi),
            dist,
        )


@dataclass
class CDPoint:
    """One solved operating point.

    ``rate`` is clamped at zero; ``raw_rate`` keeps the objective value.
    ``distortion`` is the achieved Bayes distortion, at most ``D``.
    """

    D: float
    rate: float
    raw_rate: float
    distortion: float
    px: FiniteDist
    comp: Kernel
    estimator: Estimator
    joint: JointTable = field(repr=False)


def cd_objective(joint: JointTable) -> float:
    """``I(X;Y) - I(V;S_T|X,Y)`` on a joint over ``(S, ST, X, Y, Z, V)``."""
    return mutual_information(joint, "X", "Y") - cond_mutual_information(joint, "V", "ST", ("X", "Y"))


# ---------------------------------------------------------------------------
# Numerical core (all rates in nats)


class _Arrays:
    def __init__(self, scen: P2PScenario):
        pss = scen.pss_t.values
        W = scen.chan.table
        self.P3 = np.einsum("st,xsy->xsty", pss, W)
        self.P2 = self.P3.sum(axis=1)
        phi = scen.feedback.table
        self.nz = len(scen.feedback.output)
        self.phi = np.asarray(phi, dtype=np.intp)
        self.Phi = np.eye(self.nz)[self.phi]
        self.P2z = np.einsum("xty,yz->xtz", self.P2, self.Phi)
        self.py = self.P2.sum(axis=1)
        self.Wxy = self.py
        self.d = scen.distortion.table
        self.nx, self.ns, self.nt, self.ny = self.P3.shape


def _softmax(a: np.ndarray) -> np.ndarray:
    m = np.max(a, axis=-1, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    e = np.exp(a - m)
    return e / e.sum(axis=-1, keepdims=True)


def _evaluate(arr: _Arrays, q: np.ndarray):
    """Per-(batch, x) compression term, Bayes distortion and helper tensors."""
    qy = q[:, :, :, arr.phi, :]
    J = arr.P2[None, :, :, :, None] * qy
    Jyv = J.sum(axis=2)
    py = arr.py[None, :, :, None]
    nv = q.shape[-1]
    r = np.where(py > 0, Jyv / np.where(py > 0, py, 1.0), 1.0 / nv)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(J > 0, qy / r[:, :, None, :, :], 1.0)
        info = np.sum(np.where(J > 0, J * np.log(ratio), 0.0), axis=(2, 3, 4))
    cost = np.einsum("xsty,bxtyv,sk->bxyvk", arr.P3, qy, arr.d, optimize=True)
    lo = cost.min(axis=-1, keepdims=True)
    scale = np.maximum(np.abs(cost).max(axis=-1, keepdims=True), 1e-300)
    h = np.argmax(cost <= lo + 1e-12 * scale, axis=-1)
    dist = lo[..., 0].sum(axis=(2, 3))
    return qy, r, h, info, dist


def _inner_solve(arr: _Arrays, rho: float, q: np.ndarray, max_iter: int, tol: float):
    """Alternating minimization of ``I(V;S_T|Y,X=x) + rho D_x`` for a batch of starts."""
    history = []
    live = arr.P2z[None, :, :, :, None] > 0
    for it in range(max_iter):
        qy, r, h, info, dist = _evaluate(arr, q)
        obj = info + rho * dist
        history.append(obj)
        if it >= 10 and np.max(history[-11] - obj) < tol:
            break
        dsel = arr.d[:, h]  # (S, B, X, Y, V)
        pen = np.einsum("xsty,sbxyv->bxtyv", arr.P3, dsel, optimize=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            logr = np.log(r)[:, :, None, :, :]
            a_y = np.where(arr.P2[None, :, :, :, None] > 0, arr.P2[None, :, :, :, None] * logr, 0.0)
        a_y = a_y - rho * pen
        # Sum over y within each feedback cell; einsum would turn -inf * 0 into NaN.
        a_z = np.stack([a_y[:, :, :, arr.phi == z, :].sum(axis=3) for z in range(arr.nz)], axis=3)
        a_z = a_z / np.where(live, arr.P2z[None, :, :, :, None], 1.0)
        # Symbols outside the current support stay outside (exp(-inf) = 0).
        a_z = np.where(q > 0, a_z, -np.inf)
        q = np.where(live, _softmax(a_z), q)
    _, _, _, info, dist = _evaluate(arr, q)
    return q, info, dist


def _starts(arr: _Arrays, nv: int, n_starts: int, rng: np.random.Generator) -> np.ndarray:
    shape = (arr.nx, arr.nt, arr.nz, nv)
    out = []
    trivial = np.zeros(shape)
    trivial[..., 0] = 1.0
    out.append(trivial)
    inj = np.zeros(shape)
    for t in range(arr.nt):
        for z in range(arr.nz):
            inj[:, t, z, (t * arr.nz + z) % nv] = 1.0
    out.append(inj)
    while len(out) < max(n_starts, 2):
        out.append(rng.dirichlet(np.ones(nv), size=shape[:-1]))
    return np.stack(out[:max(n_starts, 2)])


@dataclass
class _Candidate:
    rho: float
    D: float
    R: float  # nats
    px: np.ndarray
    q: np.ndarray  # (X, T, Z, V)


def _solve_rho(arr: _Arrays, rho_bits: float, nv: int, n_starts: int, seed: int,
               max_iter: int, tol: float) -> list[_Candidate]:
    rho = rho_bits * LN2
    rng = np.random.default_rng(seed)
    q0 = _starts(arr, nv, n_starts, rng)
    q, info, dist = _inner_solve(arr, rho, q0, max_iter, tol)
    best = np.argmin(info + rho * dist, axis=0)
    xs = np.arange(arr.nx)
    qx = q[best, xs]
    ix, dx = info[best, xs], dist[best, xs]
    px, i_xy, _ = ba_with_cost(arr.Wxy, ix + rho * dx, 1.0)
    out = [_Candidate(rho_bits, float(px @ dx), i_xy - float(px @ ix), px, qx)]
    for x in range(arr.nx):
        e = np.zeros(arr.nx)
        e[x] = 1.0
        out.append(_Candidate(rho_bits, float(dx[x]), -float(ix[x]), e, qx))
    return out


def _envelope_vertices(cands: list[_Candidate]) -> list[_Candidate]:
    """Upper-hull vertices up to the maximum-rate candidate."""
    by_d: dict[float, _Candidate] = {}
    for c in cands:
        key = round(c.D, 12)
        if key not in by_d or c.R > by_d[key].R:
            by_d[key] = c
    pts = [by_d[k] for k in sorted(by_d)]
    top = max(range(len(pts)), key=lambda i: (pts[i].R, -pts[i].D))
    pts = pts[: top + 1]
    if len(pts) == 1:
        return pts
    idx = upper_hull([c.D for c in pts], [c.R for c in pts])
    return [pts[i] for i in idx]


def _chord_at(verts: list[_Candidate], D: float) -> float:
    ds = [v.D for v in verts]
    rs = [v.R for v in verts]
    if D >= ds[-1]:
        return rs[-1]
    return float(np.interp(D, ds, rs))


class CapacityDistortion(BaseEstimator):
    """Estimator-style solver for the capacity-distortion function.

    ``fit(scenario)`` runs the multiplier sweep; :meth:`point`, :meth:`curve`
    and ``d_min_`` read from it. ``v_size=None`` uses ``|X||S_T||Z| + 2``.
    """

    def __init__(self, v_size=None, n_starts=20, rho_grid=DEFAULT_RHO_GRID, max_iter=5000,
                 tol=1e-7, n_refine=10, random_state=0, n_jobs=1):
        self.v_size = v_size
        self.n_starts = n_starts
        self.rho_grid = rho_grid
        self.max_iter = max_iter
        self.tol = tol
        self.n_refine = n_refine
        self.random_state = random_state
        self.n_jobs = n_jobs

    def _seed(self, k: int) -> int:
        return int(np.random.SeedSequence([int(self.random_state), k]).generate_state(1)[0])

    def fit(self, scenario: P2PScenario, y=None):
        if not isinstance(scenario, P2PScenario):
            raise TypeError("fit expects a P2PScenario")
        sz = scenario.sizes
        nv = sz["X"] * sz["ST"] * sz["Z"] + 2 if self.v_size is None else int(self.v_size)
        if nv < 1:
            raise ValueError("v_size must be >= 1")
        if self.n_starts < 1:
            raise ValueError("n_starts must be >= 1")
        self.scenario_ = scenario
        self.v_size_ = nv
        self._arr = _Arrays(scenario)
        grid = sorted(float(r) for r in self.rho_grid)
        if not grid or grid[0] < 0:
            raise ValueError("rho_grid must be nonempty and nonnegative")
        jobs = (delayed(_solve_rho)(self._arr, rho, nv, self.n_starts, self._seed(k),
                                    self.max_iter, self.tol) for k, rho in enumerate(grid))
        results = Parallel(n_jobs=self.n_jobs, prefer="threads")(jobs)
        self.candidates_ = [c for res in results for c in res]
        self._n_solves = len(grid)
        verts = _envelope_vertices(self.candidates_)
        self.vertices_ = verts
        self.d_min_ = self._zero_crossing(verts)
        self.capacity_ = _from_nats(max(verts[-1].R, 0.0))
        self.d_at_capacity_ = verts[-1].D
        return self

    @staticmethod
    def _zero_crossing(verts) -> float:
        if verts[-1].R < 0:
            return math.inf
        for a, b in zip(verts, verts[1:]):
            if b.R >= 0 > a.R:
                return a.D + (b.D - a.D) * (0 - a.R) / (b.R - a.R)
        return verts[0].D

    def _refine(self, verts, D):
        """Bisect the multiplier between the vertices bracketing ``D``."""
        cands = list(self.candidates_)
        for k in range(self.n_refine):
            if D >= verts[-1].D or D <= verts[0].D:
                break
            j = next(i for i in range(1, len(verts)) if verts[i].D >= D)
            a, b = verts[j - 1], verts[j]
            lo, hi = sorted((a.rho, b.rho))
            if hi - lo < 1e-9 * max(hi, 1.0):
                break
            mid = math.sqrt(lo * hi) if lo > 0 else 0.5 * hi
            new = _solve_rho(self._arr, mid, self.v_size_, self.n_starts,
                             self._seed(self._n_solves + 1000 + k), self.max_iter, self.tol)
            before = _chord_at(verts, D)
            cands.extend(new)
            verts = _envelope_vertices(cands)
            if _chord_at(verts, D) - before < 1e-10:
                break
        return verts

    def _realize(self, parts, D) -> CDPoint:
        """Build the explicit (time-shared) joint for weighted candidates."""
        scen = self.scenario_
        arr = self._arr
        nv = self.v_size_
        px = sum(w * c.px for w, c in parts)
        comp = np.zeros((arr.nx, arr.nt, arr.nz, nv * len(parts)))
        for k, (w, c) in enumerate(parts):
            with np.errstate(invalid="ignore", divide="ignore"):
                share = np.where(px > 0, w * c.px / np.where(px > 0, px, 1.0), 1.0 if k == 0 else 0.0)
            comp[..., k * nv:(k + 1) * nv] = share[:, None, None, None] * c.q
        px = px / px.sum()
        v_alph = tuple(range(nv * len(parts)))
        x_alph = scen.x_alphabet
        t_alph = scen.pss_t.axes[1][1]
        kern = Kernel((x_alph, t_alph, scen.feedback.output), (v_alph,), comp)
        pxd = FiniteDist(x_alph, px)
        joint = build_joint_p2p(scen.pss_t, pxd, scen.chan, scen.feedback, kern)
        raw = cd_objective(joint)
        est = bayes_estimator(joint, "S", ("X", "V", "Y"), scen.distortion)
        dist = bayes_distortion(joint, "S", ("X", "V", "Y"), scen.distortion)
        return CDPoint(D, max(raw, 0.0), raw, dist, pxd, kern, est, joint)

    def point(self, D: float) -> CDPoint:
        """Certified operating point with distortion at most ``D``."""
        check_is_fitted(self, "vertices_")
        D = float(D)
        if D < self.d_min_ - D_TOL:
            raise InfeasibleError(f"D={D:g} is below the minimum distortion {self.d_min_:g}")
        verts = self.vertices_
        if D < verts[-1].D:
            verts = self._refine(verts, D)
        if D >= verts[-1].D:
            return self._realize([(1.0, verts[-1])], D)
        if D <= verts[0].D:
            return self._realize([(1.0, verts[0])], D)
        j = next(i for i in range(1, len(verts)) if verts[i].D >= D)
        a, b = verts[j - 1], verts[j]
        lam = (b.D - D) / (b.D - a.D)
        if lam >= 1 - 1e-15:
            return self._realize([(1.0, a)], D)
        if lam <= 1e-15:
            return self._realize([(1.0, b)], D)
        return self._realize([(lam, a), (1 - lam, b)], D)

    def curve(self, D_grid):
        """Solved points on a sorted grid, lifted to their concave non-decreasing envelope."""
        return cd_curve_from_model(self, D_grid)


def cd_curve_from_model(model: CapacityDistortion, D_grid):
    D_grid = [float(d) for d in D_grid]
    if not D_grid:
        raise ValueError("empty D grid")
    if any(b <= a for a, b in zip(D_grid, D_grid[1:])):
        raise ValueError("D grid must be strictly increasing")
    pts = []
    for D in D_grid:
        try:
            pts.append(model.point(D))
        except InfeasibleError:
            continue
    if not pts:
        return [], np.array([])
    _, env = concave_envelope([p.D for p in pts], [p.rate for p in pts])
    return pts, env


# ---------------------------------------------------------------------------
# Functional wrappers


def solve_cd(scen: P2PScenario, D: float, **opts) -> CDPoint:
    return CapacityDistortion(**opts).fit(scen).point(D)


def cd_curve(scen: P2PScenario, D_grid, **opts):
    """``(points, envelope)``: raw solved points and the concave envelope of their rates.

    Grid points below the minimum distortion are skipped.
    """
    return cd_curve_from_model(CapacityDistortion(**opts).fit(scen), D_grid)


def d_min(scen: P2PScenario, **opts) -> float:
    return CapacityDistortion(**opts).fit(scen).d_min_


# ---------------------------------------------------------------------------
# Causal state information (Shannon strategies)


def _strategies(nx: int, nt: int):
    return list(itertools.product(range(nx), repeat=nt))


def causal_scenario(scen: P2PScenario, strategies) -> P2PScenario:
    """Equivalent strictly-causal scenario whose input is a strategy index.

    The state becomes ``(S, S_T)`` so the channel can apply ``x = f_u(s_T)``;
    the encoder still observes ``S_T`` for the description.
    """
    pss = scen.pss_t.values
    ns, nt = pss.shape
    s_alph, t_alph = scen.pss_t.axes[0][1], scen.pss_t.axes[1][1]
    joint_state = tuple((s, t) for s in s_alph for t in t_alph)
    pst = np.zeros((ns * nt, nt))
    for i in range(ns):
        for j in range(nt):
            pst[i * nt + j, j] = pss[i, j]
    W = scen.chan.table
    nu = len(strategies)
    Wu = np.zeros((nu, ns * nt, W.shape[2]))
    for u, f in enumerate(strategies):
        for i in range(ns):
            for j in range(nt):
                Wu[u, i * nt + j] = W[f[j], i]
    u_alph = tuple(range(nu))
    dtab = np.repeat(scen.distortion.table, nt, axis=0)
    return P2PScenario(
        JointTable((("S", joint_state), ("ST", t_alph)), pst),
        Kernel((u_alph, joint_state), scen.chan.outputs, Wu),
        scen.feedback,
        DistortionFn(dtab, scen.distortion.recon),
    )


class CausalCapacityDistortion(BaseEstimator):
    """Capacity-distortion with causal SIT via Shannon strategies.

    ``u_size=None`` indexes ``U`` by all ``|X|^|S_T|`` strategy maps (one
    fit). An integer ``u_size`` instead enumerates every multiset of that
    many strategies and keeps the best, matching a fixed-``|U|`` search.
    """

    def __init__(self, u_size=None, v_size=None, n_starts=20, rho_grid=DEFAULT_RHO_GRID,
                 max_iter=5000, tol=1e-7, n_refine=10, random_state=0, n_jobs=1):
        self.u_size = u_size
        self.v_size = v_size
        self.n_starts = n_starts
        self.rho_grid = rho_grid
        self.max_iter = max_iter
        self.tol = tol
        self.n_refine = n_refine
        self.random_state = random_state
        self.n_jobs = n_jobs

    def fit(self, scenario: P2PScenario, y=None):
        sz = scenario.sizes
        strat = _strategies(sz["X"], sz["ST"])
        if self.u_size is None:
            assignments = [tuple(strat)]
        else:
            if self.u_size < 1:
                raise ValueError("u_size must be >= 1")
            assignments = list(itertools.combinations_with_replacement(strat, int(self.u_size)))
        nv = sz["X"] * sz["ST"] * sz["Z"] + 2 if self.v_size is None else self.v_size
        opts = dict(v_size=nv, n_starts=self.n_starts, rho_grid=self.rho_grid,
                    max_iter=self.max_iter, tol=self.tol, n_refine=self.n_refine,
                    random_state=self.random_state, n_jobs=self.n_jobs)
        self.assignments_ = assignments
        self.models_ = [CapacityDistortion(**opts).fit(causal_scenario(scenario, a))
                        for a in assignments]
        self.d_min_ = min(m.d_min_ for m in self.models_)
        return self

    def point(self, D: float) -> CDPoint:
        check_is_fitted(self, "models_")
        best = None
        for m in self.models_:
            if D < m.d_min_ - D_TOL:
                continue
            pt = m.point(D)
            if best is None or pt.raw_rate > best.raw_rate:
                best = pt
        if best is None:
            raise InfeasibleError(f"D={D:g} is below the minimum distortion {self.d_min_:g}")
        return best

    def curve(self, D_grid):
        return cd_curve_from_model(self, D_grid)


def causal_cd(scen: P2PScenario, D: float, **opts) -> CDPoint:
    return CausalCapacityDistortion(**opts).fit(scen).point(D)


# ---------------------------------------------------------------------------
# Radar special case


def radar_distortions(prior: FiniteDist, echo: Kernel, d: DistortionFn) -> np.ndarray:
    """Bayes distortion ``E[d(S, h*(x, Y'))]`` for each deterministic input ``x``."""
    if len(echo.inputs) != 2 or len(echo.outputs) != 1:
        raise ValueError("echo must be a kernel (X, S) -> Y'")
    if tuple(echo.inputs[1]) != tuple(prior.labels):
        raise ValueError("echo state alphabet does not match the prior")
    psy = prior.pmf[None, :, None] * echo.table  # (X, S, Y')
    cost = np.einsum("xsy,sk->xyk", psy, d.table)
    return cost.min(axis=-1).sum(axis=-1)


def radar_min_distortion(prior: FiniteDist, echo: Kernel, d: DistortionFn):
    """``(x*, D*)``: the best deterministic probing symbol (lowest index on ties)."""
    vals = radar_distortions(prior, echo, d)
    lo = vals.min()
    i = int(np.argmax(vals <= lo + 1e-12 * max(1.0, abs(lo))))
    return echo.inputs[0][i], float(vals[i])
