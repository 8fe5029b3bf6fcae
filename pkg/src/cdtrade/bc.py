"""Degraded broadcast channel: degradedness tests, inner/outer regions, examples."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from ._blahut import capacity_with_cost
from ._validation import check_unit_interval
from .estimation import bayes_distortion
from .exceptions import InfeasibleError
from .p2p import radar_distortions
from .prob import (
    DeterministicMap,
    DistortionFn,
    FiniteDist,
    JointTable,
    Kernel,
    _from_nats,
    binary_entropy,
    build_joint_bc,
    cond_mutual_information,
    star_convolve,
)

__all__ = [
    "BCScenario",
    "BCVars",
    "BCBounds",
    "Degradedness",
    "check_degraded",
    "bc_joint",
    "bc_terms",
    "bc_region_simultaneous",
    "bc_region_sequential",
    "bc_outer",
    "binary_bc_scenario",
    "binary_bc_vars",
    "binary_bc_example",
    "c_md",
]

MARKOV_TOL = 1e-9
LP_TOL = 1e-8

H1_OBS = ("U", "X", "V1", "V2", "Y1")
H2_OBS = ("U", "V2", "Y2")


@dataclass(frozen=True)
class BCScenario:
    """``P(s, s_T)``, channel ``(X, S) -> (Y1, Y2)``, feedback ``(Y1, Y2) -> Z`` and distortions."""

    pss_t: JointTable
    chan: Kernel
    feedback: DeterministicMap
    d1: DistortionFn
    d2: DistortionFn

    def __post_init__(self):
        if len(self.pss_t.axes) != 2:
            raise ValueError("pss_t must be a joint over (S, S_T)")
        if len(self.chan.inputs) != 2 or len(self.chan.outputs) != 2:
            raise ValueError("chan must be a kernel (X, S) -> (Y1, Y2)")
        if self.chan.inputs[1] != self.pss_t.axes[0][1]:
            raise ValueError("channel state alphabet does not match pss_t")
        if tuple(self.feedback.inputs) != tuple(self.chan.outputs):
            raise ValueError("feedback map must take (Y1, Y2)")
        n_s = len(self.pss_t.axes[0][1])
        for k, d in ((1, self.d1), (2, self.d2)):
            if d.n_states != n_s:
                raise ValueError(f"d{k} rows must match the state alphabet")

    @property
    def x_alphabet(self):
        return self.chan.inputs[0]

    @property
    def st_alphabet(self):
        return self.pss_t.axes[1][1]

    @property
    def z_alphabet(self):
        return self.feedback.output

    @classmethod
    def from_arrays(cls, pss_t, W, psi=None, d1=None, d2=None) -> "BCScenario":
        """Integer-labeled scenario: ``W[x, s, y1, y2]``, ``psi[y1, y2]`` (index into Z)."""
        pss_t = np.asarray(pss_t, dtype=float)
        W = np.asarray(W, dtype=float)
        ns, nt = pss_t.shape
        nx, _, ny1, ny2 = W.shape
        rng = lambda n: tuple(range(n))
        psi = np.zeros((ny1, ny2), dtype=int) if psi is None else np.asarray(psi, dtype=int)
        nz = int(psi.max()) + 1
        mk = lambda d: DistortionFn.hamming(rng(ns)) if d is None else DistortionFn(np.asarray(d, dtype=float))
        return cls(
            JointTable((("S", rng(ns)), ("ST", rng(nt))), pss_t),
            Kernel((rng(nx), rng(ns)), (rng(ny1), rng(ny2)), W),
            DeterministicMap((rng(ny1), rng(ny2)), rng(nz), psi),
            mk(d1),
            mk(d2),
        )


@dataclass(frozen=True)
class BCVars:
    """``P(u, x)`` and the description kernel ``P(v1, v2 | u, x, s_T, z)``."""

    p_ux: JointTable
    comp: Kernel

    @classmethod
    def factored(cls, p_ux: JointTable, comp1: Kernel, comp2: Kernel) -> "BCVars":
        """Conditionally independent descriptions, each a kernel ``(U, X, ST, Z) -> V``."""
        if comp1.inputs != comp2.inputs:
            raise ValueError("comp1 and comp2 must share their inputs")
        table = comp1.table[..., :, None] * comp2.table[..., None, :]
        return cls(p_ux, Kernel(comp1.inputs, comp1.outputs + comp2.outputs, table))

    @classmethod
    def trivial_descriptions(cls, p_ux: JointTable, st_alphabet, z_alphabet) -> "BCVars":
        u_alph, x_alph = (a for _, a in p_ux.axes)
        shape = (len(u_alph), len(x_alph), len(st_alphabet), len(z_alphabet), 1, 1)
        return cls(p_ux, Kernel((u_alph, x_alph, st_alphabet, z_alphabet), ((0,), (0,)), np.ones(shape)))


@dataclass(frozen=True)
class BCBounds:
    """Rate bounds in the current units; ``R*`` are clamped at zero, ``raw`` are not.

    ``feasible`` is false when any raw bound is negative, in which case the
    region for this sample is the origin alone.
    """

    R1: float
    R2: float
    D1: float
    D2: float
    raw: dict = field(default_factory=dict)
    sum_rate: float = math.inf

    @property
    def feasible(self) -> bool:
        return all(v >= 0 for v in self.raw.values())


def bc_joint(scen: BCScenario, vars: BCVars) -> JointTable:
    return build_joint_bc(scen.pss_t, vars.p_ux, scen.chan, scen.feedback, vars.comp)


def bc_terms(joint: JointTable) -> dict:
    """Every information term used by the three regions, in the current units."""
    I = lambda a, b, c=(): cond_mutual_information(joint, a, b, c)
    return {
        "I(U;Y2)": I("U", "Y2"),
        "I(X;Y1|U)": I("X", "Y1", "U"),
        "I(X;V2,Y1|U)": I("X", ("V2", "Y1"), "U"),
        "I(X;Y1)": I("X", "Y1"),
        "I(V2;ST,Z,X|U,Y2)": I("V2", ("ST", "Z", "X"), ("U", "Y2")),
        "I(V2;ST,Z|U,X,Y1)": I("V2", ("ST", "Z"), ("U", "X", "Y1")),
        "I(V1;ST,Z|U,X,V2,Y1)": I("V1", ("ST", "Z"), ("U", "X", "V2", "Y1")),
        "I(V2;Y1|U,Y2)": I("V2", "Y1", ("U", "Y2")),
        "I(V1;ST|U,X,V2,Y1)": I("V1", "ST", ("U", "X", "V2", "Y1")),
        "I(ST;V1,V2|U,X,Y1,Y2)": I("ST", ("V1", "V2"), ("U", "X", "Y1", "Y2")),
    }


def _distortions(scen: BCScenario, joint: JointTable):
    return (bayes_distortion(joint, "S", H1_OBS, scen.d1),
            bayes_distortion(joint, "S", H2_OBS, scen.d2))


def _bounds(scen, joint, raw, **extra) -> BCBounds:
    d1, d2 = _distortions(scen, joint)
    return BCBounds(max(raw["R1"], 0.0), max(raw["R2"], 0.0), d1, d2, raw, **extra)


def bc_region_simultaneous(scen: BCScenario, vars: BCVars, joint: JointTable | None = None) -> BCBounds:
    """Rate bounds when decoder 1 resolves the message and ``V2`` jointly."""
    joint = bc_joint(scen, vars) if joint is None else joint
    t = bc_terms(joint)
    raw = {
        "R1": t["I(X;V2,Y1|U)"] - t["I(V1;ST,Z|U,X,V2,Y1)"],
        "R2": t["I(U;Y2)"] - t["I(V2;ST,Z,X|U,Y2)"],
    }
    return _bounds(scen, joint, raw)


def bc_region_sequential(scen: BCScenario, vars: BCVars, joint: JointTable | None = None) -> BCBounds:
    """Rate bounds with message-first decoding and binned descriptions."""
    joint = bc_joint(scen, vars) if joint is None else joint
    t = bc_terms(joint)
    raw = {
        "R1": t["I(X;Y1|U)"] - t["I(V1;ST,Z|U,X,V2,Y1)"],
        "R2": t["I(U;Y2)"] - max(t["I(V2;ST,Z,X|U,Y2)"], t["I(V2;ST,Z|U,X,Y1)"]),
    }
    return _bounds(scen, joint, raw)


def bc_outer(scen: BCScenario, vars: BCVars, joint: JointTable | None = None) -> BCBounds:
    """Outer-bound expressions evaluated on ``vars``; ``sum_rate`` is the third bound."""
    joint = bc_joint(scen, vars) if joint is None else joint
    t = bc_terms(joint)
    raw = {
        "R1": t["I(X;Y1|U)"] - t["I(V1;ST|U,X,V2,Y1)"],
        "R2": t["I(U;Y2)"] - t["I(V2;Y1|U,Y2)"],
        "sum": t["I(X;Y1)"] - t["I(ST;V1,V2|U,X,Y1,Y2)"],
    }
    return _bounds(scen, joint, raw, sum_rate=max(raw["sum"], 0.0))


# ---------------------------------------------------------------------------
# Degradedness


@dataclass(frozen=True)
class Degradedness:
    """``kind`` is ``physical``, ``statistical`` or ``none``.

    ``witness`` is a row-stochastic ``P(y2 | y1)`` when one exists and
    ``residual`` the largest violation of the defining identity.
    """

    kind: str
    witness: np.ndarray | None
    residual: float


def _cond_y(scen: BCScenario):
    """``P(s_T, y1, y2 | x)`` summed over ``s``, shaped ``(X, ST, Y1, Y2)``."""
    return np.einsum("st,xsab->xtab", scen.pss_t.values, scen.chan.table)


def _physical(scen: BCScenario):
    nx = len(scen.x_alphabet)
    p = _cond_y(scen) / nx  # uniform input probe
    p_y1y2 = p.sum(axis=(0, 1))
    p_y1 = p_y1y2.sum(axis=1)
    p_xty1 = p.sum(axis=3)
    resid = np.abs(p * p_y1[None, None, :, None] - p_xty1[..., None] * p_y1y2[None, None]).max()
    with np.errstate(invalid="ignore", divide="ignore"):
        k = np.where(p_y1[:, None] > 0, p_y1y2 / np.where(p_y1 > 0, p_y1, 1.0)[:, None],
                     1.0 / p_y1y2.shape[1])
    return float(resid), k


def _statistical(scen: BCScenario):
    """Min-max residual of ``P(y2|x,s_T) = sum_y1 P(y1|x,s_T) K(y2|y1)`` over stochastic ``K``."""
    p = _cond_y(scen)
    a = p.sum(axis=3).reshape(-1, p.shape[2])  # rows (x, s_T), cols y1
    b = p.sum(axis=2).reshape(-1, p.shape[3])  # rows (x, s_T), cols y2
    n1, n2 = p.shape[2], p.shape[3]
    nk = n1 * n2
    # Unknowns: K (row-major) and the residual bound t.
    rows, rhs = [], []
    for r in range(a.shape[0]):
        for j in range(n2):
            coef = np.zeros(nk + 1)
            coef[j:nk:n2] = a[r]
            coef_pos = coef.copy()
            coef_pos[-1] = -1.0
            rows.append(coef_pos)
            rhs.append(b[r, j])
            coef_neg = -coef
            coef_neg[-1] = -1.0
            rows.append(coef_neg)
            rhs.append(-b[r, j])
    a_eq = np.zeros((n1, nk + 1))
    for i in range(n1):
        a_eq[i, i * n2:(i + 1) * n2] = 1.0
    c = np.zeros(nk + 1)
    c[-1] = 1.0
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs), A_eq=a_eq, b_eq=np.ones(n1),
                  bounds=[(0, None)] * (nk + 1), method="highs")
    if not res.success:
        return math.inf, None
    k = np.clip(res.x[:nk].reshape(n1, n2), 0.0, None)
    k /= k.sum(axis=1, keepdims=True)
    resid = float(np.abs(a @ k - b).max())
    return resid, k


def check_degraded(scen: BCScenario) -> Degradedness:
    """Strongest degradedness property of the scenario, with a witness channel."""
    resid, k = _physical(scen)
    if resid <= MARKOV_TOL:
        return Degradedness("physical", k, resid)
    resid, k = _statistical(scen)
    if resid <= LP_TOL:
        return Degradedness("statistical", k, resid)
    return Degradedness("none", None, resid)


# ---------------------------------------------------------------------------
# Binary example: Y1 = X + S1, Y2 = Y1 + S2 (mod 2)


def _check_p(p1, p2):
    check_unit_interval(p1, "p1")
    check_unit_interval(p2, "p2")
    if not 0 < p1 < p2 < 0.5:
        raise ValueError(f"need 0 < p1 < p2 < 1/2, got p1={p1}, p2={p2}")


def binary_bc_scenario(p1: float, p2: float) -> BCScenario:
    """State ``S = (S1, S2)``; decoder 1 estimates ``S1``, decoder 2 ``S2``."""
    _check_p(p1, p2)
    states = ((0, 0), (0, 1), (1, 0), (1, 1))
    ps = np.array([(p1 if a else 1 - p1) * (p2 if b else 1 - p2) for a, b in states])
    W = np.zeros((2, 4, 2, 2))
    for x in range(2):
        for k, (a, b) in enumerate(states):
            y1 = x ^ a
            W[x, k, y1, y1 ^ b] = 1.0
    d1 = DistortionFn.from_function(states, (0, 1), lambda s, r: float(s[0] != r))
    d2 = DistortionFn.from_function(states, (0, 1), lambda s, r: float(s[1] != r))
    return BCScenario(
        JointTable((("S", states), ("ST", (0,))), ps[:, None]),
        Kernel(((0, 1), states), ((0, 1), (0, 1)), W),
        DeterministicMap(((0, 1), (0, 1)), (0,), np.zeros((2, 2), dtype=int)),
        d1,
        d2,
    )


def binary_bc_vars(alpha: float, scheme: str) -> BCVars:
    """``U ~ Bern(1/2)``, ``X = U + V`` with ``V ~ Bern(alpha)``; scheme B describes ``V2 = V``."""
    check_unit_interval(alpha, "alpha", hi=0.5)
    p_ux = np.array([[1 - alpha, alpha], [alpha, 1 - alpha]]) / 2
    joint = JointTable((("U", (0, 1)), ("X", (0, 1))), p_ux)
    if scheme == "A":
        return BCVars.trivial_descriptions(joint, (0,), (0,))
    if scheme != "B":
        raise ValueError(f"scheme must be 'A' or 'B', got {scheme!r}")
    table = np.zeros((2, 2, 1, 1, 1, 2))
    for u in range(2):
        for x in range(2):
            table[u, x, 0, 0, 0, u ^ x] = 1.0
    return BCVars(joint, Kernel(((0, 1), (0, 1), (0,), (0,)), ((0,), (0, 1)), table))


def _closed_forms(p1, p2, alpha):
    h = binary_entropy
    one = _from_nats(math.log(2.0))
    p2t = star_convolve(p1, p2)
    a = {"R1": h(star_convolve(alpha, p1)) - h(p1), "R2": one - h(star_convolve(alpha, p2t)),
         "D1": 0.0, "D2": min(star_convolve(alpha, p1), p2)}
    b = {"R1": h(alpha), "R2": one - h(alpha) - h(p2t), "D1": 0.0, "D2": p1}
    return a, b


def binary_bc_example(p1: float = 1 / 20, p2: float = 1 / 10, alpha_grid=None) -> dict:
    """Both description schemes over an ``alpha`` grid, checked against the generic evaluator.

    Returns ``{"alpha", "A", "B", "max_error"}`` where each scheme maps
    ``R1, R2, D1, D2`` (clamped rates) to arrays and ``max_error`` is the
    largest gap between closed forms and the finite-system evaluation.
    """
    _check_p(p1, p2)
    alpha_grid = np.linspace(0.0, 0.5, 101) if alpha_grid is None else np.asarray(alpha_grid, dtype=float)
    scen = binary_bc_scenario(p1, p2)
    keys = ("R1", "R2", "D1", "D2")
    out = {s: {k: [] for k in keys + ("R1_raw", "R2_raw")} for s in "AB"}
    err = 0.0
    for alpha in alpha_grid:
        forms = dict(zip("AB", _closed_forms(p1, p2, float(alpha))))
        for s in "AB":
            got = bc_region_simultaneous(scen, binary_bc_vars(float(alpha), s))
            closed = forms[s]
            err = max(err, abs(got.raw["R1"] - closed["R1"]), abs(got.raw["R2"] - closed["R2"]),
                      abs(got.D1 - closed["D1"]), abs(got.D2 - closed["D2"]))
            out[s]["R1"].append(max(closed["R1"], 0.0))
            out[s]["R2"].append(max(closed["R2"], 0.0))
            out[s]["R1_raw"].append(closed["R1"])
            out[s]["R2_raw"].append(closed["R2"])
            out[s]["D1"].append(closed["D1"])
            out[s]["D2"].append(closed["D2"])
    res = {"alpha": alpha_grid, "max_error": err}
    for s in "AB":
        res[s] = {k: np.array(v) for k, v in out[s].items()}
    return res


# ---------------------------------------------------------------------------
# Monostatic downlink


def c_md(prior: FiniteDist, echo: Kernel, downlink: Kernel, d1: DistortionFn, D: float,
         return_input: bool = False, tol: float = 1e-9):
    """Downlink capacity under a sensing-distortion budget at the transmitter.

    Maximizes ``I(X; Y2' | S)`` subject to ``E d1(S, h1*(X, Y1')) <= D``. The
    transmitter knows ``X``, so the sensing cost is linear in ``P_X`` and the
    problem is a capacity-cost problem for the channel ``x -> (s, y2')``.
    """
    if len(downlink.inputs) != 2 or tuple(downlink.inputs[1]) != tuple(prior.labels):
        raise ValueError("downlink must be a kernel (X, S) -> Y2' over the prior's states")
    if tuple(downlink.inputs[0]) != tuple(echo.inputs[0]):
        raise ValueError("echo and downlink input alphabets differ")
    cost = radar_distortions(prior, echo, d1)
    D = float(D)
    if D < cost.min() - tol:
        raise InfeasibleError(f"D={D:g} is below the minimum sensing distortion {cost.min():g}")
    nx = cost.shape[0]
    W = (prior.pmf[None, :, None] * downlink.table).reshape(nx, -1)
    budget = min(D, float(cost.max()))
    px, info, _ = capacity_with_cost(W, cost, max(budget, float(cost.min())), tol=tol)
    value = _from_nats(max(info, 0.0))
    if return_input:
        return value, FiniteDist(echo.inputs[0], px / px.sum())
    return value
