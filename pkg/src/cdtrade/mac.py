"""Multiple-access channel with feedback and state: inner and outer regions, examples."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from ._blahut import _interior, ba_with_cost, capacity_with_cost
from .estimation import bayes_distortion, expected_distortion
from .exceptions import InfeasibleError
from .geometry import Polyhedron2D, rate_region_hull, upper_hull
from .p2p import P2PScenario, radar_distortions
from .prob import (
    DeterministicMap,
    DistortionFn,
    FiniteDist,
    JointTable,
    Kernel,
    _from_nats,
    build_joint_mac,
    cond_mutual_information,
    product_joint,
)

__all__ = [
    "MACScenario",
    "MACVars",
    "MACBounds",
    "mac_joint",
    "mac_terms",
    "mac_inner_bounds",
    "mac_no_feedback_bounds",
    "mac_region",
    "mac_outer_sum",
    "cooperative_embedding",
    "cooperative_scenario",
    "c_mu",
    "c_mu_curve",
    "double_usage_scenario",
    "double_usage_example",
    "half_entropy_p",
]

MAC_OBS = ("U", "W1", "W2", "X1", "X2", "V1", "V2", "Y")
TRIVIAL = (0,)


@dataclass(frozen=True)
class MACScenario:
    """``P(s, s1, s2)``, channel ``(X1, X2, S) -> Y``, feedback maps ``Y -> Z_k``, distortion on ``S``."""

    psss: JointTable
    chan: Kernel
    phi1: DeterministicMap
    phi2: DeterministicMap
    distortion: DistortionFn

    def __post_init__(self):
        if len(self.psss.axes) != 3:
            raise ValueError("psss must be a joint over (S, S1, S2)")
        if len(self.chan.inputs) != 3 or len(self.chan.outputs) != 1:
            raise ValueError("chan must be a kernel (X1, X2, S) -> Y")
        if self.chan.inputs[2] != self.psss.axes[0][1]:
            raise ValueError("channel state alphabet does not match psss")
        for k, phi in ((1, self.phi1), (2, self.phi2)):
            if tuple(phi.inputs) != (self.chan.outputs[0],):
                raise ValueError(f"phi{k} must take the channel output alphabet")
        if self.distortion.n_states != len(self.psss.axes[0][1]):
            raise ValueError("distortion rows must match the state alphabet")

    def alphabet(self, name: str):
        return {
            "S": self.psss.axes[0][1], "S1": self.psss.axes[1][1], "S2": self.psss.axes[2][1],
            "X1": self.chan.inputs[0], "X2": self.chan.inputs[1], "Y": self.chan.outputs[0],
            "Z1": self.phi1.output, "Z2": self.phi2.output,
        }[name]

    @classmethod
    def from_arrays(cls, psss, W, phi1=None, phi2=None, d=None) -> "MACScenario":
        """Integer-labeled scenario: ``psss[s, s1, s2]``, ``W[x1, x2, s, y]``, ``phi_k[y]``."""
        psss = np.asarray(psss, dtype=float)
        W = np.asarray(W, dtype=float)
        ns, n1, n2 = psss.shape
        nx1, nx2, _, ny = W.shape
        rng = lambda n: tuple(range(n))

        def fb(phi):
            phi = np.zeros(ny, dtype=int) if phi is None else np.asarray(phi, dtype=int)
            return DeterministicMap((rng(ny),), rng(int(phi.max()) + 1), phi)

        dist = DistortionFn.hamming(rng(ns)) if d is None else DistortionFn(np.asarray(d, dtype=float))
        return cls(
            JointTable((("S", rng(ns)), ("S1", rng(n1)), ("S2", rng(n2))), psss),
            Kernel((rng(nx1), rng(nx2), rng(ns)), (rng(ny),), W),
            fb(phi1),
            fb(phi2),
            dist,
        )


@dataclass(frozen=True)
class MACVars:
    """``P_U``, ``P(w_k, x_k | u)`` and description kernels ``P(v_k | u, w1, w2, x_k, s_k, z_k)``."""

    pu: FiniteDist
    p_wx1: Kernel
    p_wx2: Kernel
    comp1: Kernel
    comp2: Kernel

    @classmethod
    def independent(cls, scen: MACScenario, px1, px2, comp1=None, comp2=None) -> "MACVars":
        """No cooperation layer: trivial ``U, W1, W2``.

        ``px_k`` is a pmf over ``X_k``; ``comp_k`` is an optional kernel
        ``(X_k, S_k) -> V_k`` (trivial description when omitted).
        """
        pu = FiniteDist(TRIVIAL, [1.0])
        wx = []
        for k, px in ((1, px1), (2, px2)):
            pmf = px.pmf if isinstance(px, FiniteDist) else np.asarray(px, dtype=float)
            wx.append(Kernel((TRIVIAL,), (TRIVIAL, scen.alphabet(f"X{k}")), pmf[None, None, :]))
        comps = []
        for k, comp in ((1, comp1), (2, comp2)):
            x_alph, s_alph, z_alph = (scen.alphabet(f"{n}{k}") for n in ("X", "S", "Z"))
            ins = (TRIVIAL, TRIVIAL, TRIVIAL, x_alph, s_alph, z_alph)
            if comp is None:
                table = np.ones((1, 1, 1, len(x_alph), len(s_alph), len(z_alph), 1))
                comps.append(Kernel(ins, (TRIVIAL,), table))
                continue
            if tuple(comp.inputs) != (x_alph, s_alph):
                raise ValueError(f"comp{k} must be a kernel (X{k}, S{k}) -> V{k}")
            table = np.broadcast_to(comp.table[None, None, None, :, :, None, :],
                                    (1, 1, 1, len(x_alph), len(s_alph), len(z_alph), comp.out_shape[0]))
            comps.append(Kernel(ins, comp.outputs, table.copy()))
        return cls(pu, wx[0], wx[1], comps[0], comps[1])


@dataclass(frozen=True)
class MACBounds:
    """Clamped bounds plus raw values; ``feasible`` is false if any raw bound is negative."""

    R1: float
    R2: float
    sum_a: float
    sum_b: float
    D: float
    raw: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return all(v >= 0 for v in self.raw.values())

    def polyhedron(self) -> Polyhedron2D:
        return Polyhedron2D.from_bounds(self.R1, self.R2, (self.sum_a, self.sum_b))


def mac_joint(scen: MACScenario, vars: MACVars) -> JointTable:
    return build_joint_mac(scen.psss, vars.pu, vars.p_wx1, vars.p_wx2, scen.chan,
                           scen.phi1, scen.phi2, vars.comp1, vars.comp2)


def mac_terms(joint: JointTable) -> dict:
    I = lambda a, b, c=(): cond_mutual_information(joint, a, b, c)
    return {
        "I(X1,V1;Y|U,W1,W2,X2,V2)": I(("X1", "V1"), "Y", ("U", "W1", "W2", "X2", "V2")),
        "I(X2,V2;Y|U,W1,W2,X1,V1)": I(("X2", "V2"), "Y", ("U", "W1", "W2", "X1", "V1")),
        "I(X1,X2,V1,V2;Y|U,W1,W2)": I(("X1", "X2", "V1", "V2"), "Y", ("U", "W1", "W2")),
        "I(U,W1,W2,X1,X2,V1,V2;Y)": I(("U", "W1", "W2", "X1", "X2", "V1", "V2"), "Y"),
        "I(W1;Z2|S2,U,W2,X2)": I("W1", "Z2", ("S2", "U", "W2", "X2")),
        "I(W2;Z1|S1,U,W1,X1)": I("W2", "Z1", ("S1", "U", "W1", "X1")),
        "I(V1;S1,Z1|U,W1,W2,X1)": I("V1", ("S1", "Z1"), ("U", "W1", "W2", "X1")),
        "I(V2;S2,Z2|U,W1,W2,X2)": I("V2", ("S2", "Z2"), ("U", "W1", "W2", "X2")),
    }


def mac_inner_bounds(scen: MACScenario, vars: MACVars, joint: JointTable | None = None) -> MACBounds:
    """Cooperative inner bounds (two individual, two sum) and the Bayes distortion."""
    joint = mac_joint(scen, vars) if joint is None else joint
    t = mac_terms(joint)
    coop1, coop2 = t["I(W1;Z2|S2,U,W2,X2)"], t["I(W2;Z1|S1,U,W1,X1)"]
    pen1, pen2 = t["I(V1;S1,Z1|U,W1,W2,X1)"], t["I(V2;S2,Z2|U,W1,W2,X2)"]
    raw = {
        "R1": t["I(X1,V1;Y|U,W1,W2,X2,V2)"] + coop1 - pen1,
        "R2": t["I(X2,V2;Y|U,W1,W2,X1,V1)"] + coop2 - pen2,
        "sum_a": t["I(X1,X2,V1,V2;Y|U,W1,W2)"] + coop1 + coop2 - pen1 - pen2,
        "sum_b": t["I(U,W1,W2,X1,X2,V1,V2;Y)"] - pen1 - pen2,
    }
    D = bayes_distortion(joint, "S", MAC_OBS, scen.distortion)
    c = {k: max(v, 0.0) for k, v in raw.items()}
    return MACBounds(c["R1"], c["R2"], c["sum_a"], c["sum_b"], D, raw)


def mac_no_feedback_bounds(joint: JointTable) -> dict:
    """Bounds written directly in the no-feedback, no-cooperation form (raw values)."""
    I = lambda a, b, c=(): cond_mutual_information(joint, a, b, c)
    pen1 = I("V1", "S1", "X1")
    pen2 = I("V2", "S2", "X2")
    return {
        "R1": I(("X1", "V1"), "Y", ("X2", "V2")) - pen1,
        "R2": I(("X2", "V2"), "Y", ("X1", "V1")) - pen2,
        "sum": I(("X1", "X2", "V1", "V2"), "Y") - pen1 - pen2,
    }


def mac_region(scen: MACScenario, samples, D: float = math.inf):
    """Convex hull of the union of per-sample pentagons whose distortion is at most ``D``.

    Returns ``(hull_vertices, bounds_list)``; ``bounds_list`` keeps every
    evaluated sample (including those above ``D``) for provenance.
    """
    bounds = [mac_inner_bounds(scen, v) for v in samples]
    pts = []
    for b in bounds:
        if b.D <= D + 1e-12:
            pts.extend(b.polyhedron().vertices())
    if not pts:
        raise InfeasibleError(f"no sample reaches distortion {D:g}")
    return rate_region_hull(np.array(pts)), bounds


# ---------------------------------------------------------------------------
# Full-cooperation outer bound


def _outer_joint(scen: MACScenario, p_x1x2, comp: Kernel) -> JointTable:
    """Joint over ``(S, S1, S2, X1, X2, Y, Z1, Z2, V)`` for a cooperative input law."""
    x1, x2 = scen.alphabet("X1"), scen.alphabet("X2")
    p = p_x1x2.values if isinstance(p_x1x2, JointTable) else np.asarray(p_x1x2, dtype=float)
    want = (scen.alphabet("S1"), scen.alphabet("S2"), x1, x2, scen.alphabet("Z1"), scen.alphabet("Z2"))
    if tuple(comp.inputs) != want or len(comp.outputs) != 1:
        raise ValueError("comp must be a kernel (S1, S2, X1, X2, Z1, Z2) -> V")
    axes = (("S", scen.alphabet("S")), ("S1", want[0]), ("S2", want[1]), ("X1", x1), ("X2", x2),
            ("Y", scen.alphabet("Y")), ("Z1", want[4]), ("Z2", want[5]), ("V", comp.outputs[0]))
    return product_joint(axes, [
        (("S", "S1", "S2"), scen.psss.values),
        (("X1", "X2"), p),
        (("X1", "X2", "S", "Y"), scen.chan.table),
        (("Y", "Z1"), scen.phi1.kernel().table),
        (("Y", "Z2"), scen.phi2.kernel().table),
        (("S1", "S2", "X1", "X2", "Z1", "Z2", "V"), comp.table),
    ])


def mac_outer_sum(scen: MACScenario, p_x1x2, comp: Kernel, h=None):
    """``(sum_bound, D)`` for one cooperative choice; ``D`` uses ``h`` or the Bayes estimator."""
    joint = _outer_joint(scen, p_x1x2, comp)
    raw = (cond_mutual_information(joint, ("X1", "X2"), "Y")
           - cond_mutual_information(joint, "V", ("S1", "S2"), ("X1", "X2", "Y")))
    obs = ("X1", "X2", "V", "Y")
    D = bayes_distortion(joint, "S", obs, scen.distortion) if h is None else expected_distortion(joint, h, scen.distortion)
    return max(raw, 0.0), D


def cooperative_embedding(scen: MACScenario, vars: MACVars):
    """Cooperative input law and description that reproduce ``vars`` exactly.

    The joint encoder draws ``(U, W1, W2)`` from their posterior given
    ``(X1, X2)`` and then both descriptions, and describes all five. The
    induced joint (and hence the distortion) equals the inner-bound joint.
    Returns ``(p_x1x2, comp)`` for :func:`mac_outer_sum`.
    """
    pu = vars.pu.pmf
    a = vars.p_wx1.table  # (U, W1, X1)
    b = vars.p_wx2.table  # (U, W2, X2)
    full = np.einsum("u,uap,ubq->pquab", pu, a, b)  # (X1, X2, U, W1, W2)
    pxx = full.sum(axis=(2, 3, 4))
    with np.errstate(invalid="ignore", divide="ignore"):
        post = np.where(pxx[..., None, None, None] > 0, full / np.where(pxx > 0, pxx, 1.0)[..., None, None, None],
                        1.0 / np.prod(full.shape[2:]))
    c1 = vars.comp1.table  # (U, W1, W2, X1, S1, Z1, V1)
    c2 = vars.comp2.table  # (U, W1, W2, X2, S2, Z2, V2)
    table = np.einsum("pquab,uabpsyc,uabqtze->stpqyzuabce", post, c1, c2)
    n_in = 6
    in_shape = table.shape[:n_in]
    out_axes = (vars.pu.labels, vars.p_wx1.outputs[0], vars.p_wx2.outputs[0],
                vars.comp1.outputs[0], vars.comp2.outputs[0])
    v_alph = tuple((u, w1, w2, v1, v2) for u in out_axes[0] for w1 in out_axes[1]
                   for w2 in out_axes[2] for v1 in out_axes[3] for v2 in out_axes[4])
    ins = tuple(scen.alphabet(n) for n in ("S1", "S2", "X1", "X2", "Z1", "Z2"))
    comp = Kernel(ins, (v_alph,), table.reshape(in_shape + (-1,)))
    p_x1x2 = JointTable((("X1", scen.alphabet("X1")), ("X2", scen.alphabet("X2"))), pxx)
    return p_x1x2, comp


def cooperative_scenario(scen: MACScenario) -> P2PScenario:
    """Point-to-point scenario seen by a single encoder holding both inputs and both side channels.

    Input ``(x1, x2)``, transmitter state information ``(s1, s2)``, feedback
    ``(z1, z2)``. Its capacity-distortion function is the best outer sum rate.
    """
    s_alph = scen.alphabet("S")
    x_alph = tuple((a, b) for a in scen.alphabet("X1") for b in scen.alphabet("X2"))
    st_alph = tuple((a, b) for a in scen.alphabet("S1") for b in scen.alphabet("S2"))
    z_alph = tuple((a, b) for a in scen.alphabet("Z1") for b in scen.alphabet("Z2"))
    pss_t = scen.psss.values.reshape(len(s_alph), len(st_alph))
    W = scen.chan.table.reshape(len(x_alph), len(s_alph), -1)
    y_alph = scen.alphabet("Y")
    phi = scen.phi1.table * len(scen.alphabet("Z2")) + scen.phi2.table
    return P2PScenario(
        JointTable((("S", s_alph), ("ST", st_alph)), pss_t),
        Kernel((x_alph, s_alph), (y_alph,), W),
        DeterministicMap((y_alph,), z_alph, phi),
        scen.distortion,
    )


# ---------------------------------------------------------------------------
# Monostatic uplink


@dataclass
class CMUResult:
    """Certified operating point: ``value`` is evaluated on the constructed joint."""

    value: float
    distortion: float
    pu: np.ndarray
    px1: np.ndarray  # (U, X1)
    px2: np.ndarray  # (U, X2)
    joint: JointTable = field(repr=False)


def _mu_setup(prior: FiniteDist, chan: Kernel, d: DistortionFn):
    if len(chan.inputs) != 3 or len(chan.outputs) != 1:
        raise ValueError("chan must be a kernel (X1, X2, S) -> Y'")
    if tuple(chan.inputs[2]) != tuple(prior.labels):
        raise ValueError("channel state alphabet does not match the prior")
    nx1, nx2 = len(chan.inputs[0]), len(chan.inputs[1])
    # Per-x2 channel x1 -> (s, y') and the sensing cost of each (x1, x2).
    Ws = [(prior.pmf[None, :, None] * chan.table[:, j]).sum(axis=1) for j in range(nx2)]
    cost = np.empty((nx1, nx2))
    for j in range(nx2):
        echo = Kernel((chan.inputs[0], chan.inputs[2]), chan.outputs, chan.table[:, j])
        cost[:, j] = radar_distortions(prior, echo, d)
    return Ws, cost


def _mu_points(Ws, cost, n_lambda):
    """Lagrangian points ``(cost, I_nats, x2, p)`` on every per-x2 capacity-cost curve."""
    pts = []
    lams = np.concatenate([[0.0], np.geomspace(1e-3, 1e3, n_lambda)])
    for j, W in enumerate(Ws):
        c = cost[:, j]
        p, info, cc = capacity_with_cost(W, c, float(c.min()))
        pts.append((cc, info, j, p))
        p0 = None
        for lam in lams[::-1]:
            p0, info, cc = ba_with_cost(W, c, lam, p0=None if p0 is None else _interior(p0))
            pts.append((cc, info, j, p0.copy()))
    return pts


def _mu_joint(prior, chan, pu, px1, px2) -> JointTable:
    nu = len(pu)
    axes = (("S", prior.labels), ("U", tuple(range(nu))), ("X1", chan.inputs[0]),
            ("X2", chan.inputs[1]), ("Y", chan.outputs[0]))
    return product_joint(axes, [
        (("S",), prior.pmf), (("U",), pu), (("U", "X1"), px1), (("U", "X2"), px2),
        (("X1", "X2", "S", "Y"), chan.table),
    ])


def c_mu(prior: FiniteDist, chan: Kernel, d: DistortionFn, D: float, u_size: int = 2,
         n_lambda: int = 80, return_point: bool = False):
    """Uplink rate ``max I(X1; Y' | U, X2)`` under a sensing budget ``D``.

    Given ``U = u`` the inputs are independent, so each time-sharing component
    contributes a point whose rate and sensing cost are linear in ``P(x2|u)``;
    the optimum is the upper concave envelope of the per-``x2`` capacity-cost
    curves. Two components suffice, so ``u_size >= 2`` is required. The
    reported value is recomputed on the explicit two-component joint.
    """
    if u_size < 2:
        raise ValueError("u_size must be at least 2 to realize the concave envelope")
    Ws, cost = _mu_setup(prior, chan, d)
    D = float(D)
    cmin = cost.min()
    if D < cmin - 1e-9:
        raise InfeasibleError(f"D={D:g} is below the minimum sensing distortion {cmin:g}")
    pts = _mu_points(Ws, cost, n_lambda)
    # Exact per-x2 points at the budget itself.
    for j, W in enumerate(Ws):
        c = cost[:, j]
        if D >= c.min() - 1e-12:
            p, info, cc = capacity_with_cost(W, c, max(min(D, c.max()), c.min()))
            pts.append((cc, info, j, p))
    pts.sort(key=lambda t: t[0])
    xs, keep = [], []
    for t in pts:
        if xs and t[0] <= xs[-1] + 1e-12:
            # Same cost up to rounding: keep the better rate.
            if t[1] > keep[-1][1]:
                keep[-1] = t
            continue
        xs.append(t[0])
        keep.append(t)
    xs = np.array(xs)
    ys = np.array([t[1] for t in keep])
    hull = upper_hull(xs, ys)
    hx, hy = xs[hull], ys[hull]
    if D >= hx[-1]:
        best = int(np.argmax(hy))
        parts = [(1.0, keep[hull[best]])]
    else:
        k = int(np.searchsorted(hx, D))
        if k == 0:
            parts = [(1.0, keep[hull[0]])]
        else:
            a, b = keep[hull[k - 1]], keep[hull[k]]
            lam = (b[0] - D) / (b[0] - a[0])
            parts = [(lam, a), (1 - lam, b)]
        # Beyond the rate maximum the hull may decrease; cap at its peak.
        peak = int(np.argmax(hy))
        if hx[peak] <= D:
            parts = [(1.0, keep[hull[peak]])]
    nx1, nx2 = cost.shape
    nu = max(u_size, len(parts))
    pu = np.zeros(nu)
    px1 = np.full((nu, nx1), 1.0 / nx1)
    px2 = np.full((nu, nx2), 1.0 / nx2)
    for i, (w, (_, _, j, p)) in enumerate(parts):
        pu[i] = w
        px1[i] = p / p.sum()
        px2[i] = np.eye(nx2)[j]
    joint = _mu_joint(prior, chan, pu, px1, px2)
    value = max(cond_mutual_information(joint, "X1", "Y", ("U", "X2")), 0.0)
    if not return_point:
        return value
    dist = bayes_distortion(joint, "S", ("U", "X1", "X2", "Y"), d)
    return CMUResult(value, dist, pu, px1, px2, joint)


def c_mu_curve(prior, chan, d, D_grid, **opts) -> np.ndarray:
    """``c_mu`` on a grid (NaN where infeasible), lifted to its concave non-decreasing envelope."""
    from .geometry import concave_envelope

    vals = []
    for D in D_grid:
        try:
            vals.append(c_mu(prior, chan, d, D, **opts))
        except InfeasibleError:
            vals.append(math.nan)
    vals = np.array(vals)
    ok = ~np.isnan(vals)
    if ok.any():
        _, env = concave_envelope(np.asarray(D_grid, dtype=float)[ok], vals[ok])
        vals[ok] = env
    return vals


# ---------------------------------------------------------------------------
# Double use of one state description


def half_entropy_p() -> float:
    """The ``p < 1/2`` whose binary entropy is half a bit."""
    h = lambda p: -p * math.log(p) - (1 - p) * math.log(1 - p)
    return brentq(lambda p: h(p) - 0.5 * math.log(2.0), 1e-12, 0.5, xtol=1e-15)


def double_usage_scenario() -> MACScenario:
    """``Y = (X1 + T_{X2}, X2)``, state ``S = (T0, T1)`` seen by encoder 2 only, no feedback."""
    p = half_entropy_p()
    states = ((0, 0), (0, 1), (1, 0), (1, 1))
    ps = np.array([(p if a else 1 - p) * (p if b else 1 - p) for a, b in states])
    psss = np.zeros((4, 1, 4))
    psss[np.arange(4), 0, np.arange(4)] = ps
    ys = ((0, 0), (0, 1), (1, 0), (1, 1))
    W = np.zeros((2, 2, 4, 4))
    for x1 in range(2):
        for x2 in range(2):
            for k, t in enumerate(states):
                W[x1, x2, k, ys.index((x1 ^ t[x2], x2))] = 1.0
    d = DistortionFn.from_function(states, states, lambda s, r: float(s[0] != r[0]) + float(s[1] != r[1]))
    return MACScenario(
        JointTable((("S", states), ("S1", TRIVIAL), ("S2", states)), psss),
        Kernel(((0, 1), (0, 1), states), (ys,), W),
        DeterministicMap((ys,), TRIVIAL, np.zeros(4, dtype=int)),
        DeterministicMap((ys,), TRIVIAL, np.zeros(4, dtype=int)),
        d,
    )


def _du_vars(scen: MACScenario, config: str, px2=None) -> MACVars:
    states = scen.alphabet("S")
    uni = np.array([0.5, 0.5])
    px2 = uni if px2 is None else np.asarray(px2, dtype=float)
    if config == "b":
        return MACVars.independent(scen, uni, px2)
    if config == "a":
        comp2 = Kernel.deterministic(((0, 1), states), (0, 1), lambda x2, s: s[x2])
    elif config == "c":
        comp2 = Kernel.deterministic(((0, 1), states), states, lambda x2, s: s)
    else:
        raise ValueError(f"unknown configuration {config!r}")
    return MACVars.independent(scen, uni, px2, None, comp2)


def double_usage_example(n_grid: int = 256) -> dict:
    """Evaluate the three description choices with the generic inner-bound evaluator.

    ``b_max_R1`` is the largest ``R1`` bound over ``P(X2 = 1)`` on an
    ``n_grid``-point grid with no descriptions.
    """
    scen = double_usage_scenario()
    out = {"p": half_entropy_p()}
    for cfg in ("a", "b", "c"):
        out[cfg] = mac_inner_bounds(scen, _du_vars(scen, cfg))
    grid = np.linspace(0.0, 1.0, n_grid)
    r1 = [mac_inner_bounds(scen, _du_vars(scen, "b", [1 - q, q])).raw["R1"] for q in grid]
    out["b_grid"] = grid
    out["b_R1"] = np.array(r1)
    out["b_max_R1"] = float(np.max(r1))
    return out
