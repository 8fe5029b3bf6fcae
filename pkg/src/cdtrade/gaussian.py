"""Quadratic-Gaussian closed forms and covariance-based region evaluation.

Every mutual-information term in the broadcast and multiple-access examples
is a log-det on one assembled covariance matrix; the closed forms for the
point-to-point trade-off act as independent cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ._validation import as_name_tuple
from .exceptions import InfeasibleError
from .geometry import Polyhedron2D, rate_region_hull
from .prob import _from_nats

__all__ = [
    "QGParams",
    "GaussianSystem",
    "gaussian_cond_mi",
    "gaussian_cond_var",
    "c_qg",
    "c_qg_curve",
    "c_qg_threshold",
    "qg_d2",
    "qg_mmse_estimator_coeffs",
    "qg_p2p_system",
    "qg_mmse_monte_carlo",
    "qg_bc_system",
    "qg_bc_point",
    "qg_bc_surfaces",
    "qg_mac_system",
    "qg_mac_point",
    "qg_mac_regions",
]

PSD_TOL = 1e-9
EIG_RTOL = 1e-12


@dataclass(frozen=True)
class QGParams:
    P: float
    Q: float
    N: float
    N_T: float = 0.0

    def __post_init__(self):
        for name in ("P", "Q", "N", "N_T"):
            v = float(getattr(self, name))
            if math.isnan(v):
                raise ValueError(f"{name} is NaN")
            object.__setattr__(self, name, v)
        if self.P < 0 or not math.isfinite(self.P):
            raise ValueError(f"P must be finite and >= 0, got {self.P}")
        if not (0 < self.Q < math.inf):
            raise ValueError(f"Q must be finite and > 0, got {self.Q}")
        if not (0 < self.N < math.inf):
            raise ValueError(f"N must be finite and > 0, got {self.N}")
        if self.N_T < 0:
            raise ValueError(f"N_T must be >= 0 (inf allowed), got {self.N_T}")


# ---------------------------------------------------------------------------
# Covariance algebra


@dataclass(frozen=True)
class GaussianSystem:
    """Zero-mean jointly Gaussian variables with a named covariance."""

    names: tuple
    cov: np.ndarray

    def __post_init__(self):
        names = tuple(self.names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        cov = np.array(self.cov, dtype=float)
        if cov.shape != (len(names), len(names)):
            raise ValueError("covariance shape does not match names")
        if not np.allclose(cov, cov.T, atol=PSD_TOL, rtol=0):
            raise ValueError("covariance is not symmetric")
        cov = 0.5 * (cov + cov.T)
        if len(names):
            lo = np.linalg.eigvalsh(cov).min()
            if lo < -PSD_TOL * max(1.0, np.trace(cov)):
                raise ValueError(f"covariance is not PSD (min eigenvalue {lo:g})")
        cov.setflags(write=False)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "cov", cov)

    @classmethod
    def from_linear(cls, sources: Mapping[str, float], defs: Mapping[str, Mapping[str, float]]):
        """Independent sources with variances plus linear combinations.

        ``defs`` maps a new name to ``{name: coefficient}``; names may refer to
        sources or to earlier definitions.
        """
        src = list(sources)
        var = np.array([float(sources[s]) for s in src])
        if np.any(var < 0) or not np.all(np.isfinite(var)):
            raise ValueError("source variances must be finite and >= 0")
        rows = {s: np.eye(len(src))[i] for i, s in enumerate(src)}
        for name, combo in defs.items():
            if name in rows:
                raise ValueError(f"duplicate variable {name!r}")
            row = np.zeros(len(src))
            for ref, c in combo.items():
                if ref not in rows:
                    raise KeyError(f"{name!r} refers to unknown variable {ref!r}")
                row = row + float(c) * rows[ref]
            rows[name] = row
        names = tuple(rows)
        m = np.array([rows[n] for n in names])
        return cls(names, (m * var) @ m.T)

    def index(self, names) -> list[int]:
        out = []
        for n in as_name_tuple(names):
            try:
                out.append(self.names.index(n))
            except ValueError:
                raise KeyError(f"unknown variable {n!r}") from None
        return out

    def block(self, a, b=None) -> np.ndarray:
        ia = self.index(a)
        ib = ia if b is None else self.index(b)
        return self.cov[np.ix_(ia, ib)]


def _cond_cov(sys: GaussianSystem, a, c) -> np.ndarray:
    saa = sys.block(a)
    if not as_name_tuple(c):
        return saa
    sac = sys.block(a, c)
    scc = sys.block(c)
    out = saa - sac @ np.linalg.pinv(scc, rcond=1e-12, hermitian=True) @ sac.T
    return 0.5 * (out + out.T)


def _logpdet(m: np.ndarray, scale: float) -> tuple[float, int]:
    """Pseudo log-determinant and rank; tiny eigenvalues count as zero."""
    if m.size == 0:
        return 0.0, 0
    ev = np.linalg.eigvalsh(m)
    keep = ev > EIG_RTOL * max(scale, 1e-300)
    return float(np.sum(np.log(ev[keep]))), int(keep.sum())


def gaussian_cond_mi(sys: GaussianSystem, a, b, c=()) -> float:
    """``I(A; B | C)`` via conditional covariances.

    Computed as ``h(A|C) + h(B|C) - h(A,B|C)`` with pseudo-determinants; a
    rank drop (some linear function of ``A`` is pinned down by ``B`` given
    ``C``) yields ``inf``.
    """
    a, b, c = as_name_tuple(a), as_name_tuple(b), as_name_tuple(c)
    if not a or not b:
        raise ValueError("groups A and B must be nonempty")
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise ValueError("variable groups must be disjoint")
    scale = float(np.trace(sys.cov)) or 1.0
    la, ra = _logpdet(_cond_cov(sys, a, c), scale)
    lb, rb = _logpdet(_cond_cov(sys, b, c), scale)
    lab, rab = _logpdet(_cond_cov(sys, a + b, c), scale)
    if rab < ra + rb:
        return math.inf
    return max(0.0, _from_nats(0.5 * (la + lb - lab)))


def gaussian_cond_var(sys: GaussianSystem, target: str, given=()) -> float:
    return max(0.0, float(_cond_cov(sys, (target,), given)[0, 0]))


# ---------------------------------------------------------------------------
# Point-to-point closed forms


def c_qg_threshold(p: QGParams) -> float:
    """Smallest distortion at which the closed form is defined."""
    P, Q, N, NT = p.P, p.Q, p.N, p.N_T
    if math.isinf(NT):
        return Q * N / (Q + N)
    return (Q * Q * N * N + Q * N * NT * (P + Q + N)) / ((P + Q + N) * (Q * N + Q * NT + N * NT))


def _c_qg_value(D: float, p: QGParams) -> float:
    P, Q, N, NT = p.P, p.Q, p.N, p.N_T
    cap = math.log(1 + P / (Q + N))
    if math.isinf(NT):
        # The penalty argument decays like 1/N_T once D > QN/(Q+N).
        penalty = 0.0
    else:
        arg = Q * Q * N * N / ((Q + N) * (D * Q * N + D * Q * NT + D * N * NT - Q * N * NT))
        penalty = max(0.0, math.log(arg))
    return max(0.0, _from_nats(0.5 * (cap - penalty)))


def c_qg(D: float, p: QGParams) -> float:
    """Quadratic-Gaussian capacity-distortion function.

    Raises :class:`InfeasibleError` below :func:`c_qg_threshold`; use
    :func:`c_qg_curve` for sweeps that should skip such points.
    """
    D = float(D)
    if not D >= 0:
        raise ValueError(f"D must be >= 0, got {D}")
    th = c_qg_threshold(p)
    if D < th * (1 - 1e-12):
        raise InfeasibleError(f"D={D:g} is below the minimum distortion {th:g}")
    return _c_qg_value(max(D, th), p)


def c_qg_curve(D_grid: Sequence[float], p: QGParams) -> np.ndarray:
    """Vectorized :func:`c_qg`; infeasible points come back as NaN."""
    out = np.full(len(D_grid), np.nan)
    for i, D in enumerate(D_grid):
        try:
            out[i] = c_qg(D, p)
        except InfeasibleError:
            pass
    return out


def qg_d2(D: float, p: QGParams, n_descriptions: int = 1) -> float:
    """Compression-noise variance of the description ``V = S_T + E``.

    With ``n_descriptions`` independent descriptions ``S_T + E_k`` of equal
    noise, each one needs ``n_descriptions`` times the single-description
    variance to reach the same distortion (their average is sufficient).
    """
    Q, N, NT = p.Q, p.N, p.N_T
    if n_descriptions < 1:
        raise ValueError("n_descriptions must be >= 1")
    if math.isinf(NT):
        raise InfeasibleError("descriptions of S_T carry nothing when N_T is infinite")
    den = Q * N - D * Q - D * N
    num = D * Q * N + D * Q * NT + D * N * NT - Q * N * NT
    if den <= 0:
        raise InfeasibleError(
            f"D={D:g} >= QN/(Q+N)={Q * N / (Q + N):g}: no description needed (d^2 = inf)"
        )
    if num < -1e-15 * max(1.0, abs(D * Q * N)):
        floor = Q * N * NT / (Q * N + Q * NT + N * NT)
        raise InfeasibleError(f"D={D:g} is below Var(S | S_T, S+W)={floor:g}")
    return n_descriptions * max(num, 0.0) / den


def qg_mmse_estimator_coeffs(p: QGParams, d2: float) -> tuple[float, float]:
    """Coefficients ``(a_v, a_y)`` of the MMSE estimate ``a_v v + a_y (y - x)``."""
    Q, N, NT = p.Q, p.N, p.N_T
    if d2 < 0:
        raise ValueError("d2 must be >= 0")
    if math.isinf(d2):
        return 0.0, Q / (Q + N)
    den = Q * N + Q * NT + N * NT + d2 * (Q + N)
    return Q * N / den, (Q * NT + d2 * Q) / den


def qg_p2p_system(p: QGParams, d2: float, n_descriptions: int = 1) -> GaussianSystem:
    """``Y = X + S + W``, ``S_T = S + W_T``, ``V_k = S_T + E_k`` with ``Var(E_k) = d2``."""
    sources = {"X": p.P, "S": p.Q, "W": p.N, "WT": p.N_T}
    defs = {"Y": {"X": 1, "S": 1, "W": 1}, "SW": {"S": 1, "W": 1}, "ST": {"S": 1, "WT": 1}}
    for k in range(1, n_descriptions + 1):
        if math.isinf(d2):
            sources[f"E{k}"] = 0.0
            defs[f"V{k}"] = {f"E{k}": 0.0}
        else:
            sources[f"E{k}"] = d2
            defs[f"V{k}"] = {"ST": 1, f"E{k}": 1}
    return GaussianSystem.from_linear(sources, defs)


def qg_mmse_monte_carlo(p: QGParams, d2: float, n: int, seed: int,
                        n_descriptions: int = 1) -> tuple[float, float]:
    """Empirical squared error of the closed-form estimator.

    With several descriptions the estimator is applied to their average, whose
    noise variance is ``d2 / n_descriptions``.
    """
    rng = np.random.default_rng(seed)
    s = rng.normal(0.0, math.sqrt(p.Q), n)
    w = rng.normal(0.0, math.sqrt(p.N), n)
    st = s + rng.normal(0.0, math.sqrt(p.N_T), n)
    vs = [st + rng.normal(0.0, math.sqrt(d2), n) for _ in range(n_descriptions)]
    v = np.mean(vs, axis=0)
    a_v, a_y = qg_mmse_estimator_coeffs(p, d2 / n_descriptions)
    err = (s - (a_v * v + a_y * (s + w))) ** 2
    return float(err.mean()), float(err.std(ddof=1) / math.sqrt(n))


# ---------------------------------------------------------------------------
# Degraded broadcast example


def qg_bc_system(P, Q, N1, N2, N_T, alpha, d1sq, d2sq) -> GaussianSystem:
    """``X = U + V'``, ``Y1 = X + S + W1``, ``Y2 = Y1 + W2``, ``V_k = S_T + E_k``.

    An infinite ``d_k^2`` makes ``V_k`` a constant (no description).
    """
    sources = {"U": alpha * P, "Vx": (1 - alpha) * P, "S": Q, "W1": N1, "W2": N2, "WT": N_T}
    defs = {
        "X": {"U": 1, "Vx": 1},
        "Y1": {"X": 1, "S": 1, "W1": 1},
        "Y2": {"Y1": 1, "W2": 1},
        "ST": {"S": 1, "WT": 1},
    }
    for k, d in ((1, d1sq), (2, d2sq)):
        if math.isinf(d):
            sources[f"E{k}"] = 0.0
            defs[f"V{k}"] = {f"E{k}": 0.0}
        else:
            sources[f"E{k}"] = float(d)
            defs[f"V{k}"] = {"ST": 1, f"E{k}": 1}
    return GaussianSystem.from_linear(sources, defs)


def _mi(sys, a, b, c=(), alias=None):
    """Conditional MI with aliasing and set semantics.

    Aliased names are replaced, duplicates dropped, and members of ``C`` are
    removed from ``A`` and ``B`` (they carry no information given ``C``).
    """
    alias = alias or {}
    res = lambda g: tuple(dict.fromkeys(alias.get(n, n) for n in as_name_tuple(g)))
    c = res(c)
    a = tuple(n for n in res(a) if n not in c)
    b = tuple(n for n in res(b) if n not in c)
    if not a or not b:
        return 0.0
    if set(a) & set(b):
        raise ValueError("A and B overlap after aliasing")
    return gaussian_cond_mi(sys, a, b, c)


def qg_bc_point(sys: GaussianSystem) -> dict:
    """All region terms for one Gaussian broadcast operating point."""
    i_u_y2 = _mi(sys, "U", "Y2")
    pen2_sim = _mi(sys, "V2", ("ST", "X"), ("U", "Y2"))
    pen2_alt = _mi(sys, "V2", "ST", ("U", "X", "Y1"))
    pen1 = _mi(sys, "V1", "ST", ("U", "X", "V2", "Y1"))
    i_x_y1_u = _mi(sys, "X", "Y1", "U")
    gap = _mi(sys, "X", "V2", ("U", "Y1"))
    r1_sim = _mi(sys, "X", ("V2", "Y1"), "U") - pen1
    r2_sim = i_u_y2 - pen2_sim
    r1_seq = i_x_y1_u - pen1
    r2_seq = i_u_y2 - max(pen2_sim, pen2_alt)
    r2_out = i_u_y2 - _mi(sys, "V2", "Y1", ("U", "Y2"))
    sum_out = _mi(sys, "X", "Y1") - _mi(sys, "ST", ("V1", "V2"), ("U", "X", "Y1", "Y2"))
    d1 = gaussian_cond_var(sys, "S", ("U", "X", "V1", "V2", "Y1"))
    d2 = gaussian_cond_var(sys, "S", ("U", "V2", "Y2"))
    return {
        "R1_sim": r1_sim, "R2_sim": r2_sim, "R1_seq": r1_seq, "R2_seq": r2_seq,
        "R1_out": r1_seq, "R2_out": r2_out, "sum_out": sum_out,
        "gap": gap, "D1": d1, "D2": d2,
    }


def qg_bc_surfaces(P, Q, N1, N2, N_T, D2, alpha_grid, d1sq_grid) -> dict:
    """Simultaneous and sequential ``(R1, R2, D1)`` surfaces at fixed ``D2``.

    For each ``alpha`` the weak-user description noise comes from
    :func:`qg_d2` with signal power ``alpha P`` and effective noise
    ``(1 - alpha) P + N1 + N2``; ``alpha`` values for which ``D2`` cannot be
    met are dropped. Returns a dict of equal-length arrays (raw, unclamped
    rates) plus ``dropped_alpha``.
    """
    alpha_grid = [float(a) for a in alpha_grid]
    d1sq_grid = [float(d) for d in d1sq_grid]
    if not alpha_grid or not d1sq_grid:
        raise ValueError("alpha and d1^2 grids must be nonempty")
    keys = ("alpha", "d1sq", "d2sq", "R1_sim", "R2_sim", "R1_seq", "R2_seq",
            "R1_out", "R2_out", "sum_out", "gap", "D1", "D2")
    rows = {k: [] for k in keys}
    dropped = []
    for a in alpha_grid:
        if not 0 <= a <= 1:
            raise ValueError(f"alpha={a} outside [0, 1]")
        n_eff = (1 - a) * P + N1 + N2
        if math.isinf(D2) or D2 >= Q * n_eff / (Q + n_eff):
            d2sq = math.inf
        else:
            try:
                d2sq = qg_d2(D2, QGParams(a * P, Q, n_eff, N_T))
            except InfeasibleError:
                dropped.append(a)
                continue
        for d1 in d1sq_grid:
            pt = qg_bc_point(qg_bc_system(P, Q, N1, N2, N_T, a, d1, d2sq))
            rows["alpha"].append(a)
            rows["d1sq"].append(d1)
            rows["d2sq"].append(d2sq)
            for k in keys[3:]:
                rows[k].append(pt[k])
    if not rows["alpha"]:
        raise InfeasibleError(f"D2={D2:g} is infeasible for every alpha in the grid")
    out = {k: np.array(v, dtype=float) for k, v in rows.items()}
    out["dropped_alpha"] = np.array(dropped, dtype=float)
    return out


# ---------------------------------------------------------------------------
# Multiple-access example

_MAC_ALIAS = {"W1": "X1", "W2": "X2", "S1": "ST", "S2": "ST", "Z1": "Y", "Z2": "Y"}


def qg_mac_system(P1, P2, Q, N, N_T, d1sq, d2sq, alpha1, alpha2) -> GaussianSystem:
    """Common-layer Gaussian inputs with full feedback and shared SIT.

    ``X_k = sqrt(alpha_k P_k) U + U_k``; ``W_k``, ``S_k`` and ``Z_k`` are
    aliases for ``X_k``, ``S_T`` and ``Y`` in :func:`qg_mac_point`.
    """
    sources = {"U": 1.0, "U1": (1 - alpha1) * P1, "U2": (1 - alpha2) * P2,
               "S": Q, "W": N, "WT": N_T}
    defs = {
        "X1": {"U": math.sqrt(alpha1 * P1), "U1": 1},
        "X2": {"U": math.sqrt(alpha2 * P2), "U2": 1},
        "Y": {"X1": 1, "X2": 1, "S": 1, "W": 1},
        "ST": {"S": 1, "WT": 1},
    }
    for k, d in ((1, d1sq), (2, d2sq)):
        if math.isinf(d):
            sources[f"E{k}"] = 0.0
            defs[f"V{k}"] = {f"E{k}": 0.0}
        else:
            sources[f"E{k}"] = float(d)
            defs[f"V{k}"] = {"ST": 1, f"E{k}": 1}
    return GaussianSystem.from_linear(sources, defs)


def qg_mac_point(sys: GaussianSystem) -> dict:
    """The four inner bounds with ``W_k = X_k``, ``S_k = S_T``, ``Z_k = Y``."""
    mi = lambda a, b, c=(): _mi(sys, a, b, c, alias=_MAC_ALIAS)
    pen1 = mi("V1", ("S1", "Z1"), ("U", "W1", "W2", "X1"))
    pen2 = mi("V2", ("S2", "Z2"), ("U", "W1", "W2", "X2"))
    coop1 = mi("W1", "Z2", ("S2", "U", "W2", "X2"))
    coop2 = mi("W2", "Z1", ("S1", "U", "W1", "X1"))
    r1 = mi(("X1", "V1"), "Y", ("U", "W1", "W2", "X2", "V2")) + coop1 - pen1
    r2 = mi(("X2", "V2"), "Y", ("U", "W1", "W2", "X1", "V1")) + coop2 - pen2
    sum_a = mi(("X1", "X2", "V1", "V2"), "Y", ("U", "W1", "W2")) + coop1 + coop2 - pen1 - pen2
    sum_b = mi(("U", "W1", "W2", "X1", "X2", "V1", "V2"), "Y") - pen1 - pen2
    d = gaussian_cond_var(sys, "S", ("U", "X1", "X2", "V1", "V2", "Y"))
    return {"R1": r1, "R2": r2, "sum_a": sum_a, "sum_b": sum_b, "D": d}


def qg_mac_regions(P1, P2, Q, N, N_T, d1sq, d2sq, alpha1_grid, alpha2_grid) -> dict:
    """Proposed, time-sharing and full-cooperation regions at one distortion.

    Returns per-sample bounds, the convex hull of the proposed union, the two
    single-user corner rates for time-sharing and the pooled-power sum rate.
    """
    samples = []
    for a1 in alpha1_grid:
        for a2 in alpha2_grid:
            if not (0 <= a1 <= 1 and 0 <= a2 <= 1):
                raise ValueError("alpha grids must lie in [0, 1]")
            pt = qg_mac_point(qg_mac_system(P1, P2, Q, N, N_T, d1sq, d2sq, a1, a2))
            pt.update(alpha1=float(a1), alpha2=float(a2))
            samples.append(pt)
    if not samples:
        raise ValueError("alpha grids must be nonempty")
    D = samples[0]["D"]
    verts = []
    for pt in samples:
        poly = Polyhedron2D.from_bounds(pt["R1"], pt["R2"], (pt["sum_a"], pt["sum_b"]))
        verts.append(poly.vertices())
    hull = rate_region_hull(np.concatenate(verts))
    ts = tuple(c_qg(D, QGParams(P, Q, N, N_T)) for P in (P1, P2))
    pooled = (math.sqrt(P1) + math.sqrt(P2)) ** 2
    outer = c_qg(D, QGParams(pooled, Q, N, N_T))
    return {"D": D, "samples": samples, "proposed_hull": hull,
            "ts_corners": ts, "outer_sum": outer}
