"""Blahut-Arimoto iterations for capacity with an input cost (nats)."""

from __future__ import annotations

import numpy as np

from .exceptions import InfeasibleError

BA_TOL = 1e-9
# Stop once the lower bound stalls; near-useless channels otherwise crawl.
STALL_TOL = 1e-14
BA_MAX_ITER = 20000


class _Channel:
    """Row-stochastic ``W[x, y]`` with its per-row negative entropies cached."""

    def __init__(self, W: np.ndarray):
        self.W = np.asarray(W, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            self.neg_h = np.sum(np.where(self.W > 0, self.W * np.log(self.W), 0.0), axis=1)

    def kl_rows(self, p: np.ndarray) -> np.ndarray:
        q = p @ self.W
        with np.errstate(divide="ignore"):
            logq = np.where(q > 0, np.log(np.where(q > 0, q, 1.0)), 0.0)
        return self.neg_h - self.W @ logq


def mutual_info_nats(p: np.ndarray, W: np.ndarray) -> float:
    return float(p @ _Channel(W).kl_rows(p))


def _ba_step(ch: _Channel, p: np.ndarray, shift: np.ndarray):
    e = ch.kl_rows(p) - shift
    m = e.max()
    c = np.exp(e - m)
    s = p @ c
    return p * c / s, np.log(s) + m, m


def ba_with_cost(W: np.ndarray, cost: np.ndarray, lam: float = 1.0, p0=None,
                 tol: float = BA_TOL, max_iter: int = BA_MAX_ITER):
    """Maximize ``I(p, W) - lam * p @ cost`` over the input simplex.

    Returns ``(p, mutual information, average cost)``. Plain Blahut-Arimoto
    steps are accelerated by squared extrapolation (SQUAREM) with a
    monotonicity safeguard; iteration stops when the standard upper and lower
    bounds on the optimum differ by less than ``tol`` or the lower bound
    stalls.
    """
    ch = _Channel(W)
    cost = np.asarray(cost, dtype=float)
    n = ch.W.shape[0]
    p = np.full(n, 1.0 / n) if p0 is None else np.asarray(p0, dtype=float).copy()
    shift = lam * cost
    objective = lambda x: float(x @ (ch.kl_rows(x) - shift))
    prev = -np.inf
    for _ in range(max_iter):
        p1, lower, upper = _ba_step(ch, p, shift)
        if upper - lower < tol or lower - prev < STALL_TOL:
            p = p1
            break
        prev = lower
        p2, _, _ = _ba_step(ch, p1, shift)
        r = p1 - p
        v = p2 - p1 - r
        nv = np.linalg.norm(v)
        if nv > 0:
            alpha = -np.linalg.norm(r) / nv
            trial = np.clip(p - 2 * alpha * r + alpha * alpha * v, 0.0, None)
            # Keep the support of the plain iterate so zeros stay zeros.
            trial = np.where(p2 > 0, np.maximum(trial, 1e-300), 0.0)
            trial /= trial.sum()
            trial, _, _ = _ba_step(ch, trial, shift)
            p = trial if objective(trial) >= objective(p2) else p2
        else:
            p = p2
    return p, float(p @ ch.kl_rows(p)), float(p @ cost)


def _interior(p: np.ndarray) -> np.ndarray:
    """Warm start pulled off the boundary; iterations never revive a zero entry."""
    return 0.9 * p + 0.1 / len(p)


def capacity_with_cost(W: np.ndarray, cost: np.ndarray, budget: float, tol: float = 1e-9):
    """Max ``I(p, W)`` subject to ``p @ cost <= budget``.

    Bisection on the multiplier; the two bracketing solutions are mixed so the
    budget is met exactly (mutual information is concave in ``p``, so the mix
    is at least as good as the chord). Returns ``(p, I_nats, cost)``.
    """
    W = np.asarray(W, dtype=float)
    cost = np.asarray(cost, dtype=float)
    cmin = cost.min()
    if budget < cmin - tol:
        raise InfeasibleError(f"budget {budget:g} below the minimum cost {cmin:g}")
    cheap = cost <= cmin + tol
    if budget <= cmin + tol:
        p = np.zeros(len(cost))
        sub, _, _ = ba_with_cost(W[cheap], np.zeros(cheap.sum()), 0.0)
        p[cheap] = sub
        return p, mutual_info_nats(p, W), float(p @ cost)
    p0, i0, c0 = ba_with_cost(W, cost, 0.0)
    if c0 <= budget:
        return p0, i0, c0
    lo, hi = 0.0, 1.0
    p_hi, _, c_hi = ba_with_cost(W, cost, hi)
    while c_hi > budget and hi < 1e8:
        lo, hi = hi, hi * 4
        p_hi, _, c_hi = ba_with_cost(W, cost, hi, p0=_interior(p_hi))
    p_lo, c_lo = (p0, c0) if lo == 0.0 else ba_with_cost(W, cost, lo)[::2]
    for _ in range(60):
        if c_lo - c_hi < tol:
            break
        mid = 0.5 * (lo + hi)
        p_mid, _, c_mid = ba_with_cost(W, cost, mid, p0=_interior(p_hi))
        if c_mid > budget:
            lo, p_lo, c_lo = mid, p_mid, c_mid
        else:
            hi, p_hi, c_hi = mid, p_mid, c_mid
    if c_hi > budget:
        # Multiplier cap reached: fall back to the cheapest inputs.
        return capacity_with_cost(W, cost, cmin, tol)
    if c_lo - c_hi > 0:
        theta = (budget - c_hi) / (c_lo - c_hi)
        p = theta * p_lo + (1 - theta) * p_hi
    else:
        p = p_hi
    return p, mutual_info_nats(p, W), float(p @ cost)
