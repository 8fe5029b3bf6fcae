"""Brute-force grid oracles for the solvers, restricted to tiny binary alphabets.

Each oracle shares no optimization code with the solver it checks: they use
plain grids over the simplices and, where time-sharing matters, the Lagrangian
dual of the gridded problem (which equals its concave envelope).
"""

from __future__ import annotations

import itertools
import math

import numpy as np

__all__ = [
    "simplex_grid",
    "oracle_cd",
    "oracle_causal_cd",
    "oracle_c_md",
    "oracle_c_mu",
    "oracle_bayes_enumeration",
]

LN2 = math.log(2.0)


def simplex_grid(n: int, step: int) -> np.ndarray:
    """All pmfs on ``n`` symbols with entries in ``{0, 1/step, ..., 1}``."""
    pts = [c for c in itertools.product(range(step + 1), repeat=n - 1) if sum(c) <= step]
    arr = np.array([list(c) + [step - sum(c)] for c in pts], dtype=float)
    return arr / step


def _xlogx(p):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p > 0, p * np.log(np.where(p > 0, p, 1.0)), 0.0)


def _h(p, axes):
    """Entropy (nats) summed over ``axes`` of a batch of pmfs."""
    return -_xlogx(p).sum(axis=axes)


def _input_mi_bits(px_grid: np.ndarray, W: np.ndarray) -> np.ndarray:
    """``I(X;Y)`` in bits for every row of ``px_grid`` and channel ``W[x, y]``."""
    py = px_grid @ W
    hy = _h(py, 1)
    hyx = px_grid @ _h(W, 1)
    return (hy - hyx) / LN2


def _cloud(A: np.ndarray, phi: np.ndarray, d: np.ndarray, step: int):
    """Penalty ``I(V;T|Y)`` (bits) and Bayes distortion for every binary description kernel on a grid.

    ``A[s, t, y]`` is ``P(s, t, y | x)`` for one input symbol; the kernel is
    ``q(v | t, z)`` with ``z = phi[y]`` and ``|V| = 2``.
    """
    nt = A.shape[1]
    nz = int(phi.max()) + 1
    vals = np.arange(step + 1) / step
    rows = np.array(list(itertools.product(vals, repeat=nt * nz)))  # (G, nt*nz)
    q1 = rows.reshape(-1, nt, nz)
    q = np.stack([1 - q1, q1], axis=-1)  # (G, t, z, v)
    qy = q[:, :, phi, :]  # (G, t, y, v)
    psyv = np.einsum("sty,gtyv->gsyv", A, qy)
    ptyv = np.einsum("sty,gtyv->gtyv", A, qy)
    cost = np.einsum("gsyv,sk->gyvk", psyv, d)
    dist = cost.min(axis=-1).sum(axis=(1, 2))
    pty = A.sum(axis=0)
    py = pty.sum(axis=0)
    pyv = ptyv.sum(axis=1)
    pen = (_h(pty, (0, 1)) + _h(pyv, (1, 2)) - _h(ptyv, (1, 2, 3)) - _h(py, 0)) / LN2
    return pen, dist


def _dual_curve(mi_grid, px_grid, clouds, D_query, lam_grid):
    """``min_lam max_px [I - sum_x px g_x(lam)] + lam D`` for each query ``D``."""
    g = np.array([[np.min(pen + lam * dist) for pen, dist in clouds] for lam in lam_grid])  # (L, X)
    G = np.empty(len(lam_grid))
    chunk = 4096
    best = np.full(len(lam_grid), -np.inf)
    for i in range(0, len(px_grid), chunk):
        vals = mi_grid[i:i + chunk, None] - px_grid[i:i + chunk] @ g.T  # (chunk, L)
        best = np.maximum(best, vals.max(axis=0))
    G[:] = best
    return np.array([np.min(G + lam_grid * D) for D in D_query])


def _default_lams():
    return np.concatenate([[0.0], np.geomspace(1e-4, 1e4, 4000)])


def oracle_cd(pss_t, W, phi, d, D_query, q_step: int = 16, px_step: int = 64, lam_grid=None):
    """Grid oracle for the strictly causal capacity-distortion function (bits).

    ``pss_t[s, t]``, ``W[x, s, y]``, ``phi[y]``, ``d[s, s_hat]``. Descriptions
    are binary with kernel entries on a ``1/q_step`` grid; the input law is
    gridded at ``1/px_step``. Returns an array aligned with ``D_query``.
    """
    pss_t = np.asarray(pss_t, dtype=float)
    W = np.asarray(W, dtype=float)
    phi = np.asarray(phi, dtype=int)
    d = np.asarray(d, dtype=float)
    nx = W.shape[0]
    clouds = []
    for x in range(nx):
        A = pss_t[:, :, None] * W[x][:, None, :]
        clouds.append(_cloud(A, phi, d, q_step))
    px_grid = simplex_grid(nx, px_step)
    Wxy = np.einsum("st,xsy->xy", pss_t, W)
    mi = _input_mi_bits(px_grid, Wxy)
    lam = _default_lams() if lam_grid is None else np.asarray(lam_grid, dtype=float)
    return _dual_curve(mi, px_grid, clouds, np.atleast_1d(D_query), lam)


def oracle_causal_cd(pss_t, W, phi, d, D_query, q_step: int = 16, pu_step: int = 32, lam_grid=None):
    """Grid oracle with Shannon strategies ``u: t -> x`` enumerated exhaustively.

    The state is widened to ``(s, t)`` so the strategy channel is
    ``W'(y | u, (s, t)) = W(y | u(t), s)``.
    """
    pss_t = np.asarray(pss_t, dtype=float)
    W = np.asarray(W, dtype=float)
    d = np.asarray(d, dtype=float)
    ns, nt = pss_t.shape
    nx, _, ny = W.shape
    strategies = list(itertools.product(range(nx), repeat=nt))
    nu = len(strategies)
    p2 = np.zeros((ns * nt, nt))
    W2 = np.zeros((nu, ns * nt, ny))
    for s in range(ns):
        for t in range(nt):
            p2[s * nt + t, t] = pss_t[s, t]
            for u, f in enumerate(strategies):
                W2[u, s * nt + t] = W[f[t], s]
    d2 = np.repeat(d, nt, axis=0)
    return oracle_cd(p2, W2, phi, d2, D_query, q_step=q_step, px_step=pu_step, lam_grid=lam_grid)


def oracle_c_md(prior, echo, downlink, d, D, step: int = 256) -> float:
    """Binary-input grid oracle (bits) plus the exact point where the budget binds.

    ``echo[x, s, y1]``, ``downlink[x, s, y2]``. Returns NaN if ``D`` is infeasible.
    """
    prior = np.asarray(prior, dtype=float)
    echo = np.asarray(echo, dtype=float)
    downlink = np.asarray(downlink, dtype=float)
    d = np.asarray(d, dtype=float)
    if echo.shape[0] != 2:
        raise ValueError("oracle_c_md handles binary inputs only")
    c = np.array([(np.einsum("s,sy,sk->yk", prior, echo[x], d)).min(axis=1).sum() for x in range(2)])
    grid = list(np.arange(step + 1) / step)
    if abs(c[0] - c[1]) > 0:
        p_b = (D - c[0]) / (c[1] - c[0])  # weight on x = 1
        if 0 <= p_b <= 1:
            grid.append(p_b)
    p = np.array(grid)
    px = np.stack([1 - p, p], axis=1)
    ok = px @ c <= D + 1e-12
    if not ok.any():
        return math.nan
    Wc = (prior[None, :, None] * downlink).reshape(2, -1)
    mi = _input_mi_bits(px[ok], Wc)
    return float(max(mi.max(), 0.0))


def oracle_c_mu(prior, chan, d, D, step: int = 64) -> float:
    """Grid oracle for the uplink function with ``|U| = 2`` (bits); NaN if infeasible.

    ``chan[x1, x2, s, y]``. Each component contributes a point
    ``(cost, rate)`` over a ``1/step`` grid of both input laws; two-component
    mixtures are the upper hull of the cloud.
    """
    prior = np.asarray(prior, dtype=float)
    chan = np.asarray(chan, dtype=float)
    d = np.asarray(d, dtype=float)
    nx1, nx2 = chan.shape[:2]
    if (nx1, nx2) != (2, 2):
        raise ValueError("oracle_c_mu handles binary inputs only")
    cost = np.array([[np.einsum("s,sy,sk->yk", prior, chan[a, b], d).min(axis=1).sum()
                      for b in range(2)] for a in range(2)])
    g = np.arange(step + 1) / step
    P = np.stack([1 - g, g], axis=1)
    rates = np.stack([_input_mi_bits(P, np.einsum("s,xsy->xy", prior, chan[:, b])) for b in range(2)], axis=1)
    xs = np.einsum("ia,ab,jb->ij", P, cost, P)  # (p1 grid, p2 grid)
    ys = rates @ P.T  # (p1 grid, p2 grid): sum_b p2[b] I(p1, W_b)
    xs, ys = xs.ravel(), ys.ravel()
    xr = np.round(xs, 12)
    ux, inv = np.unique(xr, return_inverse=True)
    best = np.full(len(ux), -np.inf)
    np.maximum.at(best, inv, ys)
    if D < ux[0] - 1e-12:
        return math.nan
    hull = [0]
    for i in range(1, len(ux)):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (ux[a] - ux[o]) * (best[i] - best[o]) - (best[a] - best[o]) * (ux[i] - ux[o])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    hx, hy = ux[hull], np.maximum.accumulate(best[hull])
    return float(np.interp(D, hx, hy))


def oracle_bayes_enumeration(p_so: np.ndarray, d: np.ndarray) -> float:
    """Minimum expected distortion over every deterministic map ``obs -> s_hat``.

    ``p_so[s, o]`` is the joint of the state and a flattened observation.
    """
    n_o = p_so.shape[1]
    n_r = d.shape[1]
    best = math.inf
    for table in itertools.product(range(n_r), repeat=n_o):
        val = sum(p_so[s, o] * d[s, table[o]] for s in range(p_so.shape[0]) for o in range(n_o))
        best = min(best, val)
    return best
