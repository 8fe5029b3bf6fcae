"""Random small discrete systems for property checks and oracle comparisons."""

from __future__ import annotations

import numpy as np

from .bc import BCScenario, BCVars
from .mac import MACScenario, MACVars
from .p2p import P2PScenario
from .prob import FiniteDist, JointTable, Kernel

__all__ = [
    "random_pmf",
    "random_kernel",
    "random_p2p",
    "random_bc",
    "random_bc_vars",
    "random_mac",
    "random_mac_vars",
]


def random_pmf(rng: np.random.Generator, shape, alpha: float = 1.0, sparse: float = 0.0) -> np.ndarray:
    """Dirichlet draws over the last axis; ``sparse`` zeroes entries at that rate (one always survives)."""
    shape = tuple(np.atleast_1d(shape))
    p = rng.dirichlet(np.full(shape[-1], alpha), size=shape[:-1])
    if sparse > 0:
        mask = rng.random(p.shape) < sparse
        keep = rng.integers(shape[-1], size=shape[:-1])
        np.put_along_axis(mask, keep[..., None], False, axis=-1)
        p = np.where(mask, 0.0, p)
        p /= p.sum(axis=-1, keepdims=True)
    return p


def random_kernel(rng, inputs, outputs, alpha=1.0, sparse=0.0) -> Kernel:
    inputs = tuple(tuple(a) for a in inputs)
    outputs = tuple(tuple(a) for a in outputs)
    in_shape = tuple(len(a) for a in inputs)
    out_shape = tuple(len(a) for a in outputs)
    flat = random_pmf(rng, in_shape + (int(np.prod(out_shape)),), alpha, sparse)
    return Kernel(inputs, outputs, flat.reshape(in_shape + out_shape))


def _rng(n):
    return tuple(range(n))


def random_p2p(rng, n_s=2, n_t=2, n_x=2, n_y=2, feedback=True) -> P2PScenario:
    pss_t = random_pmf(rng, n_s * n_t).reshape(n_s, n_t)
    W = random_pmf(rng, (n_x, n_s, n_y))
    phi = rng.integers(2, size=n_y) if feedback else None
    if phi is not None and phi.max() == 0:
        phi = None
    return P2PScenario.from_arrays(pss_t, W, phi=phi)


def random_bc(rng) -> BCScenario:
    """Physically degraded: ``Y2`` is ``Y1`` passed through a random channel."""
    n_s, n_t = int(rng.integers(2, 4)), int(rng.integers(1, 3))
    n_x, n_y1, n_y2 = 2, int(rng.integers(2, 4)), 2
    pss_t = random_pmf(rng, n_s * n_t).reshape(n_s, n_t)
    w1 = random_pmf(rng, (n_x, n_s, n_y1))
    w2 = random_pmf(rng, (n_y1, n_y2))
    W = w1[..., :, None] * w2[None, None]
    kind = rng.integers(3)
    if kind == 0:
        psi = None
    elif kind == 1:
        psi = np.repeat(np.arange(n_y1)[:, None] % 2, n_y2, axis=1)
    else:
        psi = rng.integers(2, size=(n_y1, n_y2))
        if psi.max() == 0:
            psi = None
    return BCScenario.from_arrays(pss_t, W, psi=psi, d1=rng.random((n_s, n_s)), d2=rng.random((n_s, 2)))


def random_bc_vars(rng, scen: BCScenario) -> BCVars:
    n_u = int(rng.integers(1, 3))
    nv1, nv2 = int(rng.integers(1, 3)), int(rng.integers(1, 3))
    x_alph = scen.x_alphabet
    p_ux = JointTable((("U", _rng(n_u)), ("X", x_alph)), random_pmf(rng, n_u * len(x_alph)).reshape(n_u, -1))
    comp = random_kernel(rng, (_rng(n_u), x_alph, scen.st_alphabet, scen.z_alphabet),
                         (_rng(nv1), _rng(nv2)), sparse=0.3)
    return BCVars(p_ux, comp)


def random_mac(rng, feedback: bool = True, state_info: bool = True) -> MACScenario:
    n_s, n_y = 2, int(rng.integers(2, 4))
    ps = random_pmf(rng, n_s)
    psss_parts = []
    for _ in range(2):
        mode = rng.integers(3) if state_info else 0
        if mode == 0:
            psss_parts.append(np.ones((n_s, 1)))
        elif mode == 1:
            psss_parts.append(np.eye(n_s))
        else:
            psss_parts.append(random_pmf(rng, (n_s, 2)))
    a, b = psss_parts
    psss = ps[:, None, None] * a[:, :, None] * b[:, None, :]
    W = random_pmf(rng, (2, 2, n_s, n_y))

    def fb():
        if not feedback or rng.random() < 0.3:
            return None
        phi = rng.integers(2, size=n_y)
        return None if phi.max() == 0 else phi

    return MACScenario.from_arrays(psss, W, fb(), fb(), d=rng.random((n_s, n_s)))


def random_mac_vars(rng, scen: MACScenario, layers: bool = True) -> MACVars:
    n_u = int(rng.integers(1, 3)) if layers else 1
    nw1 = int(rng.integers(1, 3)) if layers else 1
    nw2 = int(rng.integers(1, 3)) if layers else 1
    u = _rng(n_u)
    pu = FiniteDist(u, random_pmf(rng, n_u))
    wx1 = random_kernel(rng, (u,), (_rng(nw1), scen.alphabet("X1")))
    wx2 = random_kernel(rng, (u,), (_rng(nw2), scen.alphabet("X2")))
    comps = []
    for k in (1, 2):
        nv = int(rng.integers(1, 3))
        ins = (u, _rng(nw1), _rng(nw2), scen.alphabet(f"X{k}"), scen.alphabet(f"S{k}"), scen.alphabet(f"Z{k}"))
        comps.append(random_kernel(rng, ins, (_rng(nv),), sparse=0.3))
    return MACVars(pu, wx1, wx2, comps[0], comps[1])
