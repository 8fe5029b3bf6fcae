"""Finite-alphabet probability machinery.

Labeled joint tables, kernels and deterministic maps, plus the information
measures evaluated on them. Everything here is immutable; functions are pure.
Information quantities come out in bits unless :func:`set_units` says nats.
"""

from __future__ import annotations

import math
import string
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from ._validation import (
    InvalidDistributionError,
    as_name_tuple,
    check_alphabet,
    check_axis_names,
    check_pmf,
    check_unit_interval,
)

__all__ = [
    "FiniteDist",
    "JointTable",
    "Kernel",
    "DeterministicMap",
    "DistortionFn",
    "ResourceGuardrailError",
    "set_units",
    "get_units",
    "info_units",
    "entropy",
    "binary_entropy",
    "star_convolve",
    "kl_divergence",
    "marginalize",
    "conditional",
    "joint_entropy",
    "mutual_information",
    "cond_mutual_information",
    "product_joint",
    "build_joint_p2p",
    "build_joint_bc",
    "build_joint_mac",
    "MAX_JOINT_CELLS",
]

MAX_JOINT_CELLS = 10**8

_UNIT_FACTORS = {"bits": 1.0 / math.log(2.0), "nats": 1.0}
_units = "bits"


class ResourceGuardrailError(RuntimeError):
    """A joint table would exceed the allocation guardrail."""


def set_units(units: str) -> None:
    """Switch every information measure between ``"bits"`` and ``"nats"``."""
    global _units
    if units not in _UNIT_FACTORS:
        raise ValueError(f"unknown units {units!r}; use 'bits' or 'nats'")
    _units = units


def get_units() -> str:
    return _units


@contextmanager
def info_units(units: str):
    previous = get_units()
    set_units(units)
    try:
        yield
    finally:
        set_units(previous)


def _from_nats(x):
    return x * _UNIT_FACTORS[_units]


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class FiniteDist:
    """A pmf over an ordered list of symbol labels."""

    labels: tuple
    pmf: np.ndarray

    def __post_init__(self):
        labels = check_alphabet(self.labels, "labels")
        pmf = check_pmf(self.pmf, name="FiniteDist.pmf")
        if pmf.shape != (len(labels),):
            raise InvalidDistributionError(
                f"pmf shape {pmf.shape} does not match {len(labels)} labels"
            )
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "pmf", pmf)

    def __len__(self):
        return len(self.labels)

    def prob(self, label) -> float:
        return float(self.pmf[self.labels.index(label)])

    @classmethod
    def uniform(cls, labels) -> "FiniteDist":
        labels = tuple(labels)
        return cls(labels, np.full(len(labels), 1.0 / len(labels)))

    @classmethod
    def point(cls, labels, at) -> "FiniteDist":
        labels = tuple(labels)
        pmf = np.zeros(len(labels))
        pmf[labels.index(at)] = 1.0
        return cls(labels, pmf)

    @classmethod
    def bernoulli(cls, p: float) -> "FiniteDist":
        p = check_unit_interval(p)
        return cls((0, 1), np.array([1.0 - p, p]))


@dataclass(frozen=True)
class JointTable:
    """Dense probability array over named finite axes.

    ``axes`` is a tuple of ``(name, alphabet)`` pairs, one per array dimension.
    """

    axes: tuple
    values: np.ndarray

    def __post_init__(self):
        axes = tuple((str(n), check_alphabet(a, f"alphabet of {n}")) for n, a in self.axes)
        check_axis_names([n for n, _ in axes])
        values = check_pmf(self.values, name="JointTable.values")
        shape = tuple(len(a) for _, a in axes)
        if values.shape != shape:
            raise InvalidDistributionError(
                f"values shape {values.shape} does not match axes shape {shape}"
            )
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "values", values)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    def axis(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown axis {name!r}; joint has {self.names}") from None

    def alphabet(self, name: str) -> tuple:
        return self.axes[self.axis(name)][1]

    def array(self, names: Sequence[str]) -> np.ndarray:
        """Marginal pmf over ``names``, with dimensions in the given order."""
        names = as_name_tuple(names)
        idx = [self.axis(n) for n in names]
        if len(set(idx)) != len(idx):
            raise ValueError(f"repeated axis in {names}")
        drop = tuple(i for i in range(len(self.axes)) if i not in idx)
        marg = self.values.sum(axis=drop) if drop else self.values
        kept = sorted(idx)
        return np.transpose(marg, [kept.index(i) for i in idx])

    def marginal(self, keep: Sequence[str]) -> "JointTable":
        return marginalize(self, keep)

    @classmethod
    def from_dist(cls, name: str, dist: FiniteDist) -> "JointTable":
        return cls(((name, dist.labels),), dist.pmf)


@dataclass(frozen=True)
class Kernel:
    """Conditional pmf ``table[in..., out...]`` over ordered alphabets."""

    inputs: tuple
    outputs: tuple
    table: np.ndarray

    def __post_init__(self):
        inputs = tuple(check_alphabet(a, "kernel input alphabet") for a in self.inputs)
        outputs = tuple(check_alphabet(a, "kernel output alphabet") for a in self.outputs)
        if not outputs:
            raise InvalidDistributionError("kernel needs at least one output axis")
        shape = tuple(len(a) for a in inputs + outputs)
        table = np.array(self.table, dtype=float)
        if table.shape != shape:
            raise InvalidDistributionError(
                f"kernel table shape {table.shape} does not match alphabets {shape}"
            )
        out_axes = tuple(range(len(inputs), len(shape)))
        table = check_pmf(table, axis=out_axes, name="Kernel.table")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)
        object.__setattr__(self, "table", table)

    @property
    def in_shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.inputs)

    @property
    def out_shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.outputs)

    @classmethod
    def from_function(cls, inputs, outputs, fn: Callable) -> "Kernel":
        """Build from ``fn(*input_labels) -> {output_label(s): prob}``.

        With a single output axis the dict keys are plain labels, otherwise
        tuples of labels.
        """
        inputs = tuple(tuple(a) for a in inputs)
        outputs = tuple(tuple(a) for a in outputs)
        table = np.zeros(tuple(len(a) for a in inputs + outputs))
        for in_idx in np.ndindex(*[len(a) for a in inputs]):
            labels = [a[i] for a, i in zip(inputs, in_idx)]
            for out_label, p in fn(*labels).items():
                key = (out_label,) if len(outputs) == 1 else tuple(out_label)
                out_idx = tuple(a.index(l) for a, l in zip(outputs, key))
                table[in_idx + out_idx] += p
        return cls(inputs, outputs, table)

    @classmethod
    def deterministic(cls, inputs, output, fn: Callable) -> "Kernel":
        return DeterministicMap.from_function(inputs, output, fn).kernel()

    @classmethod
    def constant(cls, inputs, dist: FiniteDist) -> "Kernel":
        inputs = tuple(tuple(a) for a in inputs)
        shape = tuple(len(a) for a in inputs)
        table = np.broadcast_to(dist.pmf, shape + (len(dist),)).copy()
        return cls(inputs, (dist.labels,), table)


@dataclass(frozen=True)
class DeterministicMap:
    """Symbol-to-symbol table; ``table[in...]`` is an index into ``output``."""

    inputs: tuple
    output: tuple
    table: np.ndarray

    def __post_init__(self):
        inputs = tuple(check_alphabet(a, "map input alphabet") for a in self.inputs)
        output = check_alphabet(self.output, "map output alphabet")
        table = np.array(self.table)
        if table.shape != tuple(len(a) for a in inputs):
            raise InvalidDistributionError(
                f"map table shape {table.shape} does not match inputs"
            )
        if not np.issubdtype(table.dtype, np.integer):
            if not np.all(table == np.round(table)):
                raise InvalidDistributionError("map table must hold integer indices")
            table = table.astype(int)
        if table.size and (table.min() < 0 or table.max() >= len(output)):
            raise InvalidDistributionError("map table index outside output alphabet")
        table = table.astype(np.intp)
        table.setflags(write=False)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "output", output)
        object.__setattr__(self, "table", table)

    def __call__(self, *labels):
        idx = tuple(a.index(l) for a, l in zip(self.inputs, labels))
        return self.output[int(self.table[idx])]

    def kernel(self) -> Kernel:
        shape = tuple(len(a) for a in self.inputs)
        table = np.zeros(shape + (len(self.output),))
        for idx in np.ndindex(*shape):
            table[idx + (int(self.table[idx]),)] = 1.0
        return Kernel(self.inputs, (self.output,), table)

    @classmethod
    def from_function(cls, inputs, output, fn: Callable) -> "DeterministicMap":
        inputs = tuple(tuple(a) for a in inputs)
        output = tuple(output)
        table = np.zeros(tuple(len(a) for a in inputs), dtype=np.intp)
        for idx in np.ndindex(*table.shape):
            table[idx] = output.index(fn(*[a[i] for a, i in zip(inputs, idx)]))
        return cls(inputs, output, table)

    @classmethod
    def from_kernel(cls, kernel: Kernel) -> "DeterministicMap":
        """Recover a map from a 0/1 kernel; anything else is rejected."""
        if len(kernel.outputs) != 1:
            raise InvalidDistributionError("map kernels have a single output axis")
        t = kernel.table
        if not np.all((np.abs(t) < 1e-12) | (np.abs(t - 1) < 1e-12)):
            raise InvalidDistributionError("feedback map is not deterministic")
        return cls(kernel.inputs, kernel.outputs[0], np.argmax(t, axis=-1))

    @classmethod
    def identity(cls, alphabet) -> "DeterministicMap":
        alphabet = tuple(alphabet)
        return cls((alphabet,), alphabet, np.arange(len(alphabet)))

    @classmethod
    def constant(cls, inputs, output=(0,)) -> "DeterministicMap":
        inputs = tuple(tuple(a) for a in inputs)
        return cls(inputs, tuple(output), np.zeros(tuple(len(a) for a in inputs), dtype=np.intp))


@dataclass(frozen=True)
class DistortionFn:
    """Per-symbol distortion ``table[s, s_hat]`` with reconstruction labels."""

    table: np.ndarray
    recon: tuple = None

    def __post_init__(self):
        table = np.array(self.table, dtype=float)
        if table.ndim != 2:
            raise ValueError("distortion table must be 2-D (state x reconstruction)")
        if not np.all(np.isfinite(table)) or np.any(table < 0):
            raise ValueError("distortion entries must be finite and nonnegative")
        recon = tuple(range(table.shape[1])) if self.recon is None else check_alphabet(self.recon)
        if len(recon) != table.shape[1]:
            raise ValueError("reconstruction labels do not match table width")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "recon", recon)

    @property
    def n_states(self) -> int:
        return self.table.shape[0]

    @classmethod
    def hamming(cls, alphabet) -> "DistortionFn":
        """Standard Hamming distortion ``1{s != s_hat}``."""
        alphabet = tuple(alphabet)
        n = len(alphabet)
        return cls(1.0 - np.eye(n), alphabet)

    @classmethod
    def squared_error(cls, values, recon_values=None) -> "DistortionFn":
        values = np.asarray(values, dtype=float)
        recon_values = values if recon_values is None else np.asarray(recon_values, dtype=float)
        table = (values[:, None] - recon_values[None, :]) ** 2
        return cls(table, tuple(float(r) for r in recon_values))

    @classmethod
    def from_function(cls, states, recon, fn: Callable) -> "DistortionFn":
        states, recon = tuple(states), tuple(recon)
        table = np.array([[fn(s, r) for r in recon] for s in states], dtype=float)
        return cls(table, recon)

    @classmethod
    def zero(cls, n_states: int) -> "DistortionFn":
        return cls(np.zeros((n_states, 1)), (0,))


# ---------------------------------------------------------------------------
# Information measures


def _h_nats(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def entropy(dist) -> float:
    """Shannon entropy of a :class:`FiniteDist` or raw pmf array."""
    pmf = dist.pmf if isinstance(dist, FiniteDist) else check_pmf(dist)
    return _from_nats(_h_nats(pmf))


def binary_entropy(p: float) -> float:
    p = check_unit_interval(p)
    if p in (0.0, 1.0):
        return 0.0
    return _from_nats(-p * math.log(p) - (1 - p) * math.log(1 - p))


def star_convolve(p: float, q: float) -> float:
    """Binary convolution ``p(1-q) + (1-p)q`` (crossover of two cascaded BSCs)."""
    p = check_unit_interval(p, "p")
    q = check_unit_interval(q, "q")
    return p * (1 - q) + (1 - p) * q


def kl_divergence(p, q) -> float:
    """Relative entropy; mass where ``q`` vanishes is an error, not infinity."""
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    if p.shape != q.shape:
        raise ValueError("p and q must have the same shape")
    support = p > 0
    if np.any(q[support] <= 0):
        raise ValueError("p is not absolutely continuous with respect to q")
    return _from_nats(float(np.sum(p[support] * np.log(p[support] / q[support]))))


def marginalize(joint: JointTable, keep) -> JointTable:
    keep = as_name_tuple(keep)
    if not keep:
        raise ValueError("keep must name at least one axis")
    for n in keep:
        joint.axis(n)
    ordered = tuple(n for n in joint.names if n in keep)
    axes = tuple((n, joint.alphabet(n)) for n in ordered)
    return JointTable(axes, joint.array(ordered))


def conditional(joint: JointTable, out, given) -> np.ndarray:
    """``P(out | given)`` as an array shaped ``given + out``.

    Rows whose conditioning event has zero probability are NaN.
    """
    out, given = as_name_tuple(out), as_name_tuple(given)
    full = joint.array(given + out)
    denom = joint.array(given) if given else np.array(1.0)
    denom = denom.reshape(denom.shape + (1,) * len(out))
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(denom > 0, full / np.where(denom > 0, denom, 1.0), np.nan)


def joint_entropy(joint: JointTable, names) -> float:
    names = as_name_tuple(names)
    if not names:
        return 0.0
    return _from_nats(_h_nats(joint.array(names)))


def _check_groups(joint: JointTable, *groups):
    seen = set()
    for g in groups:
        for n in g:
            joint.axis(n)
            if n in seen:
                raise ValueError(f"axis {n!r} appears in more than one group")
            seen.add(n)


def cond_mutual_information(joint: JointTable, a, b, c=()) -> float:
    """``I(A; B | C)`` from the joint, via ``H(AC) + H(BC) - H(ABC) - H(C)``."""
    a, b, c = as_name_tuple(a), as_name_tuple(b), as_name_tuple(c)
    if not a or not b:
        raise ValueError("groups A and B must be nonempty")
    _check_groups(joint, a, b, c)
    h = lambda names: _h_nats(joint.array(names)) if names else 0.0
    value = h(a + c) + h(b + c) - h(a + b + c) - h(c)
    return _from_nats(value)


def mutual_information(joint: JointTable, a, b) -> float:
    return cond_mutual_information(joint, a, b, ())


# ---------------------------------------------------------------------------
# Joint constructors


def product_joint(axes, factors) -> JointTable:
    """Multiply factor arrays over named axes into a :class:`JointTable`.

    ``factors`` is a list of ``(names, array)``; each array's dimensions follow
    ``names``. Every axis must be covered by at least one factor.
    """
    axes = tuple(axes)
    names = [n for n, _ in axes]
    n_cells = math.prod(len(a) for _, a in axes)
    if n_cells > MAX_JOINT_CELLS:
        raise ResourceGuardrailError(
            f"joint would have {n_cells} cells (limit {MAX_JOINT_CELLS}); "
            "trivialize unused layers (alphabet size 1)"
        )
    letters = dict(zip(names, string.ascii_letters))
    covered = set()
    operands, subs = [], []
    for fnames, arr in factors:
        subs.append("".join(letters[n] for n in fnames))
        operands.append(np.asarray(arr, dtype=float))
        covered.update(fnames)
    missing = set(names) - covered
    if missing:
        raise ValueError(f"axes {sorted(missing)} are not covered by any factor")
    expr = ",".join(subs) + "->" + "".join(letters[n] for n in names)
    values = np.einsum(expr, *operands, optimize=True)
    return JointTable(axes, values)


def _require_same(a, b, what):
    if tuple(a) != tuple(b):
        raise InvalidDistributionError(f"alphabet mismatch for {what}: {tuple(a)} vs {tuple(b)}")


def _as_map(feedback) -> DeterministicMap:
    if isinstance(feedback, DeterministicMap):
        return feedback
    if isinstance(feedback, Kernel):
        return DeterministicMap.from_kernel(feedback)
    raise TypeError("feedback must be a DeterministicMap or a 0/1 Kernel")


def _two_axis(table: JointTable, what: str):
    if len(table.axes) != 2:
        raise InvalidDistributionError(f"{what} must be a joint over exactly two axes")
    return table.axes[0][1], table.axes[1][1]


def build_joint_p2p(pss_t: JointTable, px: FiniteDist, chan: Kernel, feedback, comp: Kernel) -> JointTable:
    """Point-to-point joint over ``(S, ST, X, Y, Z, V)``.

    ``pss_t`` is a joint over (state, state information), ``chan`` is
    ``P(y | x, s)``, ``feedback`` maps ``y -> z`` and ``comp`` is
    ``P(v | x, s_T, z)``.
    """
    s_alph, st_alph = _two_axis(pss_t, "pss_t")
    fb = _as_map(feedback)
    if len(chan.inputs) != 2 or len(chan.outputs) != 1:
        raise InvalidDistributionError("chan must be a kernel (X, S) -> Y")
    x_alph, y_alph = chan.inputs[0], chan.outputs[0]
    _require_same(chan.inputs[1], s_alph, "S")
    _require_same(px.labels, x_alph, "X")
    _require_same(fb.inputs, (y_alph,), "Y (feedback input)")
    z_alph = fb.output
    if len(comp.inputs) != 3 or len(comp.outputs) != 1:
        raise InvalidDistributionError("comp must be a kernel (X, ST, Z) -> V")
    for got, want, what in zip(comp.inputs, (x_alph, st_alph, z_alph), ("X", "ST", "Z")):
        _require_same(got, want, what)
    axes = (("S", s_alph), ("ST", st_alph), ("X", x_alph), ("Y", y_alph), ("Z", z_alph),
            ("V", comp.outputs[0]))
    return product_joint(axes, [
        (("S", "ST"), pss_t.values),
        (("X",), px.pmf),
        (("X", "S", "Y"), chan.table),
        (("Y", "Z"), fb.kernel().table),
        (("X", "ST", "Z", "V"), comp.table),
    ])


def build_joint_bc(pss_t: JointTable, p_ux: JointTable, chan: Kernel, feedback, comp: Kernel) -> JointTable:
    """Broadcast joint over ``(S, ST, U, X, Y1, Y2, Z, V1, V2)``."""
    s_alph, st_alph = _two_axis(pss_t, "pss_t")
    u_alph, x_alph = _two_axis(p_ux, "p_ux")
    fb = _as_map(feedback)
    if len(chan.inputs) != 2 or len(chan.outputs) != 2:
        raise InvalidDistributionError("chan must be a kernel (X, S) -> (Y1, Y2)")
    _require_same(chan.inputs[0], x_alph, "X")
    _require_same(chan.inputs[1], s_alph, "S")
    y1_alph, y2_alph = chan.outputs
    _require_same(fb.inputs, (y1_alph, y2_alph), "(Y1, Y2) feedback input")
    z_alph = fb.output
    if len(comp.inputs) != 4 or len(comp.outputs) != 2:
        raise InvalidDistributionError("comp must be a kernel (U, X, ST, Z) -> (V1, V2)")
    for got, want, what in zip(comp.inputs, (u_alph, x_alph, st_alph, z_alph), ("U", "X", "ST", "Z")):
        _require_same(got, want, what)
    axes = (("S", s_alph), ("ST", st_alph), ("U", u_alph), ("X", x_alph), ("Y1", y1_alph),
            ("Y2", y2_alph), ("Z", z_alph), ("V1", comp.outputs[0]), ("V2", comp.outputs[1]))
    return product_joint(axes, [
        (("S", "ST"), pss_t.values),
        (("U", "X"), p_ux.values),
        (("X", "S", "Y1", "Y2"), chan.table),
        (("Y1", "Y2", "Z"), fb.kernel().table),
        (("U", "X", "ST", "Z", "V1", "V2"), comp.table),
    ])


MAC_AXES = ("S", "S1", "S2", "U", "W1", "W2", "X1", "X2", "Y", "Z1", "Z2", "V1", "V2")


def build_joint_mac(psss: JointTable, pu: FiniteDist, p_wx1: Kernel, p_wx2: Kernel, chan: Kernel,
                    phi1, phi2, comp1: Kernel, comp2: Kernel) -> JointTable:
    """Multiple-access joint over :data:`MAC_AXES`.

    ``psss`` is a joint over (S, S1, S2); ``p_wx1`` is ``P(w1, x1 | u)``;
    ``chan`` is ``P(y | x1, x2, s)``; ``comp1`` is
    ``P(v1 | u, w1, w2, x1, s1, z1)`` and ``comp2`` likewise for user 2.
    """
    if len(psss.axes) != 3:
        raise InvalidDistributionError("psss must be a joint over (S, S1, S2)")
    s_alph, s1_alph, s2_alph = (a for _, a in psss.axes)
    f1, f2 = _as_map(phi1), _as_map(phi2)
    u_alph = pu.labels
    for k, kern in ((1, p_wx1), (2, p_wx2)):
        if len(kern.inputs) != 1 or len(kern.outputs) != 2:
            raise InvalidDistributionError(f"p_wx{k} must be a kernel U -> (W{k}, X{k})")
        _require_same(kern.inputs[0], u_alph, "U")
    w1_alph, x1_alph = p_wx1.outputs
    w2_alph, x2_alph = p_wx2.outputs
    if len(chan.inputs) != 3 or len(chan.outputs) != 1:
        raise InvalidDistributionError("chan must be a kernel (X1, X2, S) -> Y")
    for got, want, what in zip(chan.inputs, (x1_alph, x2_alph, s_alph), ("X1", "X2", "S")):
        _require_same(got, want, what)
    y_alph = chan.outputs[0]
    _require_same(f1.inputs, (y_alph,), "Y (phi1 input)")
    _require_same(f2.inputs, (y_alph,), "Y (phi2 input)")
    z1_alph, z2_alph = f1.output, f2.output
    for k, kern, want in (
        (1, comp1, (u_alph, w1_alph, w2_alph, x1_alph, s1_alph, z1_alph)),
        (2, comp2, (u_alph, w1_alph, w2_alph, x2_alph, s2_alph, z2_alph)),
    ):
        if len(kern.inputs) != 6 or len(kern.outputs) != 1:
            raise InvalidDistributionError(f"comp{k} must be a kernel (U, W1, W2, X{k}, S{k}, Z{k}) -> V{k}")
        for got, w, what in zip(kern.inputs, want, ("U", "W1", "W2", f"X{k}", f"S{k}", f"Z{k}")):
            _require_same(got, w, what)
    alphs = (s_alph, s1_alph, s2_alph, u_alph, w1_alph, w2_alph, x1_alph, x2_alph, y_alph,
             z1_alph, z2_alph, comp1.outputs[0], comp2.outputs[0])
    axes = tuple(zip(MAC_AXES, alphs))
    return product_joint(axes, [
        (("S", "S1", "S2"), psss.values),
        (("U",), pu.pmf),
        (("U", "W1", "X1"), p_wx1.table),
        (("U", "W2", "X2"), p_wx2.table),
        (("X1", "X2", "S", "Y"), chan.table),
        (("Y", "Z1"), f1.kernel().table),
        (("Y", "Z2"), f2.kernel().table),
        (("U", "W1", "W2", "X1", "S1", "Z1", "V1"), comp1.table),
        (("U", "W1", "W2", "X2", "S2", "Z2", "V2"), comp2.table),
    ])
