"""Input validation helpers shared by the public constructors."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

PROB_TOL = 1e-9
RENORM_TOL = 1e-6


class InvalidDistributionError(ValueError):
    """Raised when a pmf, kernel or joint table violates its invariants."""


def check_alphabet(alphabet: Iterable, name: str = "alphabet") -> tuple:
    labels = tuple(_freeze(a) for a in alphabet)
    if len(labels) == 0:
        raise InvalidDistributionError(f"{name} is empty")
    if len(set(labels)) != len(labels):
        raise InvalidDistributionError(f"{name} has duplicate labels: {labels}")
    return labels


def _freeze(label):
    # JSON round trips turn tuples into lists; labels must stay hashable.
    if isinstance(label, list):
        return tuple(_freeze(x) for x in label)
    return label


def check_pmf(values, axis=None, name: str = "pmf") -> np.ndarray:
    """Validate and (if needed) renormalize probabilities.

    With ``axis=None`` the whole array must sum to one; otherwise every slice
    along the trailing ``axis`` dimensions must. Totals off by more than
    ``PROB_TOL`` but within ``RENORM_TOL`` are renormalized, anything further
    out is rejected.
    """
    arr = np.array(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidDistributionError(f"{name} has non-finite entries")
    if np.any(arr < 0):
        if arr.min() < -PROB_TOL:
            raise InvalidDistributionError(f"{name} has negative entries (min {arr.min():g})")
        arr = np.clip(arr, 0.0, None)
    total = arr.sum(axis=axis, keepdims=axis is not None)
    err = np.max(np.abs(total - 1.0))
    if err > RENORM_TOL:
        raise InvalidDistributionError(f"{name} does not sum to 1 (max deviation {err:g})")
    if err > PROB_TOL:
        arr = arr / total
    arr.setflags(write=False)
    return arr


def check_axis_names(names: Sequence[str]) -> tuple[str, ...]:
    names = tuple(names)
    if len(set(names)) != len(names):
        raise InvalidDistributionError(f"axis names must be unique: {names}")
    return names


def as_name_tuple(group) -> tuple[str, ...]:
    if group is None:
        return ()
    if isinstance(group, str):
        return (group,)
    return tuple(group)


def check_unit_interval(p: float, name: str = "p", hi: float = 1.0) -> float:
    p = float(p)
    if not (0.0 <= p <= hi):
        raise ValueError(f"{name}={p!r} outside [0, {hi}]")
    return p
