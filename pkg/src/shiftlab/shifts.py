"""Bilateral operator-valued weighted shifts with finitely described weights.

A shift S acts on two-sided block vectors by ``(S x)_n = S_n x_{n-1}``; as an
infinite matrix its weights sit on the band just below the main diagonal,
``S_{n, n-1} = S_n``.  Weight sequences come in three finite descriptions:
periodic, eventually-identity, and windowed.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from .errors import DimensionError, WindowAccessError
from .matrices import (
    INVERTIBILITY_THRESHOLD,
    condition_ratio,
    frob,
    herm,
    operator_norm,
    require_square,
)


def identity_matrix(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def _coerce_weight_list(weights):
    mats = [require_square(w, f"weight {i}") for i, w in enumerate(weights)]
    if not mats:
        raise ValueError("weight list must be nonempty")
    dim = mats[0].shape[0]
    for i, m in enumerate(mats):
        if m.shape[0] != dim:
            raise DimensionError(
                f"weight {i} has shape {m.shape}, expected ({dim}, {dim})")
    return tuple(mats), dim


class WeightSequence(ABC):
    """Two-sided sequence of dim x dim complex matrices."""

    variant: str

    @property
    @abstractmethod
    def dim(self) -> int:
        ...

    @abstractmethod
    def weight_at(self, n: int) -> np.ndarray:
        """Matrix at index n.  Windowed sequences raise outside their range."""

    @abstractmethod
    def has_index(self, n: int) -> bool:
        """Whether ``weight_at(n)`` is defined."""

    @abstractmethod
    def described_items(self):
        """Iterate ``(n, W_n)`` over the explicitly stored entries."""

    @abstractmethod
    def described_range(self):
        """(lo, hi) of the stored entries; None when every index is stored
        implicitly (periodic)."""


class PeriodicWeights(WeightSequence):
    """``weight_at(n) = W_{n mod p}`` for stored matrices W_0 .. W_{p-1}."""

    variant = "periodic"

    def __init__(self, weights):
        self._weights, self._dim = _coerce_weight_list(weights)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def period(self) -> int:
        return len(self._weights)

    def weight_at(self, n: int) -> np.ndarray:
        return self._weights[n % self.period]

    def has_index(self, n: int) -> bool:
        return True

    def described_items(self):
        return list(enumerate(self._weights))

    def described_range(self):
        return None

    def __repr__(self):
        return f"PeriodicWeights(period={self.period}, dim={self.dim})"


class EventuallyIdentityWeights(WeightSequence):
    """Stored matrices on [lo, hi]; the identity everywhere else."""

    variant = "eventually_identity"

    def __init__(self, lo: int, weights):
        self._weights, self._dim = _coerce_weight_list(weights)
        self.lo = int(lo)
        self.hi = self.lo + len(self._weights) - 1
        self._eye = identity_matrix(self._dim)

    @property
    def dim(self) -> int:
        return self._dim

    def weight_at(self, n: int) -> np.ndarray:
        if self.lo <= n <= self.hi:
            return self._weights[n - self.lo]
        return self._eye

    def has_index(self, n: int) -> bool:
        return True

    def described_items(self):
        return [(self.lo + i, w) for i, w in enumerate(self._weights)]

    def described_range(self):
        return (self.lo, self.hi)

    def __repr__(self):
        return (f"EventuallyIdentityWeights(lo={self.lo}, hi={self.hi}, "
                f"dim={self.dim})")


class WindowedWeights(WeightSequence):
    """Stored matrices on [lo, hi]; any other index is an access error."""

    variant = "windowed"

    def __init__(self, lo: int, weights):
        self._weights, self._dim = _coerce_weight_list(weights)
        self.lo = int(lo)
        self.hi = self.lo + len(self._weights) - 1

    @property
    def dim(self) -> int:
        return self._dim

    def weight_at(self, n: int) -> np.ndarray:
        if self.lo <= n <= self.hi:
            return self._weights[n - self.lo]
        raise WindowAccessError(
            f"index {n} outside stored window [{self.lo}, {self.hi}]", index=n)

    def has_index(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def described_items(self):
        return [(self.lo + i, w) for i, w in enumerate(self._weights)]

    def described_range(self):
        return (self.lo, self.hi)

    def __repr__(self):
        return f"WindowedWeights(lo={self.lo}, hi={self.hi}, dim={self.dim})"


def constant_weights(matrix) -> PeriodicWeights:
    """Sequence equal to one matrix at every index."""
    return PeriodicWeights([matrix])


def identity_weights(dim: int) -> PeriodicWeights:
    return constant_weights(identity_matrix(dim))


def reindex_weights(seq: WeightSequence, j: int) -> WeightSequence:
    """New sequence with ``weight_at(n) = seq.weight_at(n + j)``."""
    return map_weights(seq, lambda w: w, delta=j)


def map_weights(seq: WeightSequence, func, delta: int = 0) -> WeightSequence:
    """Transform ``weight_at(n) -> func(seq.weight_at(n + delta))``.

    Preserves the variant.  For eventually-identity input ``func`` must fix
    the identity matrix, otherwise the implicit tail would be misdescribed.
    """
    if isinstance(seq, PeriodicWeights):
        p = seq.period
        return PeriodicWeights([func(seq.weight_at(i + delta)) for i in range(p)])
    lo, hi = seq.described_range()
    mats = [func(seq.weight_at(n + delta)) for n in range(lo - delta, hi - delta + 1)]
    if isinstance(seq, EventuallyIdentityWeights):
        eye = identity_matrix(seq.dim)
        if frob(func(eye) - eye) > 1e-14 * seq.dim:
            raise ValueError("transform must fix the identity for "
                             "eventually-identity sequences")
        return EventuallyIdentityWeights(lo - delta, mats)
    return WindowedWeights(lo - delta, mats)


class BilateralShift:
    """Shift with weights ``{S_n}``: ``(S x)_n = S_n x_{n-1}``."""

    def __init__(self, weights: WeightSequence, label: str = ""):
        if not isinstance(weights, WeightSequence):
            raise TypeError("weights must be a WeightSequence")
        for n, w in weights.described_items():
            if frob(w) == 0.0:
                raise ValueError(f"shift weight at index {n} is zero")
        self.weights = weights
        self.label = label

    @property
    def dim(self) -> int:
        return self.weights.dim

    def weight(self, n: int) -> np.ndarray:
        return self.weights.weight_at(n)

    def has_weight(self, n: int) -> bool:
        return self.weights.has_index(n)

    @property
    def quasi_invertible(self) -> bool:
        """Every described weight passes the invertibility threshold."""
        return all(condition_ratio(w) > INVERTIBILITY_THRESHOLD
                   for _, w in self.weights.described_items())

    def __repr__(self):
        name = f" {self.label!r}" if self.label else ""
        return f"BilateralShift{name}({self.weights!r})"


class WindowedVector:
    """Finitely supported block vector: blocks on [lo, hi], zero outside."""

    def __init__(self, lo: int, blocks):
        arr = np.asarray(blocks, dtype=complex)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise DimensionError("blocks must form a nonempty (count, dim) array")
        if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
            raise ValueError("vector entries must be finite")
        self.lo = int(lo)
        self.blocks = arr

    @property
    def hi(self) -> int:
        return self.lo + self.blocks.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.blocks.shape[1]

    def block(self, n: int) -> np.ndarray:
        if self.lo <= n <= self.hi:
            return self.blocks[n - self.lo]
        return np.zeros(self.dim, dtype=complex)

    def norm(self) -> float:
        return float(np.linalg.norm(self.blocks))

    @classmethod
    def basis(cls, dim: int, index: int, coordinate: int) -> "WindowedVector":
        """Standard basis block vector: e_coordinate placed at index."""
        block = np.zeros(dim, dtype=complex)
        block[coordinate] = 1.0
        return cls(index, block[None, :])

    def allclose(self, other: "WindowedVector", atol: float = 1e-12) -> bool:
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        return all(
            np.allclose(self.block(n), other.block(n), atol=atol)
            for n in range(lo, hi + 1))

    def __repr__(self):
        return f"WindowedVector(lo={self.lo}, hi={self.hi}, dim={self.dim})"


def apply_shift(shift: BilateralShift, x: WindowedVector) -> WindowedVector:
    """Image of x under the shift; support moves from [lo, hi] to [lo+1, hi+1]."""
    if shift.dim != x.dim:
        raise DimensionError(
            f"shift dim {shift.dim} does not match vector dim {x.dim}")
    out = np.empty_like(x.blocks)
    for n in range(x.lo + 1, x.hi + 2):
        out[n - (x.lo + 1)] = shift.weight(n) @ x.block(n - 1)
    return WindowedVector(x.lo + 1, out)


def product_forward(shift: BilateralShift, m: int, n: int) -> np.ndarray:
    """Ordered product ``S_{m+n-1} ... S_{m+1} S_m`` (n factors, n >= 1)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    acc = np.array(shift.weight(m), dtype=complex)
    for j in range(1, n):
        acc = shift.weight(m + j) @ acc
    return acc


def product_backward_adjoint(shift: BilateralShift, m: int, n: int) -> np.ndarray:
    """Ordered product ``S_{m-n}* ... S_{m-1}*`` (n factors, n >= 1)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    acc = herm(shift.weight(m - 1))
    for j in range(2, n + 1):
        acc = herm(shift.weight(m - j)) @ acc
    return acc


def weight_norm_profile(shift: BilateralShift, lo: int, hi: int):
    """Operator norms ``||S_n||`` for n = lo .. hi."""
    if hi < lo:
        raise ValueError("hi must be >= lo")
    return [operator_norm(shift.weight(n)) for n in range(lo, hi + 1)]
