"""The dyadic group truncated to M coordinates.

A point of G is stored as an integer slot index whose bit j is the
coordinate x_j (x_0 is the least significant bit).  With this convention the
interval I_n(x) is the set of slots agreeing with x in the low n bits, i.e. a
stride-2^n pattern, and group addition is XOR.

A function constant on rank-M cosets is a vector of 2^M values; the Haar
measure of each slot is 2^-M.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidResolution, ResolutionMismatch, ResolutionTooCoarse

MAX_RESOLUTION = 24


def check_resolution(M: int) -> int:
    if isinstance(M, bool) or not isinstance(M, (int, np.integer)):
        raise InvalidResolution(f"resolution must be an integer, got {M!r}")
    M = int(M)
    if M < 1 or M > MAX_RESOLUTION:
        raise InvalidResolution(f"resolution must lie in 1..{MAX_RESOLUTION}, got {M}")
    return M


@dataclass(frozen=True)
class GroupPoint:
    index: int
    resolution: int

    def __post_init__(self):
        M = check_resolution(self.resolution)
        if not 0 <= self.index < (1 << M):
            raise InvalidResolution(f"index {self.index} does not fit in {M} coordinates")
        object.__setattr__(self, "index", int(self.index))
        object.__setattr__(self, "resolution", M)

    def coordinate(self, j: int) -> int:
        return (self.index >> j) & 1

    @property
    def bits(self) -> tuple:
        return tuple(self.coordinate(j) for j in range(self.resolution))

    def __add__(self, other: "GroupPoint") -> "GroupPoint":
        return add(self, other)


def make_point(bits: Sequence[int], M: int) -> GroupPoint:
    """Build the point with x_j = bits[j] and all remaining coordinates zero."""
    M = check_resolution(M)
    if len(bits) > M:
        raise InvalidResolution(f"{len(bits)} coordinates given for resolution {M}")
    index = 0
    for j, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"coordinate {j} must be 0 or 1, got {b!r}")
        index |= int(b) << j
    return GroupPoint(index, M)


def unit(n: int, M: int) -> GroupPoint:
    """The point e_n."""
    if not 0 <= n < M:
        raise ResolutionTooCoarse(f"e_{n} needs more than {M} coordinates")
    return GroupPoint(1 << n, M)


def add(a: GroupPoint, b: GroupPoint) -> GroupPoint:
    if a.resolution != b.resolution:
        raise ResolutionMismatch(f"cannot add points of resolution {a.resolution} and {b.resolution}")
    return GroupPoint(a.index ^ b.index, a.resolution)


@dataclass(frozen=True)
class DyadicInterval:
    """I_rank(base); only the low `rank` coordinates of `base` matter."""

    rank: int
    base: GroupPoint

    def __post_init__(self):
        if not 0 <= self.rank <= self.base.resolution:
            raise ResolutionTooCoarse(
                f"rank {self.rank} exceeds base resolution {self.base.resolution}"
            )
        mask = (1 << self.rank) - 1
        object.__setattr__(self, "base", GroupPoint(self.base.index & mask, self.base.resolution))

    @property
    def measure(self) -> float:
        return 2.0 ** -self.rank

    def contains(self, y: GroupPoint) -> bool:
        mask = (1 << self.rank) - 1
        return (y.index & mask) == self.base.index

    def __repr__(self):
        return f"I_{self.rank}({self.base.index})"


def interval(rank: int, base: int = 0, M: Optional[int] = None) -> DyadicInterval:
    """Shorthand for I_rank(base) with base given as a slot index."""
    if M is None:
        M = max(rank, 1)
    return DyadicInterval(rank, GroupPoint(base & ((1 << M) - 1), M))


def interval_indices(I: DyadicInterval, M: int) -> np.ndarray:
    """Sorted slot indices of the 2^(M-rank) rank-M cosets making up I."""
    M = check_resolution(M)
    if I.rank > M:
        raise ResolutionTooCoarse(f"interval of rank {I.rank} is finer than resolution {M}")
    return I.base.index + (np.arange(1 << (M - I.rank), dtype=np.int64) << I.rank)


def complement_partition(M: int) -> list:
    """Cosets I_{l+1}(e_k + e_l), 0 <= k < l < M, followed by I_M(e_k), 0 <= k < M.

    Together they partition G minus I_M.
    """
    M = check_resolution(M)
    out = []
    for k in range(M - 1):
        for l in range(k + 1, M):
            out.append(DyadicInterval(l + 1, GroupPoint((1 << k) | (1 << l), M)))
    for k in range(M):
        out.append(DyadicInterval(M, GroupPoint(1 << k, M)))
    return out


def coset_class(x: int, M: int) -> Optional[tuple]:
    """Locate slot x in the complement partition of I_M.

    Returns ("kl", k, l) for x in I_{l+1}(e_k+e_l), ("k", k, None) for x in
    I_M(e_k), and None for x in I_M.  Only the low M bits of x are used.
    """
    low = x & ((1 << M) - 1)
    if low == 0:
        return None
    k = (low & -low).bit_length() - 1
    rest = low ^ (1 << k)
    if rest == 0:
        return ("k", k, None)
    l = (rest & -rest).bit_length() - 1
    return ("kl", k, l)


@dataclass(frozen=True, eq=False)
class DyadicFunction:
    """A real function on G, constant on rank-M cosets."""

    resolution: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        M = check_resolution(self.resolution)
        v = np.array(self.values, dtype=np.float64)
        if v.shape != (1 << M,):
            raise ResolutionMismatch(f"expected {1 << M} values for resolution {M}, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "resolution", M)
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, c: float, M: int) -> "DyadicFunction":
        return cls(M, np.full(1 << check_resolution(M), float(c)))

    @classmethod
    def zeros(cls, M: int) -> "DyadicFunction":
        return cls.constant(0.0, M)

    @classmethod
    def indicator(cls, I: DyadicInterval, M: int) -> "DyadicFunction":
        v = np.zeros(1 << check_resolution(M))
        v[interval_indices(I, M)] = 1.0
        return cls(M, v)

    def __len__(self):
        return self.values.size

    def __call__(self, x: GroupPoint) -> float:
        if x.resolution != self.resolution:
            raise ResolutionMismatch("point and function resolutions differ")
        return float(self.values[x.index])

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, DyadicFunction):
            if other.resolution != self.resolution:
                raise ResolutionMismatch("function resolutions differ")
            return other.values
        return np.float64(other)

    def __add__(self, other):
        return DyadicFunction(self.resolution, self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return DyadicFunction(self.resolution, self.values - self._coerce(other))

    def __mul__(self, other):
        return DyadicFunction(self.resolution, self.values * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return DyadicFunction(self.resolution, -self.values)

    def __abs__(self):
        return DyadicFunction(self.resolution, np.abs(self.values))

    def translate(self, t: GroupPoint) -> "DyadicFunction":
        """x -> f(x + t)."""
        if t.resolution != self.resolution:
            raise ResolutionMismatch("translation resolution differs")
        idx = np.arange(1 << self.resolution, dtype=np.int64) ^ t.index
        return DyadicFunction(self.resolution, self.values[idx])

    def refine(self, M: int) -> "DyadicFunction":
        """The same function viewed at a finer resolution M."""
        M = check_resolution(M)
        if M < self.resolution:
            raise ResolutionTooCoarse(f"cannot coarsen from {self.resolution} to {M}")
        return DyadicFunction(M, np.tile(self.values, 1 << (M - self.resolution)))

    def integral(self, over: Optional[DyadicInterval] = None) -> float:
        return integrate(self, over)

    def allclose(self, other: "DyadicFunction", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        return self.resolution == other.resolution and np.allclose(
            self.values, other.values, rtol=rtol, atol=atol
        )


def integrate(f: DyadicFunction, over: Optional[DyadicInterval] = None) -> float:
    """Haar integral of f over G, or over a dyadic interval of rank <= f.resolution."""
    scale = 2.0 ** -f.resolution
    if over is None or over.rank == 0:
        return float(np.sum(f.values)) * scale
    return float(np.sum(f.values[interval_indices(over, f.resolution)])) * scale

