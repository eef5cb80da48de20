"""Rademacher and Walsh-Paley functions, the fast Walsh-Hadamard transform,
partial sums and Fejer means.

Paley ordering under the least-significant-bit coordinate convention is the
natural (Sylvester) Hadamard order: w_n(x) = (-1)^popcount(n & x).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dyadic import DyadicFunction, GroupPoint, check_resolution
from .errors import FrequencyAboveResolution, InvalidCount, OutOfRange, ResolutionMismatch


def rademacher(k: int, x: GroupPoint) -> int:
    if not 0 <= k < x.resolution:
        raise OutOfRange(f"r_{k} is not defined at resolution {x.resolution}")
    return -1 if (x.index >> k) & 1 else 1


def walsh(n: int, x: GroupPoint) -> int:
    """w_n(x) as the product of r_k over the set bits k of n."""
    if not 0 <= n < (1 << x.resolution):
        raise FrequencyAboveResolution(f"w_{n} needs more than {x.resolution} coordinates")
    value = 1
    k = 0
    while n >> k:
        if (n >> k) & 1:
            value *= rademacher(k, x)
        k += 1
    return value


def parity(a: np.ndarray) -> np.ndarray:
    """popcount(a) mod 2, elementwise, for nonnegative integers below 2^32."""
    a = np.asarray(a, dtype=np.uint64)
    a = a ^ (a >> np.uint64(16))
    a = a ^ (a >> np.uint64(8))
    a = a ^ (a >> np.uint64(4))
    a = a ^ (a >> np.uint64(2))
    a = a ^ (a >> np.uint64(1))
    return (a & np.uint64(1)).astype(np.int64)


def walsh_row(n: int, M: int) -> np.ndarray:
    """Integer vector of w_n over all 2^M slots."""
    M = check_resolution(M)
    if not 0 <= n < (1 << M):
        raise FrequencyAboveResolution(f"w_{n} needs more than {M} coordinates")
    return 1 - 2 * parity(np.arange(1 << M, dtype=np.int64) & n)


def walsh_matrix(M: int) -> np.ndarray:
    """H[n, x] = w_n(x) as int64; O(4^M) memory, meant for oracles."""
    M = check_resolution(M)
    idx = np.arange(1 << M, dtype=np.int64)
    return 1 - 2 * parity(idx[:, None] & idx[None, :])


def butterfly(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis.

    Constant-geometry form: every stage adds/subtracts adjacent pairs and
    writes sums to the low half, differences to the high half.  Each stage
    consumes the current lowest index bit and re-emits it as the highest, so
    after M stages the bit order is restored and slot n holds the w_n
    coefficient in Paley order.  Input dtype is kept, so integer inputs are
    transformed exactly; applying it twice multiplies by the length.
    """
    x = np.array(a, copy=True)
    size = x.shape[-1]
    if size & (size - 1):
        raise ValueError(f"length {size} is not a power of two")
    y = np.empty_like(x)
    h = size // 2
    for _ in range(size.bit_length() - 1):
        v = x.reshape(x.shape[:-1] + (h, 2))
        np.add(v[..., 0], v[..., 1], out=y[..., :h])
        np.subtract(v[..., 0], v[..., 1], out=y[..., h:])
        x, y = y, x
    return x


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    resolution: int
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        M = check_resolution(self.resolution)
        c = np.array(self.coefficients, dtype=np.float64)
        if c.shape != (1 << M,):
            raise ResolutionMismatch(f"expected {1 << M} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def __getitem__(self, k):
        return self.coefficients[k]


def fwht(f: DyadicFunction) -> WalshSpectrum:
    """Walsh-Fourier coefficients f^(k) = integral of f * w_k, all k < 2^M."""
    return WalshSpectrum(f.resolution, butterfly(f.values) * 2.0 ** -f.resolution)


def synthesize(spectrum: WalshSpectrum) -> DyadicFunction:
    """sum_k c_k w_k; inverse of fwht."""
    return DyadicFunction(spectrum.resolution, butterfly(spectrum.coefficients))


def naive_fwht(f: DyadicFunction) -> WalshSpectrum:
    """Direct O(4^M) coefficient summation."""
    H = walsh_matrix(f.resolution).astype(np.float64)
    return WalshSpectrum(f.resolution, (H @ f.values) * 2.0 ** -f.resolution)


def _check_count(n: int, M: int):
    if n > (1 << M):
        raise FrequencyAboveResolution(f"order {n} exceeds 2^{M}")


def partial_sum(spectrum: WalshSpectrum, n: int) -> DyadicFunction:
    """S_n f = sum_{k<n} f^(k) w_k, with S_0 f = 0."""
    M = spectrum.resolution
    if n < 0:
        raise InvalidCount(f"negative order {n}")
    _check_count(n, M)
    c = np.zeros(1 << M)
    c[:n] = spectrum.coefficients[:n]
    return DyadicFunction(M, butterfly(c))


def fejer_mean(spectrum: WalshSpectrum, n: int) -> DyadicFunction:
    """sigma_n f = (S_1 f + ... + S_n f) / n, via the triangular weights 1 - k/n."""
    M = spectrum.resolution
    if n < 1:
        raise InvalidCount(f"Fejer means start at n = 1, got {n}")
    _check_count(n, M)
    k = np.arange(n)
    c = np.zeros(1 << M)
    c[:n] = spectrum.coefficients[:n] * (1.0 - k / n)
    return DyadicFunction(M, butterfly(c))
