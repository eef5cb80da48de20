"""Dirichlet, Fejer and Cesaro (C, alpha) kernels and the Cesaro numbers.

Kernels of order n <= 2^M are constant on rank-M cosets, so every table here
is exact at resolution M.  Dirichlet kernels and n * K_n are integer valued
and are built on an int64 path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .dyadic import DyadicFunction, check_resolution
from .errors import FrequencyAboveResolution, InvalidCount, PoleError, ResolutionTooCoarse
from .walsh import butterfly, parity, walsh_matrix

# Rows per batch when synthesizing many kernels at once (rows x 2^M doubles).
BATCH_ELEMENTS = 1 << 22


@dataclass(frozen=True, eq=False)
class CesaroWeights:
    """A_0^alpha ... A_upto^alpha with A_0 = 1."""

    alpha: float
    upto: int
    values: np.ndarray = field(repr=False)

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return self.values.size


def cesaro_weights(alpha: float, n_max: int) -> CesaroWeights:
    """Cesaro numbers by the product recurrence A_n = A_{n-1} (alpha + n) / n."""
    alpha = float(alpha)
    if alpha <= -1.0:
        raise PoleError(f"Cesaro numbers need alpha > -1, got {alpha}")
    if n_max < 0:
        raise InvalidCount(f"n_max must be nonnegative, got {n_max}")
    n = np.arange(1, n_max + 1, dtype=np.float64)
    values = np.empty(n_max + 1)
    values[0] = 1.0
    values[1:] = np.cumprod((alpha + n) / n)
    values.setflags(write=False)
    return CesaroWeights(alpha, int(n_max), values)


def cesaro_number_lgamma(alpha: float, n: int) -> float:
    """Gamma(n + alpha + 1) / (Gamma(n + 1) Gamma(alpha + 1)), evaluated with lgamma."""
    return math.exp(math.lgamma(n + alpha + 1.0) - math.lgamma(n + 1.0) - math.lgamma(alpha + 1.0))


class Kind:
    DIRICHLET = "dirichlet"
    FEJER = "fejer"
    CESARO = "cesaro"


@dataclass(frozen=True, eq=False)
class KernelTable:
    kind: str
    n: int
    resolution: int
    values: DyadicFunction
    exact_numerators: Optional[np.ndarray] = field(default=None, repr=False)
    alpha: Optional[float] = None


def _check_order(n: int, M: int):
    if n < 1:
        raise InvalidCount(f"kernel order must be >= 1, got {n}")
    if n > (1 << M):
        raise FrequencyAboveResolution(f"order {n} exceeds 2^{M}")


def dirichlet_values(n: int, M: int) -> np.ndarray:
    """Integer vector D_n = sum_{k<n} w_k, by exact integer synthesis."""
    c = np.zeros(1 << M, dtype=np.int64)
    c[:n] = 1
    return butterfly(c)


def dirichlet_kernel(n: int, M: int) -> KernelTable:
    M = check_resolution(M)
    _check_order(n, M)
    d = dirichlet_values(n, M)
    d.setflags(write=False)
    return KernelTable(Kind.DIRICHLET, n, M, DyadicFunction(M, d.astype(np.float64)), d)


def dirichlet_dyadic(j: int, M: int) -> np.ndarray:
    """Closed form of D_{2^j}: 2^j on I_j and 0 elsewhere (integer vector)."""
    M = check_resolution(M)
    if not 0 <= j <= M:
        raise ResolutionTooCoarse(f"D_2^{j} is not exact at resolution {M}")
    idx = np.arange(1 << M, dtype=np.int64)
    return np.where(idx & ((1 << j) - 1) == 0, 1 << j, 0).astype(np.int64)


def fejer_dyadic_numerators(j: int, M: int) -> np.ndarray:
    """2^j * K_{2^j} from the closed form, as an integer vector.

    K_{2^j}(x) = (2^j + 1) / 2 on I_j; 2^{t-1} when x lies in I_t minus I_{t+1}
    and its only nonzero coordinate below j is x_t; 0 otherwise.
    """
    M = check_resolution(M)
    if not 0 <= j <= M:
        raise ResolutionTooCoarse(f"K_2^{j} is not exact at resolution {M}")
    idx = np.arange(1 << M, dtype=np.int64)
    low = idx & ((1 << j) - 1)
    out = np.zeros(1 << M, dtype=np.int64)
    if j == 0:
        out[:] = 1
        return out
    out[low == 0] = (1 << (j - 1)) * ((1 << j) + 1)
    for t in range(j):
        out[low == (1 << t)] = 1 << (j + t - 1)
    return out


def fejer_kernel_dyadic(j: int, M: int) -> KernelTable:
    """K_{2^j} at resolution M >= j from the closed form."""
    num = fejer_dyadic_numerators(j, M)
    num.setflags(write=False)
    return KernelTable(Kind.FEJER, 1 << j, M, DyadicFunction(M, num * 2.0 ** -j), num)


def fejer_kernel(n: int, M: int) -> KernelTable:
    """K_n for general n <= 2^M; n * K_n = sum_{k<n} (n - k) w_k."""
    M = check_resolution(M)
    _check_order(n, M)
    c = np.zeros(1 << M, dtype=np.int64)
    c[:n] = n - np.arange(n)
    num = butterfly(c)
    num.setflags(write=False)
    return KernelTable(Kind.FEJER, n, M, DyadicFunction(M, num / n), num)


def dirichlet_bruteforce(M: int) -> np.ndarray:
    """All D_1 ... D_{2^M} by summing Walsh rows; row n-1 holds D_n."""
    return np.cumsum(walsh_matrix(M), axis=0)


def fejer_numerators_bruteforce(M: int) -> np.ndarray:
    """Row n-1 holds n * K_n = D_1 + ... + D_n."""
    return np.cumsum(dirichlet_bruteforce(M), axis=0)


def dyadic_orders_bruteforce(M: int) -> dict:
    """{j: (D_{2^j}, 2^j K_{2^j})} for j <= M, accumulated one Walsh row at a time."""
    M = check_resolution(M)
    idx = np.arange(1 << M, dtype=np.int64)
    D = np.zeros(1 << M, dtype=np.int64)
    F = np.zeros(1 << M, dtype=np.int64)
    out = {}
    for k in range(1 << M):
        D += 1 - 2 * parity(idx & k)
        F += D
        if (k + 1) & k == 0:
            out[k.bit_length()] = (D.copy(), F.copy())
    return out


def cesaro_multipliers(alpha: float, n: int, size: int, weights=None, lower=None) -> np.ndarray:
    """Coefficient of w_j in K_n^alpha (and multiplier of f^(j) in sigma_n^alpha f).

    K_n^alpha = (1/A_n) sum_{k=1}^n A_{n-k}^{alpha-1} D_k; exchanging the sums
    gives, for j < n, the suffix sum (1/A_n) sum_{k=j+1}^n A_{n-k}^{alpha-1}.
    """
    if weights is None:
        weights = cesaro_weights(alpha, n)
    if lower is None:
        lower = cesaro_weights(alpha - 1.0, n)
    lam = np.zeros(size)
    # a[k-1] = A_{n-k}^{alpha-1}, k = 1..n; suffix sums over k > j
    a = lower.values[n - 1::-1] if n > 0 else np.zeros(0)
    lam[:n] = np.cumsum(a[::-1])[::-1] / weights[n]
    return lam


def multiplier_matrix(alpha: float, ns: Sequence[int], size: int, weights=None, lower=None) -> np.ndarray:
    """Rows of cesaro_multipliers for every order in ns, vectorized."""
    ns = np.asarray(ns, dtype=np.int64)
    top = int(ns.max()) if ns.size else 0
    if weights is None:
        weights = cesaro_weights(alpha, top)
    if lower is None:
        lower = cesaro_weights(alpha - 1.0, top)
    # sum_{k=j+1}^n A_{n-k}^{alpha-1} = T[n-1-j] with T the running sum of A^{alpha-1}
    T = np.cumsum(lower.values[: top + 1])
    j = np.arange(size, dtype=np.int64)
    m = ns[:, None] - 1 - j[None, :]
    out = np.where(m >= 0, T[np.clip(m, 0, None)], 0.0)
    return out / weights.values[ns][:, None]


def cesaro_kernel(alpha: float, n: int, M: int) -> KernelTable:
    M = check_resolution(M)
    _check_order(n, M)
    lam = cesaro_multipliers(alpha, n, 1 << M)
    return KernelTable(Kind.CESARO, n, M, DyadicFunction(M, butterfly(lam)), alpha=float(alpha))


def cesaro_kernel_direct(alpha: float, n: int, M: int) -> np.ndarray:
    """(1/A_n) sum_{k=1}^n A_{n-k}^{alpha-1} D_k by accumulating Dirichlet kernels."""
    M = check_resolution(M)
    _check_order(n, M)
    A = cesaro_weights(alpha, n)
    B = cesaro_weights(alpha - 1.0, n)
    idx = np.arange(1 << M, dtype=np.int64)
    D = np.zeros(1 << M, dtype=np.int64)
    acc = np.zeros(1 << M)
    for k in range(1, n + 1):
        D += 1 - 2 * parity(idx & (k - 1))
        acc += B[n - k] * D
    return acc / A[n]


def iter_cesaro_kernels(alpha: float, ns: Sequence[int], M: int) -> Iterator[tuple]:
    """Yield (orders, values) batches of K_n^alpha, one row per order."""
    M = check_resolution(M)
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size == 0:
        return
    _check_order(int(ns.min()), M)
    _check_order(int(ns.max()), M)
    top = int(ns.max())
    A = cesaro_weights(alpha, top)
    B = cesaro_weights(alpha - 1.0, top)
    rows = max(1, BATCH_ELEMENTS >> M)
    for start in range(0, ns.size, rows):
        chunk = ns[start:start + rows]
        yield chunk, butterfly(multiplier_matrix(alpha, chunk, 1 << M, A, B))


def convolve(f: DyadicFunction, kernel: DyadicFunction) -> DyadicFunction:
    """(f * K)(x) = integral f(t) K(x + t) dmu(t); O(4^M) reference path."""
    if f.resolution != kernel.resolution:
        raise ResolutionTooCoarse("function and kernel resolutions differ")
    idx = np.arange(1 << f.resolution, dtype=np.int64)
    K = kernel.values[idx[:, None] ^ idx[None, :]]
    return DyadicFunction(f.resolution, (K @ f.values) * 2.0 ** -f.resolution)


def l1_norm_scan(alpha: float, n_max: int, M: int) -> list:
    """[(n, integral of |K_n^alpha|)] for n = 1 .. n_max."""
    out = []
    scale = 2.0 ** -check_resolution(M)
    for chunk, vals in iter_cesaro_kernels(alpha, np.arange(1, n_max + 1), M):
        norms = np.abs(vals).sum(axis=1) * scale
        out.extend(zip(chunk.tolist(), norms.tolist()))
    return out


@dataclass(frozen=True)
class MajorizationResult:
    n: int
    worst_ratio: float
    argmax: int
    value: float
    bound: float
    violations: int


def lemma2_majorization(alpha: float, ns: Sequence[int], M: int) -> list:
    """Pointwise |K_n^alpha| against (1/A_{n-1}) sum_{j<=|n|} 2^{j alpha} K_{2^j}.

    One MajorizationResult per order: the largest ratio over slots with a
    nonzero majorant, and the count of slots where the majorant vanishes but
    the kernel does not.
    """
    M = check_resolution(M)
    ns = np.asarray(ns, dtype=np.int64)
    top = int(ns.max())
    A = cesaro_weights(alpha, top)
    fejer = np.stack([fejer_dyadic_numerators(j, M) * 2.0 ** -j for j in range(M + 1)])
    # partial[J] = sum_{j<=J} 2^{j alpha} K_{2^j}
    partial = np.cumsum(fejer * (2.0 ** (alpha * np.arange(M + 1)))[:, None], axis=0)
    results = []
    for chunk, vals in iter_cesaro_kernels(alpha, ns, M):
        for n, row in zip(chunk.tolist(), vals):
            bound = partial[n.bit_length() - 1] / A[n - 1]
            num = np.abs(row)
            pos = bound > 0
            ratio = np.where(pos, num / np.where(pos, bound, 1.0), 0.0)
            bad = int(np.count_nonzero(~pos & (num > 1e-12)))
            k = int(np.argmax(ratio))
            results.append(MajorizationResult(n, float(ratio[k]), k, float(num[k]), float(bound[k]), bad))
    return results


def lemma2_majorization_check(alpha: float, n: int, M: int) -> MajorizationResult:
    _check_order(n, check_resolution(M))
    return lemma2_majorization(alpha, [n], M)[0]
