"""(C, alpha) means of functions and their truncated maximal operators."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, Optional, Sequence

import numpy as np

from .dyadic import DyadicFunction
from .errors import FrequencyAboveResolution, InvalidCount
from .kernels import BATCH_ELEMENTS, cesaro_multipliers, cesaro_weights, multiplier_matrix
from .walsh import WalshSpectrum, butterfly, fwht, walsh_row

# Above this resolution sweeps keep only the requested reductions.
KEEP_FUNCTIONS_UP_TO = 12


def _check_alpha(alpha: float):
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")


def _check_range(n: int, M: int):
    if n < 1:
        raise InvalidCount(f"order must be >= 1, got {n}")
    if n > (1 << M):
        raise FrequencyAboveResolution(f"order {n} exceeds 2^{M}")


def _spectrum(f) -> WalshSpectrum:
    return f if isinstance(f, WalshSpectrum) else fwht(f)


def cesaro_mean(alpha: float, f: DyadicFunction, n: int) -> DyadicFunction:
    """sigma_n^alpha f = (1/A_n^alpha) sum_{k=1}^n A_{n-k}^{alpha-1} S_k f."""
    _check_alpha(alpha)
    spec = _spectrum(f)
    M = spec.resolution
    _check_range(n, M)
    lam = cesaro_multipliers(alpha, n, 1 << M)
    return DyadicFunction(M, butterfly(lam * spec.coefficients))


def cesaro_mean_direct(alpha: float, f: DyadicFunction, n: int) -> DyadicFunction:
    """The definition evaluated term by term from partial sums; O(n 2^M)."""
    _check_alpha(alpha)
    spec = fwht(f)
    M = spec.resolution
    _check_range(n, M)
    A = cesaro_weights(alpha, n)
    B = cesaro_weights(alpha - 1.0, n)
    S = np.zeros(1 << M)
    acc = np.zeros(1 << M)
    for k in range(1, n + 1):
        S = S + spec.coefficients[k - 1] * walsh_row(k - 1, M)
        acc += B[n - k] * S
    return DyadicFunction(M, acc / A[n])


def iter_means(alpha: float, f, ns: Sequence[int]) -> Iterator[tuple]:
    """Yield (orders, values) batches of sigma_n^alpha f, one row per order."""
    _check_alpha(alpha)
    spec = _spectrum(f)
    M = spec.resolution
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size == 0:
        return
    _check_range(int(ns.min()), M)
    _check_range(int(ns.max()), M)
    top = int(ns.max())
    A = cesaro_weights(alpha, top)
    B = cesaro_weights(alpha - 1.0, top)
    rows = max(1, BATCH_ELEMENTS >> M)
    for start in range(0, ns.size, rows):
        chunk = ns[start:start + rows]
        lam = multiplier_matrix(alpha, chunk, 1 << M, A, B)
        yield chunk, butterfly(lam * spec.coefficients[None, :])


Reducer = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class MeanSweep:
    """sigma_n^alpha f for n = 1..N.

    `means` holds one row per order (row n-1 is sigma_n) unless the sweep ran
    in reduced mode, in which case only `norms` is populated.
    """

    alpha: float
    resolution: int
    N: int
    means: Optional[np.ndarray] = field(default=None, repr=False)
    norms: Dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    def __getitem__(self, n: int) -> DyadicFunction:
        if self.means is None:
            raise KeyError("sweep was reduced to norms; functions were not kept")
        if not 1 <= n <= self.N:
            raise IndexError(n)
        return DyadicFunction(self.resolution, self.means[n - 1])


def mean_sweep(
    alpha: float,
    f: DyadicFunction,
    N: int,
    reducers: Optional[Dict[str, Reducer]] = None,
    keep: Optional[bool] = None,
) -> MeanSweep:
    """All sigma_n^alpha f, n = 1..N, from one transform.

    `reducers` map a (rows, 2^M) batch to one number per row; they are applied
    on the fly.  Functions are retained when `keep` is true, which defaults to
    resolutions up to KEEP_FUNCTIONS_UP_TO.
    """
    spec = _spectrum(f)
    M = spec.resolution
    _check_range(N, M)
    if keep is None:
        keep = M <= KEEP_FUNCTIONS_UP_TO
    reducers = reducers or {}
    kept = [] if keep else None
    parts = {name: [] for name in reducers}
    for _, vals in iter_means(alpha, spec, np.arange(1, N + 1)):
        if keep:
            kept.append(vals)
        for name, fn in reducers.items():
            parts[name].append(np.asarray(fn(vals)))
    means = np.concatenate(kept) if keep else None
    if means is not None:
        means.setflags(write=False)
    norms = {name: np.concatenate(p) for name, p in parts.items()}
    return MeanSweep(float(alpha), M, int(N), means, norms)


def maximal_operator(alpha: float, f: DyadicFunction, N: int, start: int = 1) -> DyadicFunction:
    """Slotwise max of |sigma_n^alpha f| over n = start..N."""
    spec = _spectrum(f)
    M = spec.resolution
    _check_range(N, M)
    if start > N:
        raise InvalidCount(f"empty range {start}..{N}")
    best = np.zeros(1 << M)
    for _, vals in iter_means(alpha, spec, np.arange(start, N + 1)):
        np.maximum(best, np.abs(vals).max(axis=0), out=best)
    return DyadicFunction(M, best)


def weighted_maximal_operator(
    alpha: float, f: DyadicFunction, N: int, start: int = 2, weight: Optional[Callable] = None
) -> DyadicFunction:
    """Slotwise max of |sigma_n^alpha f| / weight(n) over n = start..N.

    The default weight is (log n)^(1 + alpha) with the natural logarithm;
    n = 1 is excluded because log 1 = 0.
    """
    if N < 2:
        raise InvalidCount(f"the log-weighted supremum needs N >= 2, got {N}")
    start = max(start, 2) if weight is None else max(start, 1)
    spec = _spectrum(f)
    M = spec.resolution
    _check_range(N, M)
    if start > N:
        raise InvalidCount(f"empty range {start}..{N}")
    if weight is None:
        def weight(n, _a=alpha):
            return np.log(n) ** (1.0 + _a)
    best = np.zeros(1 << M)
    for chunk, vals in iter_means(alpha, spec, np.arange(start, N + 1)):
        w = np.asarray(weight(chunk.astype(np.float64)), dtype=np.float64)
        np.maximum(best, (np.abs(vals) / w[:, None]).max(axis=0), out=best)
    return DyadicFunction(M, best)

