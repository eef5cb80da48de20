"""Finite dyadic martingales, Hardy-space quasinorms, p-atoms and the
counterexample family D_{2^{2m+1}} - D_{2^{2m}}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np

from .dyadic import DyadicFunction, DyadicInterval, GroupPoint, check_resolution, interval_indices
from .errors import InvalidExponent, ResolutionMismatch, ResolutionTooCoarse
from .kernels import dirichlet_dyadic
from .walsh import WalshSpectrum, fwht


def _coset_means(values: np.ndarray, n: int) -> np.ndarray:
    """Average over each rank-n coset, broadcast back to every slot."""
    size = values.shape[-1]
    # slot i = low + 2^n * high, so rank-n cosets are the columns
    v = values.reshape(values.shape[:-1] + (size >> n, 1 << n))
    means = v.mean(axis=-2, keepdims=True)
    return np.broadcast_to(means, v.shape).reshape(values.shape)


def conditional_expectation(f: DyadicFunction, n: int) -> DyadicFunction:
    """E_n f: average of f over each rank-n coset."""
    if not 0 <= n <= f.resolution:
        raise ResolutionTooCoarse(f"level {n} exceeds resolution {f.resolution}")
    return DyadicFunction(f.resolution, _coset_means(f.values, n))


@dataclass(frozen=True, eq=False)
class FiniteMartingale:
    """Levels F_0 .. F_M, each stored at resolution M."""

    resolution: int
    levels: tuple = field(repr=False)

    def __post_init__(self):
        M = check_resolution(self.resolution)
        if len(self.levels) != M + 1:
            raise ResolutionMismatch(f"expected {M + 1} levels, got {len(self.levels)}")
        for F in self.levels:
            if F.resolution != M:
                raise ResolutionMismatch("every level must be stored at the martingale resolution")

    @classmethod
    def generated_by(cls, f: DyadicFunction) -> "FiniteMartingale":
        return cls(f.resolution, tuple(conditional_expectation(f, n) for n in range(f.resolution + 1)))

    def is_adapted(self, atol: float = 1e-12) -> bool:
        """F_n constant on rank-n cosets."""
        return all(
            np.allclose(F.values, _coset_means(F.values, n), rtol=0, atol=atol)
            for n, F in enumerate(self.levels)
        )

    def is_martingale(self, atol: float = 1e-12) -> bool:
        """E_n F_m = F_n for all n <= m."""
        for m, Fm in enumerate(self.levels):
            for n in range(m + 1):
                if not np.allclose(_coset_means(Fm.values, n), self.levels[n].values, rtol=0, atol=atol):
                    return False
        return True

    def maximal_function(self) -> DyadicFunction:
        """F* = max_n |F_n|."""
        stack = np.abs(np.stack([F.values for F in self.levels]))
        return DyadicFunction(self.resolution, stack.max(axis=0))


def maximal_function(f: Union[DyadicFunction, FiniteMartingale]) -> DyadicFunction:
    """Slotwise max of |E_n f| over n = 0..M (the supremum of interval averages)."""
    if isinstance(f, FiniteMartingale):
        return f.maximal_function()
    best = np.zeros(1 << f.resolution)
    for n in range(f.resolution + 1):
        np.maximum(best, np.abs(_coset_means(f.values, n)), out=best)
    return DyadicFunction(f.resolution, best)


def _check_p(p: float):
    if not p > 0:
        raise InvalidExponent(f"exponent must be positive, got {p}")


def lp_power(f: DyadicFunction, p: float) -> float:
    """integral of |f|^p."""
    _check_p(p)
    return float(np.sum(np.abs(f.values) ** p)) * 2.0 ** -f.resolution


def lp_quasinorm(f: DyadicFunction, p: float) -> float:
    return lp_power(f, p) ** (1.0 / p)


def weak_lp_quasinorm(f: DyadicFunction, p: float) -> float:
    """sup over lambda of lambda * mu(|f| > lambda)^(1/p).

    |f| takes finitely many values v_1 < ... < v_r; on [v_{i-1}, v_i) the
    distribution is constant, so the supremum is v_i * mu(|f| >= v_i)^(1/p)
    maximized over i.
    """
    _check_p(p)
    a = np.sort(np.abs(f.values))
    size = a.size
    vals, first = np.unique(a, return_index=True)
    tail = (size - first) / size
    cand = vals * tail ** (1.0 / p)
    cand = cand[vals > 0]
    return float(cand.max()) if cand.size else 0.0


def hp_quasinorm(f: Union[DyadicFunction, FiniteMartingale], p: float) -> float:
    """||F||_{H_p} = ||F*||_p."""
    return lp_quasinorm(maximal_function(f), p)


@dataclass(frozen=True, eq=False)
class AtomSpec:
    p: float
    support: DyadicInterval
    values: DyadicFunction = field(repr=False)


@dataclass(frozen=True)
class AtomCheck:
    passed: bool
    mean: float
    sup: float
    sup_bound: float
    outside_max: float
    failures: tuple = ()

    def __bool__(self):
        return self.passed


def validate_atom(a: AtomSpec, mean_atol: float = 1e-12, sup_rtol: float = 1e-12) -> AtomCheck:
    """Check mean zero on the support, the sup bound mu(I)^(-1/p), and support."""
    _check_p(a.p)
    f = a.values
    if a.support.rank > f.resolution:
        raise ResolutionTooCoarse("atom support is finer than its value resolution")
    inside = np.zeros(f.values.size, dtype=bool)
    inside[interval_indices(a.support, f.resolution)] = True
    mean = float(np.sum(f.values[inside])) * 2.0 ** -f.resolution
    sup = float(np.abs(f.values).max())
    bound = a.support.measure ** (-1.0 / a.p)
    outside = float(np.abs(f.values[~inside]).max()) if (~inside).any() else 0.0
    failures = []
    if abs(mean) > mean_atol:
        failures.append(f"mean {mean:.3e} is not zero")
    if sup > bound * (1.0 + sup_rtol):
        failures.append(f"sup {sup!r} exceeds bound {bound!r}")
    if outside != 0.0:
        failures.append(f"nonzero value {outside!r} outside the support")
    return AtomCheck(not failures, mean, sup, bound, outside, tuple(failures))


def random_atom(p: float, support_rank: int, seed: int, resolution: Optional[int] = None) -> AtomSpec:
    """A seeded p-atom supported on I_{support_rank}.

    Uniform values on the support are centered and rescaled so that the sup
    equals a fraction drawn from (0.5, 1] of mu(I)^(-1/p).  When resolution
    equals support_rank the support is one slot and the atom is zero.
    """
    _check_p(p)
    M = check_resolution(resolution if resolution is not None else support_rank + 1)
    if not 0 <= support_rank <= M:
        raise ResolutionTooCoarse(f"support rank {support_rank} exceeds resolution {M}")
    rng = np.random.default_rng(seed)
    support = DyadicInterval(support_rank, GroupPoint(0, M))
    idx = interval_indices(support, M)
    raw = rng.uniform(-1.0, 1.0, size=idx.size)
    frac = 1.0 - 0.5 * rng.random()
    raw -= raw.mean()
    peak = np.abs(raw).max()
    values = np.zeros(1 << M)
    if peak > 0:
        bound = support.measure ** (-1.0 / p)
        scaled = raw * (frac * bound / peak)
        scaled -= scaled.mean()
        values[idx] = scaled
    return AtomSpec(float(p), support, DyadicFunction(M, values))


def dyadic_atom(alpha: float, M: int, resolution: Optional[int] = None) -> AtomSpec:
    """2^{M(1+alpha)} w_{2^M} 1_{I_M}: the extremal (1/(1+alpha))-atom on I_M."""
    R = check_resolution(resolution if resolution is not None else M + 1)
    if R <= M:
        raise ResolutionTooCoarse("w_{2^M} needs resolution above M")
    idx = np.arange(1 << R, dtype=np.int64)
    on = (idx & ((1 << M) - 1)) == 0
    sign = np.where((idx >> M) & 1, -1.0, 1.0)
    values = np.where(on, sign * 2.0 ** (M * (1.0 + alpha)), 0.0)
    return AtomSpec(1.0 / (1.0 + alpha), DyadicInterval(M, GroupPoint(0, R)), DyadicFunction(R, values))


@dataclass(frozen=True, eq=False)
class CounterexampleSpec:
    alpha: float
    nk: int
    resolution: int
    function: DyadicFunction = field(repr=False)
    spectrum: WalshSpectrum = field(repr=False)
    probe_orders: tuple = ()
    exact_values: np.ndarray = field(default=None, repr=False)


def counterexample(alpha: float, nk: int, M: Optional[int] = None) -> CounterexampleSpec:
    """f = D_{2^{2nk+1}} - D_{2^{2nk}} with probe orders 2^{2nk} + 2^{2s}, s < nk.

    Both representations are built independently and cross-checked: the
    pointwise one from the Dirichlet closed form, the spectral one as the
    indicator of [2^{2nk}, 2^{2nk+1}).
    """
    if nk < 1:
        raise ValueError(f"nk must be positive, got {nk}")
    M = check_resolution(M if M is not None else 2 * nk + 1)
    if M < 2 * nk + 1:
        raise ResolutionTooCoarse(f"nk = {nk} needs resolution >= {2 * nk + 1}, got {M}")
    exact = dirichlet_dyadic(2 * nk + 1, M) - dirichlet_dyadic(2 * nk, M)
    exact.setflags(write=False)
    f = DyadicFunction(M, exact.astype(np.float64))
    coeff = np.zeros(1 << M)
    coeff[1 << (2 * nk): 1 << (2 * nk + 1)] = 1.0
    spectrum = WalshSpectrum(M, coeff)
    if not np.array_equal(fwht(f).coefficients, spectrum.coefficients):
        raise AssertionError("spectral and pointwise forms of the counterexample disagree")
    probes = tuple((1 << (2 * nk)) + (1 << (2 * s)) for s in range(nk))
    return CounterexampleSpec(float(alpha), int(nk), M, f, spectrum, probes, exact)


def band_indices(s: int, M: int) -> np.ndarray:
    """Slots of I_{2s} minus I_{2s+1}."""
    idx = np.arange(1 << M, dtype=np.int64)
    low = idx & ((1 << (2 * s + 1)) - 1)
    return idx[low == (1 << (2 * s))]


def atom_ensemble(p: float, support_rank: int, seeds: Sequence[int], resolution: int) -> List[AtomSpec]:
    return [random_atom(p, support_rank, int(s), resolution) for s in seeds]
