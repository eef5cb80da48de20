"""Verification experiments behind the command-line harness.

Each run_* function returns an ExperimentReport whose rows are sorted by
declared keys, whose summary carries every fitted constant, and whose verdict
applies the experiment's acceptance rule.  Thresholds (tail ratio, plateau
ratio, stability factor) are parameters with the documented defaults.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Optional, Sequence

import numpy as np

from .dyadic import DyadicFunction, check_resolution, coset_class
from .errors import DyadicError, FrequencyAboveResolution, InvalidCount
from .hardy import band_indices, counterexample, hp_quasinorm, lp_power, random_atom
from .kernels import (
    dirichlet_dyadic,
    dyadic_orders_bruteforce,
    fejer_dyadic_numerators,
    iter_cesaro_kernels,
    l1_norm_scan,
    lemma2_majorization,
)
from .means import cesaro_mean, iter_means, weighted_maximal_operator
from .phi import PhiSchedule
from .report import ExperimentReport
from .walsh import butterfly, fwht, walsh_row

TAIL_FACTOR = 1.05
PLATEAU_FACTOR = 1.2
STABILITY_FACTOR = 2.0
SLOPE_TOLERANCE = 0.10


def check_alpha(alpha: float, allow_one: bool = True) -> float:
    alpha = float(alpha)
    upper_ok = alpha <= 1.0 if allow_one else alpha < 1.0
    if not (alpha > 0.0 and upper_ok):
        raise DyadicError(f"alpha must lie in (0, 1], got {alpha}")
    return alpha


def _stability(values: Sequence[float]) -> Optional[float]:
    """max / min of a list of positive fitted constants (None for fewer than two)."""
    vals = [v for v in values if v is not None]
    if len(vals) < 2:
        return None
    lo = min(vals)
    return math.inf if lo <= 0 else max(vals) / lo


def _stable(ratio: Optional[float], factor: float) -> bool:
    return ratio is None or ratio <= factor


# --------------------------------------------------------------- kernels ----

def run_kernels(alpha: float, resolutions: Sequence[int] = (8,), n_max: Optional[int] = None,
                stability: float = STABILITY_FACTOR) -> ExperimentReport:
    """Closed forms of D_{2^j} and K_{2^j} against brute-force Walsh sums, and
    the pointwise majorization of K_n^alpha for n <= n_max."""
    alpha = check_alpha(alpha)
    resolutions = [check_resolution(M) for M in resolutions]
    for M in resolutions:
        if (n_max or 1 << M) > 1 << M:
            raise FrequencyAboveResolution(f"n_max = {n_max} exceeds 2^{M}")
    report = ExperimentReport(
        "kernels",
        {"alpha": alpha, "resolutions": resolutions, "n_max": n_max, "stability": stability},
        ("check", "M", "n", "x", "value", "bound", "ratio", "mismatches", "violations"),
    )
    mismatches = 0
    violations = 0
    worst: Dict[int, float] = {}
    for M in resolutions:
        brute = dyadic_orders_bruteforce(M)
        for j in range(M + 1):
            D, F = brute[j]
            dm = int(np.count_nonzero(dirichlet_dyadic(j, M) != D))
            fm = int(np.count_nonzero(fejer_dyadic_numerators(j, M) != F))
            mismatches += dm + fm
            report.add(check="dirichlet_closed_form", M=M, n=1 << j, mismatches=dm)
            report.add(check="fejer_closed_form", M=M, n=1 << j, mismatches=fm)
        top = n_max or (1 << M)
        results = lemma2_majorization(alpha, np.arange(1, top + 1), M)
        for r in results:
            violations += r.violations
            report.add(check="majorization", M=M, n=r.n, x=r.argmax, value=r.value, bound=r.bound,
                       ratio=r.worst_ratio, violations=r.violations)
        worst[M] = max(r.worst_ratio for r in results)
    ratio = _stability(list(worst.values()))
    finite = all(math.isfinite(v) for v in worst.values())
    report.summary = {
        "closed_form_mismatches": mismatches,
        "support_violations": violations,
        "majorization_fitted_c": {str(M): v for M, v in worst.items()},
        "majorization_stability_ratio": ratio,
    }
    k2 = fejer_dyadic_numerators(1, min(resolutions))
    report.summary["fejer_K2_values"] = [str(Fraction(int(v), 2)) for v in sorted(set(k2.tolist()), reverse=True)]
    report.verdict = mismatches == 0 and violations == 0 and finite and _stable(ratio, stability)
    return report


# --------------------------------------------------------------- l1norms ----

def run_l1norms(alpha: float, M: int = 12, n_max: Optional[int] = None,
                tail_factor: float = TAIL_FACTOR) -> ExperimentReport:
    """L1 norms of K_n^alpha; bounded-tail proxy for their uniform boundedness."""
    alpha = check_alpha(alpha)
    M = check_resolution(M)
    n_max = n_max or (1 << M)
    if n_max > 1 << M:
        raise FrequencyAboveResolution(f"n_max = {n_max} exceeds 2^{M}")
    if n_max < 4:
        raise InvalidCount("the head/tail split needs n_max >= 4")
    report = ExperimentReport(
        "l1norms",
        {"alpha": alpha, "M": M, "n_max": n_max, "tail_factor": tail_factor},
        ("n", "l1_norm", "running_max"),
    )
    running = 0.0
    scan = l1_norm_scan(alpha, n_max, M)
    for n, v in scan:
        running = max(running, v)
        report.add(n=n, l1_norm=v, running_max=running)
    split = n_max // 4
    norms = np.array([v for _, v in scan])
    head = float(norms[:split].max())
    tail = float(norms[split:].max())
    report.summary = {
        "head_range": [1, split],
        "tail_range": [split + 1, n_max],
        "head_max": head,
        "tail_max": tail,
        "tail_ratio": tail / head,
        "sup_l1": float(norms.max()),
        "dyadic_orders": {str(1 << j): float(norms[(1 << j) - 1]) for j in range(n_max.bit_length())
                          if (1 << j) <= n_max},
    }
    report.verdict = tail <= tail_factor * head
    return report


# ---------------------------------------------------------------- lemma3 ----

def _class_bounds(alpha: float, M: int, n: np.ndarray) -> tuple:
    """Bound shapes per low-bit pattern x < 2^M and order n (constant omitted)."""
    kl = np.zeros((n.size, 1 << M))
    k_only = np.zeros(1 << M)
    kind = np.zeros(1 << M, dtype=np.int64)
    for x in range(1, 1 << M):
        cls, k, l = coset_class(x, M)
        if cls == "kl":
            kind[x] = 1
            kl[:, x] = 2.0 ** (alpha * l + k) / (n.astype(np.float64) ** alpha * 2.0 ** M)
        else:
            kind[x] = 2
            k_only[x] = 2.0 ** k / 2.0 ** M
    return kind, kl, k_only


def run_lemma3(alpha: float, resolutions: Sequence[int] = (4, 5, 6), n_probes: Optional[int] = None,
               offset: int = 2, stability: float = STABILITY_FACTOR) -> ExperimentReport:
    """Integrals over I_M of |K_n^alpha(x + t)| for n in (2^M, 2^{M+offset}].

    For each coset class of the complement partition the integral is taken
    at every representative x (every low-bit pattern in the class) and every
    probe n; one row per class keeps the worst ratio to the bound shape.
    """
    alpha = check_alpha(alpha)
    resolutions = [check_resolution(M) for M in resolutions]
    if offset < 1:
        raise DyadicError("probes above 2^M need a working resolution offset >= 1")
    report = ExperimentReport(
        "lemma3",
        {"alpha": alpha, "resolutions": resolutions, "n_probes": n_probes, "offset": offset,
         "stability": stability},
        ("M", "class", "k", "l", "n", "x", "value", "bound", "ratio"),
    )
    fitted_kl: Dict[int, float] = {}
    fitted_k: Dict[int, float] = {}
    for M in resolutions:
        Mw = check_resolution(M + offset)
        ns = np.arange((1 << M) + 1, (1 << Mw) + 1)
        if n_probes and n_probes < ns.size:
            ns = np.unique(np.linspace(ns[0], ns[-1], n_probes).round().astype(np.int64))
        best: Dict[tuple, tuple] = {}
        for chunk, vals in iter_cesaro_kernels(alpha, ns, Mw):
            # slot = low + 2^M * high; t in I_M ranges over the high part
            integ = np.abs(vals).reshape(chunk.size, 1 << (Mw - M), 1 << M).sum(axis=1) * 2.0 ** -Mw
            kind, kl, k_only = _class_bounds(alpha, M, chunk)
            bound = np.where(kind[None, :] == 1, kl, k_only[None, :])
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(kind[None, :] > 0, integ / np.where(bound > 0, bound, 1.0), 0.0)
            for x in range(1, 1 << M):
                key = coset_class(x, M)
                i = int(np.argmax(ratio[:, x]))
                cand = (float(ratio[i, x]), int(chunk[i]), x, float(integ[i, x]), float(bound[i, x]))
                if key not in best or cand[0] > best[key][0]:
                    best[key] = cand
        for (cls, k, l), (_, n, x, value, bound) in best.items():
            report.add(M=M, **{"class": cls}, k=k, l=l, n=n, x=x, value=value, bound=bound, ratio=value / bound)
        fitted_kl[M] = max((r for (c, _, _), (r, *_) in best.items() if c == "kl"), default=None)
        fitted_k[M] = max(r for (c, _, _), (r, *_) in best.items() if c == "k")
    report.sort_rows("M", "class", "k", "l")
    s_kl = _stability(list(fitted_kl.values()))
    s_k = _stability(list(fitted_k.values()))
    finite = all(math.isfinite(r["ratio"]) for r in report.rows)
    report.summary = {
        "fitted_c_pair_classes": {str(M): v for M, v in fitted_kl.items()},
        "fitted_c_single_classes": {str(M): v for M, v in fitted_k.items()},
        "stability_pair_classes": s_kl,
        "stability_single_classes": s_k,
        "classes_per_M": {str(M): M * (M - 1) // 2 + M for M in resolutions},
    }
    report.verdict = finite and _stable(s_kl, stability) and _stable(s_k, stability)
    return report


# ------------------------------------------------------------- theorem1a ----

def _working_resolution(M: int, n_max: int, atom_depth: int) -> int:
    return check_resolution(max(M + atom_depth, (n_max - 1).bit_length()))


def theorem1a_atom_stats(alpha: float, a: np.ndarray, M: int, n_max: int, Mw: int) -> dict:
    """Per-atom quantities for an atom supported on I_M, sampled at resolution Mw.

    prefix_max: max |sigma_n a| over n <= 2^M (zero in exact arithmetic)
    c_pair, c_single:  worst ratios of |sigma_n a(x)|, n in (2^M, n_max], to the bound
                shapes 2^{alpha l + k} 2^{alpha M} / n^alpha on I_{l+1}(e_k+e_l)
                and 2^{alpha M + k} on I_M(e_k)
    integral:   integral over G minus I_M of (sup_n |sigma_n a| / log^{1+alpha} n)^p
    """
    p = 1.0 / (1.0 + alpha)
    f = DyadicFunction(Mw, a)
    spec = fwht(f)
    low = np.arange(1 << Mw, dtype=np.int64) & ((1 << M) - 1)
    kind_low = np.zeros(1 << M, dtype=np.int64)
    shape_pair = np.zeros(1 << M)
    shape_single = np.zeros(1 << M)
    for x in range(1, 1 << M):
        cls, k, l = coset_class(x, M)
        if cls == "kl":
            kind_low[x] = 1
            shape_pair[x] = 2.0 ** (alpha * l + k + alpha * M)
        else:
            kind_low[x] = 2
            shape_single[x] = 2.0 ** (alpha * M + k)
    kind = kind_low[low]
    on_pair = kind == 1
    on_single = kind == 2
    prefix = 0.0
    for _, vals in iter_means(alpha, spec, np.arange(1, (1 << M) + 1)):
        prefix = max(prefix, float(np.abs(vals).max()))
    c_pair = c_single = 0.0
    best = np.zeros(1 << Mw)
    for chunk, vals in iter_means(alpha, spec, np.arange((1 << M) + 1, n_max + 1)):
        av = np.abs(vals)
        if on_pair.any():
            c_pair = max(c_pair, float((av[:, on_pair] * chunk[:, None] ** alpha / shape_pair[low[on_pair]]).max()))
        c_single = max(c_single, float((av[:, on_single] / shape_single[low[on_single]]).max()))
        np.maximum(best, (av / np.log(chunk.astype(np.float64))[:, None] ** (1.0 + alpha)).max(axis=0), out=best)
    integral = float(np.sum(best[kind > 0] ** p)) * 2.0 ** -Mw
    return {"prefix_max": prefix, "c_pair": c_pair, "c_single": c_single, "integral": integral}


def run_theorem1a(alpha: float, resolutions: Sequence[int] = (3, 4, 5, 6), n_max: Optional[int] = None,
                  seeds: int = 100, base_seed: int = 0, atom_depth: int = 2,
                  stability: float = STABILITY_FACTOR) -> ExperimentReport:
    """Pointwise estimates and the truncated log-weighted maximal integral for
    seeded random 1/(1+alpha)-atoms on I_M.  n_max defaults to 2^{M+2} per M."""
    alpha = check_alpha(alpha)
    resolutions = [check_resolution(M) for M in resolutions]
    p = 1.0 / (1.0 + alpha)
    report = ExperimentReport(
        "theorem1a",
        {"alpha": alpha, "resolutions": resolutions, "n_max": n_max, "seeds": seeds,
         "base_seed": base_seed, "atom_depth": atom_depth, "stability": stability},
        ("M", "seed", "n_max", "prefix_max", "c_pair", "c_single", "integral"),
    )
    per_M = {}
    prefix_ok = True
    for M in resolutions:
        top = n_max or (1 << (M + 2))
        if top <= 1 << M:
            raise FrequencyAboveResolution(f"n_max = {top} must exceed 2^{M}")
        Mw = _working_resolution(M, top, atom_depth)
        tol = 1e-10 * 2.0 ** (M / p)
        agg = {"c_pair": 0.0, "c_single": 0.0, "integral": 0.0, "prefix_max": 0.0}
        for i in range(seeds):
            seed = base_seed + i
            atom = random_atom(p, M, seed, M + atom_depth).values.refine(Mw)
            st = theorem1a_atom_stats(alpha, atom.values, M, top, Mw)
            report.add(M=M, seed=seed, n_max=top, **st)
            for key in agg:
                agg[key] = max(agg[key], st[key])
        prefix_ok &= agg["prefix_max"] <= tol
        per_M[M] = agg
    stab = {key: _stability([per_M[M][key] for M in resolutions]) for key in ("c_pair", "c_single", "integral")}
    report.summary = {
        "fitted_c_pair": {str(M): v["c_pair"] for M, v in per_M.items()},
        "fitted_c_single": {str(M): v["c_single"] for M, v in per_M.items()},
        "max_integral": {str(M): v["integral"] for M, v in per_M.items()},
        "max_prefix": {str(M): v["prefix_max"] for M, v in per_M.items()},
        "stability": stab,
        "prefix_vanishes": prefix_ok,
    }
    report.verdict = prefix_ok and all(_stable(v, stability) for v in stab.values())
    return report


# -------------------------------------------------------- counterexample ----

def _brute_dirichlet_rows(M: int) -> np.ndarray:
    """D_0 .. D_{2^M} accumulated from Walsh rows (row i holds D_i)."""
    rows = np.zeros(((1 << M) + 1, 1 << M), dtype=np.int64)
    for k in range(1 << M):
        rows[k + 1] = rows[k] + walsh_row(k, M)
    return rows


def counterexample_checks(nk: int) -> dict:
    """Exact integer checks of the partial-sum trichotomy and the shift identity."""
    ce = counterexample(0.5, nk)
    M = ce.resolution
    lo, hi = 1 << (2 * nk), 1 << (2 * nk + 1)
    D = _brute_dirichlet_rows(M)
    coeff = np.rint(ce.spectrum.coefficients).astype(np.int64)
    f = ce.exact_values
    trichotomy_bad = 0
    for i in range((1 << M) + 1):
        c = coeff.copy()
        c[i:] = 0
        S = butterfly(c)
        if i < lo:
            expected = np.zeros_like(S)
        elif i < hi:
            expected = D[i] - D[lo]
        else:
            expected = f
        trichotomy_bad += int(not np.array_equal(S, expected))
    w = walsh_row(lo, M)
    shift_bad = sum(int(not np.array_equal(D[j + lo] - D[lo], w * D[j])) for j in range(1, lo))
    return {"partial_sum_violations": trichotomy_bad, "shift_identity_violations": shift_bad, "orders_checked": (1 << M) + 1}


def run_counterexample(alpha: float, nk_list: Sequence[int] = (1, 2, 3), phi: Optional[PhiSchedule] = None,
                       stability: float = STABILITY_FACTOR,
                       slope_tolerance: float = SLOPE_TOLERANCE) -> ExperimentReport:
    """The family f_nk = D_{2^{2nk+1}} - D_{2^{2nk}} at resolution 2nk+1."""
    alpha = check_alpha(alpha)
    phi = phi or PhiSchedule.parse("log-power:1.0")
    nk_list = sorted(set(int(v) for v in nk_list))
    if not nk_list or nk_list[0] < 1:
        raise DyadicError("nk values must be positive")
    check_resolution(2 * nk_list[-1] + 1)
    p = 1.0 / (1.0 + alpha)
    report = ExperimentReport(
        "counterexample",
        {"alpha": alpha, "nk_list": nk_list, "phi": str(phi), "stability": stability,
         "slope_tolerance": slope_tolerance},
        ("nk", "s", "q", "M", "value", "bound", "ratio", "hp_norm", "statistic", "lower_shape",
         "growth_ratio", "partial_sum_violations", "shift_identity_violations"),
    )
    band_c = []
    stats = []
    hps = []
    growth = []
    exact_ok = True
    for nk in nk_list:
        ce = counterexample(alpha, nk)
        M = ce.resolution
        f = ce.function
        checks = counterexample_checks(nk)
        exact_ok &= checks["partial_sum_violations"] == 0 and checks["shift_identity_violations"] == 0
        for s in range(1, nk):
            q = ce.probe_orders[s]
            sig = cesaro_mean(alpha, f, q).values
            value = float(np.abs(sig[band_indices(s, M)]).min())
            bound = 2.0 ** (2 * s * (1 + alpha)) / 2.0 ** (2 * alpha * nk)
            band_c.append(value / bound)
            report.add(nk=nk, s=s, q=q, M=M, value=value, bound=bound, ratio=value / bound)
        hp = hp_quasinorm(f, p)
        W = weighted_maximal_operator(alpha, f, 1 << M, start=1, weight=lambda n: phi(n, alpha))
        stat = lp_power(W, p) ** (1.0 + alpha) / hp
        g = float(phi.growth_ratio(2.0 ** (2 * nk + 1), alpha))
        shape = nk ** (1.0 + alpha) / float(phi(2.0 ** (2 * nk + 1), alpha))
        hps.append(hp)
        stats.append(stat)
        growth.append(g)
        report.add(nk=nk, M=M, hp_norm=hp, bound=2.0 ** (-2 * alpha * nk), statistic=stat, lower_shape=shape,
                   growth_ratio=g, partial_sum_violations=checks["partial_sum_violations"],
                   shift_identity_violations=checks["shift_identity_violations"])
    report.sort_rows("nk", "s")
    increasing = all(b > a for a, b in zip(stats, stats[1:]))
    growth_increasing = all(b > a for a, b in zip(growth, growth[1:]))
    expected_slope = -2.0 * alpha * math.log(2.0)
    slope = float(np.polyfit(nk_list, np.log(hps), 1)[0]) if len(nk_list) > 1 else None
    slope_err = abs(slope - expected_slope) / abs(expected_slope) if slope is not None else None
    band_stab = _stability(band_c)
    report.summary = {
        "exact_identities_hold": exact_ok,
        "band_fitted_c_min": min(band_c) if band_c else None,
        "band_fitted_c_max": max(band_c) if band_c else None,
        "band_stability": band_stab,
        "statistic": stats,
        "statistic_strictly_increasing": increasing,
        "hp_log_slope": slope,
        "expected_log_slope": expected_slope,
        "slope_relative_error": slope_err,
        "phi_admissible": phi.admissible_exponent(alpha),
        "phi_growth_increasing": growth_increasing,
    }
    report.verdict = bool(
        exact_ok
        and (not band_c or min(band_c) > 0)
        and _stable(band_stab, stability)
        and increasing
        and growth_increasing
        and (slope_err is None or slope_err <= slope_tolerance)
        and phi.admissible_exponent(alpha) is not False
    )
    return report


# ------------------------------------------------------------- strongsum ----

def strong_sums(alpha: float, a: np.ndarray, Mw: int, n_max: int) -> np.ndarray:
    """(1/log n) sum_{m<=n} ||sigma_m a||_p^p / m for n = 2..n_max (index n-2)."""
    p = 1.0 / (1.0 + alpha)
    scale = 2.0 ** -Mw
    b = np.concatenate([
        (np.abs(vals) ** p).sum(axis=1) * scale
        for _, vals in iter_means(alpha, DyadicFunction(Mw, a), np.arange(1, n_max + 1))
    ])
    m = np.arange(1, n_max + 1, dtype=np.float64)
    running = np.cumsum(b / m)
    return running[1:] / np.log(m[1:])


def run_strongsum(alpha: float, resolutions: Sequence[int] = (3, 4, 5), n_max: int = 512, seeds: int = 50,
                  base_seed: int = 0, atom_depth: int = 2,
                  plateau: float = PLATEAU_FACTOR) -> ExperimentReport:
    """Logarithmic strong sums of L_p quasinorms (p = 1/(1+alpha)) of
    sigma_m^alpha a over seeded random atoms a on I_M."""
    alpha = check_alpha(alpha)
    resolutions = [check_resolution(M) for M in resolutions]
    report = ExperimentReport(
        "strongsum",
        {"alpha": alpha, "resolutions": resolutions, "n_max": n_max, "seeds": seeds, "base_seed": base_seed,
         "atom_depth": atom_depth, "plateau": plateau,
         "per_term_norm": "L_p quasinorm of sigma_m a, p = 1/(1+alpha)"},
        ("M", "seed", "prefix_sum", "half", "final", "plateau_ratio"),
    )
    p = 1.0 / (1.0 + alpha)
    half_n = n_max // 2
    checkpoints: Dict[int, Dict[int, float]] = {}
    worst_plateau = 0.0
    sup_sum = 0.0
    for M in resolutions:
        if n_max <= 2 << M:
            raise FrequencyAboveResolution(f"n_max = {n_max} must exceed 2^{M + 1}")
        Mw = _working_resolution(M, n_max, atom_depth)
        pts = sorted({(1 << M) + 1} | {1 << j for j in range(M + 1, n_max.bit_length()) if (1 << j) <= n_max}
                     | {n_max})
        cp = {n: 0.0 for n in pts}
        for i in range(seeds):
            seed = base_seed + i
            a = random_atom(p, M, seed, M + atom_depth).values.refine(Mw)
            S = strong_sums(alpha, a.values, Mw, n_max)
            prefix = float(S[(1 << M) - 2] * math.log(1 << M))
            final, half = float(S[n_max - 2]), float(S[half_n - 2])
            ratio = final / half if half > 0 else (1.0 if final == 0 else math.inf)
            worst_plateau = max(worst_plateau, ratio)
            sup_sum = max(sup_sum, float(S.max()))
            report.add(M=M, seed=seed, prefix_sum=prefix, half=half, final=final, plateau_ratio=ratio)
            for n in pts:
                cp[n] = max(cp[n], float(S[n - 2]))
        checkpoints[M] = cp
    report.summary = {
        "max_plateau_ratio": worst_plateau,
        "max_strong_sum": sup_sum,
        "ensemble_max_at_checkpoints": {str(M): {str(n): v for n, v in cp.items()} for M, cp in checkpoints.items()},
    }
    report.verdict = math.isfinite(sup_sum) and worst_plateau <= plateau
    return report
