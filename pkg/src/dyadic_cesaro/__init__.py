"""Walsh-Fourier analysis on the dyadic group at finite resolution: Dirichlet,
Fejer and Cesaro (C, alpha) kernels and means, martingale Hardy quasinorms,
and a verification harness for their kernel bounds and strong summability.
"""
from .dyadic import (
    DyadicFunction,
    DyadicInterval,
    GroupPoint,
    add,
    complement_partition,
    integrate,
    interval_indices,
    make_point,
)
from .hardy import (
    AtomSpec,
    FiniteMartingale,
    conditional_expectation,
    counterexample,
    hp_quasinorm,
    lp_quasinorm,
    maximal_function,
    random_atom,
    validate_atom,
    weak_lp_quasinorm,
)
from .kernels import (
    cesaro_kernel,
    cesaro_weights,
    dirichlet_kernel,
    fejer_kernel_dyadic,
    l1_norm_scan,
    lemma2_majorization_check,
)
from .means import cesaro_mean, maximal_operator, mean_sweep, weighted_maximal_operator
from .walsh import fejer_mean, fwht, partial_sum, rademacher, synthesize, walsh

__version__ = "0.1.0"

__all__ = [
    "DyadicFunction",
    "DyadicInterval",
    "GroupPoint",
    "add",
    "complement_partition",
    "integrate",
    "interval_indices",
    "make_point",
    "AtomSpec",
    "FiniteMartingale",
    "conditional_expectation",
    "counterexample",
    "hp_quasinorm",
    "lp_quasinorm",
    "maximal_function",
    "random_atom",
    "validate_atom",
    "weak_lp_quasinorm",
    "cesaro_kernel",
    "cesaro_weights",
    "dirichlet_kernel",
    "fejer_kernel_dyadic",
    "l1_norm_scan",
    "lemma2_majorization_check",
    "cesaro_mean",
    "maximal_operator",
    "mean_sweep",
    "weighted_maximal_operator",
    "fejer_mean",
    "fwht",
    "partial_sum",
    "rademacher",
    "synthesize",
    "walsh",
]
