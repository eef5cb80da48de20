"""Growth schedules phi: N+ -> [1, inf) used by the counterexample experiment.

Shipped kinds:
    log-power:<beta>      max(1, log(n)^beta)
    log-over-loglog       max(1, log(n)^(1+alpha) / (1 + log(1 + log n)))
    table:<v1>,<v2>,...   phi(n) = v_n, held at the last value beyond the table
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class PhiSchedule:
    kind: str
    beta: Optional[float] = None
    table: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("log-power", "log-over-loglog", "table"):
            raise ValueError(f"unknown phi kind {self.kind!r}")
        if self.kind == "log-power" and (self.beta is None or self.beta <= 0):
            raise ValueError("log-power needs a positive beta")
        if self.kind == "table":
            t = np.asarray(self.table, dtype=float)
            if t.size == 0 or (t < 1).any() or (np.diff(t) < 0).any():
                raise ValueError("a phi table must be non-empty, >= 1 and non-decreasing")

    @classmethod
    def parse(cls, text: str) -> "PhiSchedule":
        name, _, arg = text.partition(":")
        if name == "log-power":
            return cls("log-power", beta=float(arg))
        if name == "log-over-loglog":
            return cls("log-over-loglog")
        if name == "table":
            return cls("table", table=tuple(float(v) for v in arg.split(",") if v.strip()))
        raise ValueError(f"cannot parse phi schedule {text!r}")

    def __str__(self):
        if self.kind == "log-power":
            return f"log-power:{self.beta!r}"
        if self.kind == "table":
            return "table:" + ",".join(repr(v) for v in self.table)
        return self.kind

    def __call__(self, n, alpha: float) -> np.ndarray:
        n = np.asarray(n, dtype=np.float64)
        if self.kind == "table":
            t = np.asarray(self.table)
            return t[np.clip(n.astype(np.int64) - 1, 0, t.size - 1)]
        L = np.log(n)
        if self.kind == "log-power":
            raw = L ** self.beta
        else:
            raw = L ** (1.0 + alpha) / (1.0 + np.log1p(L))
        return np.maximum(1.0, raw)

    def admissible_exponent(self, alpha: float) -> Optional[bool]:
        """For log-power, whether beta < 1 + alpha (then log^(1+alpha) n / phi(n) is unbounded)."""
        if self.kind == "log-power":
            return self.beta < 1.0 + alpha
        if self.kind == "log-over-loglog":
            return True
        return None

    def growth_ratio(self, n, alpha: float) -> np.ndarray:
        """log(n)^(1+alpha) / phi(n)."""
        n = np.asarray(n, dtype=np.float64)
        return np.log(n) ** (1.0 + alpha) / self(n, alpha)


SHIPPED = ("log-power:1.0", "log-over-loglog")
