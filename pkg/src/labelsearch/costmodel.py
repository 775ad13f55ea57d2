"""Analytic cost engine: sweep runtimes, hardware speedup regimes,
quadratic-search query counts, and the supervision spend ledger.

All runtime functions are pure and duck-typed over the numeric type of
the per-cycle time: pass a float for ordinary use, or ``fractions.Fraction``
to get exact rational arithmetic (the 2**n factor is always an exact
wide integer, so nothing overflows).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

CONSTANT = "constant"
POLYNOMIAL = "polynomial"
EXPONENTIAL = "exponential"
REGIME_KINDS = (CONSTANT, POLYNOMIAL, EXPONENTIAL)

SCALING_CSV_HEADER = ["n", "T_classical", "T_const", "T_poly", "T_exp", "grover_queries"]


@dataclass(frozen=True)
class SpeedupRegime:
    """How the hardware speedup factor grows with pool size n.

    Exactly one parameter is meaningful per kind: ``l0`` (constant
    factor, >= 1), ``alpha`` (polynomial exponent, > 0), or ``beta``
    (exponential rate, in (0, 1]).  Use the classmethod constructors.
    """

    kind: str
    l0: float | None = None
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if self.kind not in REGIME_KINDS:
            raise ValueError(f"unknown speedup regime {self.kind!r}; expected one of {REGIME_KINDS}")
        expected = {CONSTANT: "l0", POLYNOMIAL: "alpha", EXPONENTIAL: "beta"}[self.kind]
        for name in ("l0", "alpha", "beta"):
            value = getattr(self, name)
            if name == expected:
                if value is None:
                    raise ValueError(f"{self.kind} regime requires {name}")
            elif value is not None:
                raise ValueError(f"{self.kind} regime does not take {name}")
        if self.kind == CONSTANT and not self.l0 >= 1:
            raise ValueError("constant speedup factor must be >= 1")
        if self.kind == POLYNOMIAL and not self.alpha > 0:
            raise ValueError("polynomial exponent must be positive")
        if self.kind == EXPONENTIAL and not 0 < self.beta <= 1:
            raise ValueError("exponential rate must lie in (0, 1]")

    @classmethod
    def constant(cls, l0: float) -> "SpeedupRegime":
        return cls(CONSTANT, l0=l0)

    @classmethod
    def polynomial(cls, alpha: float) -> "SpeedupRegime":
        return cls(POLYNOMIAL, alpha=alpha)

    @classmethod
    def exponential(cls, beta: float) -> "SpeedupRegime":
        return cls(EXPONENTIAL, beta=beta)


def classical_runtime(n: int, t_c):
    """Total time of a full sweep: 2**n cycles at t_c seconds each."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not t_c > 0:
        raise ValueError("per-cycle time must be positive")
    return (1 << n) * t_c


def accelerated_runtime(n: int, t_c, speedup):
    """Sweep time on hardware ``speedup`` times faster per cycle.

    The speedup enters only as a multiplicative factor: the result
    times ``speedup`` recovers the classical runtime (exactly so in
    exact arithmetic, e.g. with Fraction inputs).
    """
    if not speedup >= 1:
        raise ValueError(f"speedup must be >= 1, got {speedup}")
    return classical_runtime(n, t_c) / speedup


def regime_runtime(n: int, t_c, regime: SpeedupRegime):
    """Sweep time when the speedup factor itself grows with n.

    constant:    2**n * t_c / l0
    polynomial:  2**n * t_c / n**alpha   (undefined at n = 0)
    exponential: 2**((1 - beta) * n) * t_c
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not t_c > 0:
        raise ValueError("per-cycle time must be positive")
    if regime.kind == CONSTANT:
        return (1 << n) * t_c / regime.l0
    if regime.kind == POLYNOMIAL:
        if n == 0:
            raise ValueError("polynomial speedup regime is undefined at n = 0")
        return (1 << n) * t_c / n**regime.alpha
    return 2.0 ** ((1.0 - regime.beta) * n) * t_c


def grover_queries(n: int) -> float:
    """Leading-order query count of a quadratic unstructured search over
    2**n candidates: 2**(n/2).  The constant-factor prefactor is
    deliberately excluded."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return 2.0 ** (n / 2)


@dataclass(frozen=True)
class CostLedger:
    """The five supervision spend components, in one monetary unit."""

    label: float
    curate: float
    compute: float
    latency: float
    risk: float

    def __post_init__(self):
        for name in ("label", "curate", "compute", "latency", "risk"):
            if getattr(self, name) < 0:
                raise ValueError(f"ledger component {name} must be nonnegative")

    @property
    def total(self) -> float:
        return self.label + self.curate + self.compute + self.latency + self.risk


def ledger_total(ledger: CostLedger) -> float:
    """Sum of the five spend components."""
    return ledger.total


def perf_per_cost(quality: float, ledger: CostLedger) -> float:
    """Quality achieved per unit of total spend."""
    if quality < 0:
        raise ValueError("quality must be nonnegative")
    total = ledger.total
    if not total > 0:
        raise ValueError("performance per cost is undefined for zero total cost")
    return quality / total


def scaling_table(n_values, t_c, regimes: list[SpeedupRegime]) -> list[dict]:
    """Rows of runtimes per n: classical, one column per regime kind, and
    the quadratic-search query count.

    ``regimes`` may hold at most one regime of each kind; a missing kind
    leaves its column empty in the emitted CSV.
    """
    ns = list(n_values)
    if not ns:
        raise ValueError("n_values must be nonempty")
    if ns != sorted(ns):
        raise ValueError("n_values must be ascending")
    by_kind: dict[str, SpeedupRegime] = {}
    for regime in regimes:
        if regime.kind in by_kind:
            raise ValueError(f"duplicate {regime.kind} regime in table request")
        by_kind[regime.kind] = regime
    rows = []
    for n in ns:
        row = {"n": n, "T_classical": classical_runtime(n, t_c)}
        row["T_const"] = regime_runtime(n, t_c, by_kind[CONSTANT]) if CONSTANT in by_kind else None
        row["T_poly"] = regime_runtime(n, t_c, by_kind[POLYNOMIAL]) if POLYNOMIAL in by_kind else None
        row["T_exp"] = regime_runtime(n, t_c, by_kind[EXPONENTIAL]) if EXPONENTIAL in by_kind else None
        row["grover_queries"] = grover_queries(n)
        rows.append(row)
    return rows


def scaling_table_csv(rows: list[dict]) -> str:
    """Render scaling-table rows as CSV with the fixed header."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCALING_CSV_HEADER)
    for row in rows:
        writer.writerow([
            row["n"],
            row["T_classical"],
            "" if row["T_const"] is None else row["T_const"],
            "" if row["T_poly"] is None else row["T_poly"],
            "" if row["T_exp"] is None else row["T_exp"],
            row["grover_queries"],
        ])
    return buf.getvalue()
