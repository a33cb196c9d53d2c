"""Closed-form lower bounds on query cost, and their bookkeeping.

Six rows, indexed by search strategy, aggregation statistic and query
measure.  R below is the best K-segment approximation error of the
data CDF in rank-fraction units; n is the key count.

    l1  linear search, mean over keys and queries, any measure:
            n * (R - sqrt(pi / (2n)))
    l2  linear search, worst keys / mean queries, matched measure:
            n * R - 1/sqrt(6)
    e1  exponential search, worst keys / mean queries, any measure
        with densities pinched in [cf, cff]:
            C1 * (log2(n R) - C2)          (explicit constants)
        and, dropping the outer constant, the display form
            log2(n R) - C2
    e2  exponential search, worst case, matched measure:
            log2(n R - 1/sqrt(6))
    b1  binary search, worst case, any measure:
            log2(n * (R - sqrt(pi / (2n))))
    b2  binary search, worst case, matched measure:  same as e2

Log rows return -inf when the inner bracket is nonpositive; every
nonpositive bound is "vacuous" and counts as satisfied with a flag, so
small-n degeneracy is surfaced instead of silently clamped to zero.
"""

import math
from dataclasses import dataclass

from .errors import DomainError

ROWS = ("l1", "l2", "e1", "e2", "b1", "b2")

# row -> (strategy, statistic, measure requirement)
ROW_INFO = {
    "l1": ("linear", "MeanOverXq", "any"),
    "l2": ("linear", "MeanOverQ-WorstX", "matched"),
    "e1": ("exp", "MeanOverQ-WorstX", "any"),
    "e2": ("exp", "MaxOverAll", "matched"),
    "b1": ("binary", "MaxOverAll", "any"),
    "b2": ("binary", "MaxOverAll", "matched"),
}


@dataclass(frozen=True)
class BoundSpec:
    row: str
    n: int
    k: int
    r: float
    cf: float = None
    cff: float = None

    def __post_init__(self):
        if self.row not in ROWS:
            raise DomainError(f"row must be one of {ROWS}")
        if self.n < 1 or self.k < 1:
            raise DomainError("n and k must be at least 1")
        if not (0.0 <= self.r <= 1.0):
            raise DomainError("R must lie in [0, 1] (rank-fraction units)")
        if self.row == "e1":
            if self.cf is None or self.cff is None:
                raise DomainError("the e1 row needs the density pinch [cf, cff]")
            if not (0.0 < self.cf <= self.cff) or not math.isfinite(self.cff):
                raise DomainError("density pinch needs 0 < cf <= cff < inf")


@dataclass(frozen=True)
class BoundReport:
    spec: BoundSpec
    bound_value: float
    measured: float
    statistic: str
    satisfied: bool
    vacuous: bool
    slack: float = 0.0
    table_form: float = None  # e1 only: the constant-free display form


def log_bound_constants(cf, cff):
    """(C1, C2) of the explicit exponential-search bound.

    gamma = cf / (2 cff), C1 = gamma^7 / 54, C2 = log2(8 / gamma^12).
    gamma <= 1/2 always, so C1 <= 2^-7/54 and C2 >= 15.
    """
    if not (0.0 < cf <= cff) or not math.isfinite(cff):
        raise DomainError("density pinch needs 0 < cf <= cff < inf")
    gamma = cf / (2.0 * cff)
    return gamma**7 / 54.0, math.log2(8.0 / gamma**12)


def _log2_or_neg_inf(x):
    if x <= 0.0:
        return float("-inf")
    return math.log2(x)


def table1_bound(spec):
    """Evaluate one row at the given (n, K, R); log rows may be -inf."""
    n, r = spec.n, spec.r
    row = spec.row
    if row == "l1":
        return n * (r - math.sqrt(math.pi / (2.0 * n)))
    if row == "l2":
        return n * r - 1.0 / math.sqrt(6.0)
    if row == "e1":
        c1, c2 = log_bound_constants(spec.cf, spec.cff)
        return c1 * (_log2_or_neg_inf(n * r) - c2)
    if row == "e2" or row == "b2":
        return _log2_or_neg_inf(n * r - 1.0 / math.sqrt(6.0))
    if row == "b1":
        return _log2_or_neg_inf(n * (r - math.sqrt(math.pi / (2.0 * n))))
    raise DomainError(f"row must be one of {ROWS}")


def e1_table_form(spec):
    """The display form log2(nR) - C2, without the outer constant."""
    if spec.row != "e1":
        raise DomainError("table form applies to the e1 row only")
    _, c2 = log_bound_constants(spec.cf, spec.cff)
    return _log2_or_neg_inf(spec.n * spec.r) - c2


def vacuity_threshold(row, n, cf=None, cff=None):
    """Smallest R making the row's bound positive."""
    if row == "l1" or row == "b1":
        return math.sqrt(math.pi / (2.0 * n))
    if row == "l2" or row == "e2" or row == "b2":
        return 1.0 / (math.sqrt(6.0) * n)
    if row == "e1":
        _, c2 = log_bound_constants(cf, cff)
        return 2.0**c2 / n
    raise DomainError(f"row must be one of {ROWS}")


def evaluate(spec, measured, slack=0.0):
    """Compare a measured statistic against the row's bound.

    A nonpositive (or -inf) bound is vacuous and counts as satisfied;
    otherwise satisfied means measured >= bound - slack.
    """
    value = table1_bound(spec)
    vacuous = not (value > 0.0)
    satisfied = True if vacuous else (measured >= value - slack)
    tf = e1_table_form(spec) if spec.row == "e1" else None
    return BoundReport(
        spec=spec,
        bound_value=value,
        measured=float(measured),
        statistic=ROW_INFO[spec.row][1],
        satisfied=bool(satisfied),
        vacuous=vacuous,
        slack=float(slack),
        table_form=tf,
    )


def rows_for(strategy, measure_matched, have_pinch):
    """Applicable rows for a strategy given the measure and density info."""
    if strategy == "linear":
        rows = ["l1"]
        if measure_matched:
            rows.append("l2")
        return rows
    if strategy == "exp":
        rows = []
        if have_pinch:
            rows.append("e1")
        if measure_matched:
            rows.append("e2")
        return rows
    if strategy == "binary":
        rows = ["b1"]
        if measure_matched:
            rows.append("b2")
        return rows
    raise DomainError(f"unknown strategy {strategy!r}")
