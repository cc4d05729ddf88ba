"""Bounds and known exact values for the maximal length of an n-vector.

N(m, n) is the largest number of decomposable summands needed by any
grade-n multivector in dimension m. It is invariant under the duality
n <-> m - n, so the half-interval bound, the upper-bound order and the
exact-value table are evaluated after reducing n to min(n, m - n). The
secant-count bound ceil(C(m, n) / (n (m - n) + 1)) is already symmetric.

All binomial arithmetic is exact big-integer arithmetic; the upper-bound
order m**(n-1) / (2 n!) is an asymptotic order term, not a certified bound,
and is labelled as such everywhere it is emitted.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable

__all__ = [
    "ExactValue",
    "BoundsRecord",
    "is_degenerate_grade",
    "lower_bound_new",
    "lower_bound_new_fraction",
    "lower_bound_old",
    "upper_bound_order",
    "exact_value",
    "bounds_record",
    "bounds_table",
    "write_bounds_csv",
    "write_plot_series",
    "BOUNDS_CSV_COLUMNS",
]

BOUNDS_CSV_COLUMNS = ("m", "n", "lower_old", "lower_new", "upper_order", "exact", "exact_field", "source")


@dataclass(frozen=True)
class ExactValue:
    value: int
    field_scope: str  # "any-char-0" or "complex"
    source: str


@dataclass(frozen=True)
class BoundsRecord:
    m: int
    n: int
    lower_old: int
    lower_new: int
    upper_order: float
    exact: ExactValue | None


def _check_grade(m: int, n: int) -> None:
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    if not isinstance(n, int) or isinstance(n, bool) or not 0 <= n <= m:
        raise ValueError(f"n must satisfy 0 <= n <= m, got n={n!r}, m={m}")


def is_degenerate_grade(m: int, n: int) -> bool:
    """Grades 0 and m are one-dimensional, so every length is trivially 1."""
    return n == 0 or n == m


def lower_bound_new_fraction(m: int, n: int) -> Fraction:
    """The raw rational secant-count bound C(m, n) / (n (m - n) + 1)."""
    _check_grade(m, n)
    if is_degenerate_grade(m, n):
        return Fraction(1)
    return Fraction(comb(m, n), n * (m - n) + 1)


def lower_bound_new(m: int, n: int) -> int:
    """Integer secant-count lower bound: ceil(C(m, n) / (n (m - n) + 1)).

    The ceiling is valid because the maximal length is an integer dominating
    the rational bound. Symmetric in n <-> m - n by construction; grades 0
    and m return the trivial value 1.
    """
    _check_grade(m, n)
    if is_degenerate_grade(m, n):
        return 1
    d = n * (m - n) + 1
    return -(-comb(m, n) // d)


def lower_bound_old(m: int, n: int) -> int:
    """Half-interval lower bound floor((m - n + 2) / 2) after duality reduction.

    The formula targets 2 <= n <= floor(m / 2); for reduced n <= 1 the exact
    value 1 is returned directly (no valid lower bound can exceed it).
    """
    _check_grade(m, n)
    if is_degenerate_grade(m, n):
        return 1
    k = min(n, m - n)
    if k == 1:
        return 1
    return (m - k + 2) // 2


def upper_bound_order(m: int, n: int) -> float:
    """Asymptotic order m**(n-1) / (2 n!) of the best upper bound.

    This is an order term only, never a certified bound; duality reduction
    n <- min(n, m - n) is applied first. Degenerate grades return 1.0.
    """
    _check_grade(m, n)
    if is_degenerate_grade(m, n):
        return 1.0
    k = min(n, m - n)
    return m ** (k - 1) / (2 * factorial(k))


def exact_value(m: int, n: int) -> ExactValue | None:
    """Known exact maximal lengths, after duality reduction; None if unknown.

    The field scope is recorded because maximal lengths depend on the scalar
    field: the (6, 3) value holds over any field of characteristic zero,
    while the (7, 3) and (8, 3) values are specific to the complex field.
    """
    _check_grade(m, n)
    if is_degenerate_grade(m, n):
        return ExactValue(1, "any-char-0", "one-dimensional grade")
    k = min(n, m - n)
    if k == 1:
        return ExactValue(1, "any-char-0", "single wedge factor")
    if k == 2:
        return ExactValue(m // 2, "any-char-0", "Schmidt decomposition")
    if (m, k) == (6, 3):
        return ExactValue(3, "any-char-0", "Glassco")
    if (m, k) == (7, 3):
        return ExactValue(4, "complex", "Westwick")
    if (m, k) == (8, 3):
        return ExactValue(5, "complex", "Westwick")
    return None


def bounds_record(m: int, n: int) -> BoundsRecord:
    return BoundsRecord(
        m=m,
        n=n,
        lower_old=lower_bound_old(m, n),
        lower_new=lower_bound_new(m, n),
        upper_order=upper_bound_order(m, n),
        exact=exact_value(m, n),
    )


def bounds_table(m_values: Iterable[int], n_values: Iterable[int]) -> list[BoundsRecord]:
    """One record per valid (m, n) pair, ordered by m then n.

    Pairs with n > m do not index a nonzero exterior power and are skipped.
    """
    ms = sorted(set(m_values))
    ns = sorted(set(n_values))
    if not ms or not ns:
        raise ValueError("empty m or n range")
    for m in ms:
        _check_grade(m, 0)
    if any(n < 0 for n in ns):
        raise ValueError("grades must be nonnegative")
    records = [bounds_record(m, n) for m in ms for n in ns if n <= m]
    if not records:
        raise ValueError("no valid (m, n) pairs in range")
    return records


def _record_row(rec: BoundsRecord) -> list[str]:
    exact = rec.exact
    return [
        str(rec.m),
        str(rec.n),
        str(rec.lower_old),
        str(rec.lower_new),
        repr(rec.upper_order),
        str(exact.value) if exact else "",
        exact.field_scope if exact else "",
        exact.source if exact else "",
    ]


def write_bounds_csv(records: Iterable[BoundsRecord], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(BOUNDS_CSV_COLUMNS)
    for rec in records:
        writer.writerow(_record_row(rec))


def write_plot_series(records: Iterable[BoundsRecord], fh) -> None:
    """Plot-ready long-format series: one block per n, columns m/old/new/exact."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(("n", "m", "lower_old", "lower_new", "exact"))
    for rec in sorted(records, key=lambda r: (r.n, r.m)):
        writer.writerow(
            (
                str(rec.n),
                str(rec.m),
                str(rec.lower_old),
                str(rec.lower_new),
                str(rec.exact.value) if rec.exact else "",
            )
        )
