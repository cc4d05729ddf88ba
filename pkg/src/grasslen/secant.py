"""Numeric dimensions of secant varieties of the Grassmannian G(n, m).

The tangent space to the variety of decomposable grade-n multivectors at a
point f_1 ^ ... ^ f_n is spanned by the wedges with one slot replaced by an
arbitrary vector; stacking those spans at l independent random points and
taking the matrix rank measures the dimension of the variety swept by sums
of l decomposable terms (the span of tangent spaces at generic points is
the tangent space of that variety at a generic point of the joins).

Reports compare the measured projective dimension against the count bound
min(l * (n (m - n) + 1) - 1, C(m, n) - 1); the shortfall is the defect.
An optional certification pass redraws one sample with integer entries and
confirms the measured rank by exact Gaussian elimination modulo two
independent random 31-bit primes: a matching modular rank is a
high-confidence lower-bound certificate on the true generic rank.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .defaults import DEFAULT_RANK_TOL, DEFAULT_SEED, DESK_CAP
from .exterior import Multivector, SizeCapError, wedge_slot_matrix, _batched_det, _subset_array

__all__ = [
    "GrassmannPoint",
    "SecantReport",
    "tangent_cone_basis",
    "expected_projective_dim",
    "secant_dim",
    "defect_scan",
    "min_filling_l",
    "write_secant_csv",
    "SECANT_CSV_COLUMNS",
]

log = logging.getLogger(__name__)

SECANT_CSV_COLUMNS = ("m", "n", "l", "projective_dim", "expected_dim", "defect", "certified", "tol", "seed")

DEFAULT_TRIALS = 3

# Certification samples: integer factor entries in [-INT_BOX, INT_BOX].
_INT_BOX = 10 ** 6


@dataclass(frozen=True)
class GrassmannPoint:
    """A decomposable point given by n linearly independent factor vectors."""

    factors: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        factors = tuple(np.asarray(v, dtype=np.complex128).reshape(-1) for v in self.factors)
        if not factors:
            raise ValueError("a point needs at least one factor")
        m = factors[0].shape[0]
        if any(v.shape[0] != m for v in factors):
            raise ValueError("all factors must live in the same C^m")
        if len(factors) > m:
            raise ValueError(f"cannot have {len(factors)} independent factors in dimension {m}")
        object.__setattr__(self, "factors", factors)
        s = np.linalg.svd(self.matrix, compute_uv=False)
        if s[-1] <= 1e-10 * s[0]:
            raise ValueError("factors are numerically dependent")

    @property
    def m(self) -> int:
        return self.factors[0].shape[0]

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def matrix(self) -> np.ndarray:
        return np.column_stack(self.factors)


@dataclass(frozen=True)
class SecantReport:
    m: int
    n: int
    l: int
    affine_rank: int
    projective_dim: int
    expected_dim: int
    defect: int
    trials: int
    tol: float
    seed: int
    ambiguous: bool
    certified: bool


def _tangent_rows(factors: np.ndarray) -> np.ndarray:
    """All n*m tangent multivectors at a point, as rows of a (n*m, C(m,n)) matrix.

    Row (k, i) is the wedge with slot k replaced by the i-th basis vector;
    the rows span the affine tangent cone, of dimension n (m - n) + 1, and
    contain the point itself.
    """
    n = factors.shape[1]
    return np.vstack([wedge_slot_matrix(factors, k).T for k in range(n)])


def tangent_cone_basis(point: GrassmannPoint) -> list[Multivector]:
    """Spanning set of the affine tangent cone at a decomposable point."""
    rows = _tangent_rows(point.matrix)
    return [Multivector(point.m, point.n, row) for row in rows]


def expected_projective_dim(m: int, n: int, l: int) -> int:
    """The count bound min(l * (n (m - n) + 1) - 1, C(m, n) - 1)."""
    return min(l * (n * (m - n) + 1) - 1, comb(m, n) - 1)


def _rank_with_gap(s: np.ndarray, tol: float) -> tuple[int, bool]:
    """Numeric rank plus an ambiguity flag when the cut has no 10x gap."""
    if s.size == 0 or s[0] <= 0.0:
        return 0, False
    cut = tol * s[0]
    rank = int(np.count_nonzero(s >= cut))
    ambiguous = False
    if 0 < rank < s.size and s[rank] > 0.0:
        ambiguous = s[rank - 1] < 10.0 * s[rank]
    return rank, ambiguous


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def _point_tangent_block(factors: np.ndarray) -> np.ndarray:
    """Exact (n (m - n) + 1)-row spanning set of one point's tangent cone.

    Substituting v in span(factors) into a slot reproduces a multiple of the
    point, so the cone is spanned by the point itself plus the slot wedges
    against an orthonormal complement of the factor span. This is the same
    row space as the n*m raw tangent rows with far fewer rows.
    """
    m, n = factors.shape
    q, _ = np.linalg.qr(factors, mode="complete")
    complement = q[:, n:]
    point = _batched_det(factors[_subset_array(m, n), :])
    blocks = [point[None, :]]
    for k in range(n):
        blocks.append((wedge_slot_matrix(factors, k) @ complement).T)
    return np.vstack(blocks)


def _stacked_rank(mats: Sequence[np.ndarray], tol: float) -> tuple[int, bool]:
    stack = np.vstack([_point_tangent_block(f) for f in mats])
    norms = np.linalg.norm(stack, axis=0)
    nz = norms > 0.0
    stack[:, nz] /= norms[nz]
    s = np.linalg.svd(stack, compute_uv=False)
    return _rank_with_gap(s, tol)


def secant_dim(
    m: int,
    n: int,
    l: int,
    *,
    trials: int = DEFAULT_TRIALS,
    tol: float = DEFAULT_RANK_TOL,
    certify: bool = False,
    seed: int = DEFAULT_SEED,
) -> SecantReport:
    """Measure the projective dimension swept by sums of l decomposable terms.

    Draws l independent random points (i.i.d. standard complex Gaussian
    factor entries), stacks their tangent rows, and takes the numeric rank;
    the maximum over `trials` independent samples is reported, since the
    generic rank is attained on a dense open set. `l` counts points, so
    l = 1 measures the Grassmannian itself, of projective dimension
    n (m - n).
    """
    if not 1 <= n <= m:
        raise ValueError(f"need 1 <= n <= m, got n={n}, m={m}")
    if l < 1:
        raise ValueError(f"need l >= 1, got {l}")
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    size = comb(m, n)
    if size > DESK_CAP:
        raise SizeCapError(f"C({m},{n}) = {size} exceeds the desk cap {DESK_CAP}")

    best_rank = 0
    ambiguous = False
    for trial in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence([seed, m, n, l, trial]))
        mats = [_complex_gaussian(rng, (m, n)) for _ in range(l)]
        rank, amb = _stacked_rank(mats, tol)
        if trial == 0 or rank > best_rank:
            best_rank, ambiguous = rank, amb

    certified = False
    if certify:
        certified = _certify_rank(m, n, l, best_rank, seed)

    expected = expected_projective_dim(m, n, l)
    projective = best_rank - 1
    return SecantReport(
        m=m,
        n=n,
        l=l,
        affine_rank=best_rank,
        projective_dim=projective,
        expected_dim=expected,
        defect=expected - projective,
        trials=trials,
        tol=tol,
        seed=seed,
        ambiguous=ambiguous,
        certified=certified,
    )


def min_filling_l(m: int, n: int) -> int:
    """Smallest l whose count bound reaches the full projective dimension.

    Found by direct search over l, so it is an independent cross-check of
    the closed-form lower bound in the bounds module.
    """
    if not 1 <= n <= m - 1:
        raise ValueError(f"need 1 <= n <= m - 1, got n={n}, m={m}")
    target = comb(m, n) - 1
    step = n * (m - n) + 1
    l = 1
    while l * step - 1 < target:
        l += 1
    return l


def defect_scan(
    m_max: int,
    n_values: Iterable[int],
    l_max: int,
    *,
    trials: int = DEFAULT_TRIALS,
    tol: float = DEFAULT_RANK_TOL,
    seed: int = DEFAULT_SEED,
    cap: int = DESK_CAP,
) -> list[SecantReport]:
    """Reports for the full (m, n, l) grid, with a deterministic seed schedule.

    Cells whose coefficient count exceeds `cap` are skipped with a logged
    notice. Results are ordered by (m, n, l).
    """
    ns = sorted(set(n_values))
    if m_max < 2 or not ns or l_max < 1:
        raise ValueError("empty scan grid")
    reports = []
    for m in range(2, m_max + 1):
        for n in ns:
            if not 1 <= n <= m - 1:
                continue
            if comb(m, n) > cap:
                log.warning("skipping m=%d n=%d: C(m,n)=%d exceeds cap %d", m, n, comb(m, n), cap)
                continue
            for l in range(1, l_max + 1):
                reports.append(secant_dim(m, n, l, trials=trials, tol=tol, seed=seed))
    return reports


def write_secant_csv(reports: Iterable[SecantReport], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SECANT_CSV_COLUMNS)
    for r in reports:
        writer.writerow(
            (
                str(r.m),
                str(r.n),
                str(r.l),
                str(r.projective_dim),
                str(r.expected_dim),
                str(r.defect),
                str(r.certified).lower(),
                repr(r.tol),
                str(r.seed),
            )
        )


# ---------------------------------------------------------------------------
# Exact certification over random prime fields
# ---------------------------------------------------------------------------

def _is_probable_prime(x: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit integers."""
    if x < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if x % p == 0:
            return x == p
    d = x - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        y = pow(a, d, x)
        if y in (1, x - 1):
            continue
        for _ in range(r - 1):
            y = y * y % x
            if y == x - 1:
                break
        else:
            return False
    return True


def _random_prime(rng: np.random.Generator, lo: int = 2 ** 30, hi: int = 2 ** 31) -> int:
    # p < 2**31 keeps products of residues inside int64 during elimination.
    while True:
        candidate = int(rng.integers(lo, hi)) | 1
        while candidate < hi and not _is_probable_prime(candidate):
            candidate += 2
        if candidate < hi:
            return candidate


def _det_int(mat: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    a = [row[:] for row in mat]
    k = len(a)
    if k == 0:
        return 1
    sign = 1
    prev = 1
    for col in range(k - 1):
        pivot_row = next((r for r in range(col, k) if a[r][col] != 0), None)
        if pivot_row is None:
            return 0
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            sign = -sign
        pivot = a[col][col]
        for r in range(col + 1, k):
            for c in range(col + 1, k):
                a[r][c] = (a[r][c] * pivot - a[r][col] * a[col][c]) // prev
            a[r][col] = 0
        prev = pivot
    return sign * a[k - 1][k - 1]


def _int_tangent_rows(factors: np.ndarray) -> list[list[int]]:
    """Exact integer tangent rows for an integer factor matrix."""
    from .exterior import _slot_tables, _subset_array

    m, n = factors.shape
    size = comb(m, n)
    rows: list[list[int]] = []
    if n == 1:
        for i in range(m):
            row = [0] * m
            row[i] = 1
            rows.append(row)
        return rows
    minor_idx = _subset_array(m, n - 1)
    irow, icol, iminor, isign = _slot_tables(m, n)
    for k in range(n):
        sub = np.delete(factors, k, axis=1)
        minors = [
            _det_int([[int(sub[r, c]) for c in range(n - 1)] for r in rows_idx])
            for rows_idx in minor_idx
        ]
        slot_sign = -1 if k % 2 else 1
        cols: list[list[int]] = [[0] * size for _ in range(m)]
        for rr, cc, mm, ss in zip(irow, icol, iminor, isign):
            cols[cc][rr] = slot_sign * int(ss) * minors[mm]
        rows.extend(cols)
    return rows


def _rank_modp(a: np.ndarray, p: int) -> int:
    """Exact rank over F_p by vectorised Gaussian elimination (int64-safe)."""
    a = np.mod(a.astype(np.int64), p)
    n_rows, n_cols = a.shape
    r = 0
    for c in range(n_cols):
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pivot = r + int(nz[0])
        if pivot != r:
            a[[r, pivot]] = a[[pivot, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        below = a[r + 1:, c]
        mask = below != 0
        if mask.any():
            a[r + 1:][mask] = (a[r + 1:][mask] - np.outer(below[mask], a[r])) % p
        r += 1
        if r == n_rows:
            break
    return r


def _certify_rank(m: int, n: int, l: int, target_rank: int, seed: int) -> bool:
    """Confirm a measured rank by exact elimination modulo two random primes.

    Integer points drawn uniformly from [-10**6, 10**6] are generic with
    overwhelming probability; a modular rank is always a lower bound on the
    rank over the rationals, so agreement with the floating measurement on
    two independent primes certifies it (up to the random-sample failure
    probability).
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, m, n, l, 0xC0FFEE]))
    rows: list[list[int]] = []
    for _ in range(l):
        factors = rng.integers(-_INT_BOX, _INT_BOX + 1, size=(m, n))
        rows.extend(_int_tangent_rows(factors))
    exact = np.array(rows, dtype=object)
    for _ in range(2):
        p = _random_prime(rng)
        reduced = (exact % p).astype(np.int64)
        if _rank_modp(reduced, p) != target_rank:
            return False
    return True
