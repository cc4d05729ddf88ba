"""Decomposability tests, minimal support rank, and exact 2-vector lengths.

A multivector is decomposable exactly when all quadratic Pluecker relations
vanish on its coefficients; the minimal subspace F with psi in the grade-n
power of F is recovered from the span of iterated contractions. For grade 2
the exact length and explicit terms come from the canonical (Schmidt-type)
form of the skew coefficient matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .defaults import DEFAULT_RANK_TOL
from .exterior import (
    GrasslenError,
    Multivector,
    SizeCapError,
    contract,
    subsets,
    wedge_vectors,
    _rank_map,
)

__all__ = [
    "ZeroMultivectorError",
    "ToleranceError",
    "DecompTerm",
    "RankReport",
    "DecompCheck",
    "DEFAULT_PLUCKER_TOL",
    "contraction_span_matrix",
    "support_rank",
    "plucker_residual",
    "is_decomposable",
    "skew_matrix",
    "schmidt_length",
    "numeric_rank",
    "terms_to_document",
]

DEFAULT_PLUCKER_TOL = 1e-10

# Guard on the quadric enumeration (pairs of index subsets).
_PLUCKER_PAIR_CAP = 2_000_000


class ZeroMultivectorError(GrasslenError, ValueError):
    """Rank and decomposability are undefined for the zero multivector."""


class ToleranceError(GrasslenError, RuntimeError):
    """A numeric-rank threshold produced an inconsistent answer."""


@dataclass(frozen=True)
class DecompTerm:
    """One decomposable summand, kept as its ordered factor vectors."""

    factors: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        factors = tuple(np.asarray(v, dtype=np.complex128).reshape(-1) for v in self.factors)
        if not factors:
            raise ValueError("a decomposable term needs at least one factor")
        m = factors[0].shape[0]
        if any(v.shape[0] != m for v in factors):
            raise ValueError("all factors must live in the same C^m")
        object.__setattr__(self, "factors", factors)

    @property
    def m(self) -> int:
        return self.factors[0].shape[0]

    @property
    def n(self) -> int:
        return len(self.factors)

    def to_multivector(self) -> Multivector:
        return wedge_vectors(self.factors)


@dataclass(frozen=True)
class RankReport:
    """Minimal support dimension plus an orthonormal basis of that support."""

    rank: int
    support_basis: tuple[np.ndarray, ...]
    singular_values: np.ndarray
    tol: float


@dataclass(frozen=True)
class DecompCheck:
    decomposable: bool
    residual: float
    support_rank: int
    tol: float


def numeric_rank(singular_values: np.ndarray, tol: float) -> int:
    """Number of singular values at least tol times the largest one."""
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.count_nonzero(s >= tol * s[0]))


# ---------------------------------------------------------------------------
# Support rank
# ---------------------------------------------------------------------------

def contraction_span_matrix(psi: Multivector) -> np.ndarray:
    """Stack psi contracted by every (n-1)-subset of basis covectors.

    Rows are vectors of C^m; their span is the minimal subspace F such that
    psi lies in the grade-n power of F.
    """
    if psi.n == 0:
        raise ValueError("support rank needs grade >= 1")
    rows = np.empty((comb(psi.m, psi.n - 1), psi.m), dtype=np.complex128)
    for r, members in enumerate(subsets(psi.m, psi.n - 1)):
        v = psi
        for j in reversed(members):
            v = contract(v, j)
        rows[r] = v.coeffs
    return rows


def support_rank(psi: Multivector, tol: float = DEFAULT_RANK_TOL) -> RankReport:
    """Dimension of the minimal F with psi inside the grade-n power of F."""
    if psi.is_zero():
        raise ZeroMultivectorError("support rank of the zero multivector is undefined")
    mat = contraction_span_matrix(psi)
    _, s, vh = np.linalg.svd(mat, full_matrices=False)
    rank = numeric_rank(s, tol)
    basis = tuple(vh[i].copy() for i in range(rank))
    return RankReport(rank=rank, support_basis=basis, singular_values=s, tol=tol)


# ---------------------------------------------------------------------------
# Pluecker relations
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _plucker_table(m: int, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Distinct Pluecker quadrics as flat (left, right, coeff, quadric-id) arrays.

    One raw relation per ((n-1)-subset I, (n+1)-subset J): the alternating
    sum over j in J of p[I + j] * p[J - j]. Identical monomials inside a
    relation are combined, and relations equal up to a global sign are kept
    once.
    """
    if comb(m, n - 1) * comb(m, n + 1) > _PLUCKER_PAIR_CAP:
        raise SizeCapError(f"Pluecker enumeration too large for m={m}, n={n}")
    rank_n = _rank_map(m, n)
    seen: set[tuple] = set()
    left, right, coef, qid = [], [], [], []
    count = 0
    for small in itertools.combinations(range(1, m + 1), n - 1):
        small_set = set(small)
        for big in itertools.combinations(range(1, m + 1), n + 1):
            agg: dict[tuple[int, int], int] = {}
            for k, j in enumerate(big):
                if j in small_set:
                    continue
                crossings = sum(1 for a in small if a > j)
                sign = -1 if (k + crossings) % 2 else 1
                a = rank_n[tuple(sorted(small + (j,)))]
                b = rank_n[big[:k] + big[k + 1:]]
                key = (a, b) if a <= b else (b, a)
                agg[key] = agg.get(key, 0) + sign
            items = sorted((k, v) for k, v in agg.items() if v != 0)
            if not items:
                continue
            if items[0][1] < 0:
                items = [(k, -v) for k, v in items]
            sig = tuple(items)
            if sig in seen:
                continue
            seen.add(sig)
            for (a, b), c in items:
                left.append(a)
                right.append(b)
                coef.append(float(c))
                qid.append(count)
            count += 1
    return (
        np.array(left, dtype=np.intp),
        np.array(right, dtype=np.intp),
        np.array(coef, dtype=np.float64),
        np.array(qid, dtype=np.intp),
    )


def plucker_residual(psi: Multivector) -> float:
    """Sum of squared magnitudes of the distinct Pluecker quadrics.

    Zero exactly on decomposable multivectors (up to floating error); each
    quadric is degree 2 in the coefficients, so scaling the input by c
    scales the residual by abs(c)**4.
    """
    if psi.n < 1:
        raise ValueError("Pluecker residual needs grade >= 1")
    if psi.n == psi.m:
        return 0.0
    left, right, coef, qid = _plucker_table(psi.m, psi.n)
    if left.size == 0:
        return 0.0
    p = psi.coeffs
    values = np.zeros(int(qid[-1]) + 1, dtype=np.complex128)
    np.add.at(values, qid, coef * p[left] * p[right])
    return float(np.sum(np.abs(values) ** 2))


def is_decomposable(psi: Multivector, tol: float = DEFAULT_PLUCKER_TOL) -> DecompCheck:
    """Pluecker test (residual <= tol * norm**2), cross-checked by rank == n."""
    if psi.is_zero():
        raise ZeroMultivectorError("decomposability of the zero multivector is undefined")
    residual = plucker_residual(psi)
    rank = support_rank(psi).rank
    ok = residual <= tol * psi.norm() ** 2 and rank == psi.n
    return DecompCheck(decomposable=ok, residual=residual, support_rank=rank, tol=tol)


# ---------------------------------------------------------------------------
# Exact lengths for grade 2
# ---------------------------------------------------------------------------

def skew_matrix(psi: Multivector) -> np.ndarray:
    """The skew m x m coefficient matrix of a 2-vector."""
    if psi.n != 2:
        raise ValueError(f"skew matrix needs grade 2, got grade {psi.n}")
    a = np.zeros((psi.m, psi.m), dtype=np.complex128)
    for r, (i, j) in enumerate(subsets(psi.m, 2)):
        a[i - 1, j - 1] = psi.coeffs[r]
        a[j - 1, i - 1] = -psi.coeffs[r]
    return a


def _even_rank(singular_values: np.ndarray, tol: float) -> int:
    rank = numeric_rank(singular_values, tol)
    if rank % 2:
        raise ToleranceError(
            f"numeric rank {rank} of a skew matrix is odd; the threshold {tol} "
            "splits a singular-value pair"
        )
    return rank


def schmidt_length(psi: Multivector, tol: float = DEFAULT_RANK_TOL) -> tuple[int, list[DecompTerm]]:
    """Exact length of a 2-vector with explicit orthogonal-plane terms.

    The length is half the numeric rank of the skew coefficient matrix, so
    it never exceeds floor(m / 2). Terms are extracted one plane at a time:
    take the top singular pair of the remaining skew matrix, form the rank-2
    skew block it spans, and deflate. The returned terms reconstruct psi
    with relative residual at most tol.
    """
    a = skew_matrix(psi)
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0, []
    length = _even_rank(s, tol) // 2
    remaining = a.copy()
    terms: list[DecompTerm] = []
    for _ in range(length):
        _, s_k, vh_k = np.linalg.svd(remaining)
        sigma = s_k[0]
        x = vh_k[0].conj()
        u = remaining @ x / sigma
        first = sigma * u
        second = x.conj()
        terms.append(DecompTerm((first, second)))
        remaining = remaining - (np.outer(first, second) - np.outer(second, first))
    recon = sum(np.outer(t.factors[0], t.factors[1]) - np.outer(t.factors[1], t.factors[0]) for t in terms)
    rel = float(np.linalg.norm(a - recon) / np.linalg.norm(a))
    if rel > max(tol, 1e-12):
        raise ToleranceError(f"plane extraction left relative residual {rel:.3e} > {tol:.3e}")
    return length, terms


# ---------------------------------------------------------------------------
# Reports on disk
# ---------------------------------------------------------------------------

def terms_to_document(terms) -> dict:
    """JSON-ready document for a sum of decomposable terms.

    Each term is its n factor vectors; each vector is m [re, im] pairs.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("no terms to serialise")
    m, n = terms[0].m, terms[0].n
    out = []
    for t in terms:
        if (t.m, t.n) != (m, n):
            raise ValueError("terms live in different spaces")
        out.append([[[float(z.real), float(z.imag)] for z in v] for v in t.factors])
    return {"m": m, "n": n, "terms": out}
