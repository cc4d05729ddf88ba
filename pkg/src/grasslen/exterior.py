"""Dense exterior-algebra core over C^m.

A grade-n multivector is stored as a dense complex coefficient vector in the
lexicographic basis of sorted n-subsets of {1..m}: subset members are
1-based, basis ordinals are 0-based. All operations are pure functions of
their inputs; Multivector instances are immutable after construction and
safe to share between threads.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GrasslenError",
    "FormatError",
    "SizeCapError",
    "MAX_COEFFS",
    "Multivector",
    "subsets",
    "subset_rank",
    "subset_unrank",
    "wedge_vectors",
    "wedge",
    "contract",
    "hodge_dual",
    "wedge_slot_matrix",
    "exterior_power_matrix",
    "transform",
    "to_document",
    "from_document",
    "dumps",
    "loads",
    "save",
    "load",
]

# Dense-storage guard: C(m, n) coefficients are materialised as complex128.
MAX_COEFFS = 2_000_000


class GrasslenError(Exception):
    """Base class for errors raised by this package."""


class FormatError(GrasslenError, ValueError):
    """Malformed multivector document."""


class SizeCapError(GrasslenError, RuntimeError):
    """Request exceeds the dense desk-scale storage cap."""


# ---------------------------------------------------------------------------
# Subset indexing (lexicographic rank/unrank of sorted n-subsets of {1..m})
# ---------------------------------------------------------------------------

def _check_members(members: Sequence[int], m: int) -> None:
    prev = 0
    for s in members:
        if not isinstance(s, int) or isinstance(s, bool):
            raise ValueError(f"subset members must be integers, got {s!r}")
        if s <= prev:
            raise ValueError(f"subset members must be strictly increasing, got {tuple(members)}")
        prev = s
    if prev > m:
        raise ValueError(f"subset member {prev} out of range 1..{m}")


def subset_rank(members: Sequence[int], m: int) -> int:
    """Lexicographic ordinal (0-based) of a sorted subset of {1..m}."""
    _check_members(members, m)
    n = len(members)
    rank = 0
    prev = 0
    for i, s in enumerate(members, start=1):
        # hockey-stick sum of comb(m-c, n-i) over prev < c < s
        rank += comb(m - prev, n - i + 1) - comb(m - s + 1, n - i + 1)
        prev = s
    return rank


def subset_unrank(ordinal: int, m: int, n: int) -> tuple[int, ...]:
    """Inverse of subset_rank: the n-subset of {1..m} at a given ordinal."""
    total = comb(m, n)
    if not 0 <= ordinal < total:
        raise ValueError(f"ordinal {ordinal} out of range 0..{total - 1} for C({m},{n})")
    members = []
    r = ordinal
    c = 1
    for i in range(1, n + 1):
        block = comb(m - c, n - i)
        while r >= block:
            r -= block
            c += 1
            block = comb(m - c, n - i)
        members.append(c)
        c += 1
    return tuple(members)


@lru_cache(maxsize=None)
def subsets(m: int, n: int) -> tuple[tuple[int, ...], ...]:
    """All sorted n-subsets of {1..m} in lexicographic (ordinal) order."""
    return tuple(itertools.combinations(range(1, m + 1), n))


@lru_cache(maxsize=None)
def _rank_map(m: int, n: int) -> dict[tuple[int, ...], int]:
    return {s: i for i, s in enumerate(subsets(m, n))}


@lru_cache(maxsize=None)
def _subset_array(m: int, n: int) -> np.ndarray:
    # 0-based row indices, shape (C(m,n), n)
    arr = np.array(subsets(m, n), dtype=np.intp)
    return arr.reshape(comb(m, n), n) - 1


# ---------------------------------------------------------------------------
# Multivector
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Multivector:
    """A grade-n element of the n-th exterior power of C^m, stored densely.

    coeffs[r] is the coefficient of the basis wedge e_{i1} ^ ... ^ e_{in}
    where (i1 < ... < in) is the subset with lexicographic ordinal r. The
    field tag is "R" when every imaginary part is exactly zero, else "C".
    """

    m: int
    n: int
    coeffs: np.ndarray
    field_tag: str = field(init=False, default="C")

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or isinstance(self.m, bool) or self.m < 1:
            raise ValueError(f"ambient dimension must be a positive integer, got {self.m!r}")
        if not isinstance(self.n, int) or isinstance(self.n, bool) or not 0 <= self.n <= self.m:
            raise ValueError(f"grade must satisfy 0 <= n <= m, got n={self.n!r}, m={self.m}")
        size = comb(self.m, self.n)
        if size > MAX_COEFFS:
            raise SizeCapError(f"C({self.m},{self.n}) = {size} exceeds the dense cap {MAX_COEFFS}")
        arr = np.ascontiguousarray(self.coeffs, dtype=np.complex128)
        if arr.shape != (size,):
            raise ValueError(f"expected {size} coefficients for grade {self.n} in dimension {self.m}, got shape {arr.shape}")
        if arr is self.coeffs:
            arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "field_tag", "R" if not arr.imag.any() else "C")

    @classmethod
    def zero(cls, m: int, n: int) -> "Multivector":
        return cls(m, n, np.zeros(comb(m, n), dtype=np.complex128))

    @classmethod
    def basis(cls, m: int, members: Sequence[int]) -> "Multivector":
        """The unit basis wedge for one sorted subset of {1..m}."""
        members = tuple(members)
        c = np.zeros(comb(m, len(members)), dtype=np.complex128)
        c[subset_rank(members, m)] = 1.0
        return cls(m, len(members), c)

    @property
    def size(self) -> int:
        return self.coeffs.shape[0]

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return float(np.linalg.norm(self.coeffs))

    def coeff(self, members: Sequence[int]) -> complex:
        return complex(self.coeffs[subset_rank(tuple(members), self.m)])

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def _like(self, coeffs: np.ndarray) -> "Multivector":
        return Multivector(self.m, self.n, coeffs)

    def _check_same_space(self, other: "Multivector") -> None:
        if self.m != other.m or self.n != other.n:
            raise ValueError(
                f"mismatched spaces: (m={self.m}, n={self.n}) vs (m={other.m}, n={other.n})"
            )

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check_same_space(other)
        return self._like(self.coeffs + other.coeffs)

    def __sub__(self, other: "Multivector") -> "Multivector":
        self._check_same_space(other)
        return self._like(self.coeffs - other.coeffs)

    def __neg__(self) -> "Multivector":
        return self._like(-self.coeffs)

    def __mul__(self, scalar: complex) -> "Multivector":
        return self._like(self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "Multivector":
        return self._like(self.coeffs / complex(scalar))

    def __repr__(self) -> str:
        return f"Multivector(m={self.m}, n={self.n}, field={self.field_tag!r}, norm={self.norm():.6g})"


# ---------------------------------------------------------------------------
# Products and contractions
# ---------------------------------------------------------------------------

def _batched_det(mats: np.ndarray) -> np.ndarray:
    """Determinants over the leading axis; explicit formulas for k <= 3."""
    k = mats.shape[-1]
    if k == 0:
        return np.ones(mats.shape[:-2], dtype=np.complex128)
    if k == 1:
        return mats[..., 0, 0].copy()
    if k == 2:
        return mats[..., 0, 0] * mats[..., 1, 1] - mats[..., 0, 1] * mats[..., 1, 0]
    if k == 3:
        a, b, c = mats[..., 0, 0], mats[..., 0, 1], mats[..., 0, 2]
        d, e, f = mats[..., 1, 0], mats[..., 1, 1], mats[..., 1, 2]
        g, h, i = mats[..., 2, 0], mats[..., 2, 1], mats[..., 2, 2]
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    return np.linalg.det(mats)


def wedge_vectors(vectors: Sequence[np.ndarray]) -> Multivector:
    """Wedge a list of k vectors of C^m into a grade-k multivector.

    The coefficient on a subset I is the k x k determinant of rows I of the
    matrix whose columns are the input vectors, so the result is multilinear
    and alternating in the inputs.
    """
    if len(vectors) == 0:
        raise ValueError("need at least one vector")
    cols = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in vectors]
    m = cols[0].shape[0]
    for v in cols[1:]:
        if v.shape[0] != m:
            raise ValueError(f"mismatched vector lengths: {v.shape[0]} vs {m}")
    k = len(cols)
    if k > m:
        raise ValueError(f"cannot wedge {k} vectors in dimension {m}")
    f = np.column_stack(cols)
    mats = f[_subset_array(m, k), :]  # (C(m,k), k, k)
    return Multivector(m, k, _batched_det(mats))


@lru_cache(maxsize=None)
def _wedge_table(m: int, p: int, q: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Index/sign tables for the bilinear wedge of grades p and q in C^m."""
    out_rank = _rank_map(m, p + q)
    ia, ib, io, sg = [], [], [], []
    subs_q = subsets(m, q)
    for ra, left in enumerate(subsets(m, p)):
        left_set = frozenset(left)
        for rb, right in enumerate(subs_q):
            if left_set.intersection(right):
                continue
            inversions = sum(1 for a in left for b in right if a > b)
            ia.append(ra)
            ib.append(rb)
            io.append(out_rank[tuple(sorted(left + right))])
            sg.append(-1.0 if inversions % 2 else 1.0)
    return (
        np.array(ia, dtype=np.intp),
        np.array(ib, dtype=np.intp),
        np.array(io, dtype=np.intp),
        np.array(sg, dtype=np.float64),
    )


def wedge(a: Multivector, b: Multivector) -> Multivector:
    """Wedge product of two multivectors (bilinear, associative)."""
    if a.m != b.m:
        raise ValueError(f"mismatched ambient dimensions: {a.m} vs {b.m}")
    if a.n + b.n > a.m:
        raise ValueError(f"grade overflow: {a.n} + {b.n} > {a.m}")
    ia, ib, io, sg = _wedge_table(a.m, a.n, b.n)
    out = np.zeros(comb(a.m, a.n + b.n), dtype=np.complex128)
    np.add.at(out, io, sg * a.coeffs[ia] * b.coeffs[ib])
    return Multivector(a.m, a.n + b.n, out)


def contract(psi: Multivector, j: int) -> Multivector:
    """Interior product of psi by the j-th dual basis covector.

    The coefficient on an (n-1)-subset J is +/- the coefficient of J union
    {j}; the sign is (-1)**(0-based position of j within the sorted union).
    """
    if psi.n == 0:
        raise ValueError("cannot contract a grade-0 multivector")
    if not 1 <= j <= psi.m:
        raise ValueError(f"covector index {j} out of range 1..{psi.m}")
    out = np.zeros(comb(psi.m, psi.n - 1), dtype=np.complex128)
    target = _rank_map(psi.m, psi.n - 1)
    for r, members in enumerate(subsets(psi.m, psi.n)):
        if j not in members:
            continue
        pos = members.index(j)
        rest = members[:pos] + members[pos + 1:]
        sign = -1.0 if pos % 2 else 1.0
        out[target[rest]] += sign * psi.coeffs[r]
    return Multivector(psi.m, psi.n - 1, out)


@lru_cache(maxsize=None)
def _hodge_table(m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Complement-subset permutation and shuffle signs for the duality map."""
    target = _rank_map(m, m - n)
    perm = np.empty(comb(m, n), dtype=np.intp)
    signs = np.empty(comb(m, n), dtype=np.float64)
    full = set(range(1, m + 1))
    for r, members in enumerate(subsets(m, n)):
        complement = tuple(sorted(full.difference(members)))
        # parity of the permutation (members, complement) of (1..m)
        inversions = sum(a - 1 - idx for idx, a in enumerate(members))
        perm[r] = target[complement]
        signs[r] = -1.0 if inversions % 2 else 1.0
    return perm, signs


def hodge_dual(psi: Multivector) -> Multivector:
    """Duality map to grade m-n: coefficient of I goes to its complement.

    The sign on each subset is the shuffle parity of (I, complement of I)
    as a permutation of (1..m); no complex conjugation is applied. Applying
    the map twice gives (-1)**(n*(m-n)) times the identity, and the
    Euclidean coefficient norm is preserved.
    """
    perm, signs = _hodge_table(psi.m, psi.n)
    out = np.zeros(comb(psi.m, psi.m - psi.n), dtype=np.complex128)
    out[perm] = signs * psi.coeffs
    return Multivector(psi.m, psi.m - psi.n, out)


# ---------------------------------------------------------------------------
# Slot matrices and induced linear maps
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _slot_tables(m: int, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Scatter tables mapping (n-1)-subset minors into slot-matrix entries.

    For every n-subset I and position pos within it, row I and column
    I[pos] of a slot matrix receive the minor indexed by I minus its pos-th
    member, with sign (-1)**pos.
    """
    minor_rank = _rank_map(m, n - 1)
    rows, cols, minors, signs = [], [], [], []
    for r, members in enumerate(subsets(m, n)):
        for pos, i in enumerate(members):
            rest = members[:pos] + members[pos + 1:]
            rows.append(r)
            cols.append(i - 1)
            minors.append(minor_rank[rest])
            signs.append(-1.0 if pos % 2 else 1.0)
    return (
        np.array(rows, dtype=np.intp),
        np.array(cols, dtype=np.intp),
        np.array(minors, dtype=np.intp),
        np.array(signs, dtype=np.float64),
    )


def wedge_slot_matrix(factors: np.ndarray, slot: int) -> np.ndarray:
    """Matrix of v |-> f_0 ^ ... ^ v (at `slot`) ^ ... ^ f_{n-1}.

    `factors` is an (m, n) matrix whose columns are the wedge factors; the
    result has shape (C(m, n), m) and its column i is the coefficient vector
    of the wedge with slot `slot` replaced by the i-th basis vector.
    """
    f = np.asarray(factors, dtype=np.complex128)
    m, n = f.shape
    if not 0 <= slot < n:
        raise ValueError(f"slot {slot} out of range for {n} factors")
    if n == 1:
        return np.eye(m, dtype=np.complex128)
    sub = np.delete(f, slot, axis=1)
    minors = _batched_det(sub[_subset_array(m, n - 1), :])
    rows, cols, minor_idx, signs = _slot_tables(m, n)
    out = np.zeros((comb(m, n), m), dtype=np.complex128)
    out[rows, cols] = signs * minors[minor_idx]
    if slot % 2:
        out = -out
    return out


def exterior_power_matrix(a: np.ndarray, n: int) -> np.ndarray:
    """The induced matrix of a linear map on the grade-n exterior power.

    Entry (I, J) is the n x n determinant of the submatrix of `a` with rows
    I and columns J.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    m = a.shape[0]
    idx = _subset_array(m, n)
    blocks = a[idx[:, None, :, None], idx[None, :, None, :]]  # (C, C, n, n)
    return _batched_det(blocks)


def transform(psi: Multivector, a: np.ndarray) -> Multivector:
    """Apply a linear map of C^m to a multivector through its exterior power."""
    mat = exterior_power_matrix(a, psi.n)
    if mat.shape[0] != psi.size:
        raise ValueError("matrix dimension does not match the multivector's ambient space")
    return Multivector(psi.m, psi.n, mat @ psi.coeffs)


# ---------------------------------------------------------------------------
# Document format
# ---------------------------------------------------------------------------
#
# UTF-8 JSON object:
#   {"m": int, "n": int, "field": "C"|"R",
#    "terms": [[sorted indices], re, im], ...]}
# Omitted subsets are zero; duplicate index arrays are an error.

def to_document(psi: Multivector) -> dict:
    """JSON-ready document for a multivector (nonzero terms only)."""
    terms = []
    for r, members in enumerate(subsets(psi.m, psi.n)):
        c = psi.coeffs[r]
        if c == 0:
            continue
        terms.append([list(members), float(c.real), float(c.imag)])
    return {"m": psi.m, "n": psi.n, "field": psi.field_tag, "terms": terms}


def _as_int(value, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise FormatError(f"{what} must be an integer, got {value!r}")
    return value


def _as_real(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"{what} must be a number, got {value!r}")
    out = float(value)
    if not np.isfinite(out):
        raise FormatError(f"{what} must be finite, got {value!r}")
    return out


def from_document(doc) -> Multivector:
    """Validate and build a multivector from a parsed JSON document."""
    if not isinstance(doc, dict):
        raise FormatError(f"document must be an object, got {type(doc).__name__}")
    for key in ("m", "n", "field", "terms"):
        if key not in doc:
            raise FormatError(f"missing required key {key!r}")
    m = _as_int(doc["m"], "m")
    n = _as_int(doc["n"], "n")
    if m < 1:
        raise FormatError(f"m must be positive, got {m}")
    if not 0 <= n <= m:
        raise FormatError(f"n must satisfy 0 <= n <= m, got n={n}, m={m}")
    if comb(m, n) > MAX_COEFFS:
        raise SizeCapError(f"C({m},{n}) = {comb(m, n)} exceeds the dense cap {MAX_COEFFS}")
    tag = doc["field"]
    if tag not in ("C", "R"):
        raise FormatError(f"field must be 'C' or 'R', got {tag!r}")
    raw_terms = doc["terms"]
    if not isinstance(raw_terms, list):
        raise FormatError("terms must be an array")
    coeffs = np.zeros(comb(m, n), dtype=np.complex128)
    seen: set[tuple[int, ...]] = set()
    for entry in raw_terms:
        if not isinstance(entry, list) or len(entry) != 3:
            raise FormatError(f"each term must be [indices, re, im], got {entry!r}")
        raw_idx, re, im = entry
        if not isinstance(raw_idx, list) or len(raw_idx) != n:
            raise FormatError(f"term indices must be an array of {n} integers, got {raw_idx!r}")
        members = tuple(_as_int(i, "index") for i in raw_idx)
        try:
            rank = subset_rank(members, m)
        except ValueError as exc:
            raise FormatError(str(exc)) from None
        if members in seen:
            raise FormatError(f"duplicate index set {list(members)}")
        seen.add(members)
        re_f = _as_real(re, "re")
        im_f = _as_real(im, "im")
        if tag == "R" and im_f != 0.0:
            raise FormatError(f"field 'R' document has nonzero imaginary part on {list(members)}")
        coeffs[rank] = complex(re_f, im_f)
    return Multivector(m, n, coeffs)


def dumps(psi: Multivector) -> str:
    return json.dumps(to_document(psi))


def loads(text: str) -> Multivector:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return from_document(doc)


def save(psi: Multivector, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(psi))
        fh.write("\n")


def load(path) -> Multivector:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())
