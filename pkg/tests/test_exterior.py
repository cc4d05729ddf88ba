"""Core algebra: subset indexing, wedge, contraction, duality, file format."""

from __future__ import annotations

from math import comb

import numpy as np
import pytest

from grasslen import (
    FormatError,
    Multivector,
    SizeCapError,
    contract,
    dumps,
    exterior_power_matrix,
    hodge_dual,
    load,
    loads,
    save,
    subset_rank,
    subset_unrank,
    transform,
    wedge,
    wedge_slot_matrix,
    wedge_vectors,
)
from helpers import basis_vector, complex_gaussian, random_multivector, random_unitary, rel_err


# ---------------------------------------------------------------------------
# Subset indexing
# ---------------------------------------------------------------------------

def test_subset_rank_lex_examples():
    assert subset_rank((1, 2, 3), 6) == 0
    assert subset_rank((4, 5, 6), 6) == comb(6, 3) - 1 == 19
    assert subset_rank((1, 2, 4), 6) == 1


def test_subset_rank_rejects_bad_members():
    with pytest.raises(ValueError):
        subset_rank((2, 1), 4)
    with pytest.raises(ValueError):
        subset_rank((1, 1), 4)
    with pytest.raises(ValueError):
        subset_rank((1, 5), 4)
    with pytest.raises(ValueError):
        subset_rank((0, 1), 4)


def test_subset_rank_unrank_bijection_full_range():
    for m in range(0, 17):
        for n in range(0, m + 1):
            for ordinal in range(comb(m, n)):
                members = subset_unrank(ordinal, m, n)
                assert subset_rank(members, m) == ordinal


def test_subset_unrank_range_check():
    with pytest.raises(ValueError):
        subset_unrank(comb(6, 3), 6, 3)
    with pytest.raises(ValueError):
        subset_unrank(-1, 6, 3)


# ---------------------------------------------------------------------------
# Multivector basics
# ---------------------------------------------------------------------------

def test_multivector_validation():
    with pytest.raises(ValueError):
        Multivector(4, 2, np.zeros(5))  # wrong length
    with pytest.raises(ValueError):
        Multivector(4, 5, np.zeros(1))  # n > m
    with pytest.raises(ValueError):
        Multivector(0, 0, np.zeros(1))
    with pytest.raises(SizeCapError):
        Multivector(64, 32, np.zeros(1))


def test_multivector_immutable_and_field_tag():
    psi = Multivector(4, 2, np.arange(6, dtype=float))
    assert psi.field_tag == "R"
    with pytest.raises(ValueError):
        psi.coeffs[0] = 5.0
    assert Multivector(4, 2, np.arange(6) * (1 + 1j)).field_tag == "C"


def test_multivector_arithmetic():
    rng = np.random.default_rng(0)
    a = random_multivector(5, 2, rng)
    b = random_multivector(5, 2, rng)
    assert np.allclose((a + b).coeffs, a.coeffs + b.coeffs)
    assert np.allclose((a - b).coeffs, a.coeffs - b.coeffs)
    assert np.allclose((2j * a).coeffs, 2j * a.coeffs)
    assert np.allclose((a / 2).coeffs, a.coeffs / 2)
    with pytest.raises(ValueError):
        a + random_multivector(5, 3, rng)


# ---------------------------------------------------------------------------
# wedge_vectors
# ---------------------------------------------------------------------------

def test_wedge_vectors_basis_pair():
    w = wedge_vectors([basis_vector(1, 4), basis_vector(2, 4)])
    expected = np.zeros(6, dtype=complex)
    expected[subset_rank((1, 2), 4)] = 1.0
    assert np.array_equal(w.coeffs, expected)


def test_wedge_vectors_antisymmetry_and_alternation():
    w = wedge_vectors([basis_vector(2, 4), basis_vector(1, 4)])
    assert w.coeff((1, 2)) == -1.0
    v = basis_vector(1, 4) + basis_vector(2, 4)
    assert wedge_vectors([v, v]).norm() == 0.0


def test_wedge_vectors_random_antisymmetry():
    rng = np.random.default_rng(1)
    for _ in range(25):
        u, v = complex_gaussian(rng, 6), complex_gaussian(rng, 6)
        ab = wedge_vectors([u, v])
        ba = wedge_vectors([v, u])
        assert rel_err(ab.coeffs, -ba.coeffs) < 1e-14
        assert wedge_vectors([u, u]).norm() < 1e-14 * np.linalg.norm(u) ** 2


def test_wedge_vectors_errors():
    with pytest.raises(ValueError):
        wedge_vectors([np.zeros(3), np.zeros(4)])
    with pytest.raises(ValueError):
        wedge_vectors([np.zeros(2)] * 3)
    with pytest.raises(ValueError):
        wedge_vectors([])


def test_wedge_vectors_determinant_definition():
    rng = np.random.default_rng(2)
    vs = [complex_gaussian(rng, 5) for _ in range(3)]
    w = wedge_vectors(vs)
    f = np.column_stack(vs)
    for members in ((1, 2, 3), (1, 3, 5), (2, 4, 5)):
        idx = [i - 1 for i in members]
        assert abs(w.coeff(members) - np.linalg.det(f[idx, :])) < 1e-12


# ---------------------------------------------------------------------------
# wedge
# ---------------------------------------------------------------------------

def test_wedge_basis_examples():
    e1 = Multivector.basis(6, (1,))
    e23 = Multivector.basis(6, (2, 3))
    assert wedge(e1, e23).coeff((1, 2, 3)) == 1.0
    e12 = Multivector.basis(6, (1, 2))
    e13 = Multivector.basis(6, (1, 3))
    assert wedge(e12, e13).norm() == 0.0
    e34 = Multivector.basis(6, (3, 4))
    assert np.array_equal(wedge(e12, e34).coeffs, wedge(e34, e12).coeffs)


def test_wedge_grade_overflow():
    a = Multivector.basis(4, (1, 2))
    b = Multivector.basis(4, (3, 4))
    with pytest.raises(ValueError):
        wedge(wedge(a, b), a)
    with pytest.raises(ValueError):
        wedge(a, Multivector.basis(5, (1, 2)))


def test_wedge_matches_wedge_vectors_on_decomposables():
    rng = np.random.default_rng(3)
    for _ in range(10):
        u, v, w = (complex_gaussian(rng, 6) for _ in range(3))
        lhs = wedge(wedge_vectors([u]), wedge_vectors([v, w]))
        rhs = wedge_vectors([u, v, w])
        assert rel_err(lhs.coeffs, rhs.coeffs) < 1e-13


def test_wedge_associative_bilinear():
    rng = np.random.default_rng(4)
    m = 7
    for _ in range(20):
        a = random_multivector(m, 2, rng)
        b = random_multivector(m, 2, rng)
        c = random_multivector(m, 3, rng)
        left = wedge(wedge(a, b), c)
        right = wedge(a, wedge(b, c))
        assert rel_err(left.coeffs, right.coeffs) < 1e-12
        s, t = complex(rng.standard_normal() + 1j * rng.standard_normal()), 1.7
        lin = wedge(s * a + t * b, c)
        assert rel_err(lin.coeffs, (s * wedge(a, c) + t * wedge(b, c)).coeffs) < 1e-12


def test_wedge_scalar_grades():
    one = Multivector(4, 0, np.array([2.0 + 1j]))
    a = Multivector.basis(4, (1, 3))
    assert np.allclose(wedge(one, a).coeffs, 2 * a.coeffs + 1j * a.coeffs)
    assert np.allclose(wedge(a, one).coeffs, wedge(one, a).coeffs)


# ---------------------------------------------------------------------------
# contract
# ---------------------------------------------------------------------------

def test_contract_examples():
    e12 = Multivector.basis(4, (1, 2))
    assert contract(e12, 1).coeff((2,)) == 1.0
    assert contract(e12, 2).coeff((1,)) == -1.0
    assert contract(e12, 3).norm() == 0.0


def test_contract_errors():
    scalar = Multivector(4, 0, np.array([1.0]))
    with pytest.raises(ValueError):
        contract(scalar, 1)
    with pytest.raises(ValueError):
        contract(Multivector.basis(4, (1, 2)), 5)


def test_contract_antiderivation():
    rng = np.random.default_rng(5)
    m = 6
    for _ in range(20):
        a = random_multivector(m, 2, rng)
        b = random_multivector(m, 3, rng)
        j = int(rng.integers(1, m + 1))
        lhs = contract(wedge(a, b), j)
        rhs = wedge(contract(a, j), b) + wedge(a, contract(b, j))  # grade of a is even
        assert rel_err(lhs.coeffs, rhs.coeffs) < 1e-12
        a1 = random_multivector(m, 1, rng)
        lhs = contract(wedge(a1, b), j)
        rhs = wedge(contract(a1, j), b) - wedge(a1, contract(b, j))
        assert rel_err(lhs.coeffs, rhs.coeffs) < 1e-12


# ---------------------------------------------------------------------------
# hodge_dual
# ---------------------------------------------------------------------------

def test_hodge_examples():
    assert hodge_dual(Multivector.basis(4, (1, 2))).coeff((3, 4)) == 1.0
    assert hodge_dual(Multivector.basis(4, (1, 3))).coeff((2, 4)) == -1.0
    dd = hodge_dual(hodge_dual(Multivector.basis(4, (1, 2))))
    assert dd.coeff((1, 2)) == 1.0


def test_hodge_involution_sign_and_norm():
    rng = np.random.default_rng(6)
    for m, n in [(4, 2), (5, 2), (6, 3), (7, 3), (7, 4), (8, 3)]:
        psi = random_multivector(m, n, rng)
        dd = hodge_dual(hodge_dual(psi))
        sign = (-1) ** (n * (m - n))
        assert np.array_equal(dd.coeffs, sign * psi.coeffs)
        assert abs(hodge_dual(psi).norm() - psi.norm()) < 1e-12 * psi.norm()


# ---------------------------------------------------------------------------
# slot matrices and induced maps
# ---------------------------------------------------------------------------

def test_wedge_slot_matrix_columns():
    rng = np.random.default_rng(7)
    m, n = 6, 3
    f = complex_gaussian(rng, (m, n))
    for slot in range(n):
        mat = wedge_slot_matrix(f, slot)
        for i in range(1, m + 1):
            vecs = [f[:, k] for k in range(n)]
            vecs[slot] = basis_vector(i, m)
            assert rel_err(mat[:, i - 1], wedge_vectors(vecs).coeffs) < 1e-12


def test_wedge_slot_matrix_reproduces_term():
    rng = np.random.default_rng(8)
    f = complex_gaussian(rng, (5, 2))
    mat = wedge_slot_matrix(f, 1)
    assert rel_err(mat @ f[:, 1], wedge_vectors([f[:, 0], f[:, 1]]).coeffs) < 1e-13


def test_exterior_power_matrix_functorial():
    rng = np.random.default_rng(9)
    m, n = 5, 2
    a = complex_gaussian(rng, (m, m))
    vs = [complex_gaussian(rng, m) for _ in range(n)]
    lhs = transform(wedge_vectors(vs), a)
    rhs = wedge_vectors([a @ v for v in vs])
    assert rel_err(lhs.coeffs, rhs.coeffs) < 1e-12
    u = random_unitary(m, rng)
    psi = random_multivector(m, n, rng)
    assert abs(transform(psi, u).norm() - psi.norm()) < 1e-10


# ---------------------------------------------------------------------------
# Document format
# ---------------------------------------------------------------------------

def test_document_example():
    doc = loads('{"m": 4, "n": 2, "field": "C", "terms": [[[1, 2], 1.0, 0.0]]}')
    assert doc.coeff((1, 2)) == 1.0
    assert doc.norm() == 1.0


def test_round_trip_random(tmp_path):
    rng = np.random.default_rng(10)
    for m, n in [(4, 2), (6, 3), (5, 0), (5, 5)]:
        psi = random_multivector(m, n, rng)
        again = loads(dumps(psi))
        assert again.m == psi.m and again.n == psi.n
        assert np.array_equal(again.coeffs, psi.coeffs)
    real = Multivector(4, 2, np.arange(6, dtype=float))
    path = tmp_path / "psi.json"
    save(real, path)
    back = load(path)
    assert back.field_tag == "R"
    assert np.array_equal(back.coeffs, real.coeffs)


@pytest.mark.parametrize(
    "text",
    [
        "not json at all",
        '{"m": 4, "n": 2, "terms": []}',  # missing field
        '{"m": 4, "n": 2, "field": "Q", "terms": []}',
        '{"m": 4, "n": 2, "field": "C", "terms": [[[2, 1], 1.0, 0.0]]}',  # unsorted
        '{"m": 4, "n": 2, "field": "C", "terms": [[[1, 1], 1.0, 0.0]]}',  # repeated
        '{"m": 4, "n": 2, "field": "C", "terms": [[[1, 5], 1.0, 0.0]]}',  # out of range
        '{"m": 4, "n": 2, "field": "C", "terms": [[[1, 2], 1.0, 0.0], [[1, 2], 2.0, 0.0]]}',
        '{"m": 4, "n": 2, "field": "C", "terms": [[[1, 2], 1.0]]}',  # short entry
        '{"m": 4, "n": 2, "field": "C", "terms": [[[1, 2], "x", 0.0]]}',
        '{"m": 4, "n": 2, "field": "R", "terms": [[[1, 2], 1.0, 0.5]]}',  # R with imag
        '{"m": 4, "n": 7, "field": "C", "terms": []}',  # n > m
        '{"m": 4.5, "n": 2, "field": "C", "terms": []}',
    ],
)
def test_parse_errors(text):
    with pytest.raises(FormatError):
        loads(text)


def test_parse_size_cap():
    with pytest.raises(SizeCapError):
        loads('{"m": 64, "n": 32, "field": "C", "terms": []}')
