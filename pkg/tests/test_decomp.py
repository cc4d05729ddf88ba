"""Support rank, Pluecker residuals, and exact 2-vector lengths."""

from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np
import pytest

from grasslen import (
    DecompTerm,
    Multivector,
    ToleranceError,
    ZeroMultivectorError,
    contract,
    hodge_dual,
    is_decomposable,
    plucker_residual,
    schmidt_length,
    support_rank,
    transform,
    wedge_vectors,
)
from grasslen.decomp import _even_rank, numeric_rank, skew_matrix, terms_to_document
from helpers import complex_gaussian, random_multivector, random_unitary, rel_err


# ---------------------------------------------------------------------------
# support_rank
# ---------------------------------------------------------------------------

def test_support_rank_decomposable():
    assert support_rank(Multivector.basis(6, (1, 2, 3))).rank == 3


def test_support_rank_shared_vector():
    psi = Multivector.basis(6, (1, 2)) + Multivector.basis(6, (1, 3))
    assert support_rank(psi).rank == 2  # equals e1 ^ (e2 + e3)


def test_support_rank_disjoint_sum_fills():
    psi = Multivector.basis(6, (1, 2, 3)) + Multivector.basis(6, (4, 5, 6))
    # oracle: double contractions recover all six basis directions
    recovered = []
    for pair in [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)]:
        v = contract(contract(psi, pair[1]), pair[0])
        recovered.append(v.coeffs)
    assert np.linalg.matrix_rank(np.array(recovered)) == 6
    assert support_rank(psi).rank == 6


def test_support_rank_zero_rejected():
    with pytest.raises(ZeroMultivectorError):
        support_rank(Multivector.zero(5, 2))


def test_support_rank_basis_spans_input():
    rng = np.random.default_rng(0)
    psi = Multivector.basis(7, (1, 2, 3)) + Multivector.basis(7, (1, 4, 5))
    report = support_rank(psi)
    assert report.rank == 5
    # psi reconstructs inside the wedge powers of the reported support
    basis_wedges = [
        wedge_vectors([report.support_basis[i] for i in idx]).coeffs
        for idx in combinations(range(report.rank), psi.n)
    ]
    stack = np.array(basis_wedges).T
    x, *_ = np.linalg.lstsq(stack, psi.coeffs, rcond=None)
    assert np.linalg.norm(stack @ x - psi.coeffs) < 1e-10 * psi.norm()


def test_support_rank_unitary_invariant():
    rng = np.random.default_rng(1)
    for _ in range(5):
        psi = random_multivector(6, 3, rng)
        u = random_unitary(6, rng)
        assert support_rank(transform(psi, u)).rank == support_rank(psi).rank


def test_support_rank_grade_one():
    v = Multivector(5, 1, np.array([1.0, 2.0, 0.0, 0.0, 1.0]))
    assert support_rank(v).rank == 1


# ---------------------------------------------------------------------------
# plucker_residual / is_decomposable
# ---------------------------------------------------------------------------

def test_plucker_zero_on_decomposables():
    rng = np.random.default_rng(2)
    for m, n in [(4, 2), (6, 3), (7, 3), (6, 4)]:
        w = wedge_vectors([complex_gaussian(rng, m) for _ in range(n)])
        w = w / w.norm()
        assert plucker_residual(w) < 1e-20


def test_plucker_classic_quadric_value():
    psi = Multivector.basis(4, (1, 2)) + Multivector.basis(4, (3, 4))
    # single independent quadric p12*p34 - p13*p24 + p14*p23 evaluates to 1
    assert abs(plucker_residual(psi) - 1.0) < 1e-14
    unit = psi / psi.norm()
    assert abs(plucker_residual(unit) - 0.25) < 1e-14


def test_plucker_scaling_degree_four():
    rng = np.random.default_rng(3)
    psi = random_multivector(6, 3, rng)
    base = plucker_residual(psi)
    for c in (2.0, 0.5j, 1.3 - 0.7j):
        scaled = plucker_residual(c * psi)
        assert abs(scaled - abs(c) ** 4 * base) < 1e-10 * abs(c) ** 4 * base


def test_plucker_trivial_grades():
    rng = np.random.default_rng(4)
    assert plucker_residual(random_multivector(5, 1, rng)) == 0.0
    assert plucker_residual(random_multivector(5, 5, rng)) == 0.0


def test_is_decomposable_examples():
    psi = Multivector.basis(4, (1, 2)) + Multivector.basis(4, (3, 4))
    check = is_decomposable(psi)
    assert not check.decomposable
    assert abs(check.residual - 1.0) < 1e-12
    assert check.support_rank == 4

    shared = Multivector.basis(6, (1, 2)) + Multivector.basis(6, (1, 3))
    assert is_decomposable(shared).decomposable

    rng = np.random.default_rng(5)
    w = wedge_vectors([complex_gaussian(rng, 7) for _ in range(3)])
    check = is_decomposable(w)
    assert check.decomposable
    assert check.residual < 1e-10
    assert check.support_rank == 3


def test_is_decomposable_zero_rejected():
    with pytest.raises(ZeroMultivectorError):
        is_decomposable(Multivector.zero(4, 2))


# ---------------------------------------------------------------------------
# schmidt_length
# ---------------------------------------------------------------------------

def test_skew_matrix_layout():
    psi = Multivector.basis(4, (1, 3))
    a = skew_matrix(psi)
    assert a[0, 2] == 1.0 and a[2, 0] == -1.0
    assert np.allclose(a, -a.T)
    with pytest.raises(ValueError):
        skew_matrix(Multivector.basis(4, (1, 2, 3)))


def test_schmidt_examples():
    length, terms = schmidt_length(Multivector.basis(6, (1, 2)))
    assert length == 1 and len(terms) == 1
    psi = Multivector.basis(6, (1, 2)) + Multivector.basis(6, (3, 4))
    length, terms = schmidt_length(psi)
    assert length == 2
    recon = sum(t.to_multivector().coeffs for t in terms)
    assert rel_err(recon, psi.coeffs) < 1e-12


def test_schmidt_generic_full_length():
    rng = np.random.default_rng(6)
    psi = random_multivector(6, 2, rng)
    length, terms = schmidt_length(psi)
    assert length == 3
    recon = sum(t.to_multivector().coeffs for t in terms)
    assert rel_err(recon, psi.coeffs) < 1e-10


def test_schmidt_length_bounded_and_scale_invariant():
    rng = np.random.default_rng(7)
    for m in range(2, 13):
        for _ in range(50):
            psi = random_multivector(m, 2, rng)
            length, _ = schmidt_length(psi)
            assert length == m // 2  # generic skew matrices have full even rank
            scaled, _ = schmidt_length(psi * (0.37 + 2.1j))
            assert scaled == length


def test_schmidt_planes_orthogonal():
    rng = np.random.default_rng(8)
    for _ in range(10):
        psi = random_multivector(8, 2, rng)
        _, terms = schmidt_length(psi)
        vecs = [f for t in terms for f in t.factors]
        scale = max(np.linalg.norm(v) for v in vecs) ** 2
        for i, a in enumerate(vecs):
            for b in vecs[i + 1:]:
                assert abs(np.vdot(a, b)) < 1e-8 * scale


def test_schmidt_low_rank_input():
    rng = np.random.default_rng(9)
    planted = wedge_vectors([complex_gaussian(rng, 8), complex_gaussian(rng, 8)])
    planted = planted + 3.0 * wedge_vectors([complex_gaussian(rng, 8), complex_gaussian(rng, 8)])
    length, terms = schmidt_length(planted)
    assert length == 2
    recon = sum(t.to_multivector().coeffs for t in terms)
    assert rel_err(recon, planted.coeffs) < 1e-10


def test_schmidt_zero_input():
    assert schmidt_length(Multivector.zero(6, 2)) == (0, [])


def test_schmidt_rejects_other_grades():
    with pytest.raises(ValueError):
        schmidt_length(Multivector.basis(6, (1, 2, 3)))


def test_schmidt_dual_of_two_vector():
    rng = np.random.default_rng(10)
    psi = random_multivector(4, 2, rng)
    length, _ = schmidt_length(psi)
    dual_length, _ = schmidt_length(hodge_dual(psi))
    assert length == dual_length == 2


# ---------------------------------------------------------------------------
# numeric-rank helpers
# ---------------------------------------------------------------------------

def test_numeric_rank_thresholding():
    s = np.array([1.0, 0.5, 1e-12])
    assert numeric_rank(s, 1e-8) == 2
    assert numeric_rank(np.array([0.0]), 1e-8) == 0


def test_even_rank_guard():
    assert _even_rank(np.array([1.0, 0.9, 1e-12, 1e-13]), 1e-8) == 2
    with pytest.raises(ToleranceError):
        _even_rank(np.array([1.0, 2e-8, 1e-12]), 1e-8)


# ---------------------------------------------------------------------------
# DecompTerm / documents
# ---------------------------------------------------------------------------

def test_decomp_term_validation():
    with pytest.raises(ValueError):
        DecompTerm((np.zeros(3), np.zeros(4)))
    with pytest.raises(ValueError):
        DecompTerm(())


def test_terms_document_shape():
    rng = np.random.default_rng(11)
    t = DecompTerm((complex_gaussian(rng, 4), complex_gaussian(rng, 4)))
    doc = terms_to_document([t])
    assert doc["m"] == 4 and doc["n"] == 2
    assert len(doc["terms"]) == 1
    assert len(doc["terms"][0]) == 2
    assert len(doc["terms"][0][0]) == 4
