"""Shared helpers for the test suite."""

from __future__ import annotations

from math import comb

import numpy as np

from grasslen import Multivector


def complex_gaussian(rng: np.random.Generator, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_multivector(m: int, n: int, rng: np.random.Generator) -> Multivector:
    return Multivector(m, n, complex_gaussian(rng, comb(m, n)))


def random_unitary(m: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(complex_gaussian(rng, (m, m)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def basis_vector(i: int, m: int) -> np.ndarray:
    v = np.zeros(m, dtype=complex)
    v[i - 1] = 1.0
    return v


def rel_err(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(np.linalg.norm(a), np.linalg.norm(b), 1e-300)
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)) / scale)
