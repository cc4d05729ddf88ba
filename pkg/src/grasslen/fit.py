"""Numerical length estimation by alternating least squares.

A length-l model is a sum of l decomposable terms; the model is linear in
any single factor vector with the others frozen, so cycling over factor
slots and solving each exact least-squares subproblem drives the residual
monotonically down. The smallest l whose best fit reaches the residual
tolerance is an upper-bound estimate of the numerical length at that
tolerance: local minima can overestimate, and border effects can push the
residual toward zero with diverging factor norms without an exact
decomposition existing (reported via the `diverged` flag).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .decomp import DecompTerm, ZeroMultivectorError
from .defaults import DEFAULT_SEED
from .exterior import Multivector, wedge_slot_matrix

__all__ = [
    "FitOptions",
    "FitReport",
    "EstimateReport",
    "random_decomposable",
    "planted_sum",
    "als_fit",
    "estimate_length",
]

log = logging.getLogger(__name__)

_LSTSQ_RCOND = 1e-10


@dataclass(frozen=True)
class FitOptions:
    """Knobs for the alternating fit; defaults suit desk-scale problems.

    `divergence_scale` is the factor-norm multiple of the input scale above
    which a restart is flagged as border-style divergence; factor norms are
    rebalanced every sweep, so a term of magnitude T carries factors of
    norm about T**(1/n). With `stop_at_tol` (the default) the restart loop
    ends at the first restart reaching `residual_tol`: every sub-tolerance
    restart counts as a success, and taking the first keeps the outcome
    deterministic (lowest restart index wins).
    """

    restarts: int = 20
    max_sweeps: int = 500
    residual_tol: float = 1e-8
    stall_tol: float = 1e-10
    seed: int = DEFAULT_SEED
    divergence_scale: float = 1e6
    stop_at_tol: bool = True

    def __post_init__(self) -> None:
        if self.restarts < 1 or self.max_sweeps < 1:
            raise ValueError("restarts and max_sweeps must be positive")
        if not 0.0 < self.residual_tol < 1.0:
            raise ValueError("residual_tol must lie in (0, 1)")
        if self.stall_tol <= 0.0 or self.divergence_scale <= 0.0:
            raise ValueError("stall_tol and divergence_scale must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


@dataclass(frozen=True)
class FitReport:
    """Best restart of a length-l fit.

    `best_residual` is relative: norm(psi - sum of terms) / norm(psi).
    `slot_residuals` traces the residual after every slot update of the
    winning restart (nonincreasing up to roundoff).
    """

    l: int
    best_residual: float
    terms: tuple[DecompTerm, ...]
    sweeps_used: int
    restart_index: int
    diverged: bool
    max_factor_norm: float
    slot_residuals: tuple[float, ...]


@dataclass(frozen=True)
class EstimateReport:
    """Outcome of scanning l = 1..l_max; l_est is None when no l reached tol."""

    l_est: int | None
    reports: tuple[FitReport, ...]

    @property
    def exceeded(self) -> bool:
        return self.l_est is None


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def _wedge_columns(factors: np.ndarray) -> np.ndarray:
    """Coefficient vector of the wedge of the columns of an (m, n) matrix."""
    from .exterior import _batched_det, _subset_array

    m, n = factors.shape
    return _batched_det(factors[_subset_array(m, n), :])


def random_decomposable(m: int, n: int, seed=DEFAULT_SEED) -> tuple[DecompTerm, Multivector]:
    """A random decomposable grade-n multivector and its factor term.

    Factors are i.i.d. standard complex Gaussian vectors; a fresh sample is
    drawn in the measure-zero event that the wedge is numerically zero.
    """
    if not 1 <= n <= m:
        raise ValueError(f"need 1 <= n <= m, got n={n}, m={m}")
    rng = _as_rng(seed)
    while True:
        factors = _complex_gaussian(rng, (m, n))
        coeffs = _wedge_columns(factors)
        if np.linalg.norm(coeffs) > 1e-6:
            break
    term = DecompTerm(tuple(factors[:, k] for k in range(n)))
    return term, Multivector(m, n, coeffs)


def planted_sum(m: int, n: int, l: int, seed=DEFAULT_SEED) -> tuple[Multivector, list[DecompTerm]]:
    """Sum of l independent random decomposables, with the ground-truth terms."""
    if l < 1:
        raise ValueError(f"need l >= 1, got {l}")
    rng = _as_rng(seed)
    terms = []
    total = Multivector.zero(m, n)
    for _ in range(l):
        term, psi = random_decomposable(m, n, rng)
        terms.append(term)
        total = total + psi
    return total, terms


def _balance(factors: np.ndarray) -> np.ndarray:
    """Rescale the columns to equal norms without changing their wedge."""
    norms = np.linalg.norm(factors, axis=0)
    if np.any(norms == 0.0):
        return factors
    target = float(np.exp(np.mean(np.log(norms))))
    return factors * (target / norms)


def _sweep(target, factors, terms, residual_vec, trace):
    """One full cycle of exact per-slot least-squares updates (in place)."""
    l = len(factors)
    n = factors[0].shape[1]
    for j in range(l):
        for k in range(n):
            excluded = residual_vec + terms[j]
            slot = wedge_slot_matrix(factors[j], k)
            x, *_ = np.linalg.lstsq(slot, excluded, rcond=_LSTSQ_RCOND)
            factors[j][:, k] = x
            terms[j] = slot @ x
            residual_vec = excluded - terms[j]
            trace.append(float(np.linalg.norm(residual_vec)))
    return residual_vec


def _greedy_single(target: np.ndarray, m: int, n: int, rng: np.random.Generator, sweeps: int = 120) -> np.ndarray:
    """Quick single-term fit used to seed one term of a greedy restart."""
    factors = _complex_gaussian(rng, (m, n))
    term = _wedge_columns(factors)
    residual_vec = target - term
    previous = float(np.linalg.norm(residual_vec))
    for _ in range(sweeps):
        residual_vec = _sweep(target, [factors], [term], residual_vec, [])
        term = _wedge_columns(factors)
        residual_vec = target - term
        current = float(np.linalg.norm(residual_vec))
        if previous - current < 1e-12 * max(previous, 1e-300):
            break
        previous = current
    return factors


def _initial_factors(target, m, n, l, rng, greedy: bool) -> list[np.ndarray]:
    """Random Gaussian factors, or greedy one-term-at-a-time deflation.

    Greedy restarts fit a single term to the running remainder and subtract
    it; they land in the basin of an exact decomposition far more often
    than fully random starts, while random restarts keep the search from
    being systematically biased.
    """
    if not greedy:
        return [_complex_gaussian(rng, (m, n)) for _ in range(l)]
    factors = []
    remainder = target.copy()
    for _ in range(l):
        f = _greedy_single(remainder, m, n, rng)
        factors.append(f)
        remainder = remainder - _wedge_columns(f)
    return factors


def _single_restart(
    target: np.ndarray,
    m: int,
    n: int,
    l: int,
    opts: FitOptions,
    rng: np.random.Generator,
    greedy: bool,
):
    """Run one ALS restart against a unit-norm target coefficient vector.

    After each sweep an extrapolation step along the sweep direction is
    tried (step lengths 1 and 3) and kept only when it lowers the
    objective, which breaks the slow near-parallel-terms regime without
    ever violating monotonicity.

    Returns (residual, factor matrices, sweeps, diverged, max_factor_norm,
    slot trace), or None when the iteration produced non-finite values.
    """
    factors = _initial_factors(target, m, n, l, rng, greedy)
    terms = [_wedge_columns(f) for f in factors]
    residual_vec = target - np.sum(terms, axis=0)
    residual = float(np.linalg.norm(residual_vec))
    trace: list[float] = []
    diverged = False
    max_factor_norm = max(float(np.linalg.norm(f, axis=0).max()) for f in factors)
    previous_factors = None
    sweeps = 0
    for sweep in range(1, opts.max_sweeps + 1):
        sweeps = sweep
        snapshot = [f.copy() for f in factors]
        residual_vec = _sweep(target, factors, terms, residual_vec, trace)
        # refresh from scratch to stop drift from incremental updates
        terms = [_wedge_columns(f) for f in factors]
        residual_vec = target - np.sum(terms, axis=0)
        previous = residual
        residual = float(np.linalg.norm(residual_vec))
        if not np.isfinite(residual):
            return None
        if previous_factors is not None:
            for beta in (1.0, 3.0):
                candidate = [f + beta * (f - pf) for f, pf in zip(factors, previous_factors)]
                cand_terms = [_wedge_columns(f) for f in candidate]
                cand_vec = target - np.sum(cand_terms, axis=0)
                cand_res = float(np.linalg.norm(cand_vec))
                if np.isfinite(cand_res) and cand_res < residual:
                    factors, terms, residual_vec, residual = candidate, cand_terms, cand_vec, cand_res
                else:
                    break
        previous_factors = snapshot
        factors = [_balance(f) for f in factors]
        max_factor_norm = max(
            max_factor_norm,
            max(float(np.linalg.norm(f, axis=0).max()) for f in factors),
        )
        if max_factor_norm > opts.divergence_scale:
            diverged = True
        if residual <= opts.residual_tol:
            break
        if previous - residual < opts.stall_tol * max(previous, 1e-300):
            break
    return residual, factors, sweeps, diverged, max_factor_norm, trace


def als_fit(psi: Multivector, l: int, opts: FitOptions = FitOptions()) -> FitReport:
    """Best alternating-least-squares fit of psi by a sum of l decomposables.

    The input is normalised internally, so the relative residual is exactly
    invariant under rescaling of psi. Restart r draws its starting factors
    from a generator seeded with opts.seed + r, alternating greedy
    (one-term-at-a-time) and fully random initialisation; ties between
    restarts are broken toward the smallest restart index.
    """
    if psi.is_zero():
        raise ZeroMultivectorError("cannot fit the zero multivector")
    if l < 1:
        raise ValueError(f"need l >= 1, got {l}")
    m, n = psi.m, psi.n
    scale = psi.norm()
    target = psi.coeffs / scale

    best = None
    best_restart = -1
    for restart in range(opts.restarts):
        rng = np.random.default_rng(opts.seed + restart)
        outcome = _single_restart(target, m, n, l, opts, rng, greedy=(restart % 2 == 0))
        if outcome is None:
            log.warning("restart %d discarded: non-finite values during iteration", restart)
            continue
        if best is None or outcome[0] < best[0]:
            best = outcome
            best_restart = restart
        if opts.stop_at_tol and best[0] <= opts.residual_tol:
            break
    if best is None:
        raise ArithmeticError("all restarts produced non-finite values")

    residual, factors, sweeps, diverged, max_norm, trace = best
    # undo the input normalisation: spread norm(psi)**(1/n) over each factor
    lift = scale ** (1.0 / n)
    terms = tuple(
        DecompTerm(tuple(f[:, k] * lift for k in range(n))) for f in factors
    )
    return FitReport(
        l=l,
        best_residual=residual,
        terms=terms,
        sweeps_used=sweeps,
        restart_index=best_restart,
        diverged=diverged,
        max_factor_norm=max_norm * lift,
        slot_residuals=tuple(trace),
    )


def estimate_length(psi: Multivector, l_max: int, opts: FitOptions = FitOptions()) -> EstimateReport:
    """Smallest l <= l_max whose fit reaches opts.residual_tol.

    The answer is an upper-bound estimate of the numerical length at the
    given tolerance; check the per-report `diverged` flags for border-style
    fits whose residual shrinks while factor norms blow up.
    """
    if l_max < 1:
        raise ValueError(f"need l_max >= 1, got {l_max}")
    reports = []
    for l in range(1, l_max + 1):
        report = als_fit(psi, l, opts)
        reports.append(report)
        if report.best_residual <= opts.residual_tol:
            return EstimateReport(l_est=l, reports=tuple(reports))
    return EstimateReport(l_est=None, reports=tuple(reports))
