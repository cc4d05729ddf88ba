"""Command-line front end.

Subcommands wrap the library modules one-to-one: `bounds` and `secant`
emit CSV tables, the file-based commands (`rank`, `check`, `schmidt`,
`dual`, `fit`) read the JSON multivector format, print a machine-readable
JSON record on stdout and a short human summary on stderr.

Exit codes: 0 success (possibly with numeric flags set in the JSON),
2 usage or parse error, 3 desk-scale resource cap exceeded. All outputs
are deterministic for a fixed seed; the default seed is a fixed constant,
overridable by the GRASSLEN_SEED environment variable and then by --seed.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from math import comb
from typing import Sequence

import numpy as np

from . import bounds as bounds_mod
from . import decomp, exterior, fit, secant
from .defaults import DEFAULT_RANK_TOL, DEFAULT_SEED

__all__ = ["main", "build_parser"]


def _parse_int_set(text: str) -> list[int]:
    """Parse '4', '4..14', '2,3,5' or any comma mix of those into a sorted set."""
    values: set[int] = set()
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise ValueError(f"empty entry in range {text!r}")
        if ".." in token:
            lo_s, _, hi_s = token.partition("..")
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise ValueError(f"descending range {token!r}")
            values.update(range(lo, hi + 1))
        else:
            values.add(int(token))
    if not values:
        raise ValueError(f"empty range {text!r}")
    return sorted(values)


def _resolve_seed(arg_seed: int | None) -> int:
    if arg_seed is not None:
        return arg_seed
    env = os.environ.get("GRASSLEN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"GRASSLEN_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load_input(path: str) -> exterior.Multivector:
    try:
        return exterior.load(path)
    except FileNotFoundError:
        raise exterior.FormatError(f"no such file: {path}") from None


def _emit(record: dict, summary: str) -> None:
    sys.stdout.write(json.dumps(record, sort_keys=True) + "\n")
    sys.stderr.write(summary + "\n")


def _vector_pairs(v) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in v]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_bounds(args: argparse.Namespace) -> int:
    records = bounds_mod.bounds_table(_parse_int_set(args.m), _parse_int_set(args.n))
    buf = io.StringIO()
    bounds_mod.write_bounds_csv(records, buf)
    _write_text(args.out, buf.getvalue())
    if args.plot_out:
        plot_buf = io.StringIO()
        bounds_mod.write_plot_series(records, plot_buf)
        _write_text(args.plot_out, plot_buf.getvalue())
    sys.stderr.write(f"bounds: {len(records)} records\n")
    return 0


def cmd_secant(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    ms = _parse_int_set(args.m)
    ns = _parse_int_set(args.n)
    ls = _parse_int_set(args.l)
    single = len(ms) == len(ns) == len(ls) == 1
    reports = []
    if single:
        reports.append(
            secant.secant_dim(
                ms[0], ns[0], ls[0],
                trials=args.trials, tol=args.tol, certify=args.certify, seed=seed,
            )
        )
    else:
        for m in ms:
            for n in ns:
                if not 1 <= n <= m - 1:
                    continue
                if comb(m, n) > secant.DESK_CAP:
                    sys.stderr.write(f"secant: skipping m={m} n={n}: C(m,n) over cap\n")
                    continue
                for l in ls:
                    reports.append(
                        secant.secant_dim(m, n, l, trials=args.trials, tol=args.tol,
                                          certify=args.certify, seed=seed)
                    )
    buf = io.StringIO()
    secant.write_secant_csv(reports, buf)
    _write_text(args.out, buf.getvalue())
    for r in reports:
        if r.ambiguous:
            sys.stderr.write(
                f"secant: tolerance ambiguity at m={r.m} n={r.n} l={r.l} "
                "(no 10x singular-value gap at the cut)\n"
            )
    sys.stderr.write(f"secant: {len(reports)} cells\n")
    return 0


def cmd_rank(args: argparse.Namespace) -> int:
    psi = _load_input(args.input)
    report = decomp.support_rank(psi, tol=args.tol)
    record = {
        "rank": report.rank,
        "tol": report.tol,
        "support_basis": [_vector_pairs(v) for v in report.support_basis],
    }
    _emit(record, f"rank: {report.rank} (m={psi.m}, n={psi.n})")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    psi = _load_input(args.input)
    check = decomp.is_decomposable(psi, tol=args.tol)
    record = {
        "decomposable": check.decomposable,
        "residual": check.residual,
        "support_rank": check.support_rank,
        "tol": check.tol,
    }
    verdict = "decomposable" if check.decomposable else "not decomposable"
    _emit(record, f"check: {verdict} (residual {check.residual:.3e})")
    return 0


def cmd_schmidt(args: argparse.Namespace) -> int:
    psi = _load_input(args.input)
    length, terms = decomp.schmidt_length(psi, tol=args.tol)
    if terms:
        recon = sum(t.to_multivector().coeffs for t in terms)
        residual = float(np.linalg.norm(psi.coeffs - recon) / psi.norm())
    else:
        residual = 0.0
    record = {"length": length, "reconstruction_residual": residual, "tol": args.tol}
    if args.terms_out and terms:
        _write_text(args.terms_out, json.dumps(decomp.terms_to_document(terms)) + "\n")
    _emit(record, f"schmidt: length {length} (m={psi.m})")
    return 0


def cmd_dual(args: argparse.Namespace) -> int:
    psi = _load_input(args.input)
    dual = exterior.hodge_dual(psi)
    _write_text(args.out, exterior.dumps(dual) + "\n")
    sys.stderr.write(f"dual: grade {psi.n} -> {dual.n} (m={psi.m})\n")
    return 0


def _fit_options(args: argparse.Namespace) -> fit.FitOptions:
    return fit.FitOptions(
        restarts=args.restarts,
        residual_tol=args.tol,
        seed=_resolve_seed(args.seed),
    )


def _report_record(report: fit.FitReport) -> dict:
    return {
        "l": report.l,
        "best_residual": report.best_residual,
        "sweeps_used": report.sweeps_used,
        "restart_index": report.restart_index,
        "diverged": report.diverged,
        "max_factor_norm": report.max_factor_norm,
    }


def cmd_fit(args: argparse.Namespace) -> int:
    psi = _load_input(args.input)
    opts = _fit_options(args)
    if args.l_max is None and args.l is None:
        raise ValueError("fit needs --l-max (length scan) or --l (single fit)")
    if args.l_max is not None:
        estimate = fit.estimate_length(psi, args.l_max, opts)
        record = {
            "l_est": estimate.l_est,
            "exceeded": estimate.exceeded,
            "reports": [_report_record(r) for r in estimate.reports],
        }
        best = estimate.reports[-1]
        if args.terms_out:
            _write_text(args.terms_out, json.dumps(decomp.terms_to_document(best.terms)) + "\n")
        shown = estimate.l_est if estimate.l_est is not None else f"exceeds {args.l_max}"
        _emit(record, f"fit: estimated length {shown} (tol {opts.residual_tol:g})")
    else:
        report = fit.als_fit(psi, args.l, opts)
        record = _report_record(report)
        if args.terms_out:
            _write_text(args.terms_out, json.dumps(decomp.terms_to_document(report.terms)) + "\n")
        _emit(record, f"fit: l={report.l} residual {report.best_residual:.3e}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser, *, tol_default: float, tol_help: str) -> None:
    sub.add_argument("--tol", type=float, default=tol_default, help=tol_help)
    sub.add_argument(
        "--seed", type=int, default=None,
        help=f"RNG seed (default: GRASSLEN_SEED env var, else {DEFAULT_SEED})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grasslen",
        description="Multivector lengths: exact algebra, bounds tables, secant dimensions, and decomposable-sum fits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="emit the lower/upper bounds table as CSV")
    p_bounds.add_argument("--m", required=True, help="ambient dimensions, e.g. 4..14 or 6,8")
    p_bounds.add_argument("--n", required=True, help="grades, e.g. 1..7 or 2,3,4,5")
    p_bounds.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p_bounds.add_argument("--plot-out", default=None, help="also write per-grade plot series CSV")
    _add_common(p_bounds, tol_default=DEFAULT_RANK_TOL, tol_help="unused; accepted for interface uniformity")
    p_bounds.set_defaults(func=cmd_bounds)

    p_secant = sub.add_parser("secant", help="measure secant-variety dimensions (CSV)")
    p_secant.add_argument("--m", required=True, help="ambient dimensions (value or range)")
    p_secant.add_argument("--n", required=True, help="grades (value or range)")
    p_secant.add_argument("--l", required=True, help="point counts (value or range)")
    p_secant.add_argument("--trials", type=int, default=secant.DEFAULT_TRIALS, help="independent samples per cell")
    p_secant.add_argument("--certify", action="store_true", help="confirm ranks by exact modular elimination")
    p_secant.add_argument("--out", default=None, help="CSV output path (default stdout)")
    _add_common(p_secant, tol_default=DEFAULT_RANK_TOL, tol_help="relative singular-value threshold")
    p_secant.set_defaults(func=cmd_secant)

    p_rank = sub.add_parser("rank", help="minimal support dimension of a multivector file")
    p_rank.add_argument("input", help="multivector JSON file")
    _add_common(p_rank, tol_default=DEFAULT_RANK_TOL, tol_help="relative singular-value threshold")
    p_rank.set_defaults(func=cmd_rank)

    p_check = sub.add_parser("check", help="decomposability test for a multivector file")
    p_check.add_argument("input", help="multivector JSON file")
    _add_common(p_check, tol_default=decomp.DEFAULT_PLUCKER_TOL, tol_help="residual threshold relative to norm**2")
    p_check.set_defaults(func=cmd_check)

    p_schmidt = sub.add_parser("schmidt", help="exact length of a 2-vector file")
    p_schmidt.add_argument("input", help="multivector JSON file (grade 2)")
    p_schmidt.add_argument("--terms-out", default=None, help="write the extracted terms as JSON")
    _add_common(p_schmidt, tol_default=DEFAULT_RANK_TOL, tol_help="relative singular-value threshold")
    p_schmidt.set_defaults(func=cmd_schmidt)

    p_dual = sub.add_parser("dual", help="duality map of a multivector file")
    p_dual.add_argument("input", help="multivector JSON file")
    p_dual.add_argument("--out", default=None, help="output path (default stdout)")
    _add_common(p_dual, tol_default=DEFAULT_RANK_TOL, tol_help="unused; accepted for interface uniformity")
    p_dual.set_defaults(func=cmd_dual)

    p_fit = sub.add_parser("fit", help="alternating-least-squares length fit of a multivector file")
    p_fit.add_argument("input", help="multivector JSON file")
    p_fit.add_argument("--l", type=int, default=None, help="fit a single term count")
    p_fit.add_argument("--l-max", type=int, default=None, help="scan l = 1..l_max for the smallest fit")
    p_fit.add_argument("--restarts", type=int, default=20, help="independent restarts per fit")
    p_fit.add_argument("--terms-out", default=None, help="write the fitted terms as JSON")
    _add_common(p_fit, tol_default=1e-8, tol_help="relative residual tolerance")
    p_fit.set_defaults(func=cmd_fit)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except exterior.SizeCapError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except (exterior.FormatError, decomp.ZeroMultivectorError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
