"""Command-line front end.

Subcommands: denoise, shape, simulate, mc, phase, noise-check.  Exit code 0
on success, 2 on usage errors, 1 on runtime errors.  Every subcommand takes
``--seed``; without it the environment variable WARPWAVE_SEED is consulted,
and failing that the fixed default 42 is used.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .design import RegressionSample
from .errors import DataError, WarpwaveError
from .estimators import EstimatorConfig, estimate_function, estimate_shape
from .harness import (
    McConfig,
    eval_target,
    run_mc,
    scenario_sigma,
)
from .noise import LrdProcessSpec, generate_lrd, marginal_variance, variance_scaling_probe
from .rates import classify_phase
from . import report

DEFAULT_SEED = 42

_SOURCE_BY_FLAG = {"dj": "dj_universal", "lrd": "lrd_level"}
_TAU0_BY_FLAG = {"global": "global_finest", "by-level": "by_level"}


def read_series_csv(path) -> RegressionSample:
    """Load a sample from a CSV whose header starts with ``x,y``.

    Extra columns (such as the ones ``simulate`` writes) are ignored.
    Malformed rows raise a parse error naming the offending line.
    """
    with open(path, "r") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise DataError(f"{path}: empty file")
    header = [c.strip() for c in lines[0].split(",")]
    if len(header) < 2 or header[0] != "x" or header[1] != "y":
        raise DataError(f"{path}: expected header starting with 'x,y'")
    xs, ys = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) < 2:
            raise DataError(f"{path}: line {lineno}: expected at least two fields")
        try:
            xs.append(float(fields[0]))
            ys.append(float(fields[1]))
        except ValueError:
            raise DataError(f"{path}: line {lineno}: cannot parse numeric values")
    return RegressionSample(np.asarray(xs), np.asarray(ys))


def _resolve_seed(value) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get("WARPWAVE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise DataError(f"WARPWAVE_SEED is not an integer: {env!r}")
    return DEFAULT_SEED


def _add_estimator_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--wavelet", choices=["haar", "db2", "db4", "db6"], default="db6")
    sub.add_argument("--policy", choices=["hard", "soft"], default="hard")
    sub.add_argument("--threshold", choices=["dj", "lrd"], default="dj")
    sub.add_argument("--tau0-mode", choices=["global", "by-level"], default="global")
    sub.add_argument("--alpha", type=float, default=None, help="override the estimated dependence index")
    sub.add_argument("--adaptivity", choices=["partial", "full"], default="partial")


def _add_seed_flag(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=None, help=f"RNG seed (default {DEFAULT_SEED}, or WARPWAVE_SEED)")


def _estimator_config(args) -> EstimatorConfig:
    return EstimatorConfig(
        wavelet=args.wavelet,
        policy=args.policy,
        source=_SOURCE_BY_FLAG[args.threshold],
        adaptivity=args.adaptivity,
        alpha=args.alpha,
        tau0_mode=_TAU0_BY_FLAG[args.tau0_mode],
        length_mode="truncate",
    )


def _cmd_fit(args, shape: bool) -> int:
    sample = read_series_csv(args.input)
    print(f"read {sample.n} rows from {args.input}")
    estimator = estimate_shape if shape else estimate_function
    fit = estimator(sample, _estimator_config(args))
    n_kept = fit.metadata["n"]
    xs_sorted = np.sort(sample.xs)
    if n_kept != sample.n:
        idx = (np.arange(n_kept) * sample.n) // n_kept
        xs_sorted = xs_sorted[idx]
        print(f"thinned to {n_kept} points for the dyadic transform")
    out = Path(args.output)
    report.write_fit_csv(out, xs_sorted, fit.fitted)
    report.render_fit_figure(
        out.with_suffix(".png"),
        xs_sorted,
        fit.fitted,
        raw_xs=sample.xs,
        raw_ys=sample.ys,
        title="shape estimate" if shape else "function estimate",
    )
    print(f"wrote {out} and {out.with_suffix('.png')}")
    return 0


def _cmd_simulate(args) -> int:
    seed = _resolve_seed(args.seed)
    n = args.n
    design_rng = np.random.default_rng([seed, 0, 1])
    xs = design_rng.uniform(size=n)
    spec = LrdProcessSpec(alpha=1.0 - 2.0 * args.d, truncation=max(n, 10_000), seed=seed)
    eps = generate_lrd(spec, n, 0)
    f_true = eval_target(args.target, xs)
    sigma_x = scenario_sigma(args.scenario, xs)
    ys = f_true + sigma_x * eps
    report.write_simulation_csv(args.output, xs, ys, f_true, sigma_x)
    print(f"wrote {n} rows to {args.output}")
    return 0


def _cmd_mc(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.d_grid is not None:
        d_grid = tuple(float(v) for v in args.d_grid.split(","))
    elif args.d is not None:
        d_grid = (args.d,)
    else:
        d_grid = McConfig().d_grid
    config = McConfig(
        target=args.target,
        scenario=args.scenario,
        n=args.n,
        replications=args.reps,
        d_grid=d_grid,
        wavelet=args.wavelet,
        policy=args.policy,
        source=_SOURCE_BY_FLAG[args.threshold],
        tau0_mode=_TAU0_BY_FLAG[args.tau0_mode],
        adaptivity=args.adaptivity,
        alpha=args.alpha,
        estimator_kind=args.estimator_kind,
        master_seed=seed,
    )
    mc_report = run_mc(config, jobs=args.jobs)
    title = f"{config.target}, scenario ({config.scenario}), n={config.n}"
    written = report.write_mc_outputs(mc_report, args.output, title=title)
    print(mc_report.to_csv_text(), end="")
    print("wrote " + ", ".join(str(p) for p in written))
    return 0


def _cmd_phase(args) -> int:
    diag = classify_phase(args.s, args.pi, args.p, args.alpha)
    print(
        json.dumps(
            {
                "phase": diag.phase,
                "gamma": diag.gamma,
                "kappa": diag.kappa,
                "alpha_D": diag.alpha_D,
                "alpha_S": diag.alpha_S,
            },
            indent=2,
        )
    )
    return 0


def _cmd_noise_check(args) -> int:
    seed = _resolve_seed(args.seed)
    n_grid = [int(v) for v in args.n_grid.split(",")]
    truncation = args.truncation if args.truncation else max(max(n_grid), 10_000)
    spec = LrdProcessSpec(alpha=1.0 - 2.0 * args.d, truncation=truncation, seed=seed)
    slope, intercept = variance_scaling_probe(spec, n_grid, args.reps)
    print(
        json.dumps(
            {
                "slope": slope,
                "intercept": intercept,
                "expected_slope": 2.0 - spec.alpha,
                "marginal_variance": marginal_variance(spec),
            },
            indent=2,
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="warpwave",
        description="Wavelet regression on warped designs under long-range dependence",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    for name, shape in (("denoise", False), ("shape", True)):
        sub = subs.add_parser(name, help=f"{'centered ' if shape else ''}threshold fit of x,y data")
        sub.add_argument("--input", required=True)
        sub.add_argument("--output", default=f"{name}.csv")
        _add_estimator_flags(sub)
        _add_seed_flag(sub)
        sub.set_defaults(func=lambda a, s=shape: _cmd_fit(a, s))

    sub = subs.add_parser("simulate", help="write one synthetic dataset")
    sub.add_argument("--target", choices=["doppler", "bumps"], default="doppler")
    sub.add_argument("--scenario", choices=["a", "b", "c"], default="a")
    sub.add_argument("--n", type=int, default=1024)
    sub.add_argument("--d", type=float, default=0.0)
    sub.add_argument("--output", default="simulated.csv")
    _add_seed_flag(sub)
    sub.set_defaults(func=_cmd_simulate)

    sub = subs.add_parser("mc", help="Monte Carlo MSE over a d grid")
    sub.add_argument("--target", choices=["doppler", "bumps"], default="doppler")
    sub.add_argument("--scenario", choices=["a", "b", "c"], default="a")
    sub.add_argument("--n", type=int, default=1024)
    sub.add_argument("--reps", type=int, default=200)
    sub.add_argument("--d", type=float, default=None)
    sub.add_argument("--d-grid", default=None, help="comma-separated d values")
    sub.add_argument("--estimator-kind", choices=["function", "shape"], default="function")
    sub.add_argument("--jobs", type=int, default=1)
    sub.add_argument("--output", default="mc_report.csv")
    _add_estimator_flags(sub)
    _add_seed_flag(sub)
    sub.set_defaults(func=_cmd_mc)

    sub = subs.add_parser("phase", help="classify a (s, pi, p, alpha) point")
    sub.add_argument("--s", type=float, required=True)
    sub.add_argument("--pi", type=float, required=True)
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--alpha", type=float, required=True)
    _add_seed_flag(sub)
    sub.set_defaults(func=_cmd_phase)

    sub = subs.add_parser("noise-check", help="verify the partial-sum variance growth")
    sub.add_argument("--d", type=float, default=0.0)
    sub.add_argument("--n-grid", default="256,512,1024,2048")
    sub.add_argument("--reps", type=int, default=200)
    sub.add_argument("--truncation", type=int, default=None)
    _add_seed_flag(sub)
    sub.set_defaults(func=_cmd_noise_check)

    return parser


def run_cli(argv) -> int:
    """Parse and run; returns the process exit code instead of raising."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except WarpwaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    return run_cli(sys.argv[1:] if argv is None else argv)
