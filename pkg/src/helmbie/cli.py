"""Command-line driver.

    helmbie solve  --config cfg [--out DIR]   single (formulation, N) run
    helmbie study  --config cfg [--out DIR]   convergence ladder -> CSV + JSON
    helmbie verify SUITE [SUITE ...]          verification batteries

Exit codes: 0 ok, 1 config error, 2 solver failure, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .fields import FieldEvaluator
from .formulations import assemble, solve
from .harness import (
    ConfigError,
    StudyConfig,
    VERIFICATION_SUITES,
    run_convergence,
    run_verification,
)
from .linalg import GmresError, SingularMatrixError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_VERIFY = 3


def _load_config(args) -> StudyConfig:
    if args.config is None:
        cfg = StudyConfig.from_mapping({})
    else:
        cfg = StudyConfig.from_file(args.config)
    if args.out is not None:
        cfg.out_dir = Path(args.out)
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        cfg.threads = args.threads
    return cfg


def _cmd_solve(args) -> int:
    cfg = _load_config(args)
    problem = cfg.build_problem()
    form = cfg.formulations[0]
    n = max(cfg.n_ladder)
    kw = {}
    if form == "l3" and cfg.kappa is not None:
        kw["kappa"] = cfg.kappa
    if form == "l4" and cfg.rho is not None:
        kw["rho"] = cfg.rho
    t0 = time.perf_counter()
    try:
        system = assemble(form, problem, n, **kw)
        if cfg.solver == "gmres":
            result = solve(system, method="gmres", tol=cfg.gmres_tol, maxit=4 * n)
        else:
            result = solve(system)
    except (GmresError, SingularMatrixError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    elapsed = time.perf_counter() - t0
    angles = np.linspace(0.0, 2.0 * np.pi, cfg.directions, endpoint=False)
    ff = FieldEvaluator(problem.curve, result.exterior_terms()).far_field(angles)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    ff_path = cfg.out_dir / f"farfield_{form}_N{n}.csv"
    lines = ["angle,re,im"] + [
        f"{a:.10f},{v.real:.16e},{v.imag:.16e}"
        for a, v in zip(ff.angles, ff.values)
    ]
    ff_path.write_text("\n".join(lines) + "\n")
    summary = {
        "formulation": form,
        "N": n,
        "solver": result.diagnostics.method,
        "iterations": result.diagnostics.iterations,
        "residual": result.diagnostics.residual,
        "seconds": elapsed,
        "farfield_csv": str(ff_path),
        "max_farfield_amplitude": float(np.max(np.abs(ff.values))),
    }
    (cfg.out_dir / f"solve_{form}_N{n}.json").write_text(
        json.dumps(summary, indent=2)
    )
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def _cmd_study(args) -> int:
    cfg = _load_config(args)
    report = run_convergence(cfg)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    (cfg.out_dir / "study.csv").write_text(report.to_csv())
    (cfg.out_dir / "study.json").write_text(report.to_json())
    print(report.to_csv(), end="")
    failures = [r for r in report.rows if r.failure]
    for row in failures:
        print(f"cell ({row.formulation}, {row.N}) failed: {row.failure}",
              file=sys.stderr)
    return EXIT_SOLVER if failures else EXIT_OK


def _cmd_verify(args) -> int:
    failed = False
    for suite in args.suites:
        report = run_verification(suite)
        status = "PASS" if report.passed else "FAIL"
        print(f"[{status}] suite {suite}")
        for line in report.lines():
            print(line)
        failed = failed or not report.passed
    return EXIT_VERIFY if failed else EXIT_OK


def _add_common(parser, suppress: bool):
    # the flags are accepted both before and after the subcommand; the
    # subparser copies use SUPPRESS so an absent flag keeps the outer value
    kw = {"default": argparse.SUPPRESS} if suppress else {"default": None}
    parser.add_argument("--config", help="key = value config file", **kw)
    parser.add_argument("--out", help="output directory", **kw)
    parser.add_argument("--threads", type=int,
                        help="concurrent study cells", **kw)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="helmbie",
        description="Spectral boundary-integral solver for 2D Helmholtz "
        "transmission problems",
    )
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="single run at the largest ladder N")
    _add_common(p_solve, suppress=True)
    p_solve.set_defaults(fn=_cmd_solve)
    p_study = sub.add_parser("study", help="convergence ladder")
    _add_common(p_study, suppress=True)
    p_study.set_defaults(fn=_cmd_study)
    p_verify = sub.add_parser("verify", help="verification suites")
    _add_common(p_verify, suppress=True)
    p_verify.add_argument(
        "suites", nargs="+", choices=sorted(VERIFICATION_SUITES),
        help="suite names",
    )
    p_verify.set_defaults(fn=_cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
