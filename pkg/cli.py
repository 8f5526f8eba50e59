"""
Command line for the Monge-Ampere solver.

    python -m cli solve --problem quadratic --h 1/32 --method precond --mu 50
    python -m cli study --problem two_dirac --h-list 1/8,1/16,1/32,1/64
    python -m cli verify --suite laplacian-norm --h 1/16,1/64,1/256

Exit codes: 0 success, 1 usage or configuration error, 2 non-converged run
or failed check, 3 crashed verification suite.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from pydantic import ValidationError

from config import get_settings
from monge_ampere.errors import ConfigurationError
from monge_ampere.problems import PROBLEMS
from monge_ampere.verification import SUITES
from runs import RunAdapter, SolveRequest, StudyRequest, VerifyRequest
from runs.adapter import EXIT_CONFIG

logger = logging.getLogger("cli")

METHOD_CHOICES = ["basic", "precond", "preconditioned"]


def _split(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--method", choices=METHOD_CHOICES, help="fixed-point iteration")
    parser.add_argument("--mu", type=float, help="time-step parameter")
    parser.add_argument("--tol", type=float, help="residual tolerance (max norm)")
    parser.add_argument("--max-iter", type=int, help="iteration cap")
    parser.add_argument("--stencil-width", type=int, help="largest direction component")
    parser.add_argument("--epsilon", type=float, help="properness coefficient")
    parser.add_argument("--epsilon-sign", choices=["plus", "minus"])
    parser.add_argument("--init", help="exact | extension | file:PATH")
    parser.add_argument("--poisson", choices=["fast", "iterative"], help="Poisson backend")
    parser.add_argument("--poisson-tol", type=float)
    parser.add_argument("--poisson-max-iter", type=int)
    parser.add_argument("--dirac-spread", choices=["nearest", "bilinear"])
    parser.add_argument("--stopping", choices=["residual", "increment"], help="residual max norm or step size")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--threads", type=int, help="worker cap (default: all cores)")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING, ...")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cli",
        description="Wide-stencil solver for the Dirichlet Monge-Ampere equation",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="run one solve")
    solve.add_argument("--problem", required=True, choices=sorted(PROBLEMS))
    solve.add_argument("--h", required=True, help="mesh length: 1/2^k, 1/n or decimal")
    _add_solver_flags(solve)

    study = commands.add_parser("study", help="run a convergence study")
    study.add_argument("--problem", required=True, choices=sorted(PROBLEMS))
    study.add_argument("--h-list", required=True, help="comma-separated mesh lengths")
    _add_solver_flags(study)

    verify = commands.add_parser("verify", help="run property suites")
    verify.add_argument(
        "--suite",
        action="append",
        required=True,
        help=f"comma-separated, repeatable; one of {', '.join(SUITES)}",
    )
    verify.add_argument("--h", help="mesh length, or a comma-separated list")
    verify.add_argument("--h-list", help="comma-separated mesh lengths")
    verify.add_argument("--trials", type=int)
    verify.add_argument("--seed", type=int)
    verify.add_argument("--sampling", choices=["uniform", "smooth"])
    verify.add_argument("--retry-mu", help="comma-separated mu values tried after a failed contraction check")
    _add_solver_flags(verify)

    return parser


_REQUEST_FIELDS = (
    "method", "mu", "tol", "max_iter", "stencil_width", "epsilon", "epsilon_sign",
    "init", "poisson", "poisson_tol", "poisson_max_iter", "dirac_spread", "stopping", "threads",
)


def _common_fields(args: argparse.Namespace) -> dict[str, Any]:
    # unset flags fall through to Settings defaults
    return {name: getattr(args, name) for name in _REQUEST_FIELDS if getattr(args, name) is not None}


def _verify_fields(args: argparse.Namespace) -> dict[str, Any]:
    fields = _common_fields(args)
    fields["suites"] = [name for text in args.suite for name in _split(text)]
    if args.h is not None:
        hs = _split(args.h)
        if len(hs) > 1:
            fields["h_list"] = hs
        elif hs:
            fields["h"] = hs[0]
    if args.h_list is not None:
        fields["h_list"] = _split(args.h_list)
    for name in ("trials", "seed", "sampling"):
        if getattr(args, name) is not None:
            fields[name] = getattr(args, name)
    if args.retry_mu is not None:
        fields["retry_mu"] = [float(mu) for mu in _split(args.retry_mu)]
    return fields


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def run(args: argparse.Namespace) -> int:
    settings = get_settings()
    out_dir = args.out or Path(settings.output_dir)
    adapter = RunAdapter()

    if args.command == "solve":
        request = SolveRequest(problem=args.problem, h=args.h, **_common_fields(args))
        outcome = adapter.solve(request, out_dir)
        summary = outcome.summary
        print(
            f"{summary['problem']} h={summary['h']}: converged={summary['converged']} "
            f"iterations={summary['iterations']} max_error={summary.get('max_error')}"
        )
    elif args.command == "study":
        request = StudyRequest(problem=args.problem, h_list=_split(args.h_list), **_common_fields(args))
        outcome = adapter.study(request, out_dir)
        print((out_dir / "study.txt").read_text(encoding="utf-8"), end="")
    else:
        request = VerifyRequest(**_verify_fields(args))
        outcome = adapter.verify(request, out_dir)
        for check in outcome.summary["checks"]:
            print(f"{'PASS' if check['passed'] else 'FAIL'} {check['name']}")

    return outcome.exit_code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; 2 means non-converged here
        return EXIT_CONFIG if exc.code else 0

    try:
        configure_logging(args.log_level or get_settings().log_level)
        return run(args)
    except (ConfigurationError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
