"""Command-line front end.

    dnfrac eval-ks --alpha 1 --mm 1 --ll 1 --z 1
    dnfrac eval-ml --alpha 0.5 --beta 1 --z -2
    dnfrac solve --gammas 0.7,0.9,0.8 --s 0.5 --lambda 1,0 --grid 0.1:2:50
    dnfrac cauchy --gammas 0.7,0.9,0.8 --s 0.5 --lambda 1,0 --A 1,0 2,0
    dnfrac verify --suite all --seed 7 --tol 1e-8

Complex numbers are written ``re`` or ``re,im``.  Grid output is CSV with
header ``y,mode,re_u,im_u``.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Optional, Sequence, TextIO

from .dn_operator import DnSequence
from .errors import DnfracError
from .solver import (
    CauchyData,
    GeneralSolutionWeights,
    ProblemSpec,
    cauchy_solution,
    eval_solution,
    fundamental_system,
)
from .special_fn import (
    KilbasSaigoParams,
    MittagLefflerParams,
    SeriesEvalConfig,
    ks_eval,
    ml_eval,
)
from .suites import SUITES, run_suites

CSV_HEADER = ["y", "mode", "re_u", "im_u"]
LAMBDA_GUARD = 10.0
DEFAULT_SEED = 7
DEFAULT_TOL = 1e-8


def parse_complex(text: str) -> complex:
    """Parse ``re`` or ``re,im`` (``1+2j`` style is accepted too)."""
    text = text.strip()
    if "," in text:
        re_part, im_part = text.split(",", 1)
        return complex(float(re_part), float(im_part))
    try:
        return complex(float(text))
    except ValueError:
        return complex(text.replace("i", "j").replace(" ", ""))


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r} (use re or re,im)")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def parse_grid(text: str) -> list[float]:
    """``start:end:points`` -> evenly spaced points, endpoints included."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be start:end:points, got {text!r}")
    try:
        start, end, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be start:end:points, got {text!r}")
    if not start > 0:
        raise argparse.ArgumentTypeError(f"grid start must be > 0, got {start}")
    if points < 1:
        raise argparse.ArgumentTypeError(f"grid needs at least one point, got {points}")
    if points == 1:
        return [start]
    step = (end - start) / (points - 1)
    return [start + i * step for i in range(points)]


def _fmt(x: float) -> str:
    return repr(float(x))


def format_complex(z: complex) -> str:
    return _fmt(z.real) if z.imag == 0 else f"{_fmt(z.real)},{_fmt(z.imag)}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dnfrac",
        description="Solutions of D^{gamma_0..gamma_m} u = lambda y^s u via Kilbas-Saigo functions.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def series_flags(p):
        p.add_argument("--rel-tol", type=float, default=1e-12, help="series truncation tolerance")
        p.add_argument("--max-terms", type=int, default=100_000, help="series term cap")

    p = sub.add_parser("eval-ks", help="evaluate E_{alpha,m,l}(z)",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--mm", type=float, required=True, help="second parameter m")
    p.add_argument("--ll", type=float, required=True, help="third parameter l")
    p.add_argument("--z", type=_complex_arg, default=0j, help="argument, re or re,im")
    series_flags(p)

    p = sub.add_parser("eval-ml", help="evaluate E_{alpha,beta}(z)",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--z", type=_complex_arg, default=0j, help="argument, re or re,im")
    series_flags(p)

    for name, helptext in (
        ("solve", "tabulate the fundamental system (and optionally a general solution)"),
        ("cauchy", "tabulate the Cauchy-problem solution"),
    ):
        p = sub.add_parser(name, help=helptext,
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        p.add_argument("--gammas", type=_float_list, required=True,
                       help="comma-separated gamma_0..gamma_m in (0, 1]")
        p.add_argument("--s", type=float, default=0.0, help="degeneracy exponent s >= 0")
        p.add_argument("--lambda", dest="lam", type=_complex_arg, default=1 + 0j,
                       help="spectral parameter, re or re,im")
        p.add_argument("--grid", type=parse_grid, default="0.1:2:20",
                       help="start:end:points, start > 0")
        p.add_argument("--out", default="-", help="output CSV path, - for stdout")
        if name == "solve":
            p.add_argument("--weights", type=_complex_arg, nargs="+",
                           help="d_0..d_{m-1}; adds rows with mode 'general'")
        else:
            p.add_argument("--A", dest="cauchy", type=_complex_arg, nargs="+", required=True,
                           help="Cauchy data A_0..A_{m-1}")
        series_flags(p)

    p = sub.add_parser("verify", help="run verification suites",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--suite", choices=["all", *SUITES], default="all")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    return parser


def _write_table(
    out: TextIO,
    spec: ProblemSpec,
    grid: Sequence[float],
    cfg: SeriesEvalConfig,
    extra: Optional[tuple[str, GeneralSolutionWeights]] = None,
) -> None:
    system = fundamental_system(spec, cfg)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for y in sorted(grid):
        values = [eval_solution(sol, y, cfg) for sol in system]
        for sol, u in zip(system, values):
            writer.writerow([_fmt(y), sol.mode, _fmt(u.real), _fmt(u.imag)])
        if extra is not None:
            label, weights = extra
            u = sum((d * v for d, v in zip(weights.values, values)), 0j)
            writer.writerow([_fmt(y), label, _fmt(u.real), _fmt(u.imag)])


def _open_out(path: str):
    return sys.stdout if path == "-" else open(path, "w", newline="", encoding="utf-8")


def _run(args: argparse.Namespace) -> int:
    if args.command == "verify":
        results = run_suites(args.suite, args.seed, args.tol)
        print(f"# seed={args.seed} tol={args.tol:g}")
        for r in results:
            print(r.line())
            if r.detail:
                print(f"#   {r.detail}")
        return 0 if all(r.passed for r in results) else 1

    cfg = SeriesEvalConfig(args.rel_tol, args.max_terms)
    if args.command == "eval-ks":
        value = ks_eval(KilbasSaigoParams(args.alpha, args.mm, args.ll), args.z, cfg)
        print(format_complex(value))
        return 0
    if args.command == "eval-ml":
        value = ml_eval(MittagLefflerParams(args.alpha, args.beta), args.z, cfg)
        print(format_complex(value))
        return 0

    if abs(args.lam) > LAMBDA_GUARD:
        raise DnfracError(f"|lambda| <= {LAMBDA_GUARD} required, got {abs(args.lam)}")
    spec = ProblemSpec(DnSequence(tuple(args.gammas)), args.s, args.lam)
    extra = None
    if args.command == "solve" and args.weights:
        extra = ("general", GeneralSolutionWeights(tuple(args.weights)))
        if len(args.weights) != spec.m:
            raise DnfracError(f"--weights needs m = {spec.m} values, got {len(args.weights)}")
    if args.command == "cauchy":
        weights = cauchy_solution(spec, CauchyData(tuple(args.cauchy)))
        for k, d in enumerate(weights.values):
            print(f"# d_{k} = {format_complex(d)}", file=sys.stderr)
        extra = ("cauchy", weights)
    out = _open_out(args.out)
    try:
        _write_table(out, spec, args.grid, cfg, extra)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` and execute; returns the process exit code.

    0 on success, 1 when a verification suite fails, 2 for bad flags or
    parameters violating an invariant.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args)
    except (DnfracError, OverflowError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
