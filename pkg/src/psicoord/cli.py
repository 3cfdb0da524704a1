"""Command-line front end.

Exit codes: 0 success / inside, 2 outside, 3 boundary, 4 incomplete
certificate, 64 usage error, 65 file or parse error, 70 domain error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys

import numpy as np

from . import hexagon
from .errors import MalformedInput, NoConvergence, PsiCoordError
from .polytope import DEFAULT_TOL, build_polytope, check_membership, export_hrep
from .psi import Metric, PsiVector, dump_json, forward_map, load_json, mass_beta, mass_quadrature
from .solver import JACOBIAN_MODES, SolveOptions, invert
from .triangulation import DEFAULT_CAP, enumerate_fundamental_cycles, enumerate_fundamental_paths, load_complex

EX_USAGE, EX_DATAERR, EX_SOFTWARE = 64, 65, 70

log = logging.getLogger("psicoord")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _grid(text: str) -> list[float]:
    """``a,b,c`` or ``start:stop:count`` (geometric spacing)."""
    if ":" in text:
        try:
            start, stop, count = text.split(":")
            return list(np.geomspace(float(start), float(stop), int(count)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad grid {text!r}; use start:stop:count")
    return _floats(text)


def _load(loader, path):
    try:
        return loader(path)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except PsiCoordError as exc:
        if isinstance(exc, MalformedInput):
            raise DataError(f"cannot parse {path}: {exc}") from exc
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise DataError(f"cannot parse {path}: {exc!r}") from exc


def _complex(path):
    return _load(load_complex, path)


def _metric(path):
    return _load(lambda p: Metric.from_json(load_json(p)), path)


def _target(path):
    return _load(lambda p: PsiVector.from_json(load_json(p)), path)


def cmd_hex(args, out):
    geom = hexagon.HexGeometry.from_lengths(args.l)
    out.write("theta " + " ".join(f"{v:.12g}" for v in geom.theta) + "\n")
    out.write("r " + " ".join(f"{v:.12g}" for v in geom.r) + "\n")
    out.write(f"tangent_residual {hexagon.tangent_law_residual(geom):.3e}\n")
    return 0


def cmd_psi(args, out):
    complex_ = _complex(args.complex)
    psi = forward_map(complex_, _metric(args.metric), args.lam)
    if args.output:
        dump_json(psi.to_json(), args.output)
    out.write(json.dumps(psi.to_json()) + "\n")
    return 0


def cmd_polytope(args, out):
    system = build_polytope(_complex(args.complex), args.lam, args.cap, args.minimize)
    if system.truncated:
        log.warning("enumeration truncated at cap %d; the system is incomplete", args.cap)
    out.write(export_hrep(system))
    return 0


def cmd_check(args, out):
    system = build_polytope(_complex(args.complex), args.lam, args.cap)
    result = check_membership(system, _target(args.target), args.tol)
    out.write(f"{result.verdict} min_margin {result.min_margin:.6e}\n")
    for label, rows in (("violated", result.violated), ("active", result.active)):
        for q, margin in rows:
            out.write(f"{label} {margin:.6e} {q.origin} {q.witness_label()}\n")
    return result.exit_code


def cmd_solve(args, out):
    complex_ = _complex(args.complex)
    opts = SolveOptions(
        max_iterations=args.max_iterations,
        residual_tolerance=args.tolerance,
        step_cap=args.step_cap,
        jacobian_mode=args.jacobian,
    )
    try:
        report = invert(complex_, _target(args.target), args.lam, opts, check=not args.force)
    except NoConvergence as exc:
        if exc.report is not None:
            out.write(exc.report.format())
            if args.output:
                dump_json(exc.report.to_json(), args.output)
        raise
    out.write(report.format())
    if args.output:
        dump_json(report.to_json(), args.output)
    return 0


def cmd_paths(args, out):
    complex_ = _complex(args.complex)
    enumerate_ = enumerate_fundamental_cycles if args.cycles else enumerate_fundamental_paths
    result = enumerate_(complex_, args.cap, not args.non_backtracking)
    if result.truncated:
        log.warning("enumeration truncated at cap %d", args.cap)
    for vec, path in zip(result.vectors, result.items):
        out.write(" ".join(map(str, vec)) + f" # {path.label()}\n")
    return 0


def cmd_mlambda(args, out):
    q, b = mass_quadrature(args.lam), mass_beta(args.lam)
    if math.isinf(q):
        out.write("inf inf\n")
    else:
        out.write(f"{q:.12f} {b:.12f}\n")
    return 0


def cmd_probe(args, out):
    rows = hexagon.degeneration_table(args.scenario, args.grid, args.fixed)
    out.write(hexagon.format_csv(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="psicoord", description="psi-lambda coordinates on ideally triangulated surfaces")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def lam(p):
        p.add_argument("--lambda", dest="lam", type=float, required=True, help="exponent lambda")

    def cap(p):
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration state cap")

    p = sub.add_parser("hex", help="A-arcs, r-coordinates and tangent-law residual of one hexagon")
    p.add_argument("--l", type=_floats, required=True, help="three red edge lengths, e.g. 1,1,1")
    p.set_defaults(func=cmd_hex)

    p = sub.add_parser("psi", help="psi vector of a metric")
    p.add_argument("--complex", required=True, help="triangulation JSON file")
    p.add_argument("--metric", required=True, help='metric JSON file {"lengths": [...]}')
    lam(p)
    p.add_argument("--output", help="also write the psi vector to this file")
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("polytope", help="print the inequality system")
    p.add_argument("--complex", required=True)
    lam(p)
    cap(p)
    p.add_argument("--minimize", action="store_true", help="drop integer multiples of other inequalities")
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("check", help="membership of a target point")
    p.add_argument("--complex", required=True)
    lam(p)
    p.add_argument("--target", required=True, help='target JSON file {"psi": [...]}')
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    cap(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="recover the metric with a given psi vector")
    p.add_argument("--complex", required=True)
    lam(p)
    p.add_argument("--target", required=True)
    p.add_argument("--output", help="write the report (with trace) as JSON")
    p.add_argument("--max-iterations", type=int, default=100)
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--step-cap", type=float, default=1.0)
    p.add_argument("--jacobian", choices=JACOBIAN_MODES, default="analytic")
    p.add_argument("--force", action="store_true", help="skip the membership precheck")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("paths", help="fundamental edge paths (or cycles) by multiplicity vector")
    p.add_argument("--complex", required=True)
    p.add_argument("--cycles", action="store_true")
    p.add_argument("--non-backtracking", action="store_true",
                   help="forbid retracing an edge immediately (the class used for the polytope)")
    cap(p)
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("mlambda", help="total mass M(lambda): quadrature and Beta form")
    lam(p)
    p.set_defaults(func=cmd_mlambda)

    p = sub.add_parser("probe", help="degeneration table as CSV")
    p.add_argument("--scenario", required=True, help=", ".join(hexagon.SCENARIOS))
    p.add_argument("--grid", type=_grid, required=True, help="a,b,c or start:stop:count")
    p.add_argument("--fixed", type=_floats, default=[], help="fixed lengths, default 1")
    p.set_defaults(func=cmd_probe)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EX_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=err)
    try:
        return args.func(args, out)
    except DataError as exc:
        err.write(f"error: {exc}\n")
        return EX_DATAERR
    except PsiCoordError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EX_SOFTWARE
    except ValueError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EX_SOFTWARE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
