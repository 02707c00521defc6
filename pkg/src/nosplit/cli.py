"""Command-line front end.

Exit codes: 0 confirmed, 1 verification failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import re
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from nosplit import __version__, locc, signalling, unitarity
from nosplit.bloch import BlochAngles
from nosplit.grid import GridTooLarge, SweepGrid, ViolationReport, dump_json
from nosplit.signalling import QubitBasis

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

_PI_RE = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\*?pi(?:/(\d+(?:\.\d*)?))?$")


class UsageError(Exception):
    pass


def parse_angle(text: str, degrees: bool = False) -> float:
    """Parse a float or a multiple of pi such as ``pi/2``, ``3pi/4``, ``-pi``."""
    s = text.strip().replace(" ", "")
    m = _PI_RE.match(s)
    if m:
        coef = m.group(1)
        coef = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
        value = coef * math.pi / (float(m.group(2)) if m.group(2) else 1.0)
        return value
    try:
        value = float(s)
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r}") from None
    return math.radians(value) if degrees else value


def parse_angle_list(text: str | None, degrees: bool) -> tuple[float, ...] | None:
    if text is None:
        return None
    return tuple(parse_angle(t, degrees) for t in text.split(",") if t.strip())


def parse_pair(text: str, degrees: bool) -> BlochAngles:
    parts = [t for t in text.split(",") if t.strip()]
    if len(parts) != 2:
        raise UsageError(f"expected THETA,PHI, got {text!r}")
    try:
        return BlochAngles(parse_angle(parts[0], degrees), parse_angle(parts[1], degrees))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def grid_from_args(args: argparse.Namespace) -> SweepGrid:
    try:
        return SweepGrid(
            theta_steps=args.theta_steps,
            phi_steps=args.phi_steps,
            include_poles=args.include_poles,
            theta_values=parse_angle_list(args.theta_values, args.degrees),
            phi_values=parse_angle_list(args.phi_values, args.degrees),
        )
    except GridTooLarge as exc:
        raise UsageError(f"refusing oversize grid: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_report(report: ViolationReport, out: Path, fmt: str) -> list[Path]:
    if fmt == "json":
        path = out / f"{report.kind}.json"
        report.write_json(path, include_records=True)
        return [path]
    csv_path = out / f"{report.kind}.csv"
    json_path = out / f"{report.kind}.json"
    report.write_csv(csv_path)
    report.write_json(json_path)
    return [csv_path, json_path]


def _status(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_FAILED


def run_unitarity(args: argparse.Namespace) -> int:
    report = unitarity.sweep(grid_from_args(args), tol=args.tol)
    write_report(report, _out_dir(args), args.format)
    s = report.summary
    print(f"unitarity: {s['points']} points, {s['condition_met']} condition-met, "
          f"{s['zero_residual']} zero-residual, sets coincide: {s['sets_coincide']}")
    return _status(unitarity.passed(report))


def run_locc(args: argparse.Namespace) -> int:
    report = locc.sweep(grid_from_args(args))
    write_report(report, _out_dir(args), args.format)
    s = report.summary
    print(f"locc: {s['points']} points, A-identity max error {s['a_identity_max_error']:.3e}, "
          f"{s['violations']} entropy-increase witnesses")
    return _status(locc.passed(report))


def _matrix_entries(rho) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in rho.mat]


def signalling_payload(b1: QubitBasis, b2: QubitBasis) -> tuple[dict[str, Any], bool]:
    res = signalling.signalling_witness(b1, b2)
    ok = res.signalling
    payload = {
        "version": __version__,
        "kind": "signalling",
        "settings": {
            "basis1": {"theta": b1.up.theta, "phi": b1.up.phi},
            "basis2": {"theta": b2.up.theta, "phi": b2.up.phi},
            "baseline_tol": signalling.BASELINE_TOL,
            "witness_threshold": signalling.WITNESS_THRESHOLD,
        },
        "summary": {
            "pre_split_distance": res.pre_split_distance,
            "distance": res.distance,
            "degenerate": res.degenerate,
            "signalling_witness": ok,
            "reason": "degenerate" if res.degenerate else ("witness" if ok else "no witness"),
        },
        "mixture1": _matrix_entries(res.mixture1),
        "mixture2": _matrix_entries(res.mixture2),
    }
    return payload, ok


def _bases(args: argparse.Namespace) -> tuple[QubitBasis, QubitBasis]:
    return QubitBasis(parse_pair(args.basis1, args.degrees)), QubitBasis(parse_pair(args.basis2, args.degrees))


def run_signalling(args: argparse.Namespace) -> int:
    b1, b2 = _bases(args)
    payload, ok = signalling_payload(b1, b2)
    dump_json(payload, _out_dir(args) / "signalling.json")
    s = payload["summary"]
    print(f"signalling: pre-split distance {s['pre_split_distance']:.3e}, "
          f"post-split distance {s['distance']:.12g} ({s['reason']})")
    return _status(ok)


def check_point_payload(a1: BlochAngles, a2: BlochAngles, tol: float) -> dict[str, Any]:
    u = unitarity.residual(a1, a2, tol=tol)
    lr = locc.locc_violation(a1, a2)
    return {
        "version": __version__,
        "kind": "check-point",
        "a1": {"theta": a1.theta, "phi": a1.phi},
        "a2": {"theta": a2.theta, "phi": a2.phi},
        "canonical": {"a1": dataclasses.astuple(a1.canonical()), "a2": dataclasses.astuple(a2.canonical())},
        "unitarity": dataclasses.asdict(u),
        "locc": {**dataclasses.asdict(lr), "entropy_delta": lr.entropy_delta, "violation": lr.violation},
    }


def run_check_point(args: argparse.Namespace) -> int:
    a1 = parse_pair(args.a1, args.degrees)
    a2 = parse_pair(args.a2, args.degrees)
    payload = check_point_payload(a1, a2, args.tol)
    if args.format == "json":
        sys.stdout.write(dump_json(payload))
    else:
        u, lr = payload["unitarity"], payload["locc"]
        print(f"a1 = ({a1.theta!r}, {a1.phi!r})  a2 = ({a2.theta!r}, {a2.phi!r})")
        print(f"  overlap lhs     {u['lhs']!r}")
        print(f"  split product   {u['rhs']!r}")
        print(f"  residual        {u['residual']!r}  |residual| = {abs(u['residual']):.3e}")
        print(f"  condition met   {u['condition_met']}  witnesses {u['witnesses']}  case {u['case'] or '-'}")
        print(f"  |p| |q| |r|     {lr['p_abs']!r} {lr['q_abs']!r} {lr['r_abs']!r}")
        print(f"  A               {lr['A']!r}")
        print(f"  lambda pre/post {lr['lambda_pre']!r} {lr['lambda_post']!r}")
        print(f"  entropy pre/post {lr['entropy_pre']!r} {lr['entropy_post']!r}  violation {lr['violation']}")
    if args.out is not None:
        dump_json(payload, _out_dir(args) / "check_point.json")
    return EXIT_OK


def run_verify_all(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    grid = grid_from_args(args)
    b1, b2 = _bases(args)
    u_rep = unitarity.sweep(grid, tol=args.tol)
    write_report(u_rep, out, args.format)
    l_rep = locc.sweep(grid)
    write_report(l_rep, out, args.format)
    s_payload, s_ok = signalling_payload(b1, b2)
    dump_json(s_payload, out / "signalling.json")
    statuses = {
        "unitarity": _status(unitarity.passed(u_rep)),
        "locc": _status(locc.passed(l_rep)),
        "signalling": _status(s_ok),
    }
    overall = EXIT_OK if all(v == EXIT_OK for v in statuses.values()) else EXIT_FAILED
    dump_json({"version": __version__, "kind": "verify-all", "settings": {"grid": grid.describe(), "tol": args.tol},
               "summary": {"statuses": statuses, "exit": overall}}, out / "verify_all.json")
    for name, code in statuses.items():
        print(f"{name:<11} {'PASS' if code == EXIT_OK else 'FAIL'}")
    return overall


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theta-steps", type=int, default=36, help="theta grid steps (default 36)")
    common.add_argument("--phi-steps", type=int, default=24, help="phi grid steps (default 24)")
    common.add_argument("--theta-values", help="explicit comma-separated theta axis, overrides --theta-steps")
    common.add_argument("--phi-values", help="explicit comma-separated phi axis, overrides --phi-steps")
    common.add_argument("--tol", type=float, default=unitarity.DEFAULT_TOL, help="condition matching tolerance")
    common.add_argument("--out", default="reports", help="output directory (default ./reports)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--degrees", action="store_true", help="read angles in degrees")
    common.add_argument("--include-poles", action="store_true", help="place grid points on cell edges, poles included")

    bases = argparse.ArgumentParser(add_help=False)
    bases.add_argument("--basis1", default="0,0", help="THETA,PHI of the first basis' up state")
    bases.add_argument("--basis2", default="pi/2,0", help="THETA,PHI of the second basis' up state")

    parser = argparse.ArgumentParser(prog="nosplit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("unitarity", parents=[common], help="inner-product preservation sweep").set_defaults(func=run_unitarity)
    sub.add_parser("locc", parents=[common], help="entanglement sweep and A identity").set_defaults(func=run_locc)
    sub.add_parser("signalling", parents=[common, bases], help="signalling witness for two bases").set_defaults(func=run_signalling)
    cp = sub.add_parser("check-point", parents=[common], help="diagnostics for one angle pair")
    cp.add_argument("--a1", required=True, help="THETA,PHI")
    cp.add_argument("--a2", required=True, help="THETA,PHI")
    cp.set_defaults(func=run_check_point, out=None)
    sub.add_parser("verify-all", parents=[common, bases], help="run all three verifications").set_defaults(func=run_verify_all)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func: Callable[[argparse.Namespace], int] = args.func
    try:
        return func(args)
    except UsageError as exc:
        print(f"nosplit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"nosplit: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
