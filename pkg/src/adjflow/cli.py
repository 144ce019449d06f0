"""Command-line front end: ``adjflow construct|verify|integrate|catalog``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__, catalog
from .construct import build_system, pullback, user_integral
from .expr.parser import ParseError
from .expr.zero import SamplePlan
from .odeint import IntegrationError, TrajectoryRequest, conservation_drift, integrate
from .sysfile import SystemFileError, load_system
from .verify import VerificationReport, field_text, verify_spec

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
CONSTRUCT_SCHEMA = "adjflow.construct/1"
TRAJECTORY_SCHEMA = "adjflow.trajectory/1"
CATALOG_SCHEMA = "adjflow.catalog/1"


class InputError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("ADJFLOW_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"ADJFLOW_SEED must be an integer, got {raw!r}") from None


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit(doc: dict, args) -> None:
    text = dumps(doc)
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    if getattr(args, "json", False):
        sys.stdout.write(text)


def plan_from(args) -> SamplePlan:
    seed = args.seed if args.seed is not None else default_seed()
    kw = {"seed": seed}
    if args.samples is not None:
        if args.samples < 1:
            raise InputError("--samples must be positive")
        kw["count"] = args.samples
    if args.tol is not None:
        if args.tol <= 0:
            raise InputError("--tol must be positive")
        kw["zero_tol"] = args.tol
    return SamplePlan(**kw)


def floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from None


# -- human-readable rendering ---------------------------------------------------


def render_report(report: VerificationReport) -> str:
    spec = report.spec
    lines = [f"system {spec.name or '<unnamed>'} (n={spec.n})"]
    for v, c in zip(spec.state_vars, report.field.components):
        lines.append(f"  {v}' = {field_text(c, spec.state_vars)}")
    hyp = report.hypotheses
    lines.append(f"  det(DPhi) = {hyp.det}")
    lines.append(f"  hypotheses: {'ok' if hyp.theorem_applies else 'not certified'}"
                 + (f" [{', '.join(hyp.flags)}]" if hyp.flags else ""))
    for r in report.integrals:
        lines.append(f"  {r.label} = {r.H}: {r.verdict.value}")
    if report.independence:
        ind = report.independence
        lines.append(f"  independence: rank {ind.rank}/{ind.m} ({ind.method}, "
                     f"pass fraction {ind.pass_fraction:.3f})")
    for m in report.mismatches:
        where = m.get("component", m.get("integral", ""))
        lines.append(f"  mismatch: {m['kind']} {where}")
    expect = f" (expected {spec.expect})" if spec.expect else ""
    lines.append(f"  classification: {report.classification.value}{expect}")
    return "\n".join(lines)


# -- subcommands ----------------------------------------------------------------


def cmd_construct(args) -> int:
    spec = load_system(args.input)
    field = build_system(spec)
    for v, c in zip(spec.state_vars, field.components):
        print(f"{v}' = {field_text(c, spec.state_vars)}")
    for m in field.mismatches:
        print(f"mismatch with expected_F component {m['component']}", file=sys.stderr)
    doc = {
        "schema": CONSTRUCT_SCHEMA,
        "name": spec.name,
        "state_vars": list(spec.state_vars),
        "F": [field_text(c, spec.state_vars) for c in field.components],
        "expectation_mismatches": list(field.mismatches),
    }
    emit(doc, args)
    return EXIT_FAIL if field.mismatches else EXIT_OK


def cmd_verify(args) -> int:
    spec = load_system(args.input)
    report = verify_spec(spec, plan_from(args))
    if not args.json:
        print(render_report(report))
    emit(report.to_dict(), args)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_integrate(args) -> int:
    spec = load_system(args.input)
    x0 = floats(args.x0) if args.x0 else spec.x0
    if x0 is None:
        raise InputError("no initial state: pass --x0 or set x0 in the system file")
    field = build_system(spec)
    Hs = [pullback(spec, I, lab) for lab, I in spec.reduced_integrals]
    Hs += [user_integral(spec, H, lab) for lab, H in spec.state_integrals]
    Hs = [H for H in Hs if not (H.constancy and H.constancy.is_constant)]
    try:
        req = TrajectoryRequest(field, tuple(float(c) for c in x0), args.t or spec.t_end or 10.0,
                                args.rtol, args.atol)
    except ValueError as err:
        raise InputError(str(err)) from None
    try:
        traj = integrate(req)
    except IntegrationError as err:
        print(f"integration failed: {err}", file=sys.stderr)
        return EXIT_FAIL
    drift = conservation_drift(traj, Hs, spec.state_vars)
    if not args.json:
        print(f"steps {traj.steps} (rejected {traj.rejected}), stopped at t={traj.ts[-1]:.6g}: {traj.reason}")
        print("final state " + ", ".join(f"{v:.12g}" for v in traj.final))
        for lab, d, e in zip(drift.labels, drift.drift, drift.errors):
            print(f"  drift {lab}: {e}" if d is None else f"  drift {lab}: {d:.3e}")
    doc = {
        "schema": TRAJECTORY_SCHEMA,
        "name": spec.name,
        "x0": list(req.x0),
        "t_end": req.t_end,
        "rtol": req.rtol,
        "atol": req.atol,
        "ts": traj.ts,
        "xs": [[float(v) for v in x] for x in traj.xs],
        "rejected": traj.rejected,
        "drift": drift.to_dict(),
    }
    emit(doc, args)
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        rows = catalog.list_entries()
        if args.json:
            emit({"schema": CATALOG_SCHEMA, "entries": rows}, args)
        else:
            for r in rows:
                print(f"{r['id']:<14} n={r['n']}  {r['expect']:<30} {r['locus']}")
        return EXIT_OK
    if args.action == "export":
        if not args.id:
            raise InputError("catalog export needs an entry id")
        text = catalog.get(args.id).export()
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return EXIT_OK
    # run
    if args.all == bool(args.id):
        raise InputError("catalog run needs exactly one of ID or --all")
    plan = plan_from(args)
    ids = list(catalog.ENTRIES) if args.all else [args.id]
    catalog.get(ids[0])
    results = [catalog.run(i, plan) for i in ids]
    if not args.json:
        for res in results:
            drift = f"  drift {res.drift.max_drift:.1e}" if res.drift else ""
            status = "ok  " if res.passed else "FAIL"
            print(f"{status} {res.entry.id:<14} {res.report.classification.value}{drift}")
    doc = {
        "schema": CATALOG_SCHEMA,
        "version": __version__,
        "plan": plan.to_dict(),
        "entries": [r.to_dict() for r in results],
        "passed": all(r.passed for r in results),
    }
    emit(doc, args)
    return EXIT_OK if doc["passed"] else EXIT_FAIL


# -- argument parsing -----------------------------------------------------------


def _sampling(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", type=int, help="sample points per numeric check (default 200)")
    p.add_argument("--seed", type=int, help="sampling seed (default $ADJFLOW_SEED or 0)")
    p.add_argument("--tol", type=float, help="numeric zero tolerance (default 1e-9)")


def _output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="print the machine-readable report")
    p.add_argument("-o", "--output", help="write the machine-readable report to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adjflow", description="Construct and verify integrable vector fields.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build F and print its components")
    p.add_argument("-i", "--input", required=True, help="system file")
    _output(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="full verification report")
    p.add_argument("-i", "--input", required=True, help="system file")
    _sampling(p)
    _output(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("integrate", help="integrate a trajectory and measure drift")
    p.add_argument("-i", "--input", required=True, help="system file")
    p.add_argument("--x0", help="initial state, comma separated (default: file's x0)")
    p.add_argument("--t", type=float, help="final time (default 10)")
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--atol", type=float, default=1e-12)
    _output(p)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("catalog", help="list, run or export the built-in examples")
    p.add_argument("action", choices=("list", "run", "export"))
    p.add_argument("id", nargs="?", help="entry id")
    p.add_argument("--all", action="store_true", help="run every entry")
    _sampling(p)
    _output(p)
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemFileError as err:
        print(f"error: {err}", file=sys.stderr)
    except ParseError as err:
        print(f"error: {err}", file=sys.stderr)
    except (InputError, KeyError, OSError, ValueError) as err:
        msg = err.args[0] if isinstance(err, KeyError) and err.args else err
        print(f"error: {msg}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
