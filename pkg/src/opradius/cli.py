"""Command-line entry point.

Results go to stdout as JSON or CSV; everything meant for people goes to
stderr.  Exit codes: 0 success, 1 computation error (or violations for
``verify``), 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

from . import __version__, bounds, matrix_json
from .errors import (ConvergenceFailure, InvalidMatrix, InvalidSpec, IOFailure, NotApplicable,
                     OpRadiusError, ParameterOutOfRange, WrongInputShape)
from .matcore import spectral_norm
from .radii import euclidean_radius, numerical_radius
from .transforms import aluthge_t, offdiag_block


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    """Validated command-line options."""

    subcommand: str
    inputs: dict = field(default_factory=dict)
    tol: float | None = None
    t: float | None = None
    r: float | None = None
    format: str = "json"
    seed: int = 0
    dims: tuple = ()
    trials: int = 1
    out: str | None = None
    extra: dict = field(default_factory=dict)


# -- argument types ----------------------------------------------------------

def _real_in(name, lo, hi, lo_open=False):
    def parse(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} expects a number, got {text!r}") from None
        bad = not math.isfinite(v) or v > hi or v < lo or (lo_open and v == lo)
        if bad:
            left = "(" if lo_open else "["
            raise argparse.ArgumentTypeError(f"{name} must lie in {left}{lo:g}, {hi:g}], got {text}")
        return v
    return parse


def _positive_int(name):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} expects an integer, got {text!r}") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be >= 1, got {v}")
        return v
    return parse


def _dims(text):
    try:
        vals = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"--dim expects integers like 3 or 2,3,5, got {text!r}") from None
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError(f"--dim entries must be >= 1, got {text}")
    return vals


def _seed(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--seed expects an integer, got {text!r}") from None
    if not -2**63 <= v < 2**64:
        raise argparse.ArgumentTypeError("--seed must fit in 64 bits")
    return v


_TOL = _real_in("--tol", 0.0, math.inf, lo_open=True)
_T = _real_in("--t", 0.0, 1.0)
_R = _real_in("--r", 1.0, 2.0)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="opradius", description="Certified numerical radius enclosures and bound registry.")
    p.add_argument("--version", action="store_true", help="print the version and exit")
    p.add_argument("--list-bounds", action="store_true", help="print the bound registry as JSON and exit")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("compute", help="enclose w(T) or w_e(B, C)")
    c.add_argument("--input", required=True, help="matrix JSON (T, or B for we)")
    c.add_argument("--input2", help="second matrix JSON (C), required for --quantity we")
    c.add_argument("--quantity", choices=("w", "we"), default="w")
    c.add_argument("--tol", type=_TOL, help="absolute enclosure width (default 1e-8 * max(1, scale))")
    c.add_argument("--format", choices=("json", "csv"), default="json")

    b = sub.add_parser("bounds", help="evaluate registered bounds")
    b.add_argument("--input", help="matrix JSON: T, and B when --input2 is given")
    grp = b.add_mutually_exclusive_group()
    grp.add_argument("--input2", help="matrix JSON for C")
    grp.add_argument("--x", help="matrix JSON for the upper-right block X")
    b.add_argument("--y", help="matrix JSON for the lower-left block Y")
    b.add_argument("--set", default="all", help="'all' or a comma-separated list of bound ids")
    b.add_argument("--t", type=_T, help="parameter t in [0, 1] (default 0.5)")
    b.add_argument("--r", type=_R, help="parameter r in [1, 2] (default 1.5)")
    b.add_argument("--tol", type=_TOL, help="relative tolerance of the reference enclosures (default 1e-8)")
    b.add_argument("--format", choices=("json", "csv"), default="json")

    v = sub.add_parser("verify", help="run a property-verification campaign")
    v.add_argument("--ensemble", default="ginibre",
                   help="ensemble kind, a comma-separated list, or 'default' for the standard campaign")
    v.add_argument("--dim", type=_dims,
                   help="dimension or comma-separated dimensions (default 3; 2,3,5 for --ensemble default)")
    v.add_argument("--trials", type=_positive_int("--trials"), default=100)
    v.add_argument("--seed", type=_seed, default=0)
    v.add_argument("--rank", type=int, help="rank for rank_deficient (default floor(n/2))")
    v.add_argument("--base", default="ginibre", help="base kind for the scaled ensemble")
    v.add_argument("--scalar", type=complex, default=complex(2.0, -1.5), help="scalar for the scaled ensemble")
    v.add_argument("--properties", default="all", help="'all' or a comma-separated list of properties")
    v.add_argument("--workers", type=_positive_int("--workers"), default=1)
    v.add_argument("--out", help="report path (default: stdout)")
    v.add_argument("--format", choices=("json", "csv"), default="json")

    a = sub.add_parser("aluthge", help="t-Aluthge transform of a matrix")
    a.add_argument("--input", required=True)
    a.add_argument("--t", type=_T, default=0.5)
    a.add_argument("--radius", action="store_true", help="also enclose the numerical radius of the transform")
    a.add_argument("--tol", type=_TOL)

    o = sub.add_parser("offdiag", help="assemble [[0, X], [Y, 0]]")
    o.add_argument("--x", required=True)
    o.add_argument("--y", required=True)
    o.add_argument("--radius", action="store_true", help="also enclose the numerical radius of the block")
    o.add_argument("--tol", type=_TOL)
    return p


# -- helpers -----------------------------------------------------------------

def _load(flag, path):
    try:
        return matrix_json.load(path)
    except OSError as exc:
        raise UsageError(f"{flag}: cannot read {path}: {exc.strerror or exc}") from None
    except InvalidMatrix as exc:
        raise UsageError(f"{flag}: {path}: {exc}") from None


def _csv(rows, fields) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, allow_nan=False) + "\n"


def _enclosure_obj(enc) -> dict:
    d = enc.to_dict()
    return {"lower": d["lower"], "upper": d["upper"], "witness": d["witness"]}


# -- subcommands -------------------------------------------------------------

def _compute(args) -> str:
    a = _load("--input", args.input)
    if args.quantity == "we":
        if args.input2 is None:
            raise UsageError("compute: --quantity we needs --input2")
        c = _load("--input2", args.input2)
        if c.shape != a.shape:
            raise UsageError(f"compute: --input is {a.shape[0]}x{a.shape[0]} but --input2 is {c.shape[0]}x{c.shape[0]}")
        enc = euclidean_radius(a, c, args.tol)
    else:
        if args.input2 is not None:
            raise UsageError("compute: --input2 only applies to --quantity we")
        enc = numerical_radius(a, args.tol)
    obj = _enclosure_obj(enc)
    if args.format == "csv":
        wit = enc.witness
        row = {"quantity": args.quantity, "lower": repr(enc.lower), "upper": repr(enc.upper),
               "theta": wit.get("theta", ""), "s": wit.get("s", ""), "phi": wit.get("phi", "")}
        return _csv([row], ("quantity", "lower", "upper", "theta", "s", "phi"))
    return _dump(obj)


def _bounds(args) -> str:
    mats = {}
    if args.input is not None:
        t = _load("--input", args.input)
        mats["T"] = t
        if args.input2 is not None:
            mats["B"] = t
            mats["C"] = _load("--input2", args.input2)
    elif args.input2 is not None:
        raise UsageError("bounds: --input2 needs --input")
    if (args.x is None) != (args.y is None):
        raise UsageError("bounds: --x and --y must be given together")
    if args.x is not None:
        mats["X"] = _load("--x", args.x)
        mats["Y"] = _load("--y", args.y)
    if not mats:
        raise UsageError("bounds: give --input (optionally with --input2) and/or --x with --y")
    try:
        cx = bounds.Context(**mats, t=args.t, r=args.r)
    except WrongInputShape as exc:
        raise UsageError(f"bounds: {exc}") from None

    if args.set.strip() == "all":
        ids = bounds.applicable_ids(cx)
        explicit = False
    else:
        try:
            ids = [bounds.parse_bound_id(s) for s in args.set.split(",") if s.strip()]
        except WrongInputShape as exc:
            raise UsageError(f"--set: {exc}; see --list-bounds") from None
        explicit = True
        for id in ids:
            info = bounds.REGISTRY[id]
            if not cx.has(info.inputs):
                raise UsageError(f"--set: {id} needs inputs {', '.join(info.inputs)}")
    results = []
    for id in ids:
        try:
            results.append(bounds.evaluate(id, context=cx))
        except NotApplicable as exc:
            if explicit:
                raise
            print(f"skipped {id}: {exc}", file=sys.stderr)
    rtol = args.tol if args.tol is not None else 1e-8
    refs = {}
    for target in sorted({r.target for r in results}):
        refs[target] = bounds.reference(target, cx, rtol)
    if args.format == "csv":
        rows = []
        for r in results:
            ref = refs[r.target]
            rows.append({"id": r.id, "kind": r.kind, "target": r.target, "value": repr(r.value),
                         "upper": "" if r.upper is None else repr(r.upper),
                         "ref_lower": repr(ref.lower), "ref_upper": repr(ref.upper),
                         "inputs_digest": r.inputs_digest})
        return _csv(rows, ("id", "kind", "target", "value", "upper", "ref_lower", "ref_upper",
                           "inputs_digest"))
    return _dump({"bounds": [r.to_dict() for r in results],
                  "references": {k: _enclosure_obj(v) for k, v in refs.items()}})


def _verify(args):
    from .harness import EnsembleSpec, default_specs, emit_report, run_campaign
    from .harness.report import render

    try:
        if args.ensemble == "default":
            specs = default_specs(args.seed, args.trials, args.dim or (2, 3, 5))
        else:
            specs = [EnsembleSpec(k.strip(), n, args.seed, args.trials, rank=args.rank,
                                  base=args.base, scalar=args.scalar)
                     for k in args.ensemble.split(",") if k.strip() for n in args.dim or (3,)]
        report = run_campaign(specs, args.properties, workers=args.workers)
    except InvalidSpec as exc:
        raise UsageError(f"verify: {exc}") from None
    s = report.summary
    print(f"{s['trials']} trials, {s['violation_count']} violations, {s['warning_count']} warnings, "
          f"{s['error_count']} errors in {report.wall_time:.1f}s", file=sys.stderr)
    for prop, count in s["violations_by_property"].items():
        if count:
            print(f"  {prop}: {count} violations", file=sys.stderr)
    if args.out is not None:
        emit_report(report, args.format, args.out)
        text = ""
    else:
        text = render(report, args.format)
    code = 0 if s["violation_count"] == 0 and s["error_count"] == 0 else 1
    return text, code


def _aluthge(args) -> str:
    a = _load("--input", args.input)
    tt = aluthge_t(a, args.t)
    obj = {"t": args.t, "matrix": matrix_json.matrix_to_obj(tt), "norm": spectral_norm(tt)}
    if args.radius:
        obj["w"] = _enclosure_obj(numerical_radius(tt, args.tol))
    return _dump(obj)


def _offdiag(args) -> str:
    x = _load("--x", args.x)
    y = _load("--y", args.y)
    if x.shape != y.shape:
        raise UsageError(f"offdiag: --x is {x.shape[0]}x{x.shape[0]} but --y is {y.shape[0]}x{y.shape[0]}")
    m = offdiag_block(x, y)
    obj = {"matrix": matrix_json.matrix_to_obj(m), "norm": spectral_norm(m)}
    if args.radius:
        obj["w"] = _enclosure_obj(numerical_radius(m, args.tol))
    return _dump(obj)


def _list_bounds() -> str:
    return json.dumps([info.to_dict() for info in bounds.list_bounds()], indent=1) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.version:
            sys.stdout.write(f"opradius {__version__}\n")
            return 0
        if args.list_bounds:
            sys.stdout.write(_list_bounds())
            return 0
        if args.command is None:
            raise UsageError("opradius: a subcommand is required (compute, bounds, verify, aluthge, offdiag)")
        code = 0
        if args.command == "compute":
            text = _compute(args)
        elif args.command == "bounds":
            text = _bounds(args)
        elif args.command == "verify":
            text, code = _verify(args)
        elif args.command == "aluthge":
            text = _aluthge(args)
        else:
            text = _offdiag(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (ParameterOutOfRange, WrongInputShape) as exc:
        print(f"opradius: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceFailure, NotApplicable, IOFailure, OpRadiusError) as exc:
        print(f"opradius: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
