"""Command line entry point: ``indefq expand | verify | transform | catalog``."""
from __future__ import annotations

import argparse
import json
import sys

from . import catalog as cat
from .series import as_cutoff, fmt_cutoff, render, to_json
from .theta import ThetaBlock
from .transform import (DEFAULT_TOL, S_CUTOFF, check_S_g, check_S_theta, check_T_g, check_T_theta,
                        sample_taus)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# name -> (expression head, argument count range, numeric only)
NAMES = {
    "theta": ("theta", (2, 3)),
    "eta": ("eta", (0, 0)),
    "eta3": ("eta3", (0, 0)),
    "g": ("g", (4, 4)),
    "G": ("G", (3, 3)),
    "phi_add": ("phi_add", (3, 3)),
    "f": ("f", (1, 1)),
    "h": ("h", (1, 1)),
}


def parse_name(name: str) -> list:
    """'g 1 1 0 0' -> ['g', 1, 1, 0, 0] and so on for every registry name."""
    toks = name.split()
    if not toks:
        raise UsageError("empty function name")
    head, args = toks[0], toks[1:]
    if head == "vartheta11":
        raise UsageError("vartheta11 depends on z and has no exact q-expansion; it is numeric only")
    if head not in NAMES:
        raise UsageError(f"unknown function {head!r}; known: {', '.join(sorted(NAMES))}, vartheta11")
    expr_head, (lo, hi) = NAMES[head]
    if not (lo <= len(args) <= hi):
        raise UsageError(f"{head} takes {lo if lo == hi else f'{lo}-{hi}'} arguments")
    if head == "theta":
        if len(args) == 3 and args[2] != "signed":
            raise UsageError("the optional third theta argument is 'signed'")
        return ["theta", args[0], args[1]] + ([True] if len(args) == 3 else [])
    try:
        return [expr_head] + [int(a) for a in args]
    except ValueError:
        raise UsageError(f"{head} expects integer arguments") from None


def _taus(args):
    if args.tau:
        try:
            taus = [complex(t.replace("i", "j")) for t in args.tau]
        except ValueError:
            raise UsageError(f"bad --tau value in {args.tau}") from None
        if any(t.imag <= 0 for t in taus):
            raise UsageError("every --tau needs a positive imaginary part")
        return taus
    return sample_taus(args.seed)


def _emit_reports(reports, args, out):
    if args.no_timing:
        for r in reports:
            r.seconds = 0.0
    if args.format == "json":
        out.write(json.dumps([r.to_json() for r in reports], indent=1) + "\n")
    else:
        for r in reports:
            out.write(r.line() + "\n")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def cmd_expand(args, out):
    expr = parse_name(" ".join(args.name))
    cutoff = as_cutoff(args.cutoff or "10")
    try:
        val = cat.evaluate(expr, cutoff)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        if isinstance(val, ThetaBlock):
            doc = {"m": val.m, "cutoff": fmt_cutoff(val.cutoff),
                   "coefficients": {str(k): to_json(val.coefficient(k)) for k in range(val.m + 1)}}
        else:
            doc = to_json(val)
        out.write(json.dumps(doc, indent=1) + "\n")
    else:
        text = val.render() if isinstance(val, ThetaBlock) else render(val)
        out.write(text + ("\n" if text else ""))
    return EXIT_OK


def _records(args):
    records = cat.load_catalog(args.catalog) if args.catalog else cat.build_catalog()
    return cat.select(records, args.filter)


def cmd_verify(args, out):
    recs = _records(args)
    if not recs:
        raise UsageError(f"no catalog record matches {args.filter!r}")
    over = {"cutoff": args.cutoff, "tol": args.tol, "seed": args.seed,
            "taus": _taus(args) if args.tau else None}
    return _emit_reports(cat.run_catalog(recs, over), args, out)


def cmd_transform(args, out):
    kind, family = args.kind, args.family
    taus = _taus(args)
    tol = args.tol
    m = args.m
    if kind == "T" and family == "g":
        if m is None:
            raise UsageError("transform T g needs m")
        cutoff = args.cutoff or "8"
        reports = [check_T_g(m, p, j, cutoff) for p in range(2 * m + 1) for j in range(m + 1)]
    elif kind == "T" and family == "theta":
        reports = [check_T_theta(m or 1, args.cutoff or "8")]
    elif kind == "S" and family == "g":
        if m is None:
            raise UsageError("transform S g needs m")
        reports = [check_S_g(m, taus, args.cutoff or S_CUTOFF, tol or DEFAULT_TOL)]
    elif kind == "S" and family in ("theta", "theta_mhalf", "h"):
        which = {"theta": "theta_km_family", "theta_mhalf": "theta_mhalf_family", "h": "h_family"}[family]
        reports = [check_S_theta(which, m or 3, taus, tol or 1e-9)]
    else:
        raise UsageError(f"unsupported transform {kind} {family}")
    return _emit_reports(reports, args, out)


def cmd_catalog(args, out):
    recs = _records(args)
    if args.format == "json":
        out.write(cat.dump_catalog(recs) + "\n")
    else:
        for r in recs:
            out.write(f"{r.id}\t{r.mode}\t{r.cutoff}\t{r.anchor}\n")
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cutoff", help="exclusive q-exponent cutoff, e.g. 10 or 21/2")
    common.add_argument("--tol", type=float, help="numeric tolerance")
    common.add_argument("--tau", action="append", help="tau sample such as 0.1+1.1i (repeatable)")
    common.add_argument("--seed", type=int, default=0, help="seed for tau samples")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--filter", help="glob over record ids")
    common.add_argument("--no-timing", action="store_true", help="report seconds as 0 for byte-stable output")

    p = argparse.ArgumentParser(prog="indefq", description="exact q-series for indefinite theta sums")
    sub = p.add_subparsers(dest="cmd", required=True)
    e = sub.add_parser("expand", parents=[common], help="expand a named function")
    e.add_argument("name", nargs="+", help="e.g. 'g 1 1 0 0', 'theta 3 3', 'eta'")
    v = sub.add_parser("verify", parents=[common], help="run catalog identities")
    v.add_argument("--catalog", help="JSON catalog file instead of the built-in one")
    t = sub.add_parser("transform", parents=[common], help="S/T transformation checks")
    t.add_argument("kind", choices=("S", "T"))
    t.add_argument("family", choices=("g", "theta", "theta_mhalf", "h"))
    t.add_argument("m", type=int, nargs="?")
    c = sub.add_parser("catalog", parents=[common], help="list catalog records")
    c.add_argument("--catalog", help="JSON catalog file instead of the built-in one")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cutoff is not None:
        try:
            if as_cutoff(args.cutoff) <= 0:
                raise ValueError
        except (ValueError, ZeroDivisionError):
            parser.error(f"--cutoff must be a positive rational, got {args.cutoff!r}")
    if args.tol is not None and not args.tol > 0:
        parser.error("--tol must be positive")
    handler = {"expand": cmd_expand, "verify": cmd_verify, "transform": cmd_transform,
               "catalog": cmd_catalog}[args.cmd]
    try:
        return handler(args, out)
    except UsageError as exc:
        sys.stderr.write(f"indefq: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
