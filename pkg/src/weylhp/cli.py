"""Command line interface: ``weylhp {hp0,series,check,graphs}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .beg import (
    InconsistencyError,
    beg_is_zero,
    beg_prime,
    default_max_degree,
    hp0_report,
)
from .graphs import GraphSpec, catalog, catalog_independent, simple_graph_search
from .poly import ParseError, RankError, parse
from .sl2 import hw0_basis, hw0_dim_formula, invariant_hw0_basis, is_hw0
from .weyl import WeylGroup, reynolds

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3
THREADS_ENV = "WEYLHP_THREADS"


class InputError(ValueError):
    pass


def _threads(args):
    if args.threads is not None:
        return max(1, args.threads)
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        raise InputError(f"{THREADS_ENV} must be an integer")


def _group(args):
    if not args.group:
        raise InputError("--group is required")
    try:
        return WeylGroup.parse(args.group)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _max_degree(args, n):
    d = default_max_degree(n) if args.max_degree is None else args.max_degree
    if d < 0 or d % 2:
        raise InputError(f"--max-degree must be even and nonnegative, got {d}")
    return d


# -- commands --------------------------------------------------------------


def cmd_hp0(args):
    w = _group(args)
    report = hp0_report(w, _max_degree(args, w.rank), _threads(args))
    data = report.to_dict()
    if args.format == "json":
        return json.dumps(data, indent=2, sort_keys=True)
    rows = [(d["degree"], d["candidates"], d["solutions"]) for d in data["degrees"]]
    if args.format == "csv":
        return _csv(["degree", "candidates", "solutions"], rows)
    lines = [f"group {data['group']}  max_degree {data['max_degree']}"]
    for d in data["degrees"]:
        lines.append(f"  degree {d['degree']:>3}: {d['candidates']:>4} candidates, {d['solutions']} solutions")
        lines += [f"      {b}" for b in d["basis"]]
    lines.append(f"hp0 = {data['hp0']}   hh0 = {data['hh0']}")
    return "\n".join(lines)


def series_table(n, max_degree, w=None):
    rows = []
    for d in range(0, max_degree + 1, 2):
        formula = hw0_dim_formula(n, d)
        realized = len(hw0_basis(n, d))
        if formula != realized:
            raise InconsistencyError(f"rank {n} degree {d}: formula {formula} vs basis {realized}")
        row = {"degree": d, "formula": formula, "hw0_basis": realized}
        if w is not None:
            row["invariant"] = len(invariant_hw0_basis(w, d))
        rows.append(row)
    return rows


def cmd_series(args):
    if args.group:
        w = _group(args)
        n = w.rank
    elif args.rank is not None:
        w, n = None, args.rank
        if n < 2:
            raise InputError("--rank must be at least 2")
    else:
        raise InputError("series needs --group or --rank")
    max_degree = _max_degree(args, n)
    rows = series_table(n, max_degree, w)
    keys = ["degree", "formula", "hw0_basis"] + (["invariant"] if w else [])
    if args.format == "json":
        return json.dumps({"rank": n, "group": str(w) if w else None, "rows": rows}, indent=2, sort_keys=True)
    if args.format == "csv":
        return _csv(keys, [[r[k] for k in keys] for r in rows])
    lines = ["  ".join(f"{k:>10}" for k in keys)]
    lines += ["  ".join(f"{r[k]:>10}" for k in keys) for r in rows]
    return "\n".join(lines)


def _read_input(args, w):
    text = args.input
    if text is None:
        raise InputError("check needs an input polynomial, pfaffian word or graph JSON")
    if os.path.isfile(text):
        with open(text) as fh:
            text = fh.read()
    text = text.strip()
    try:
        if text.startswith("{"):
            g = GraphSpec.from_dict(json.loads(text))
            return str(g), g.compact().word(w.rank).expand()
        return text, parse(text, w.rank)
    except (ParseError, RankError, ValueError, KeyError) as exc:
        raise InputError(f"cannot parse input: {exc}") from exc


def cmd_check(args):
    w = _group(args)
    label, p = _read_input(args, w)
    if not p.is_xy_only():
        raise InputError("input must only involve x and y variables")
    inv = reynolds(w, p)
    verdict = {
        "group": str(w),
        "input": label,
        "invariant_input": inv == p,
        "reynolds_zero": inv.is_zero(),
        "is_hw0": is_hw0(inv),
        "beg_prime_zero": beg_prime(w, inv).is_zero(),
        "beg_apply_zero": beg_is_zero(w, inv),
    }
    if verdict["beg_apply_zero"] and not verdict["beg_prime_zero"]:
        raise InconsistencyError("E_n = 0 but the restricted equation is nonzero")
    if args.format == "json":
        return json.dumps(verdict, indent=2, sort_keys=True)
    if args.format == "csv":
        keys = list(verdict)
        return _csv(keys, [[verdict[k] for k in keys]])
    return "\n".join(f"{k}: {v}" for k, v in verdict.items())


def cmd_graphs(args):
    w = _group(args)
    simple = simple_graph_search(w)
    out = {
        "group": str(w),
        "simple_graph": {
            "degree": simple.degree,
            "candidates": len(simple.candidates),
            "dimension": simple.dimension,
            "status": simple.status,
            "solutions": [c.to_dict() for c in simple.combinations()],
        },
    }
    entries = []
    if w.family == "B":
        entries = catalog(w, {w.rank: simple.combination()} if simple.dimension == 1 else None)
        out["catalog"] = [e.to_dict() for e in entries]
        out["catalog_size"] = len(entries)
        out["catalog_verified"] = sum(e.verified for e in entries)
        out["catalog_independent"] = catalog_independent([e for e in entries if e.verified], w)
    if args.format == "json":
        return json.dumps(out, indent=2, sort_keys=True)
    lines = [f"group {w}: simple graph search at degree {simple.degree}: {simple.status}"]
    for c in simple.combinations():
        lines.append(f"  {c}")
    for e in entries if w.family == "B" else []:
        lines.append(f"  partition {list(e.partition)}: degree {e.degree} verified={e.verified}  {e.combination}")
    if args.format == "csv":
        rows = [[e["partition"], e["degree"], e["verified"]] for e in out.get("catalog", [])]
        return _csv(["partition", "degree", "verified"], rows)
    return "\n".join(lines)


def _csv(header, rows):
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    wr.writerows(rows)
    return buf.getvalue().rstrip("\n")


# -- entry point -----------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="weylhp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, group_required=True):
        p.add_argument("--group", "-g", help="group designator such as B3 or D2")
        p.add_argument("--max-degree", type=int, default=None)
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--threads", type=int, default=None, help=f"worker threads (default ${THREADS_ENV} or 1)")
        p.add_argument("--out", help="write output to this file")
        return p

    common(sub.add_parser("hp0", help="dimension of HP0 by degree"))
    s = common(sub.add_parser("series", help="highest-weight-0 dimensions by degree"))
    s.add_argument("--rank", type=int)
    c = common(sub.add_parser("check", help="test one polynomial, word or graph"))
    c.add_argument("input", nargs="?", help="polynomial text, X[i,j] word, graph JSON, or a file")
    common(sub.add_parser("graphs", help="simple graph search and solution catalog"))
    return parser


COMMANDS = {"hp0": cmd_hp0, "series": cmd_series, "check": cmd_check, "graphs": cmd_graphs}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        text = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
