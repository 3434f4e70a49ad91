"""lambda-lab command line.

Exit codes: 0 exact result (and agreement with any claim), 1 violations
found / decision infeasible, 2 bounds only, 3 discrepancy with a published
claim, 4 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .constructions import construct_with_method
from .errors import KeyParseError, LambdaLabError, MissingLabelError, OutOfRegimeError, ResourceLimitError
from .graphs import from_adjlist, to_adjlist, to_dot
from .keys import UNRESOLVED, InstanceKey, expected_lambda
from .labeling import Labeling, render_grid, verify
from .harness import run_table, solve_key, status_of
from .solver import SearchConfig, decide
from .store import ResultRecord, ResultStore

EXIT_OK, EXIT_VIOLATION, EXIT_BOUNDS, EXIT_DISCREPANCY, EXIT_INPUT = 0, 1, 2, 3, 4


class _InputError(Exception):
    pass


def _key(text: str) -> InstanceKey:
    try:
        return InstanceKey.parse(text)
    except KeyParseError as e:
        raise _InputError(str(e)) from None


def _cfg(args, target=None) -> SearchConfig:
    try:
        return SearchConfig(node_limit=args.limit_nodes, time_limit=args.limit_secs,
                            target_span=target, workers=args.threads)
    except ValueError as e:
        raise _InputError(str(e)) from None


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as e:
        raise _InputError(f"cannot write {path}: {e.strerror}") from None


def cmd_build(args) -> int:
    key = _key(args.key)
    g = key.target()
    if args.format == "dot":
        text = to_dot(g, name=key.slug)
    elif args.format == "adjlist":
        text = to_adjlist(g)
    else:
        text = render_grid(g, shape=(key.m, key.n))
    _write(args.out, text)
    return EXIT_OK


def cmd_solve(args) -> int:
    key = _key(args.key)
    store = ResultStore(args.store)
    if args.target is not None:
        cfg = _cfg(args, args.target)
        try:
            res = decide(key.target(), key.h, key.k, cfg, instance=str(key))
        except ResourceLimitError as e:
            print(f"{key}: undecided at span {args.target} (limit after {e.nodes} nodes)")
            return EXIT_BOUNDS
        if not res.feasible:
            print(f"{key}: infeasible at span {args.target} ({res.nodes_explored} nodes)")
            return EXIT_VIOLATION
        path = store.put_witness(key, res.witness)
        print(f"{key}: feasible at span {args.target}, witness span {res.witness.span} -> {store.root / path}")
        return EXIT_OK
    rec, cached = solve_key(key, _cfg(args), store, use_cache=not args.no_cache)
    where = " (cached)" if cached else ""
    if rec.computed is None:
        hi = "?" if rec.upper is None else rec.upper
        print(f"{key}: lambda in [{rec.lower}, {hi}] (limit reached){where}")
        return EXIT_BOUNDS
    print(f"{key}: span {rec.computed} claimed {rec.claimed} status {rec.status}{where}")
    return EXIT_DISCREPANCY if rec.status in ("discrepancy", "paper-discrepancy") else EXIT_OK


def cmd_label(args) -> int:
    key = _key(args.key)
    cfg = SearchConfig(time_limit=args.limit_secs) if args.limit_secs else None
    try:
        lab, method = construct_with_method(key, args.scheme, cfg)
    except OutOfRegimeError as e:
        raise _InputError(str(e)) from None
    except ResourceLimitError as e:
        print(f"{key}: unresolved (solver limit; lambda in [{e.lower}, {e.upper}])")
        return EXIT_BOUNDS
    store = ResultStore(args.store)
    path = store.put_witness(key, lab)
    if store.get(key, count=False) is None:
        claimed = expected_lambda(key)
        store.put(key, ResultRecord(str(key), claimed, None, None, lab.span, method, path,
                                    status_of(key, None)))
    sys.stdout.write(render_grid(key.target(), lab, shape=(key.m, key.n)))
    claimed = expected_lambda(key)
    print(f"{key}: span {lab.span} by {method}; claimed {claimed}")
    if claimed != UNRESOLVED and lab.span != claimed:
        return EXIT_DISCREPANCY
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        g = from_adjlist(Path(args.graph).read_text(encoding="utf-8"))
        lab_text = Path(args.labeling).read_text(encoding="utf-8")
    except (OSError, ValueError) as e:
        raise _InputError(f"cannot read input: {e}") from None
    try:
        raw = json.loads(lab_text)["labels"]
    except (ValueError, KeyError, TypeError) as e:
        raise _InputError(f"bad labeling file: {e}") from None
    if len(raw) < g.vertex_count or any(x is None for x in raw):
        missing = [v for v in range(g.vertex_count) if v >= len(raw) or raw[v] is None]
        print("unlabeled: " + " ".join(map(str, missing)))
        return EXIT_INPUT
    try:
        bad = verify(g, Labeling(tuple(raw)), args.h, args.k)
    except (ValueError, MissingLabelError) as e:
        raise _InputError(str(e)) from None
    for v in bad:
        print(v)
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_table(args) -> int:
    store = ResultStore(args.store)
    cfg = SearchConfig(node_limit=args.limit_nodes, time_limit=args.limit_secs)
    run = run_table(args.family, args.max_m, args.max_n, store, cfg)
    if args.out:
        _write(args.out, run.to_csv())
    else:
        sys.stdout.write(run.to_csv())
    if args.pretty:
        sys.stdout.write(run.pretty())
    sys.stderr.write(run.summary())
    sys.stderr.write(f"solver calls: {run.solver_calls}, cache hits: {run.cache_hits}\n")
    if run.discrepancies():
        return EXIT_DISCREPANCY
    if any(r.status == "bounds" for r in run.rows):
        return EXIT_BOUNDS
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lambda-lab", description="L(h,k)-labelings of path and cycle products")
    p.add_argument("--store", default=None, help="result store directory (default $LAMBDA_LAB_STORE or ~/.lambda_lab)")
    sub = p.add_subparsers(dest="command", required=True)

    def limits(sp):
        sp.add_argument("--limit-nodes", type=int, default=None)
        sp.add_argument("--limit-secs", type=float, default=None)

    b = sub.add_parser("build", help="write a product graph")
    b.add_argument("key")
    b.add_argument("--format", choices=("dot", "adjlist", "grid"), default="dot")
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("solve", help="exact lambda with a persisted witness")
    s.add_argument("key")
    s.add_argument("--target", type=int, default=None, help="decide feasibility at this span only")
    limits(s)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--no-cache", action="store_true")
    s.set_defaults(func=cmd_solve)

    lb = sub.add_parser("label", help="build a labeling from the known schemes")
    lb.add_argument("key")
    lb.add_argument("--scheme", choices=("auto", "formula", "tile", "solver"), default="auto")
    lb.add_argument("--limit-secs", type=float, default=None)
    lb.set_defaults(func=cmd_label)

    v = sub.add_parser("verify", help="check a labeling file against a graph file")
    v.add_argument("graph", help="adjacency list file ('n m' header, one 'u v' edge per line)")
    v.add_argument("labeling", help='JSON file with a "labels" list')
    v.add_argument("h", type=int, nargs="?", default=1)
    v.add_argument("k", type=int, nargs="?", default=1)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="claimed vs constructed vs exact over a size range")
    t.add_argument("--family", type=str.upper, choices=("PP", "PC", "CC"), default="PC")
    t.add_argument("--max-m", type=int, default=6)
    t.add_argument("--max-n", type=int, default=12)
    t.add_argument("--out", default=None, help="CSV output path (default stdout)")
    t.add_argument("--pretty", action="store_true")
    limits(t)
    t.set_defaults(func=cmd_table)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except _InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (LambdaLabError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
