"""Command line interface: ``pgt order|base|greedy|dist|blocks|color|campaign``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time

from . import corpus as cp
from .bases import base_on_partitions, exact_min_base, greedy_base
from .campaigns import CAMPAIGNS, run_campaign, violations
from .distinguishing import distinguish_transitive, exact_dist_number
from .errors import CapExceeded, HypothesisError
from .gflinear import DEFAULT_POINT_CAP, MatrixGroup, as_permutation_group
from .permcore import PermGroup, minimal_nontrivial_block_system

COMMANDS = ("order", "base", "greedy", "dist", "blocks", "color", "campaign")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pgt", description=__doc__)
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("name", nargs="?", help="campaign name (for 'campaign')")
    ap.add_argument("--group", help="group spec: inline JSON or path to a JSON file")
    ap.add_argument("--modulo", help="normal subgroup spec (base and dist)")
    ap.add_argument("--q", type=int, help="base on colorings with q colors (base)")
    ap.add_argument("--oracle-cap", type=int, default=12)
    ap.add_argument("--point-cap", type=int, default=DEFAULT_POINT_CAP)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="write JSON lines here instead of stdout")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--filter", help="only campaign items whose label contains this")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _as_perm_group(G, point_cap: int) -> PermGroup:
    if isinstance(G, MatrixGroup):
        G, _ = as_permutation_group(G, "all", point_cap)
    return G


def _group_command(args) -> cp.ResultRecord:
    if not args.group:
        raise ValueError("--group is required")
    G = _as_perm_group(cp.parse_group(args.group), args.point_cap)
    N = _as_perm_group(cp.parse_group(args.modulo), args.point_cap) if args.modulo else None
    cache = cp.ResultCache() if os.environ.get("PGT_CACHE_DIR") else None
    params = json.dumps([args.modulo, args.q, args.oracle_cap])
    if cache is not None:
        hit = cache.get(G, args.command, params)
        if hit is not None:
            hit.detail = dict(hit.detail, cached=True)
            return hit
    t0 = time.perf_counter()
    witness, value, bound_checked, bound_value = None, None, False, None
    cmd = args.command
    if cmd == "order":
        value = G.order()
    elif cmd == "base" and args.q:
        value = base_on_partitions(G, args.q, oracle_cap=args.oracle_cap)
        witness = None
    elif cmd in ("base", "greedy"):
        cert = exact_min_base(G, N) if cmd == "base" else greedy_base(G, N)
        value, witness = len(cert), cert.points
    elif cmd == "dist":
        value, col = exact_dist_number(G, modulo=N, cap=args.oracle_cap)
        witness = col.colors
    elif cmd == "blocks":
        B = minimal_nontrivial_block_system(G)
        value = {"primitive": B is None, "blocks": B.blocks if B else None}
    elif cmd == "color":
        col = distinguish_transitive(G, cap=args.oracle_cap)
        value = {"colors": col.color_count, "construction": col.trace.get("construction")}
        witness = col.colors
        bound_checked = True
        bound_value = 48 * G.order() ** (1 / G.degree)
    rec = cp.ResultRecord(cp.group_id(G), cmd, value, witness, bound_checked, bound_value,
                          round((time.perf_counter() - t0) * 1000, 3))
    if cmd == "color" and not col.trace.get("bound_ok", True):
        rec.status = "fail"
    if cache is not None and rec.status == "pass":
        cache.put(G, rec, params)
    return rec


def _emit(records, out):
    lines = [r.to_json() for r in records]
    if out:
        with open(out, "a") as fh:
            fh.write("".join(line + "\n" for line in lines))
    else:
        for line in lines:
            print(line)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    random.seed(args.seed)
    try:
        if args.command == "campaign":
            if args.name not in CAMPAIGNS:
                print(f"unknown campaign {args.name!r}; choose from {sorted(CAMPAIGNS)}",
                      file=sys.stderr)
                return 2
            records = run_campaign(args.name, jobs=args.jobs, filter_label=args.filter)
        else:
            records = [_group_command(args)]
    except (ValueError, HypothesisError, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(records, args.out)
    return 1 if violations(records) else 0


if __name__ == "__main__":
    sys.exit(main())
