"""Verification campaigns over the built-in corpora.

Each campaign is a list of independent items; running an item yields a
:class:`ResultRecord` whose status is ``pass``, ``fail`` or ``skip``
(cap exceeded).  Items are plain data so they can be farmed out to a
process pool.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable

from . import corpus as cp
from .affine import (
    affine_bridge,
    alt_induced_base,
    alt_induced_pipeline,
    boundedK1_base,
    imprimitive_module,
    repeated_module_base,
    trivK1_base,
)
from .bases import (
    base_on_partitions,
    exact_min_base,
    exhaustive_min_base_size,
    greedy_base,
    is_base,
)
from .distinguishing import (
    Coloring,
    construct_large_bottom,
    construct_small_bottom,
    construct_trivial_bottom,
    distinguish_transitive,
    exact_dist_number,
    is_distinguishing,
    transport_block_coloring,
)
from .errors import CapExceeded
from .gflinear import as_permutation_group, block_diagonal
from .permcore import (
    BlockSystem,
    PermGroup,
    block_action,
    linking_structure,
)


def _ceil_root(d: int, m: int) -> int:
    c = 1
    while c ** m < d:
        c += 1
    return c


def _ceil_log(d: int, q: int) -> int:
    b = 0
    while q ** b < d:
        b += 1
    return b


def _record(G, op, label, value, ok, t0, **kw) -> cp.ResultRecord:
    return cp.ResultRecord(
        group_id=cp.group_id(G), operation=op, value=value, label=label,
        status="pass" if ok else "fail", elapsed_ms=round((time.perf_counter() - t0) * 1000, 3),
        **kw,
    )


# item runners ------------------------------------------------------------


def _lemma21(item):
    label, spec, q = item
    G = cp.parse_group(spec)
    t0 = time.perf_counter()
    d, col = exact_dist_number(G)
    formula = _ceil_log(d, q)
    oracle = base_on_partitions(G, q, mode="oracle")
    return _record(G, "lemma21", label, {"q": q, "d": d, "oracle": oracle, "formula": formula},
                   oracle == formula, t0, witness=col.colors)


def _thm12(item):
    label, spec = item
    G = cp.parse_group(spec)
    t0 = time.perf_counter()
    n, order = G.degree, G.order()
    d, col = exact_dist_number(G)
    lower = order < d ** n
    upper = d ** n <= 48 ** n * order
    built = distinguish_transitive(G)
    c = built.color_count
    built_ok = is_distinguishing(G, built.colors) and c ** n <= 48 ** n * order and c >= d
    value = {"d": d, "constructed": c, "construction": built.trace.get("construction"),
             "lower": order ** (1 / n), "upper": 48 * order ** (1 / n)}
    return _record(G, "thm12", label, value, lower and upper and built_ok, t0,
                   witness=built.colors, bound_checked=True, bound_value=value["upper"])


def _primitive_at_most_four(item):
    label, spec = item
    G = cp.parse_group(spec)
    t0 = time.perf_counter()
    d, col = exact_dist_number(G)
    return _record(G, "seress_dolfi", label, d, d <= 4, t0, witness=col.colors,
                   bound_checked=True, bound_value=4)


def _bases(item):
    label, spec = item
    G = cp.parse_group(spec)
    t0 = time.perf_counter()
    ex = exact_min_base(G)
    gr = greedy_base(G)
    n = G.degree
    ok = G.order() <= n ** len(ex) and is_base(G, ex.points) and is_base(G, gr.points)
    ok = ok and len(gr) >= len(ex)
    brute = None
    if n <= 8:
        brute = exhaustive_min_base_size(G)
        ok = ok and brute == len(ex)
    return _record(G, "bases", label, {"exact": len(ex), "greedy": len(gr), "exhaustive": brute},
                   ok, t0, witness=ex.points)


def _lemma_colorings(item):
    label, spec, kind, m = item
    G = cp.parse_group(spec)
    t0 = time.perf_counter()
    if kind == "trivial":
        # blocks are the columns {(0, j), (1, j), ...} of a row action
        k = G.degree // m
        B = BlockSystem.from_blocks([[r * k + j for r in range(m)] for j in range(k)], G.degree)
        top = PermGroup([B.block_permutation(g) for g in G.generators], k)
        d, alpha = exact_dist_number(top)
        col = construct_trivial_bottom(G, B, alpha)
        bound = _ceil_root(d, m)
    else:
        # blocks are runs of m consecutive points
        B = BlockSystem.from_blocks([list(range(s, s + m)) for s in range(0, G.degree, m)])
        data = block_action(G, B)
        d, alpha = exact_dist_number(data.top_group)
        if kind == "small":
            _, local = exact_dist_number(data.block_stabilizer_images[0])
            chi = Coloring(transport_block_coloring(G, B, local.colors), local.color_count)
            col = construct_small_bottom(G, B, chi, alpha)
            # 4 * ceil(d^(1/m)) when the block coloring needs at most 4 colors
            bound = chi.color_count * _ceil_root(d, m)
        else:
            L = linking_structure(data.kernel, B)
            col = construct_large_bottom(G, B, L, alpha)
            bound = 3 * _ceil_root(m, L.linking_factor) * _ceil_root(d, m)
    ok = is_distinguishing(G, col.colors) and col.color_count <= bound
    return _record(G, f"lemma_{kind}", label, {"colors": col.color_count, "bound": bound},
                   ok, t0, witness=col.colors, bound_checked=True, bound_value=bound)


def _trivK1(item):
    label, spec = item
    H = cp.parse_group(spec)
    t0 = time.perf_counter()
    M = imprimitive_module(H)
    cert = trivK1_base(M)
    VG, idx = as_permutation_group(H, "all")
    exact = exact_min_base(VG)
    ok = is_base(VG, [idx.point_of(v) for v in cert.points]) and len(cert) == len(exact)
    return _record(H, "trivK1", label, {"size": len(cert), "exact": len(exact)}, ok, t0,
                   witness=[list(v) for v in cert.points])


def _boundedK1(item):
    label, spec = item
    H = cp.parse_group(spec)
    t0 = time.perf_counter()
    M = imprimitive_module(H)
    cert = boundedK1_base(M)
    VG, idx = as_permutation_group(H, "all")
    ok = is_base(VG, [idx.point_of(v) for v in cert.points])
    bound = cert.notes["bound"]
    ok = ok and len(cert) <= bound
    return _record(H, "thm_boundedK1", label, {"size": len(cert), **cert.notes}, ok, t0,
                   witness=[list(v) for v in cert.points], bound_checked=True, bound_value=bound)


def _lemma_alt(item):
    k, t, p = item
    H = cp.letter_group(k, t)
    t0 = time.perf_counter()
    label = f"Sym({k}) wr Sym({t}), p={p}"
    d, col = (exact_dist_number(H) if H.degree <= 12 else (None, distinguish_transitive(H)))
    count = col.color_count
    bU = _ceil_log(count, p)
    base_U = [[(c // p ** s) % p for c in col.colors] for s in range(bU)]
    cert = alt_induced_base(H, p, base_U, k)
    _, report = alt_induced_pipeline(H, p, k)
    ok = len(cert) == 2 * bU + 3 and report["within_bound"]
    value = {"b_U": bU, "size": len(cert), "pipeline": report["size"], "bound": report["bound"],
             "module_dim": cert.notes["module_dim"], "quotient": cert.notes["quotient"]}
    return _record(H, "lemma_alt", label, value, ok, t0, witness=[list(v) for v in cert.points],
                   bound_checked=True, bound_value=report["bound"])


def _repeat(item):
    label, spec, l = item
    L = cp.parse_group(spec)
    t0 = time.perf_counter()
    cert = repeated_module_base(L, l)
    expected = -(-cert.notes["b_W"] // l)
    big, _ = as_permutation_group(block_diagonal(L, l), "all")
    exact = len(exact_min_base(big))
    ok = len(cert) == expected == exact
    return _record(L, "repeat", label, {"l": l, "b_W": cert.notes["b_W"], "size": len(cert),
                                        "exact": exact}, ok, t0,
                   witness=[list(v) for v in cert.points])


def _affine(item):
    label, spec = item
    H = cp.parse_group(spec)
    t0 = time.perf_counter()
    b_aff, b_lin = affine_bridge(H)
    return _record(H, "affine", label, {"affine": b_aff, "linear": b_lin}, b_aff == b_lin + 1, t0)


# item lists --------------------------------------------------------------


def _row_action(m: int, top_n: int) -> dict:
    """Sym(top_n) permuting columns of an m x top_n grid (point r*top_n + j)."""
    S = cp.symmetric_group(top_n)
    n = m * top_n
    gens = [[r * top_n + g[j] for r in range(m) for j in range(top_n)] for g in S.generators]
    return {"kind": "perm", "degree": n, "generators": gens}


def lemma_coloring_items():
    S = lambda n: {"name": "sym", "n": n}
    C = lambda n: {"name": "cyclic", "n": n}
    c = cp._c
    return [
        ("row Sym(3) on 2x3", _row_action(2, 3), "trivial", 2),
        ("row Sym(4) on 2x4", _row_action(2, 4), "trivial", 2),
        ("row Sym(5) on 3x5", _row_action(3, 5), "trivial", 3),
        ("Sym(3) wr Sym(3)", c("wreath", inner=S(3), top=S(3)), "small", 3),
        ("C2 wr C2", c("wreath", inner=C(2), top=C(2)), "small", 2),
        ("Sym(2) wr Sym(3)", c("wreath", inner=S(2), top=S(3)), "small", 2),
        ("Sym(4) wr Sym(2)", c("wreath", inner=S(4), top=S(2)), "small", 4),
        ("Sym(3) diag Sym(2)", c("diagonal_wreath", m=3, classes=2, top=S(2)), "small", 3),
        ("Sym(5) wr C2", c("wreath", inner=S(5), top=C(2)), "large", 5),
        ("Sym(5) diag Sym(2)", c("diagonal_wreath", m=5, classes=2, top=S(2)), "large", 5),
        ("Sym(5) diag C5", c("diagonal_wreath", m=5, classes=5, top=C(5)), "large", 5),
        ("Alt(5) wr C2", c("wreath", inner={"name": "alt", "n": 5}, top=C(2)), "large", 5),
        ("Sym(7) wr Sym(2)", c("wreath", inner=S(7), top=S(2)), "large", 7),
    ]


def _strip(items):
    return [(label, spec) for label, spec, *_ in items]


def _is_alt_or_sym(spec) -> bool:
    G = cp.parse_group(spec)
    return G.order() * 2 >= math.factorial(G.degree)


CAMPAIGNS: dict[str, tuple[Callable[[], list], Callable]] = {
    "lemma21": (lambda: [(lb, sp, q) for lb, sp, _ in cp.transitive_corpus(7) for q in (2, 3)],
                _lemma21),
    "thm12": (lambda: _strip(cp.transitive_corpus(10)), _thm12),
    "seress_dolfi": (lambda: [(lb, sp) for lb, sp, prim in cp.transitive_corpus(10)
                              if prim and not _is_alt_or_sym(sp)], _primitive_at_most_four),
    "bases": (lambda: _strip(cp.transitive_corpus(10)), _bases),
    "lemma_colorings": (lemma_coloring_items, _lemma_colorings),
    "trivK1": (cp.permutation_module_corpus, _trivK1),
    "thm_boundedK1": (cp.monomial_corpus, _boundedK1),
    "lemma_alt": (cp.alt_induced_cases, _lemma_alt),
    "repeat": (lambda: [(lb, sp, l) for lb, sp in cp.repeat_corpus() for l in (1, 2, 3)],
               _repeat),
    "affine": (lambda: cp.affine_corpus()[:10], _affine),
}


def run_item(name: str, item) -> cp.ResultRecord:
    runner = CAMPAIGNS[name][1]
    try:
        return runner(item)
    except CapExceeded as exc:
        label = item[0] if isinstance(item[0], str) else str(item)
        return cp.ResultRecord("", name, None, status="skip", label=label,
                               detail={"reason": str(exc)})


def _run_pair(args):
    return run_item(*args)


def run_campaign(
    name: str, jobs: int = 1, filter_label: str | None = None
) -> list[cp.ResultRecord]:
    """Run every item of a campaign; records sorted by group id, then label."""
    if name not in CAMPAIGNS:
        raise ValueError(f"unknown campaign {name!r}; choose from {sorted(CAMPAIGNS)}")
    items = CAMPAIGNS[name][0]()
    if filter_label:
        items = [it for it in items if filter_label in str(it[0])]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_pair, [(name, it) for it in items]))
    else:
        records = [run_item(name, it) for it in items]
    records.sort(key=lambda r: (r.group_id, r.label, json.dumps(r.value, sort_keys=True,
                                                                 default=str)))
    return records


def violations(records: Iterable[cp.ResultRecord]) -> list[cp.ResultRecord]:
    return [r for r in records if r.status == "fail"]
