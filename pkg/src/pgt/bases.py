"""Minimal bases: exact search, the greedy heuristic, and bases on colorings."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .errors import CapExceeded, HypothesisError
from .permcore import PermGroup


@dataclass
class BaseCertificate:
    points: list
    residual_order: int
    exact: bool = False
    notes: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.points)


def _check_normal(G: PermGroup, N: PermGroup):
    if not N.is_normal_in(G):
        raise HypothesisError("modulo subgroup is not normal in the group")


def is_base(G: PermGroup, pts: Sequence[int], modulo: PermGroup | None = None) -> bool:
    """True iff the pointwise stabilizer of ``pts`` lies in ``modulo`` (or is 1)."""
    if modulo is not None:
        _check_normal(G, modulo)
    C = G.pointwise_stabilizer(pts)
    if modulo is None:
        return C.order() == 1
    return all(modulo.contains(g) for g in C.generators)


def _inside(S: PermGroup, N: PermGroup | None) -> bool:
    if N is None:
        return S.order() == 1
    return all(N.contains(g) for g in S.generators)


def greedy_base(G: PermGroup, modulo: PermGroup | None = None) -> BaseCertificate:
    """Repeatedly fix a point with the longest orbit under the current stabilizer."""
    if modulo is not None:
        _check_normal(G, modulo)
    pts: list[int] = []
    S = G
    while not _inside(S, modulo):
        best, size = None, 0
        for orb in S.orbits():
            if len(orb) > size:
                best, size = orb[0], len(orb)
        pts.append(best)
        S = S.pointwise_stabilizer([best])
    return BaseCertificate(pts, S.order(), exact=False)


def _log_lower_bound(order: int, n: int) -> int:
    # smallest b with n**b >= order
    b = 0
    while n ** b < order:
        b += 1
    return b


def exact_min_base(G: PermGroup, modulo: PermGroup | None = None) -> BaseCertificate:
    """Shortest base by iterative deepening over stabilizer-orbit representatives.

    Points are tried in order of decreasing orbit length, then least
    index.  A branch with ``r`` points left is cut when the stabilizer is
    larger than ``longest_orbit**r`` times the order of ``modulo``.
    """
    greedy = greedy_base(G, modulo)
    if not greedy.points:
        return BaseCertificate([], greedy.residual_order, exact=True)
    limit = modulo.order() if modulo is not None else 1
    lower = _log_lower_bound(-(-G.order() // limit), G.degree)
    for depth in range(lower, len(greedy)):
        found = _search(G, depth, [], modulo, limit)
        if found is not None:
            pts, residual = found
            return BaseCertificate(pts, residual, exact=True)
    return BaseCertificate(greedy.points, greedy.residual_order, exact=True)


def _search(S: PermGroup, depth: int, chosen: list[int], modulo, limit: int):
    if _inside(S, modulo):
        return list(chosen), S.order()
    if depth == 0:
        return None
    orbs = [o for o in S.orbits() if len(o) > 1]
    longest = max(len(o) for o in orbs)
    if S.order() > longest ** depth * limit:
        return None
    orbs.sort(key=lambda o: (-len(o), o[0]))
    for orb in orbs:
        x = orb[0]
        found = _search(S.pointwise_stabilizer([x]), depth - 1, chosen + [x], modulo, limit)
        if found is not None:
            return found
    return None


def exhaustive_min_base_size(G: PermGroup) -> int:
    """Brute force over all point subsets using the full element list."""
    n = G.degree
    E = np.array(list(G.elements()), dtype=np.int32)
    moves = E != np.arange(n)
    for size in range(n + 1):
        for pts in combinations(range(n), size):
            fixed = ~moves[:, list(pts)].any(axis=1) if pts else np.ones(len(E), bool)
            if fixed.sum() == 1:
                return size
    return n


def base_on_partitions(G: PermGroup, q: int, mode: str = "formula", oracle_cap: int = 12) -> int:
    """Minimal base size of ``G`` acting on colorings of the domain with ``q`` colors.

    ``mode="formula"`` returns ``ceil(log_q d(G))`` from the exact
    distinguishing number; ``mode="oracle"`` searches tuples of colorings
    directly using the element list of ``G`` (small degree only).
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    if mode == "formula":
        from .distinguishing import exact_dist_number

        d, _ = exact_dist_number(G, cap=oracle_cap)
        b = 0
        while q ** b < d:
            b += 1
        return b
    if mode == "oracle":
        return _partition_tuple_base(G, q)
    raise ValueError(f"unknown mode {mode!r}")


def _partition_tuple_base(G: PermGroup, q: int, max_points: int = 4096) -> int:
    n = G.degree
    if q ** n > max_points:
        raise CapExceeded(f"{q}^{n} colorings exceed the oracle cap {max_points}")
    if G.order() == 1:
        return 0
    E = np.array(list(G.elements()), dtype=np.int64)
    C = np.array(list(product(range(q), repeat=n)), dtype=np.int8)
    # stab[c, e]: element e preserves coloring c, i.e. C[c, E[e, x]] == C[c, x]
    stab = np.empty((len(C), len(E)), dtype=bool)
    for start in range(0, len(C), 256):
        block = C[start:start + 256]
        stab[start:start + 256] = (block[:, E] == block[:, None, :]).all(axis=2)
    weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    Einv = np.argsort(E, axis=1)
    reps = []
    seen = np.zeros(len(C), dtype=bool)
    for i in range(len(C)):
        if not seen[i]:
            reps.append(i)
            # images of coloring i under every element: (g.c)(y) = c(g^-1 y)
            seen[C[i][Einv] @ weights] = True

    def search(mask, depth, first):
        if mask.sum() == 1:
            return True
        if depth == 0:
            return False
        cand = reps if first else range(len(C))
        if depth == 1:
            rows = stab[list(cand)] & mask
            return bool((rows.sum(axis=1) == 1).any())
        return any(search(mask & stab[c], depth - 1, False) for c in cand)

    full = np.ones(len(E), dtype=bool)
    for ell in range(1, n + 1):
        if search(full, ell, True):
            return ell
    return n
