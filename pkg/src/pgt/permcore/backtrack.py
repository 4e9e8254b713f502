"""Backtrack search for subgroups defined by a property."""

from __future__ import annotations

from typing import Callable, Sequence


def _orbit(gens, start):
    seen = {start}
    todo = [start]
    for x in todo:
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def subgroup_search(
    chain,
    test: Callable,
    prune: Callable[[int, int], bool] | None = None,
    stop: Callable | None = None,
) -> tuple[list, bool]:
    """Generators of ``K = {g in G : test(g)}`` for a subgroup ``K``.

    ``chain`` is a complete stabilizer chain of ``G``.  ``prune(b, y)``
    must return False only if no element of ``K`` maps base point ``b`` to
    ``y``.  When ``stop(g)`` returns True for a newly found generator the
    search ends early; the second return value reports that.
    """
    base = chain.base
    r = len(base)
    mul = chain.ops.mul
    kgens: list = []
    ok = prune or (lambda b, y: True)

    def dfs(j, h):
        if j == r:
            return h if test(h) else None
        b = base[j]
        tr = chain.trans[j]
        for beta in chain.orbits[j]:
            if not ok(b, h[beta]):
                continue
            found = dfs(j + 1, mul(h, tr[beta]))
            if found is not None:
                return found
        return None

    for lvl in reversed(range(r)):
        b = base[lvl]
        covered = _orbit(kgens, b)
        failed_reps: list = []
        failed: set = set()
        for gamma in chain.orbits[lvl]:
            if gamma in covered or gamma in failed:
                continue
            g = None
            if ok(b, gamma):
                g = dfs(lvl + 1, chain.trans[lvl][gamma])
            if g is None:
                failed_reps.append(gamma)
                failed |= _orbit(kgens, gamma)
                continue
            kgens.append(g)
            if stop is not None and stop(g):
                return kgens, True
            covered = _orbit(kgens, b)
            failed = set()
            for f in failed_reps:
                failed |= _orbit(kgens, f)
    return kgens, False


def coloring_test(colors: Sequence):
    """Property and prune callbacks for 'preserves this coloring'."""
    n = len(colors)

    def test(g):
        return all(colors[g[x]] == colors[x] for x in range(n))

    def prune(b, y):
        return colors[y] == colors[b]

    return test, prune
