"""Deterministic Schreier-Sims over an abstract action.

The chain only needs a handful of operations on group elements (see
:class:`PermOps`), so the same code builds stabilizer chains for
permutation groups and for matrix groups acting on vectors.
"""

from __future__ import annotations

from math import prod
from typing import Any, Hashable, Iterable, Sequence

from .perm import Permutation, _perm, compose, inverse


class PermOps:
    """Element operations for permutations of ``range(degree)``."""

    def __init__(self, degree: int):
        self.degree = degree
        self.identity = Permutation.identity(degree)

    def mul(self, a, b):
        return _perm([a[i] for i in b])

    def inv(self, a):
        return inverse(a)

    def image(self, a, x):
        return a[x]

    def eq(self, a, b):
        return a == b

    def is_identity(self, a):
        return a == self.identity

    def moved_point(self, a):
        for i, j in enumerate(a):
            if i != j:
                return i
        return None


class StabChain:
    """Base, strong generators per level and explicit transversals.

    Level ``i`` describes ``G^(i)``, the pointwise stabilizer of
    ``base[:i]``: ``gens[i]`` generates it, ``orbits[i]`` is the orbit of
    ``base[i]`` and ``trans[i][y]`` maps ``base[i]`` to ``y``.
    """

    def __init__(self, ops):
        self.ops = ops
        self.base: list[Hashable] = []
        self.gens: list[list[Any]] = []
        self.orbits: list[list[Hashable]] = []
        self.trans: list[dict] = []
        self._inv: list[dict] = []
        self._checked: list[set] = []
        self.top_gens: list[Any] = []

    # construction ---------------------------------------------------------

    @classmethod
    def build(
        cls,
        ops,
        generators: Iterable[Any],
        base: Sequence[Hashable] = (),
        order: int | None = None,
    ) -> "StabChain":
        """Run Schreier-Sims with ``base`` as a forced prefix.

        If the group order is known, the run stops as soon as the
        transversal sizes multiply to it.
        """
        ch = cls(ops)
        gens = [g for g in generators if not ops.is_identity(g)]
        ch.top_gens = list(gens)
        for b in base:
            ch._add_level(b)
        for g in gens:
            if all(ops.image(g, b) == b for b in ch.base):
                ch._add_level(ops.moved_point(g))
        for i in range(len(ch.base)):
            fixed = ch.base[:i]
            lvl = [g for g in gens if all(ops.image(g, b) == b for b in fixed)]
            ch.gens[i].extend(lvl)
            ch._extend_orbit(i)
        ch._complete(order)
        return ch

    def _add_level(self, point):
        self.base.append(point)
        self.gens.append([])
        self.orbits.append([point])
        self.trans.append({point: self.ops.identity})
        self._inv.append({point: self.ops.identity})
        self._checked.append(set())

    def _extend_orbit(self, i: int):
        ops = self.ops
        orbit, tr, gens = self.orbits[i], self.trans[i], self.gens[i]
        k = 0
        while k < len(orbit):
            x = orbit[k]
            ux = tr[x]
            for s in gens:
                y = ops.image(s, x)
                if y not in tr:
                    tr[y] = ops.mul(s, ux)
                    orbit.append(y)
            k += 1

    def _inverse_rep(self, i: int, y):
        inv = self._inv[i]
        r = inv.get(y)
        if r is None:
            r = inv[y] = self.ops.inv(self.trans[i][y])
        return r

    def sift(self, g, start: int = 0):
        """Strip ``g`` through levels ``start..``; return (residue, level)."""
        ops = self.ops
        for i in range(start, len(self.base)):
            y = ops.image(g, self.base[i])
            if y not in self.trans[i]:
                return g, i
            g = ops.mul(self._inverse_rep(i, y), g)
        return g, len(self.base)

    def _complete(self, order: int | None):
        i = len(self.base) - 1
        while i >= 0:
            if order is not None and self.order() == order:
                return
            j = self._check_level(i)
            i = i - 1 if j is None else j

    def _check_level(self, i: int):
        ops = self.ops
        orbit, tr, gens = self.orbits[i], self.trans[i], self.gens[i]
        checked = self._checked[i]
        for xi, x in enumerate(orbit):
            ux = tr[x]
            for si, s in enumerate(gens):
                if (xi, si) in checked:
                    continue
                checked.add((xi, si))
                su = ops.mul(s, ux)
                y = ops.image(s, x)
                if ops.eq(tr[y], su):
                    continue
                h = ops.mul(self._inverse_rep(i, y), su)
                h, j = self.sift(h, i + 1)
                if j == len(self.base):
                    if ops.is_identity(h):
                        continue
                    self._add_level(ops.moved_point(h))
                for lvl in range(i + 1, j + 1):
                    self.gens[lvl].append(h)
                    self._extend_orbit(lvl)
                return j
        return None

    # queries --------------------------------------------------------------

    def order(self) -> int:
        return prod(len(o) for o in self.orbits)

    def contains(self, g) -> bool:
        h, j = self.sift(g)
        return j == len(self.base) and self.ops.is_identity(h)

    def stabilizer_order(self, level: int) -> int:
        return prod(len(o) for o in self.orbits[level:])

    def level_generators(self, level: int) -> list:
        if level >= len(self.base):
            return []
        return list(self.gens[level])

    def strong_generators(self) -> list:
        out, seen = [], set()
        for lvl in self.gens:
            for g in lvl:
                if id(g) not in seen:
                    seen.add(id(g))
                    out.append(g)
        return out

    def sub(self, level: int) -> "StabChain":
        """The chain of ``G^(level)`` (shares storage, treat as read-only)."""
        ch = StabChain(self.ops)
        ch.base = self.base[level:]
        ch.gens = self.gens[level:]
        ch.orbits = self.orbits[level:]
        ch.trans = self.trans[level:]
        ch._inv = self._inv[level:]
        ch._checked = self._checked[level:]
        ch.top_gens = list(ch.gens[0]) if ch.gens else []
        return ch

    def elements(self):
        """Iterate over all group elements (small groups only)."""
        ops = self.ops

        def rec(i, acc):
            if i == len(self.base):
                yield acc
                return
            for y in self.orbits[i]:
                yield from rec(i + 1, ops.mul(acc, self.trans[i][y]))

        yield from rec(0, ops.identity)

    def verify(self) -> bool:
        """Every Schreier generator sifts to the identity."""
        ops = self.ops
        for i in range(len(self.base)):
            for x in self.orbits[i]:
                for s in self.gens[i]:
                    y = ops.image(s, x)
                    h = ops.mul(self._inverse_rep(i, y), ops.mul(s, self.trans[i][x]))
                    r, j = self.sift(h, i + 1)
                    if j != len(self.base) or not ops.is_identity(r):
                        return False
        return True
