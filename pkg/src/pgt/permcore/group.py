"""Permutation groups backed by a lazily built stabilizer chain."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterable, Sequence

from .backtrack import coloring_test, subgroup_search
from .chain import PermOps, StabChain
from .perm import Permutation, _perm, commutator, compose, inverse


class PermGroup:
    """Group generated by permutations of ``range(degree)``."""

    def __init__(self, generators: Iterable[Sequence[int]], degree: int | None = None):
        gens = [g if isinstance(g, Permutation) else Permutation(g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree required for an empty generator list")
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree:
                raise ValueError(f"generator of degree {len(g)} in a group of degree {degree}")
        self.degree = degree
        self.generators = gens
        self._chain: StabChain | None = None
        self._order: int | None = None

    @classmethod
    def _from_chain(cls, chain: StabChain, degree: int) -> "PermGroup":
        G = cls(chain.top_gens, degree)
        G._chain = chain
        G._order = chain.order()
        return G

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"

    # chain ---------------------------------------------------------------

    @property
    def ops(self) -> PermOps:
        return PermOps(self.degree)

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = StabChain.build(self.ops, self.generators, order=self._order)
            self._order = self._chain.order()
        return self._chain

    def chain_with_base(self, prefix: Sequence[int]) -> StabChain:
        """A new chain whose base starts with ``prefix``."""
        return StabChain.build(
            self.ops, self.chain.strong_generators() or self.generators, prefix, self.order()
        )

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def order(self) -> int:
        if self._order is None:
            self._order = self.chain.order()
        return self._order

    def contains(self, g: Sequence[int]) -> bool:
        if len(g) != self.degree:
            return False
        return self.chain.contains(g if isinstance(g, Permutation) else Permutation(g))

    __contains__ = contains

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.generators)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def is_normal_in(self, other: "PermGroup") -> bool:
        return self.is_subgroup_of(other) and all(
            self.contains(compose(compose(inverse(x), g), x))
            for x in other.generators
            for g in self.generators
        )

    def elements(self):
        return self.chain.elements()

    def random_element(self, rng: random.Random, length: int = 20) -> Permutation:
        g = self.identity
        if not self.generators:
            return g
        for _ in range(length):
            g = compose(g, rng.choice(self.generators))
        return g

    # orbits --------------------------------------------------------------

    def orbit(self, x: int) -> set[int]:
        seen = {x}
        todo = [x]
        for y in todo:
            for g in self.generators:
                z = g[y]
                if z not in seen:
                    seen.add(z)
                    todo.append(z)
        return seen

    def orbits(self) -> list[list[int]]:
        done: set[int] = set()
        out = []
        for x in range(self.degree):
            if x not in done:
                o = sorted(self.orbit(x))
                done.update(o)
                out.append(o)
        return out

    def is_transitive(self) -> bool:
        return self.degree <= 1 or len(self.orbit(0)) == self.degree

    # stabilizers ---------------------------------------------------------

    def pointwise_stabilizer(self, points: Sequence[int]) -> "PermGroup":
        """``C_G(points)`` via a base change putting ``points`` first."""
        pts = list(dict.fromkeys(points))
        for x in pts:
            if not 0 <= x < self.degree:
                raise ValueError(f"point {x} out of range")
        if not pts:
            return self
        ch = self.chain_with_base(pts)
        return PermGroup._from_chain(ch.sub(len(pts)), self.degree)

    def coloring_stabilizer(self, colors: Sequence) -> "PermGroup":
        """Elements preserving every color class of ``colors``."""
        if len(colors) != self.degree:
            raise ValueError("coloring must cover the domain")
        test, prune = coloring_test(colors)
        gens, _ = subgroup_search(self.chain, test, prune)
        return PermGroup(gens, self.degree)

    def setwise_stabilizer(self, subset: Iterable[int]) -> "PermGroup":
        Y = set(subset)
        return self.coloring_stabilizer([1 if x in Y else 0 for x in range(self.degree)])

    def restrict(self, points: Sequence[int]) -> "PermGroup":
        """Action on an invariant set, relabelled ``points[i] -> i``."""
        index = {p: i for i, p in enumerate(points)}
        gens = []
        for g in self.generators:
            try:
                gens.append(_perm([index[g[p]] for p in points]))
            except KeyError:
                raise ValueError("point set is not invariant") from None
        return PermGroup(gens, len(points))

    # subgroups -----------------------------------------------------------

    def normal_closure(self, gens: Iterable[Permutation]) -> "PermGroup":
        """Smallest normal subgroup of ``self`` containing ``gens``."""
        ops = self.ops
        current = [g for g in gens if not g.is_identity()]
        ch = StabChain.build(ops, current)
        todo = list(current)
        while todo:
            h = todo.pop()
            for x in self.generators:
                c = compose(compose(inverse(x), h), x)
                if not ch.contains(c):
                    current.append(c)
                    todo.append(c)
                    ch = StabChain.build(ops, ch.strong_generators() + [c])
        H = PermGroup(current, self.degree)
        H._chain = ch
        H._order = ch.order()
        return H

    def derived_subgroup(self) -> "PermGroup":
        comms = [commutator(a, b) for a, b in combinations(self.generators, 2)]
        return self.normal_closure(comms)

    def is_abelian(self) -> bool:
        return all(compose(a, b) == compose(b, a) for a, b in combinations(self.generators, 2))


def symmetric_group(n: int) -> PermGroup:
    if n <= 1:
        return PermGroup([], max(n, 1))
    gens = [Permutation.from_cycles(n, (0, 1))]
    if n > 2:
        gens.append(Permutation.from_cycles(n, tuple(range(n))))
    G = PermGroup(gens, n)
    return G


def alternating_group(n: int) -> PermGroup:
    if n <= 2:
        return PermGroup([], max(n, 1))
    gens = [Permutation.from_cycles(n, (0, 1, 2))]
    if n > 3:
        cyc = tuple(range(n)) if n % 2 else tuple(range(1, n))
        gens.append(Permutation.from_cycles(n, cyc))
    return PermGroup(gens, n)


def cyclic_group(n: int) -> PermGroup:
    if n == 1:
        return PermGroup([], 1)
    return PermGroup([Permutation.from_cycles(n, tuple(range(n)))], n)


def dihedral_group(n: int) -> PermGroup:
    """Symmetries of the n-gon acting on its vertices (order 2n)."""
    if n <= 2:
        return symmetric_group(n)
    rot = Permutation.from_cycles(n, tuple(range(n)))
    refl = Permutation([(-i) % n for i in range(n)])
    return PermGroup([rot, refl], n)


def trivial_group(n: int) -> PermGroup:
    return PermGroup([], n)
