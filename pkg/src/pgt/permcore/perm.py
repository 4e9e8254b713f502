"""Permutations of {0, ..., n-1} stored as image tuples."""

from __future__ import annotations

from typing import Iterable, Sequence


class Permutation(tuple):
    """A bijection of ``range(n)``; ``p[x]`` is the image of ``x``.

    Multiplication composes right-to-left: ``(a * b)(x) == a(b(x))``.
    """

    __slots__ = ()

    def __new__(cls, images: Iterable[int]):
        p = tuple.__new__(cls, images)
        if sorted(p) != list(range(len(p))):
            raise ValueError(f"not a permutation of range({len(p)}): {tuple(p)}")
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return _perm(range(n))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        """Build from disjoint cycles, e.g. ``from_cycles(4, (0, 1), (2, 3))``."""
        images = list(range(n))
        seen = set()
        for cyc in cycles:
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                if a in seen or not 0 <= a < n:
                    raise ValueError(f"bad cycle {cyc} for degree {n}")
                seen.add(a)
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self)

    def __call__(self, x: int) -> int:
        return self[x]

    def __mul__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return compose(self, other)

    def __invert__(self) -> "Permutation":
        return self.inverse()

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(len(self))
        base = self
        while k:
            if k & 1:
                result = compose(result, base)
            base = compose(base, base)
            k >>= 1
        return result

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, j in enumerate(self):
            inv[j] = i
        return _perm(inv)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self))

    def support(self) -> list[int]:
        return [i for i, j in enumerate(self) if i != j]

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self)):
            if i in seen or self[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        from math import lcm

        return lcm(1, *(len(c) for c in self.cycles()))

    def __repr__(self) -> str:
        cyc = self.cycles()
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"
        return f"Permutation<{len(self)}>{body}"


def _perm(images: Iterable[int]) -> Permutation:
    # unchecked constructor for images already known to be a bijection
    return tuple.__new__(Permutation, images)


def compose(a: Sequence[int], b: Sequence[int]) -> Permutation:
    """Return ``a * b``, the map ``x -> a[b[x]]``."""
    if len(a) != len(b):
        raise ValueError(f"degree mismatch: {len(a)} vs {len(b)}")
    return _perm([a[i] for i in b])


def inverse(p: Sequence[int]) -> Permutation:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return _perm(inv)


def commutator(a: Permutation, b: Permutation) -> Permutation:
    """``a^-1 b^-1 a b``."""
    return compose(compose(inverse(a), inverse(b)), compose(a, b))
