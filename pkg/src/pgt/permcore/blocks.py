"""Block systems, the action on blocks, and linking of block kernels."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

from .chain import PermOps, StabChain
from .group import PermGroup
from ..errors import StructureError
from .perm import Permutation, _perm


@dataclass
class BlockSystem:
    blocks: list[list[int]]
    assignment: list[int]

    @classmethod
    def from_blocks(cls, blocks, degree: int | None = None) -> "BlockSystem":
        blocks = sorted(sorted(b) for b in blocks)
        n = degree if degree is not None else sum(len(b) for b in blocks)
        assignment = [-1] * n
        for j, b in enumerate(blocks):
            for x in b:
                if assignment[x] != -1:
                    raise ValueError(f"point {x} lies in two blocks")
                assignment[x] = j
        if -1 in assignment or len({len(b) for b in blocks}) != 1:
            raise ValueError("blocks must partition the domain into equal parts")
        return cls(blocks, assignment)

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def degree(self) -> int:
        return len(self.assignment)

    def is_trivial(self) -> bool:
        return self.block_size == 1 or self.block_count == 1

    def is_invariant(self, G: PermGroup) -> bool:
        a = self.assignment
        for g in G.generators:
            for b in self.blocks:
                if len({a[g[x]] for x in b}) != 1:
                    return False
        return True

    def block_permutation(self, g) -> Permutation:
        a = self.assignment
        return _perm([a[g[b[0]]] for b in self.blocks])


def minimal_block_system(G: PermGroup, seed: tuple[int, int]) -> BlockSystem:
    """Finest block system in which ``seed[0]`` and ``seed[1]`` share a block."""
    a, b = seed
    if a == b:
        raise ValueError("seed points must be distinct")
    if not G.is_transitive():
        raise ValueError("group is not transitive")
    n = G.degree
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = [(a, b)]
    parent[find(b)] = find(a)
    while queue:
        x, y = queue.pop()
        for g in G.generators:
            u, v = find(g[x]), find(g[y])
            if u != v:
                parent[max(u, v)] = min(u, v)
                queue.append((u, v))
    classes: dict[int, list[int]] = {}
    for x in range(n):
        classes.setdefault(find(x), []).append(x)
    return BlockSystem.from_blocks(classes.values(), n)


def minimal_nontrivial_block_system(G: PermGroup) -> BlockSystem | None:
    """A block system with the smallest nontrivial block size, or None."""
    n = G.degree
    best = None
    for b in range(1, n):
        B = minimal_block_system(G, (0, b))
        if B.block_count > 1 and (best is None or B.block_size < best.block_size):
            best = B
            if best.block_size == 2:
                break
    return best


def is_primitive(G: PermGroup) -> bool:
    return G.is_transitive() and minimal_nontrivial_block_system(G) is None


@dataclass
class BlockActionData:
    top_group: PermGroup
    kernel: PermGroup
    block_stabilizers: list[PermGroup]
    block_stabilizer_images: list[PermGroup]
    transversal: list[Permutation] = field(default_factory=list)


def _combined(G: PermGroup, B: BlockSystem):
    n, k = G.degree, B.block_count
    gens = []
    for g in G.generators:
        top = B.block_permutation(g)
        gens.append(_perm(list(g) + [n + top[j] for j in range(k)]))
    return gens


def block_action(G: PermGroup, B: BlockSystem) -> BlockActionData:
    """Top group, kernel, block stabilizers and their restrictions.

    Works in the disjoint union of the domain and the block set so that
    the kernel is a level of an ordinary stabilizer chain.
    """
    if not B.is_invariant(G):
        raise ValueError("partition is not invariant under the group")
    n, k = G.degree, B.block_count
    top = PermGroup([B.block_permutation(g) for g in G.generators], k)
    gens = _combined(G, B)
    ops = PermOps(n + k)
    ch = StabChain.build(ops, gens, [n + j for j in range(k)], G.order())

    def shrink(perms):
        return [_perm(p[:n]) for p in perms]

    kern_chain = ch.sub(k)
    kernel = PermGroup(shrink(kern_chain.top_gens), n)
    kernel._order = kern_chain.order()

    stabs, images = [], []
    transversal = [None] * k
    # H_j is the stabilizer of block point n+j; conjugate H_0 for the others
    h0 = ch.sub(1)
    H0 = PermGroup(shrink(h0.top_gens), n)
    H0._order = h0.order()
    for y, u in ch.trans[0].items():
        transversal[y - n] = _perm(u[:n])
    for j in range(k):
        if transversal[j] is None:
            cj = StabChain.build(ops, gens, [n + j], G.order()).sub(1)
            Hj = PermGroup(shrink(cj.top_gens), n)
            Hj._order = cj.order()
            stabs.append(Hj)
            images.append(Hj.restrict(B.blocks[j]))
            continue
        u = transversal[j]
        uinv = u.inverse()
        Hj = PermGroup([u * h * uinv for h in H0.generators], n)
        Hj._order = H0.order()
        stabs.append(Hj)
        images.append(Hj.restrict(B.blocks[j]))
    return BlockActionData(top, kernel, stabs, images, transversal)


@dataclass
class LinkingStructure:
    socle: PermGroup
    classes: list[list[int]]
    linking_factor: int
    bijections: dict[int, list[int]]

    def coordinates(self, B: BlockSystem) -> dict[int, tuple[int, int]]:
        """Point -> (row, column) with columns ordered class by class."""
        coords = {}
        col = 0
        for cls in self.classes:
            for j in cls:
                phi = self.bijections[j]
                for x in B.blocks[j]:
                    coords[x] = (phi[x], col)
                col += 1
        return coords


def linking_structure(N: PermGroup, B: BlockSystem) -> LinkingStructure:
    """Socle of a block kernel and the diagonal linking of its factors.

    Each block restriction of ``N`` must contain ``Alt(m)`` with ``m >= 5``
    and ``m != 6``.
    """
    m, k = B.block_size, B.block_count
    if m < 5 or m == 6:
        raise StructureError(f"block size {m} unsupported (need m >= 5, m != 6)")
    half = factorial(m) // 2
    for blk in B.blocks:
        if N.restrict(blk).order() < half:
            raise StructureError("block restriction does not contain Alt(m)")
    socle = N.derived_subgroup()
    if socle.derived_subgroup().order() != socle.order():
        raise StructureError("derived subgroup of the kernel is not perfect")
    for blk in B.blocks:
        if socle.restrict(blk).order() != half:
            raise StructureError("socle restriction is not Alt(m)")

    # a ~ b iff C_socle(block a) fixes block b pointwise
    moved = []
    for a in range(k):
        C = socle.pointwise_stabilizer(B.blocks[a])
        moved.append({B.assignment[x] for g in C.generators for x in g.support()})
    classes: list[list[int]] = []
    seen: set[int] = set()
    for a in range(k):
        if a in seen:
            continue
        cls = [b for b in range(k) if b not in moved[a]]
        if any(a in moved[b] for b in cls) or seen.intersection(cls):
            raise StructureError("linking relation is not an equivalence")
        seen.update(cls)
        classes.append(cls)
    sizes = {len(c) for c in classes}
    if len(sizes) != 1 or sum(map(len, classes)) != k:
        raise StructureError("linking classes are not a partition of equal parts")
    t = sizes.pop()
    if socle.order() != half ** (k // t):
        raise StructureError("socle order differs from Alt(m)^(k/t)")

    bijections: dict[int, list[int]] = {}
    for cls in classes:
        ref = B.blocks[cls[0]]
        phi_ref = {x: i for i, x in enumerate(ref)}
        bijections[cls[0]] = _as_list(phi_ref, N.degree)
        for b in cls[1:]:
            psi = _equivariant_bijection(socle, ref, B.blocks[b])
            if psi is None:
                raise StructureError(f"no equivariant bijection between blocks {cls[0]} and {b}")
            phi_b = {psi[x]: phi_ref[x] for x in ref}
            bijections[b] = _as_list(phi_b, N.degree)
    return LinkingStructure(socle, classes, t, bijections)


def _as_list(mapping: dict[int, int], n: int) -> list[int]:
    out = [-1] * n
    for x, i in mapping.items():
        out[x] = i
    return out


def _equivariant_bijection(S: PermGroup, ref: list[int], target: list[int]):
    """psi: ref -> target with psi(s x) = s psi(x) for the generators s."""
    x0 = ref[0]
    stab = S.pointwise_stabilizer([x0])
    tset = set(target)
    for y0 in sorted(target):
        if any(g[y0] != y0 for g in stab.generators):
            continue
        psi = {x0: y0}
        todo = [x0]
        good = True
        for x in todo:
            for s in S.generators:
                sx, sy = s[x], s[psi[x]]
                if sy not in tset:
                    good = False
                    break
                if sx in psi:
                    if psi[sx] != sy:
                        good = False
                        break
                else:
                    psi[sx] = sy
                    todo.append(sx)
            if not good:
                break
        if good and len(psi) == len(ref) and len(set(psi.values())) == len(ref):
            return psi
    return None
