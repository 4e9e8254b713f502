"""Matrices over prime fields, matrix groups and their permutation actions.

Vectors are encoded as integers by little-endian mixed radix:
``index(v) = v[0] + v[1]*p + v[2]*p**2 + ...``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapExceeded
from .permcore import PermGroup, StabChain
from .permcore.perm import _perm

DEFAULT_POINT_CAP = 2_000_000


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def primitive_root(p: int) -> int:
    """Least generator of the multiplicative group of the field of order ``p``."""
    _check_prime(p)
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)]
    return next(a for a in range(1, p) if all(pow(a, (p - 1) // q, p) != 1 for q in factors))


def _check_prime(p: int):
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")


# plain array helpers -----------------------------------------------------


def mat_mul(A, B, p: int) -> np.ndarray:
    A, B = np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64)
    if A.shape[-1] != B.shape[0]:
        raise ValueError("incompatible shapes")
    return (A @ B) % p


def mat_apply(A, v, p: int) -> np.ndarray:
    return mat_mul(A, np.asarray(v, dtype=np.int64), p)


def mat_rank(A, p: int) -> int:
    M = np.array(A, dtype=np.int64) % p
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i, c]), None)
        if piv is None:
            continue
        M[[r, piv]] = M[[piv, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        r += 1
        if r == rows:
            break
    return r


def mat_inverse(A, p: int) -> np.ndarray:
    """Inverse by Gauss-Jordan elimination; raises ValueError if singular."""
    M = np.array(A, dtype=np.int64) % p
    d = M.shape[0]
    if M.shape != (d, d):
        raise ValueError("matrix must be square")
    aug = np.concatenate([M, np.eye(d, dtype=np.int64)], axis=1)
    for c in range(d):
        piv = next((i for i in range(c, d) if aug[i, c]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[[c, piv]] = aug[[piv, c]]
        aug[c] = (aug[c] * pow(int(aug[c, c]), -1, p)) % p
        for i in range(d):
            if i != c and aug[i, c]:
                aug[i] = (aug[i] - aug[i, c] * aug[c]) % p
    return aug[:, d:]


def permutation_matrix(perm: Sequence[int], p: int) -> np.ndarray:
    """Matrix sending ``e_j`` to ``e_perm[j]``."""
    d = len(perm)
    M = np.zeros((d, d), dtype=np.int64)
    for j, i in enumerate(perm):
        M[i, j] = 1
    return M % p


# value types -------------------------------------------------------------


class FpMatrix:
    """Square matrix over the prime field of order ``p``."""

    __slots__ = ("p", "entries")

    def __init__(self, p: int, entries):
        a = np.array(entries, dtype=np.int64) % p
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        self.p = p
        self.entries = a
        a.setflags(write=False)

    @classmethod
    def identity(cls, p: int, dim: int) -> "FpMatrix":
        return cls(p, np.eye(dim, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other):
        if isinstance(other, FpMatrix):
            if other.p != self.p:
                raise ValueError("moduli differ")
            return FpMatrix(self.p, mat_mul(self.entries, other.entries, self.p))
        if isinstance(other, FpVector):
            if other.p != self.p:
                raise ValueError("moduli differ")
            return FpVector(self.p, mat_apply(self.entries, other.entries, self.p))
        return NotImplemented

    def apply(self, v) -> tuple[int, ...]:
        return tuple(int(x) for x in mat_apply(self.entries, v, self.p))

    def inverse(self) -> "FpMatrix":
        return FpMatrix(self.p, mat_inverse(self.entries, self.p))

    def is_invertible(self) -> bool:
        return mat_rank(self.entries, self.p) == self.dim

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def __eq__(self, other):
        return (
            isinstance(other, FpMatrix)
            and self.p == other.p
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.p, self.entries.tobytes()))

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.tolist()})"


@dataclass(frozen=True)
class FpVector:
    p: int
    entries: tuple

    def __init__(self, p: int, entries):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "entries", tuple(int(x) % p for x in entries))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __add__(self, other: "FpVector") -> "FpVector":
        return FpVector(self.p, [a + b for a, b in zip(self.entries, other.entries)])

    def __iter__(self):
        return iter(self.entries)


def encode(v: Sequence[int], p: int) -> int:
    idx = 0
    for x in reversed(list(v)):
        idx = idx * p + int(x)
    return idx


def decode(index: int, p: int, dim: int) -> tuple[int, ...]:
    out = []
    for _ in range(dim):
        out.append(index % p)
        index //= p
    return tuple(out)


def all_vectors(p: int, dim: int) -> np.ndarray:
    """Array of shape (p**dim, dim); row ``i`` decodes to index ``i``."""
    idx = np.arange(p ** dim, dtype=np.int64)
    return np.stack([(idx // p ** j) % p for j in range(dim)], axis=1)


def _encode_rows(rows: np.ndarray, p: int) -> np.ndarray:
    w = p ** np.arange(rows.shape[1], dtype=np.int64)
    return rows @ w


# matrix groups -----------------------------------------------------------


@dataclass
class MatrixGroup:
    p: int
    dim: int
    generators: list[FpMatrix]
    decomposition: list[list[tuple[int, ...]]] | None = None
    _order: int | None = field(default=None, repr=False)

    def __post_init__(self):
        _check_prime(self.p)
        self.generators = [
            g if isinstance(g, FpMatrix) else FpMatrix(self.p, g) for g in self.generators
        ]
        for g in self.generators:
            if g.dim != self.dim or g.p != self.p:
                raise ValueError("generator shape or modulus mismatch")
            if not g.is_invertible():
                raise ValueError("generator is not invertible")
        if self.decomposition is not None:
            self.decomposition = [[tuple(int(x) % self.p for x in v) for v in basis]
                                  for basis in self.decomposition]
            total = [v for basis in self.decomposition for v in basis]
            if len(total) != self.dim or mat_rank(np.array(total), self.p) != self.dim:
                raise ValueError("decomposition is not a direct sum of the space")
            for g in self.generators:
                self.summand_permutation(g)

    def _summand_of(self, v) -> int | None:
        for j, basis in enumerate(self.decomposition):
            B = np.array(basis, dtype=np.int64)
            if mat_rank(np.vstack([B, np.asarray(v)]), self.p) == len(basis):
                return j
        return None

    def summand_permutation(self, g: FpMatrix) -> tuple[int, ...]:
        """Image of each summand index; raises if ``g`` breaks the decomposition."""
        if self.decomposition is None:
            raise ValueError("no decomposition")
        out = []
        for basis in self.decomposition:
            targets = {self._summand_of(g.apply(v)) for v in basis}
            if len(targets) != 1 or None in targets:
                raise ValueError("generator does not permute the summands")
            out.append(targets.pop())
        if sorted(out) != list(range(len(out))):
            raise ValueError("generator does not permute the summands")
        return tuple(out)

    def order(self) -> int:
        if self._order is None:
            self._order = matrix_chain(self).order()
        return self._order

    def identity(self) -> FpMatrix:
        return FpMatrix.identity(self.p, self.dim)


class MatOps:
    """Element operations for stabilizer chains of matrices acting on vectors."""

    def __init__(self, p: int, dim: int):
        self.p = p
        self.dim = dim
        self.identity = np.eye(dim, dtype=np.int64)

    def mul(self, a, b):
        return (a @ b) % self.p

    def inv(self, a):
        return mat_inverse(a, self.p)

    def image(self, a, x):
        return tuple(int(y) for y in (a @ np.asarray(x, dtype=np.int64)) % self.p)

    def eq(self, a, b):
        return np.array_equal(a, b)

    def is_identity(self, a):
        return np.array_equal(a, self.identity)

    def moved_point(self, a):
        for j in range(self.dim):
            e = tuple(int(i == j) for i in range(self.dim))
            if self.image(a, e) != e:
                return e
        raise ValueError("identity has no moved point")


def matrix_chain(H: MatrixGroup, base: Sequence = (), order: int | None = None) -> StabChain:
    """Stabilizer chain of ``H`` acting on vectors, with ``base`` as prefix."""
    ops = MatOps(H.p, H.dim)
    base = [tuple(int(x) % H.p for x in v) for v in base]
    return StabChain.build(ops, [g.entries for g in H.generators], base, order)


def vector_stabilizer_order(
    H: MatrixGroup, vectors: Sequence, order: int | None = None
) -> int:
    """``|C_H(vectors)|`` from a chain that fixes ``vectors`` first."""
    ch = matrix_chain(H, vectors, order)
    return ch.stabilizer_order(len(list(vectors)))


def orbit_size(H: MatrixGroup, v: Sequence[int], cap: int = DEFAULT_POINT_CAP) -> int:
    """Length of the ``H``-orbit of ``v`` (breadth first over packed indices)."""
    p, d = H.p, H.dim
    if p ** d > cap:
        raise CapExceeded(f"{p}^{d} vectors exceed the point cap {cap}")
    seen = np.zeros(p ** d, dtype=bool)
    start = np.array([list(v)], dtype=np.int64) % p
    seen[_encode_rows(start, p)] = True
    frontier = start
    mats = [g.entries.T for g in H.generators]
    count = 1
    while len(frontier):
        imgs = np.concatenate([(frontier @ M) % p for M in mats])
        codes = _encode_rows(imgs, p)
        codes, first = np.unique(codes, return_index=True)
        new = ~seen[codes]
        seen[codes[new]] = True
        count += int(new.sum())
        frontier = imgs[first[new]]
    return count


@dataclass
class VectorIndex:
    """Correspondence between vectors and points of a permutation action."""

    p: int
    dim: int
    domain: str

    def point_of(self, v: Sequence[int]) -> int:
        idx = encode([int(x) % self.p for x in v], self.p)
        if self.domain == "nonzero":
            if idx == 0:
                raise ValueError("zero vector is not in the domain")
            return idx - 1
        return idx

    def vector_of(self, point: int) -> tuple[int, ...]:
        return decode(point + (1 if self.domain == "nonzero" else 0), self.p, self.dim)


def _vector_permutations(H: MatrixGroup, mats, cap: int) -> list[np.ndarray]:
    p, d = H.p, H.dim
    if p ** d > cap:
        raise CapExceeded(f"{p}^{d} vectors exceed the point cap {cap}")
    V = all_vectors(p, d)
    return [_encode_rows((V @ np.asarray(M).T) % p, p) for M in mats]


def as_permutation_group(
    H: MatrixGroup, domain: str = "all", cap: int = DEFAULT_POINT_CAP
) -> tuple[PermGroup, VectorIndex]:
    """``H`` acting on all vectors or on nonzero vectors."""
    if domain not in ("all", "nonzero"):
        raise ValueError("domain must be 'all' or 'nonzero'")
    images = _vector_permutations(H, [g.entries for g in H.generators], cap)
    n = H.p ** H.dim
    if domain == "nonzero":
        gens = [_perm([int(x) - 1 for x in img[1:]]) for img in images]
        G = PermGroup(gens, n - 1)
    else:
        G = PermGroup([_perm(img.tolist()) for img in images], n)
    return G, VectorIndex(H.p, H.dim, domain)


def affine_group(H: MatrixGroup, cap: int = DEFAULT_POINT_CAP) -> PermGroup:
    """``V`` semidirect ``H`` on all vectors: ``H`` plus translations by ``e_i``."""
    G, _ = as_permutation_group(H, "all", cap)
    p, d = H.p, H.dim
    V = all_vectors(p, d)
    gens = list(G.generators)
    for i in range(d):
        shifted = V.copy()
        shifted[:, i] = (shifted[:, i] + 1) % p
        gens.append(_perm(_encode_rows(shifted, p).tolist()))
    return PermGroup(gens, p ** d)


def block_diagonal(H: MatrixGroup, copies: int) -> MatrixGroup:
    """``H`` acting diagonally on the direct sum of ``copies`` copies of its module."""
    d = H.dim
    gens = []
    for g in H.generators:
        M = np.zeros((d * copies, d * copies), dtype=np.int64)
        for c in range(copies):
            M[c * d:(c + 1) * d, c * d:(c + 1) * d] = g.entries
        gens.append(FpMatrix(H.p, M))
    return MatrixGroup(H.p, d * copies, gens)


def general_linear_group(p: int, dim: int) -> MatrixGroup:
    """GL(dim, p) from a primitive-root scalar, elementary and cycle generators."""
    _check_prime(p)
    gens = []
    D = np.eye(dim, dtype=np.int64)
    D[0, 0] = primitive_root(p)
    if p > 2:
        gens.append(D)
    if dim > 1:
        E = np.eye(dim, dtype=np.int64)
        E[0, 1] = 1
        gens.append(E)
        gens.append(permutation_matrix([(j + 1) % dim for j in range(dim)], p))
    if not gens:
        gens.append(np.eye(dim, dtype=np.int64))
    return MatrixGroup(p, dim, gens)


def special_linear_group(p: int, dim: int) -> MatrixGroup:
    """SL(dim, p) from elementary transvections."""
    _check_prime(p)
    gens = []
    for i in range(dim):
        for j in range(dim):
            if i != j and (j == i + 1 or (i == dim - 1 and j == 0)):
                E = np.eye(dim, dtype=np.int64)
                E[i, j] = 1
                gens.append(E)
    if dim > 1:
        E = np.eye(dim, dtype=np.int64)
        E[1, 0] = 1
        gens.append(E)
    return MatrixGroup(p, dim, gens or [np.eye(dim, dtype=np.int64)])
