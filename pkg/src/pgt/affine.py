"""Base constructions for linear groups preserving a direct sum decomposition."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bases import BaseCertificate, exact_min_base
from .distinguishing import (
    Coloring,
    distinguish_transitive,
    exact_dist_number,
    is_distinguishing,
)
from .errors import CapExceeded, HypothesisError, VerificationError
from .gflinear import (
    DEFAULT_POINT_CAP,
    FpMatrix,
    MatrixGroup,
    affine_group,
    all_vectors,
    as_permutation_group,
    block_diagonal,
    decode,
    encode,
    mat_inverse,
    matrix_chain,
    orbit_size,
)
from .permcore import PermGroup, Permutation, StabChain
from .permcore.perm import _perm


def _digits(value: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        out.append(value % base)
        value //= base
    return out


def _log_ceil(d: int, q: int) -> int:
    """Smallest b with q**b >= d."""
    b = 0
    while q ** b < d:
        b += 1
    return b


# imprimitive modules -----------------------------------------------------


@dataclass
class ImprimitiveModule:
    """A matrix group permuting the summands of ``V = V_0 + ... + V_{t-1}``.

    ``combined`` acts on ``t + |V|`` points: summand ``i`` is point ``i``
    and vector ``v`` is point ``t + index(v)``.
    """

    group: MatrixGroup
    combined: PermGroup
    summand_action: PermGroup
    summand_stabilizers: list[PermGroup]
    bottom_images: list[MatrixGroup]
    kernel_N: PermGroup
    transversal: list[Permutation]
    summand_vectors: list[list[tuple[int, ...]]] = field(repr=False)

    @property
    def t(self) -> int:
        return self.summand_action.degree

    @property
    def p(self) -> int:
        return self.group.p

    @property
    def summand_size(self) -> int:
        return len(self.summand_vectors[0])

    def point(self, v: Sequence[int]) -> int:
        return self.t + encode([int(x) % self.p for x in v], self.p)

    def vector(self, point: int) -> tuple[int, ...]:
        return decode(point - self.t, self.p, self.group.dim)

    def stabilizer_of_vectors(self, vectors, within: PermGroup | None = None) -> PermGroup:
        G = within if within is not None else self.combined
        return G.pointwise_stabilizer([self.point(v) for v in vectors])


def _restricted_matrix(g: FpMatrix, basis, full_inverse, cols, p) -> np.ndarray:
    """Matrix of ``g`` on a summand in its own basis coordinates."""
    images = np.array([g.apply(v) for v in basis], dtype=np.int64).T
    coords = (full_inverse @ images) % p
    return coords[cols]


def imprimitive_module(H: MatrixGroup, cap: int = DEFAULT_POINT_CAP) -> ImprimitiveModule:
    if H.decomposition is None:
        raise HypothesisError("matrix group has no direct sum decomposition")
    p, d = H.p, H.dim
    t = len(H.decomposition)
    VG, _ = as_permutation_group(H, "all", cap)
    gens = []
    for g, gv in zip(H.generators, VG.generators):
        top = H.summand_permutation(g)
        gens.append(_perm(list(top) + [t + x for x in gv]))
    n = t + p ** d
    combined = PermGroup(gens, n)
    order = VG.order()
    combined._order = order
    ch = StabChain.build(combined.ops, gens, list(range(t)), order)

    P = PermGroup([_perm(g[:t]) for g in gens], t)
    kern = PermGroup._from_chain(ch.sub(t), n)
    transversal: list = [None] * t
    for y, u in ch.trans[0].items():
        transversal[y] = u

    Q = np.array([v for basis in H.decomposition for v in basis], dtype=np.int64).T
    Qinv = mat_inverse(Q, p)
    H0 = PermGroup._from_chain(ch.sub(1), n)
    stabs, bottoms = [], []
    start = 0
    summand_vectors = []
    for i, basis in enumerate(H.decomposition):
        cols = list(range(start, start + len(basis)))
        start += len(basis)
        u = transversal[i]
        if u is None:
            # summand outside the orbit of summand 0
            Hi = PermGroup._from_chain(StabChain.build(combined.ops, gens, [i], order).sub(1), n)
        else:
            uinv = u.inverse()
            Hi = PermGroup([u * h * uinv for h in H0.generators], n)
            Hi._order = H0.order()
        stabs.append(Hi)
        mats = []
        for h in Hi.generators:
            # recover the matrix of h from its action on the standard basis
            full = np.array([combined_vector(h, e, t, p, d) for e in np.eye(d, dtype=np.int64)]).T
            mats.append(_restricted_matrix(FpMatrix(p, full), basis, Qinv, cols, p))
        dim_i = len(basis)
        if not mats:
            mats = [np.eye(dim_i, dtype=np.int64)]
        bottoms.append(MatrixGroup(p, dim_i, mats))
        B = np.array(basis, dtype=np.int64)
        coeffs = all_vectors(p, dim_i)
        summand_vectors.append([tuple(int(x) for x in row) for row in (coeffs @ B) % p])
    return ImprimitiveModule(H, combined, P, stabs, bottoms, kern, transversal, summand_vectors)


def combined_vector(h, v, t: int, p: int, d: int) -> tuple[int, ...]:
    return decode(h[t + encode(v, p)] - t, p, d)


# K_1 = 1 -----------------------------------------------------------------


def _summand_coloring(P: PermGroup, oracle_cap: int) -> tuple[Coloring, bool]:
    """Distinguishing coloring of the summands and whether it is optimal."""
    if P.degree <= oracle_cap:
        _, col = exact_dist_number(P, cap=oracle_cap)
        return col, True
    if P.is_transitive():
        return distinguish_transitive(P), False
    return Coloring(list(range(P.degree)), P.degree), False


def trivK1_base(
    M: ImprimitiveModule, L: PermGroup | None = None, oracle_cap: int = 12
) -> BaseCertificate:
    """Base of ``L`` (default: the whole group) when every bottom image is trivial.

    Summands are colored distinguishingly for the action of ``L``; the
    color of each summand is written in base ``|V_1|`` and digit ``s`` is
    realized by the vector of that summand corresponding (along
    ``L``-orbits) to the digit-th vector of a reference summand.
    """
    L = L if L is not None else M.combined
    t, p = M.t, M.p
    for i in range(t):
        Li = L.pointwise_stabilizer([i])
        for basis_vec in M.group.decomposition[i]:
            x = M.point(basis_vec)
            if any(g[x] != x for g in Li.generators):
                raise HypothesisError(f"summand {i} has a nontrivial bottom action")
    PL = L.restrict(list(range(t)))
    if PL.order() == 1:
        return BaseCertificate([], 1, exact=True, notes={"colors": 1})
    col, optimal = _summand_coloring(PL, oracle_cap)
    q = M.summand_size
    b = _log_ceil(col.color_count, q)

    # label vector points by L-orbit
    label = {}
    for orb in L.orbits():
        for x in orb:
            label[x] = orb[0]
    by_label: list[dict[int, tuple]] = []
    for i in range(t):
        by_label.append({label[M.point(v)]: v for v in M.summand_vectors[i]})
    ref = {}
    for orb in PL.orbits():
        for i in orb:
            ref[i] = orb[0]

    d = M.group.dim
    ws = []
    for s in range(b):
        w = np.zeros(d, dtype=np.int64)
        for i in range(t):
            digit = _digits(col.colors[i], q, b)[s]
            v_ref = M.summand_vectors[ref[i]][digit]
            w = w + np.array(by_label[i][label[M.point(v_ref)]])
        ws.append(tuple(int(x) for x in w % p))
    residual = M.stabilizer_of_vectors(ws, L).order()
    if residual != 1:
        raise VerificationError("summand-coloring vectors do not form a base")
    return BaseCertificate(ws, 1, exact=optimal, notes={"colors": col.color_count,
                                                       "summand_coloring": col.colors})


# bounded K_1 -------------------------------------------------------------


def boundedK1_base(
    M: ImprimitiveModule, per_summand_bases=None, oracle_cap: int = 12
) -> BaseCertificate:
    """Base from per-summand bases summed across summands, then a summand coloring.

    ``per_summand_bases`` is either a list of vectors in ``V_1`` (moved to
    the other summands by the transversal) or a list of ``t`` such lists.
    When omitted, a minimal base of the bottom image on ``V_1`` is used.
    """
    t, p, d = M.t, M.p, M.group.dim
    if per_summand_bases is None:
        K1 = M.bottom_images[0]
        KG, idx = as_permutation_group(K1, "all")
        cert = exact_min_base(KG)
        basis = np.array(M.group.decomposition[0], dtype=np.int64)
        first = [tuple(int(x) for x in (np.array(idx.vector_of(pt)) @ basis) % p)
                 for pt in cert.points]
        per_summand_bases = first
    if per_summand_bases and not isinstance(per_summand_bases[0][0], (list, tuple)):
        first = [tuple(v) for v in per_summand_bases]
        if any(u is None for u in M.transversal):
            raise HypothesisError("summand action is not transitive; give one base per summand")
        per = []
        for u in M.transversal:
            per.append([M.vector(u[M.point(v)]) for v in first])
    else:
        per = [[tuple(v) for v in vs] for vs in per_summand_bases] if per_summand_bases else [[]] * t
    lengths = {len(vs) for vs in per}
    if len(lengths) > 1 or len(per) != t:
        raise HypothesisError("per-summand bases must have one common length")
    b = lengths.pop() if lengths else 0
    for i, vs in enumerate(per):
        S = M.stabilizer_of_vectors(vs, M.summand_stabilizers[i])
        for basis_vec in M.group.decomposition[i]:
            x = M.point(basis_vec)
            if any(g[x] != x for g in S.generators):
                raise HypothesisError(f"supplied vectors are not a base on summand {i}")
    ws = []
    for s in range(b):
        w = sum(np.array(per[i][s], dtype=np.int64) for i in range(t))
        ws.append(tuple(int(x) for x in np.asarray(w) % p))
    L = M.stabilizer_of_vectors(ws) if ws else M.combined
    rest = trivK1_base(M, L, oracle_cap)
    points = ws + list(rest.points)
    residual = M.stabilizer_of_vectors(points).order()
    if residual != 1:
        raise VerificationError("bounded-bottom construction is not a base")
    log_v = d * math.log2(p)
    bound = b + 1 + math.log2(48) + math.log2(M.summand_action.order()) / log_v
    return BaseCertificate(points, 1, exact=False, notes={
        "per_summand": b, "summand_part": len(rest), "bound": bound,
    })


# deleted permutation modules ---------------------------------------------


def standard_generators(k: int, source: str) -> list[Permutation]:
    src = source.lower()
    if src == "sym":
        return [Permutation.from_cycles(k, (0, 1)), Permutation.from_cycles(k, tuple(range(k)))]
    if src == "alt":
        cyc = tuple(range(k)) if k % 2 else tuple(range(1, k))
        return [Permutation.from_cycles(k, (0, 1, 2)), Permutation.from_cycles(k, cyc)]
    raise ValueError("source must be 'sym' or 'alt'")


def module_dim(k: int, t: int, p: int) -> int:
    return t * (k - 2 if k % p == 0 else k - 1)


def project(u: Sequence[int], k: int, t: int, p: int) -> tuple[int, ...]:
    """Coordinates of ``u`` (column sums zero) in the deleted module.

    Per column, the coordinate on ``e_j - e_{j+1}`` is the prefix sum
    ``c_j = a_1 + ... + a_j``; when ``p`` divides ``k`` the all-ones
    vector is factored out and the representative has
    ``c_j + j * c_{k-1}`` for ``j <= k-2``.
    """
    a = np.asarray(u, dtype=np.int64).reshape(t, k) % p
    if np.any(a.sum(axis=1) % p):
        raise ValueError("vector has a column with nonzero coordinate sum")
    c = np.cumsum(a, axis=1)[:, : k - 1] % p
    if k % p == 0:
        j = np.arange(1, k - 1)
        c = (c[:, : k - 2] + j * c[:, [k - 2]]) % p
    return tuple(int(x) for x in c.reshape(-1))


def lift_basis(k: int, t: int, p: int) -> list[np.ndarray]:
    """Vectors of the letter space lifting the module basis."""
    per = k - 2 if k % p == 0 else k - 1
    out = []
    for i in range(t):
        for j in range(per):
            u = np.zeros(k * t, dtype=np.int64)
            u[i * k + j] = 1
            u[i * k + j + 1] = p - 1
            out.append(u)
    return out


def permute_letters(g: Sequence[int], u: Sequence[int]) -> np.ndarray:
    """Letter permutation acting on a vector: the coefficient at ``x`` moves to ``g(x)``."""
    u = np.asarray(u)
    out = np.empty_like(u)
    out[list(g)] = u
    return out


def module_matrix(g: Sequence[int], k: int, t: int, p: int) -> FpMatrix:
    cols = [project(permute_letters(g, b), k, t, p) for b in lift_basis(k, t, p)]
    return FpMatrix(p, np.array(cols, dtype=np.int64).T)


@dataclass
class DeletedPermModule:
    k: int
    p: int
    source: str
    case_tag: str
    module_dim: int
    generator_images: list[FpMatrix]
    source_generators: list[Permutation]
    basis_description: str

    def matrix_group(self) -> MatrixGroup:
        return MatrixGroup(self.p, self.module_dim, list(self.generator_images))

    def check_relations(self, rng: random.Random | None = None, words: int = 20,
                        length: int = 12) -> bool:
        """Random words in the letter generators match the products of their images."""
        rng = rng or random.Random(0)
        n = len(self.source_generators)
        for _ in range(words):
            word = [rng.randrange(n) for _ in range(length)]
            perm = Permutation.identity(self.k)
            mat = FpMatrix.identity(self.p, self.module_dim)
            for w in word:
                perm = perm * self.source_generators[w]
                mat = mat @ self.generator_images[w]
            if mat != module_matrix(perm, self.k, 1, self.p):
                return False
        return True


def deleted_perm_module(k: int, p: int, source: str = "sym") -> DeletedPermModule:
    if k < 5:
        raise ValueError("need at least 5 letters")
    gens = standard_generators(k, source)
    images = [module_matrix(g, k, 1, p) for g in gens]
    divides = k % p == 0
    desc = "basis e_i - e_(i+1), i < k"
    if divides:
        desc += "; modulo the all-ones vector, last basis element dropped"
    return DeletedPermModule(k, p, source.lower(), "p|k" if divides else "p!|k",
                             module_dim(k, 1, p), images, gens, desc)


# alternating-induced modules ---------------------------------------------


def _infer_letters(H: PermGroup, k: int | None) -> tuple[int, int]:
    n = H.degree
    if k is None:
        from .permcore import minimal_nontrivial_block_system

        B = minimal_nontrivial_block_system(H) if H.is_transitive() else None
        k = B.block_size if B is not None else n
    if n % k:
        raise HypothesisError("letter count is not a multiple of k")
    t = n // k
    for g in H.generators:
        for i in range(t):
            targets = {g[i * k + j] // k for j in range(k)}
            if len(targets) != 1:
                raise HypothesisError("group does not preserve the letter columns")
    return k, t


def _coloring_of(vectors) -> list[tuple]:
    return list(zip(*[tuple(int(x) for x in v) for v in vectors])) if vectors else []


def _letters_stabilizer(H: PermGroup, vectors) -> PermGroup:
    if not vectors:
        return H
    return H.coloring_stabilizer(_coloring_of(vectors))


def induced_module_group(H: PermGroup, k: int, t: int, p: int) -> MatrixGroup:
    mats = [module_matrix(g, k, t, p) for g in H.generators]
    dim = module_dim(k, t, p)
    return MatrixGroup(p, dim, mats or [np.eye(dim, dtype=np.int64)])


def alt_induced_vectors(base_of_U, k: int, t: int, p: int) -> list[np.ndarray]:
    """``w_1, w_2, w_3`` followed by ``u^e, u^f`` for each ``u`` (letter coordinates)."""
    out = []
    for s in range(3):
        w = np.zeros(k * t, dtype=np.int64)
        for i in range(t):
            w[i * k + s] += 1
            w[i * k + s + 1] -= 1
        out.append(w % p)
    for u in base_of_U:
        a = np.asarray(u, dtype=np.int64).reshape(t, k) % p
        ue = np.zeros_like(a)
        ue[:, 2:] = a[:, 2:]
        ue[:, 0] = -a[:, 2:].sum(axis=1)
        uf = np.zeros_like(a)
        uf[:, :2] = a[:, :2]
        uf[:, 2] = -(a[:, 0] + a[:, 1])
        out.append(ue.reshape(-1) % p)
        out.append(uf.reshape(-1) % p)
    return out


def alt_induced_base(
    H: PermGroup, p: int, base_of_U, k: int | None = None, point_cap: int = DEFAULT_POINT_CAP
) -> BaseCertificate:
    """Base of size ``2b + 3`` on the deleted module from a base of ``H`` on letters.

    ``H`` permutes ``k*t`` letters (letter ``i*k + j`` is letter ``j`` of
    column ``i``) and preserves columns.  The result is checked twice: by
    a coloring stabilizer on the letters and by a stabilizer chain of the
    matrix group on the module.  When ``p`` divides ``k`` each vector's
    stabilizer is also compared with that of its image in the quotient.
    """
    k, t = _infer_letters(H, k)
    if k < 7:
        raise HypothesisError("need at least 7 letters per column")
    base_of_U = [np.asarray(u, dtype=np.int64) % p for u in base_of_U]
    if _letters_stabilizer(H, base_of_U).order() != 1:
        raise HypothesisError("supplied vectors are not a base on the letter space")
    lifted = alt_induced_vectors(base_of_U, k, t, p)
    if _letters_stabilizer(H, lifted).order() != 1:
        raise VerificationError("constructed vectors do not form a base on the letters")
    coords = [project(u, k, t, p) for u in lifted]
    MG = induced_module_group(H, k, t, p)
    order = H.order()
    ch = matrix_chain(MG, coords, order)
    if ch.stabilizer_order(len(coords)) != 1 or ch.order() != order:
        raise VerificationError("constructed vectors do not form a base on the module")
    notes = {"k": k, "t": t, "b_U": len(base_of_U), "module_dim": MG.dim,
             "quotient": k % p == 0, "lifted": [tuple(int(x) for x in u) for u in lifted]}
    if k % p == 0:
        notes["quotient_checks"] = _quotient_checks(H, lifted, coords, k, t, p, point_cap)
    return BaseCertificate(coords, 1, exact=False, notes=notes)


def _quotient_checks(H, lifted, coords, k, t, p, cap) -> int:
    """Stabilizers of the constructed vectors equal those of their quotient images.

    For ``w_1, w_2, w_3`` and every ``u^f`` the comparison is in ``H``; for
    ``u^e`` it is in the stabilizer of ``w_1, w_2, w_3``.
    """
    L = _letters_stabilizer(H, lifted[:3])
    checked = 0
    for pos, (u, x) in enumerate(zip(lifted, coords)):
        R = L if pos >= 3 and (pos - 3) % 2 == 0 else H
        S = _letters_stabilizer(R, [u])
        for g in S.generators:
            if module_matrix(g, k, t, p).apply(x) != tuple(x):
                raise VerificationError("stabilizer of a lift moves its image")
        RM = induced_module_group(R, k, t, p)
        try:
            size = orbit_size(RM, x, cap)
        except CapExceeded:
            size = len(matrix_chain(RM, [x], R.order()).orbits[0])
        if R.order() // size != S.order():
            raise VerificationError("quotient image has a larger stabilizer than its lift")
        checked += 1
    return checked


def letter_vectors_from_coloring(colors: Sequence[int], count: int, p: int) -> list[np.ndarray]:
    """``ceil(log_p count)`` vectors whose tuple of entries encodes each color."""
    b = _log_ceil(count, p)
    return [np.array([_digits(c, p, b)[s] for c in colors], dtype=np.int64) for s in range(b)]


def alt_induced_pipeline(H: PermGroup, p: int, k: int | None = None):
    """Letter coloring -> base of the letter space -> base of the deleted module.

    Returns the certificate and a report with the achieved size and the
    bound ``17 + 2 log|H| / log|V|``.
    """
    k, t = _infer_letters(H, k)
    col = distinguish_transitive(H) if H.is_transitive() else Coloring(
        list(range(H.degree)), H.degree)
    if not is_distinguishing(H, col.colors):
        raise VerificationError("letter coloring is not distinguishing")
    base_U = letter_vectors_from_coloring(col.colors, col.color_count, p)
    cert = alt_induced_base(H, p, base_U, k)
    dim = cert.notes["module_dim"]
    bound = 17 + 2 * math.log2(H.order()) / (dim * math.log2(p))
    report = {"colors": col.color_count, "b_U": len(base_U), "size": len(cert),
              "bound": bound, "within_bound": len(cert) <= bound}
    return cert, report


# repeated modules --------------------------------------------------------


def repeated_module_base(L: MatrixGroup, l: int, cap: int = DEFAULT_POINT_CAP) -> BaseCertificate:
    """Base on ``l`` copies of the module, built from a minimal base on one copy."""
    if l < 1:
        raise ValueError("multiplicity must be positive")
    G, idx = as_permutation_group(L, "all", cap)
    single = exact_min_base(G)
    xs = [idx.vector_of(pt) for pt in single.points]
    b = -(-len(xs) // l)
    zero = (0,) * L.dim
    ys = []
    for r in range(b):
        chunk = xs[r * l:(r + 1) * l]
        chunk = chunk + [zero] * (l - len(chunk))
        ys.append(tuple(x for v in chunk for x in v))
    big = block_diagonal(L, l)
    BG, bidx = as_permutation_group(big, "all", cap)
    residual = BG.pointwise_stabilizer([bidx.point_of(y) for y in ys]).order()
    if residual != 1:
        raise VerificationError("chunked vectors are not a base of the repeated module")
    return BaseCertificate(ys, 1, exact=single.exact, notes={"b_W": len(xs)})


# affine groups -----------------------------------------------------------


def affine_bridge(H: MatrixGroup, cap: int = DEFAULT_POINT_CAP) -> tuple[int, int]:
    """Exact base sizes of ``V`` semidirect ``H`` and of ``H`` on ``V``."""
    A = affine_group(H, cap)
    G, _ = as_permutation_group(H, "all", cap)
    return len(exact_min_base(A)), len(exact_min_base(G))
