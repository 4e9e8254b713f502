import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import closure, coloring_stabilizer_count, dist_number, element_array
from pgt import corpus as cp
from pgt.distinguishing import (
    Coloring,
    construct_large_bottom,
    construct_small_bottom,
    construct_trivial_bottom,
    distinguish_transitive,
    exact_dist_number,
    is_distinguishing,
    stabilizer_of_coloring,
    transport_block_coloring,
    within_bound,
)
from pgt.errors import CapExceeded, HypothesisError
from pgt.permcore import (
    BlockSystem,
    Permutation,
    PermGroup,
    alternating_group,
    block_action,
    cyclic_group,
    linking_structure,
    minimal_nontrivial_block_system,
    symmetric_group,
    trivial_group,
)

# distinguishing numbers frozen from ``brute.dist_number`` (all colorings)
FROZEN_D = {
    "Sym(2)": 2, "C3": 2, "Sym(3)": 3, "C4": 2, "V4": 2, "D4": 3, "Alt(4)": 3,
    "Sym(4)": 4, "C5": 2, "D5": 3, "AGL(1,5)": 3, "Alt(5)": 4, "Sym(5)": 5, "C6": 2,
    "D6": 2, "Sym(2) wr Sym(3)": 3, "Sym(3) wr Sym(2)": 4, "Sym(3) diag Sym(2)": 2,
    "PSL(2,5)": 3, "PGL(2,5)": 4, "Alt(6)": 5, "Sym(6)": 6, "C7": 2, "D7": 2, "F21": 2,
    "AGL(1,7)": 3, "AGL(3,2)": 4, "Alt(7)": 6, "Sym(7)": 7, "C8": 2, "D8": 2,
    "Sym(2) wr Sym(4)": 4, "Sym(4) wr Sym(2)": 5, "Sym(4) diag Sym(2)": 3, "C2 wr C4": 3,
    "PSL(2,7)": 3, "PGL(2,7)": 3, "C9": 2, "D9": 2, "Sym(3) wr Sym(3)": 4,
    "Sym(3) wr Sym(2) product": 3, "AGL(2,3)": 3, "ASL(2,3)": 3, "C10": 2, "D10": 2,
    "Sym(5) on pairs": 3, "Sym(2) wr Sym(5)": 4,
}


def _row_action(m, k, top=None):
    S = top or symmetric_group(k)
    gens = [[r * k + g[j] for r in range(m) for j in range(k)] for g in S.generators]
    G = PermGroup(gens, m * k)
    B = BlockSystem.from_blocks([[r * k + j for r in range(m)] for j in range(k)])
    return G, B


def _consecutive(G, m):
    return BlockSystem.from_blocks([list(range(s, s + m)) for s in range(0, G.degree, m)])


def _top(G, B):
    return PermGroup([B.block_permutation(g) for g in G.generators], B.block_count)


# coloring stabilizers ------------------------------------------------------


def test_stabilizer_extremes():
    G = symmetric_group(5)
    assert stabilizer_of_coloring(G, [0] * 5).order() == 120
    assert stabilizer_of_coloring(G, list(range(5))).order() == 1


def test_stabilizer_two_classes():
    G = symmetric_group(4)
    S = stabilizer_of_coloring(G, Coloring([0, 0, 1, 1], 2))
    E = element_array(G.generators, 4)
    # each class is fixed setwise: Sym(2) x Sym(2)
    assert S.order() == 4
    assert coloring_stabilizer_count(E, [0, 0, 1, 1]) == 4
    # allowing the two classes to be swapped gives the order-8 partition stabilizer
    swapped = coloring_stabilizer_count(E, [1, 1, 0, 0])
    assert sum(1 for g in E if {frozenset(g[[0, 1]]), frozenset(g[[2, 3]])} ==
               {frozenset((0, 1)), frozenset((2, 3))}) == 8
    assert swapped == 4


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 7), st.data())
def test_stabilizer_matches_enumeration(n, data):
    G = cp.wreath(cyclic_group(2), symmetric_group(n // 2 + 1)) if n % 2 else \
        cp.parse_group({"name": "dihedral", "n": n})
    colors = data.draw(st.lists(st.integers(0, 2), min_size=G.degree, max_size=G.degree))
    E = element_array(G.generators, G.degree)
    assert G.coloring_stabilizer(colors).order() == coloring_stabilizer_count(E, colors)
    assert is_distinguishing(G, colors) == (coloring_stabilizer_count(E, colors) == 1)


def test_coloring_validates_range():
    with pytest.raises(ValueError):
        Coloring([0, 3], 2)
    assert Coloring([0, 0, 1], 4).used_colors == 2


# exact oracle ----------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_symmetric_needs_n(n):
    d, col = exact_dist_number(symmetric_group(n))
    assert d == n
    assert is_distinguishing(symmetric_group(n), col.colors)


def test_alt5_and_c4():
    assert exact_dist_number(alternating_group(5))[0] == 4
    assert exact_dist_number(cyclic_group(4))[0] == 2


def test_trivial_group_one_color():
    d, col = exact_dist_number(trivial_group(4))
    assert d == 1 and col.colors == [0, 0, 0, 0]


def test_canonical_witness():
    for label, spec, _ in cp.transitive_corpus(7):
        G = cp.parse_group(spec)
        d, col = exact_dist_number(G)
        first = {}
        for c in col.colors:
            first.setdefault(c, len(first))
        assert col.colors[0] == 0
        assert all(first[c] == c for c in col.colors), label
        assert col.used_colors == d and col.verified


def test_frozen_distinguishing_numbers():
    corpus = {label: spec for label, spec, _ in cp.transitive_corpus(10)}
    for label, d in FROZEN_D.items():
        assert exact_dist_number(cp.parse_group(corpus[label]))[0] == d, label


def test_frozen_values_reproduced_by_brute_force():
    corpus = {label: spec for label, spec, _ in cp.transitive_corpus(10)}
    for label in ("D4", "AGL(1,5)", "Alt(5)", "PGL(2,5)", "Sym(3) diag Sym(2)"):
        G = cp.parse_group(corpus[label])
        assert dist_number(element_array(G.generators, G.degree), G.degree) == FROZEN_D[label]


@st.composite
def small_groups(draw, max_degree=6):
    n = draw(st.integers(2, max_degree))
    k = draw(st.integers(1, 2))
    return PermGroup([Permutation(draw(st.permutations(list(range(n))))) for _ in range(k)], n)


@settings(max_examples=40, deadline=None)
@given(small_groups())
def test_oracle_matches_brute_force(G):
    E = element_array(G.generators, G.degree)
    d, col = exact_dist_number(G)
    assert d == dist_number(E, G.degree)
    assert coloring_stabilizer_count(E, col.colors) == 1


def test_oracle_modulo_block_kernel():
    for label in ("Sym(2) wr Sym(3)", "Sym(3) wr Sym(2)", "C2 wr C4", "Sym(4) diag Sym(2)"):
        spec = {lb: sp for lb, sp, _ in cp.transitive_corpus(8)}[label]
        G = cp.parse_group(spec)
        N = block_action(G, minimal_nontrivial_block_system(G)).kernel
        E = element_array(G.generators, G.degree)
        NE = element_array(N.generators, N.degree) if N.order() > 1 else \
            np.arange(G.degree)[None, :]
        d, col = exact_dist_number(G, modulo=N)
        assert d == dist_number(E, G.degree, NE), label
        assert is_distinguishing(G, col.colors, modulo=N)


def test_oracle_errors():
    with pytest.raises(CapExceeded):
        exact_dist_number(symmetric_group(13))
    with pytest.raises(HypothesisError):
        exact_dist_number(symmetric_group(3), modulo=PermGroup([Permutation.from_cycles(3, (0, 1))]))


def test_product_bound_on_kernels():
    for label, spec, prim in cp.transitive_corpus(9):
        if prim:
            continue
        G = cp.parse_group(spec)
        N = block_action(G, minimal_nontrivial_block_system(G)).kernel
        d = exact_dist_number(G)[0]
        dN = exact_dist_number(N)[0]
        dQ = exact_dist_number(G, modulo=N)[0]
        assert max(dN, dQ) <= d <= dN * dQ, label


def test_order_root_lower_bound():
    for label, spec, _ in cp.transitive_corpus(10):
        G = cp.parse_group(spec)
        d = exact_dist_number(G)[0]
        # |G|^(1/n) < d  <=>  |G| < d^n
        assert G.order() < d ** G.degree, label


def test_primitive_groups_at_most_four():
    for label, spec, prim in cp.transitive_corpus(10):
        G = cp.parse_group(spec)
        if prim and G.order() * 2 < math.factorial(G.degree):
            assert exact_dist_number(G)[0] <= 4, label


def _minimal_normal_subgroups(G):
    """Minimal normal subgroups as normal closures of conjugacy class representatives."""
    n = G.degree
    ident = tuple(range(n))
    reps, done = [], {ident}
    for x in closure(G.generators, n):
        if x in done:
            continue
        cls = [x]
        done.add(x)
        for y in cls:
            for g in G.generators:
                gi = [0] * n
                for i, v in enumerate(g):
                    gi[v] = i
                z = tuple(gi[y[g[i]]] for i in range(n))
                if z not in done:
                    done.add(z)
                    cls.append(z)
        reps.append(x)
    closures = [G.normal_closure([Permutation(x)]) for x in reps]
    out = []
    for N in closures:
        inside = [M for M in closures if N.contains(M.generators[0]) and M.order() < N.order()]
        if not inside:
            out.append(N)
    return out


def _corpus_with_normal_structure(max_order=1500):
    for label, spec, _ in cp.transitive_corpus(10):
        G = cp.parse_group(spec)
        if G.order() <= max_order:
            yield label, G, _minimal_normal_subgroups(G)


def test_quasiprimitive_groups():
    checked = 0
    for label, G, minimal in _corpus_with_normal_structure():
        if not all(M.is_transitive() for M in minimal):
            continue
        natural = G.order() * 2 >= math.factorial(G.degree)
        assert natural or exact_dist_number(G)[0] <= 4, label
        checked += 1
    assert checked >= 15


def test_transitive_simple_power_normal_subgroup():
    # a transitive minimal normal subgroup is a power of one simple group
    checked = 0
    for label, G, minimal in _corpus_with_normal_structure():
        if not any(M.is_transitive() for M in minimal):
            continue
        natural = G.order() * 2 >= math.factorial(G.degree)
        assert natural or exact_dist_number(G)[0] <= 12, label
        checked += 1
    assert checked >= 15


def test_minimal_normal_subgroups_known_cases():
    S4 = symmetric_group(4)
    (M,) = _minimal_normal_subgroups(S4)
    assert M.order() == 4 and M.is_transitive()
    W = cp.wreath(symmetric_group(2), symmetric_group(3))
    assert all(not M.is_transitive() for M in _minimal_normal_subgroups(W))


# constructions -------------------------------------------------------------


def test_trivial_bottom_row_actions():
    G, B = _row_action(2, 3)
    _, alpha = exact_dist_number(_top(G, B))
    assert alpha.color_count == 3
    col = construct_trivial_bottom(G, B, alpha)
    assert col.color_count == 2 and col.verified
    assert coloring_stabilizer_count(element_array(G.generators, 6), col.colors) == 1

    G, B = _row_action(2, 4)
    _, alpha = exact_dist_number(_top(G, B))
    assert alpha.color_count == 4
    col = construct_trivial_bottom(G, B, alpha)
    assert col.color_count == 2
    assert coloring_stabilizer_count(element_array(G.generators, 8), col.colors) == 1


def test_trivial_bottom_single_block():
    G = trivial_group(3)
    B = BlockSystem.from_blocks([[0, 1, 2]])
    col = construct_trivial_bottom(G, B, Coloring([0], 1))
    assert col.color_count == 1


def test_trivial_bottom_digits_least_significant_first():
    G, B = _row_action(3, 5)
    _, alpha = exact_dist_number(_top(G, B))
    col = construct_trivial_bottom(G, B, alpha)
    c = col.color_count
    assert c == math.ceil(alpha.color_count ** (1 / 3) - 1e-9)
    f = col.trace["positions"]
    for j, blk in enumerate(B.blocks):
        value = sum(col.colors[x] * c ** f[x] for x in blk)
        assert value == alpha.colors[j]


def test_trivial_bottom_rejects_bad_input():
    G = cp.wreath(symmetric_group(2), symmetric_group(3))
    B = _consecutive(G, 2)
    with pytest.raises(HypothesisError):
        construct_trivial_bottom(G, B, Coloring([0, 1, 2], 3))
    G, B = _row_action(2, 3)
    with pytest.raises(HypothesisError):
        construct_trivial_bottom(G, B, Coloring([0, 0, 1], 2))


def test_small_bottom_sym3_wr_sym3():
    G = cp.wreath(symmetric_group(3), symmetric_group(3))
    B = _consecutive(G, 3)
    data = block_action(G, B)
    _, alpha = exact_dist_number(data.top_group)
    _, local = exact_dist_number(data.block_stabilizer_images[0])
    chi = Coloring(transport_block_coloring(G, B, local.colors), local.color_count)
    col = construct_small_bottom(G, B, chi, alpha)
    assert col.color_count <= 3 * math.ceil(3 ** (1 / 3))
    assert col.verified and is_distinguishing(G, col.colors)
    assert col.color_count >= FROZEN_D["Sym(3) wr Sym(3)"]


def test_small_bottom_size_one_blocks():
    G = cyclic_group(5)
    B = BlockSystem.from_blocks([[x] for x in range(5)])
    _, alpha = exact_dist_number(G)
    col = construct_small_bottom(G, B, Coloring([0] * 5, 1), alpha)
    assert col.colors == alpha.colors


def test_small_bottom_c2_wr_c2():
    G = cp.wreath(cyclic_group(2), cyclic_group(2))
    B = _consecutive(G, 2)
    data = block_action(G, B)
    _, alpha = exact_dist_number(data.top_group)
    _, local = exact_dist_number(data.block_stabilizer_images[0])
    chi = Coloring(transport_block_coloring(G, B, local.colors), local.color_count)
    col = construct_small_bottom(G, B, chi, alpha)
    assert col.color_count <= 4
    assert col.used_colors <= 3
    assert col.color_count >= exact_dist_number(G)[0]


def test_small_bottom_rejects_weak_chi():
    G = cp.wreath(symmetric_group(3), symmetric_group(2))
    B = _consecutive(G, 3)
    with pytest.raises(HypothesisError):
        construct_small_bottom(G, B, Coloring([0] * 6, 1), Coloring([0, 1], 2))


def _large(G, m):
    B = _consecutive(G, m)
    data = block_action(G, B)
    _, alpha = exact_dist_number(data.top_group)
    L = linking_structure(data.kernel, B)
    return construct_large_bottom(G, B, L, alpha), L, alpha


def test_large_bottom_wreath():
    G = cp.wreath(symmetric_group(5), cyclic_group(2))
    col, L, alpha = _large(G, 5)
    assert L.linking_factor == 1
    assert col.color_count <= 2 * 5 * math.ceil(alpha.color_count ** (1 / 5))
    assert is_distinguishing(G, col.colors)


def test_large_bottom_diagonal_pair():
    G = cp.diagonal_wreath(5, 2, symmetric_group(2))
    col, L, alpha = _large(G, 5)
    assert L.linking_factor == 2
    assert col.color_count <= 2 * 3 * 2
    assert is_distinguishing(G, col.colors)


def test_large_bottom_diagonal_five():
    G = cp.diagonal_wreath(5, 5, cyclic_group(5))
    col, L, alpha = _large(G, 5)
    assert L.linking_factor == 5
    assert col.color_count <= 2 * math.ceil(alpha.color_count ** (1 / 5))
    assert set(col.trace["beta"]) == {0}
    assert is_distinguishing(G, col.colors)


def test_large_bottom_rejects_six():
    G = cp.wreath(symmetric_group(6), symmetric_group(2))
    B = _consecutive(G, 6)
    with pytest.raises(HypothesisError):
        construct_large_bottom(G, B, None, Coloring([0, 1], 2))


# pipeline --------------------------------------------------------------------


def test_pipeline_sym5():
    col = distinguish_transitive(symmetric_group(5))
    assert col.color_count <= 5
    assert col.color_count <= 48 * 120 ** (1 / 5)
    assert col.trace["bound_ok"]


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_pipeline_cyclic(p):
    col = distinguish_transitive(cyclic_group(p))
    assert col.color_count == 2
    assert 2 <= 48 * p ** (1 / p)


def test_pipeline_sym7_wr_sym3():
    G = cp.wreath(symmetric_group(7), symmetric_group(3))
    col = distinguish_transitive(G)
    assert col.verified and is_distinguishing(G, col.colors)
    assert col.color_count <= 48 * G.order() ** (1 / 21)
    assert col.trace["construction"] == "large_bottom"


def test_pipeline_on_corpus():
    for label, spec, _ in cp.transitive_corpus(10):
        G = cp.parse_group(spec)
        col = distinguish_transitive(G)
        assert is_distinguishing(G, col.colors), label
        assert col.color_count >= exact_dist_number(G)[0]
        assert col.trace["bound_ok"] and within_bound(G, col.color_count)


def test_pipeline_larger_groups():
    groups = [
        cp.wreath(symmetric_group(3), symmetric_group(5)),
        cp.wreath(alternating_group(5), symmetric_group(3)),
        cp.wreath(cyclic_group(3), cyclic_group(5)),
        cp.diagonal_wreath(7, 2, cp.wreath(symmetric_group(2), symmetric_group(2))),
        cp.wreath(cp.wreath(symmetric_group(2), symmetric_group(2)), symmetric_group(3)),
    ]
    for G in groups:
        col = distinguish_transitive(G)
        assert is_distinguishing(G, col.colors)
        assert col.trace["bound_ok"]


def test_pipeline_rejects_intransitive():
    G = PermGroup([Permutation.from_cycles(4, (0, 1))])
    with pytest.raises(HypothesisError):
        distinguish_transitive(G)

