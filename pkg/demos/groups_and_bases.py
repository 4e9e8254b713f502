"""Permutations, stabilizer chains and minimal bases."""

from pgt import corpus as cp
from pgt.bases import exact_min_base, greedy_base, is_base
from pgt.permcore import (
    Permutation,
    block_action,
    minimal_nontrivial_block_system,
    symmetric_group,
)

# Permutations are image tuples; products compose right to left.
a = Permutation.from_cycles(3, (0, 1))
b = Permutation.from_cycles(3, (1, 2))
print("a*b =", a * b, " b*a =", b * a)

# A wreath product: Sym(3) acting inside each of two blocks, Sym(2) swapping them.
G = cp.wreath(symmetric_group(3), symmetric_group(2))
print("Sym(3) wr Sym(2): degree", G.degree, "order", G.order())

# The block system and the induced actions.
B = minimal_nontrivial_block_system(G)
data = block_action(G, B)
print("blocks", B.blocks, "top order", data.top_group.order(), "kernel order",
      data.kernel.order())

# Exact and greedy bases.  The certificate says whether minimality was proven.
ex = exact_min_base(G)
gr = greedy_base(G)
print("exact base", ex.points, "proven minimal:", ex.exact)
print("greedy base", gr.points)
print("[0, 1] is a base:", is_base(G, [0, 1]))

# A base modulo the block kernel only has to pin down the block permutation.
print("base modulo kernel:", exact_min_base(G, modulo=data.kernel).points)

# Some primitive groups of the corpus and their base sizes.
for label, spec, prim in cp.transitive_corpus(9):
    if prim and label.startswith(("AGL", "PSL", "PGL")):
        H = cp.parse_group(spec)
        print(f"{label:10s} n={H.degree:2d} |G|={H.order():5d} b={len(exact_min_base(H))}")
