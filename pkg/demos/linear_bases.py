"""Bases of linear groups acting on vectors over a prime field."""

from pgt import corpus as cp
from pgt.affine import (
    affine_bridge,
    alt_induced_pipeline,
    boundedK1_base,
    imprimitive_module,
    repeated_module_base,
    trivK1_base,
)
from pgt.bases import exact_min_base
from pgt.gflinear import as_permutation_group, general_linear_group
from pgt.permcore import symmetric_group

# GL(2,3) permutes the 9 vectors of F_3^2; vector v is point sum v_i 3^i.
H = general_linear_group(3, 2)
G, idx = as_permutation_group(H, "all")
print("GL(2,3): order", H.order(), "on", G.degree, "vectors; point 5 is", idx.vector_of(5))

# The affine group needs exactly one more base vector than its linear part.
print("affine vs linear base:", affine_bridge(H))

# Permutation matrices: each summand is fixed pointwise by its stabilizer,
# so a distinguishing coloring of the summands gives the base directly.
M = imprimitive_module(cp.permutation_module(3, symmetric_group(4)))
cert = trivK1_base(M)
VG, _ = as_permutation_group(M.group, "all")
print("Sym(4) over F3: constructed", [tuple(v) for v in cert.points],
      "exact size", len(exact_min_base(VG)))

# Monomial groups: summand bases combined with a coloring of the summands.
M = imprimitive_module(cp.monomial_group(5, 3, symmetric_group(3)))
cert = boundedK1_base(M)
print("F5* wr Sym(3): size", len(cert), "bound", round(cert.notes["bound"], 2))

# A module repeated l times needs ceil(b_W / l) vectors.
L = general_linear_group(2, 3)
for l in (1, 2, 3):
    print(f"GL(3,2) repeated {l} times: base size {len(repeated_module_base(L, l))}")

# The deleted permutation module of Sym(7) over F_3 and F_7 (where 7 | k).
for p in (3, 7):
    cert, report = alt_induced_pipeline(symmetric_group(7), p, 7)
    print(f"Sym(7), p={p}: module dim {cert.notes['module_dim']}, base {report['size']},"
          f" bound {report['bound']:.2f}")
