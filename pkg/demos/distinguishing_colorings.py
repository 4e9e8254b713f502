"""Distinguishing numbers: the exact oracle and the block constructions."""

import math

from pgt import corpus as cp
from pgt.bases import base_on_partitions
from pgt.distinguishing import distinguish_transitive, exact_dist_number, is_distinguishing
from pgt.permcore import symmetric_group

# Sym(n) needs n colors; a regular cyclic group needs only 2.
for label, G in [("Sym(5)", symmetric_group(5)), ("C7", cp.cyclic_group(7))]:
    d, col = exact_dist_number(G)
    print(label, "d =", d, "coloring", col.colors)

# d(G) bounds the base size on q-colorings: ceil(log_q d).
G = symmetric_group(6)
d, _ = exact_dist_number(G)
for q in (2, 3):
    print(f"Sym(6) on {q}-colorings: base {base_on_partitions(G, q, mode='oracle')},"
          f" ceil(log_{q} {d}) = {math.ceil(math.log(d, q))}")

# Transitive groups: a verified coloring and the construction that produced it.
for label, spec, _ in cp.transitive_corpus(10):
    if label in ("Sym(2) wr Sym(5)", "Sym(5) wr Sym(2)", "Sym(5) diag Sym(2)", "PGL(2,7)"):
        H = cp.parse_group(spec)
        col = distinguish_transitive(H)
        bound = 48 * H.order() ** (1 / H.degree)
        print(f"{label:20s} colors {col.color_count:3d} via {col.trace['construction']:12s}"
              f" bound {bound:7.1f} verified {is_distinguishing(H, col.colors)}")

# A large example beyond the oracle's reach: Sym(7) wr Sym(3) on 21 points.
H = cp.wreath(symmetric_group(7), symmetric_group(3))
col = distinguish_transitive(H)
print("Sym(7) wr Sym(3):", col.color_count, "colors via", col.trace["construction"],
      "bound ok", col.trace["bound_ok"])
