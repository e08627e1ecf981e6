"""Finite duality: matrices as upset lattices of involutive posets.

Every finite De Morgan matrix is, up to isomorphism, the lattice of upsets
of a finite poset with an order-inverting involution and a designated
upset.  The two directions are mutually inverse, quotients of frames
correspond to submatrices, and the Leibniz reduct is a subframe.
"""

import random

from demorgan_lab.frame import (
    Frame, complex_matrix, counit_check, dual_frame, immediate_quotients,
    leibniz_subframe, random_frame, roundtrip_check,
)
from demorgan_lab.matrix import catalog, find_isomorphism, leibniz_reduct

# -- a frame and its matrix ---------------------------------------------------

pair = Frame(["u", "v"], [], [1, 0], [0, 1])  # two swapped points, all designated
m = complex_matrix(pair)
print("two-point antichain gives a matrix with", m.n, "elements:")
print("  ", m.labels)
print("that is the exactly-true matrix:",
      find_isomorphism(m, catalog()["ETL4"]) is not None)
print()

# -- duals of the catalog -----------------------------------------------------

for name, mat in catalog().items():
    p = dual_frame(mat)
    shape = "ordered" if any(p.le(i, j) for i in range(p.n)
                             for j in range(p.n) if i != j) else "antichain"
    print(f"dual of {name}: {p.n} point(s), designated {sorted(p.designated)} ({shape})")
print()

# -- round trips ----------------------------------------------------------------

print("complex(dual(m)) is m on the whole catalog:",
      all(roundtrip_check(mat) for mat in catalog().values()))
rng = random.Random(0)
frames = [random_frame(rng, 8) for _ in range(25)]
print("dual(complex(p)) is p on 25 random frames:",
      all(counit_check(p) for p in frames))
print()

# -- the Leibniz reduct is a subframe -------------------------------------------

hits = 0
for p in frames:
    lhs = leibniz_reduct(complex_matrix(p))
    rhs = complex_matrix(leibniz_subframe(p))
    hits += find_isomorphism(lhs, rhs) is not None
print(f"reduct commutes with the subframe on {hits}/25 random frames")
print()

# -- quotients are submatrices ----------------------------------------------------

p = dual_frame(catalog()["KMINUS8"])
print("the dual of the eight-element matrix has", p.n, "points;")
qs = list(immediate_quotients(p))
print("it has", len(qs), "immediate quotients, with",
      [complex_matrix(q).n for q in qs], "element matrices")
