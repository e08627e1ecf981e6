"""Comparing the named logics: explosive parts, witnesses, and the probe.

The registry pairs each named logic with its finite matrix semantics.  The
probe compares the logics by the rules they validate on a fixed pool and
reconstructs the inclusion picture; witness search certifies consequence in
the eight-element-matrix logic.
"""

from demorgan_lab.formula import parse, parse_rule
from demorgan_lab.logics import (
    exp_validates, is_antitheorem_of, kminus_witness, log_leq,
    probe_lattice, registry,
)
from demorgan_lab.matrix import k3, kminus8, lp3

# -- antitheorems and explosive parts ---------------------------------------

print("{p, ~p} is an antitheorem of the exactly-true logic:",
      is_antitheorem_of(registry("ETL"), [parse("p"), parse("~p")]))
print("but not of the paradox logic:",
      is_antitheorem_of(registry("LP"), [parse("p"), parse("~p")]))
print()
ds = parse_rule("p, ~p | q |- q")
print("explosion lands in the explosive part, the syllogism does not:")
print("   p,~p |- q:", exp_validates(registry("ETL"), registry("BD"),
                                     parse_rule("p, ~p |- q")))
print("   syllogism:", exp_validates(registry("ETL"), registry("BD"), ds))
print()

# -- consequence witnesses for the eight-element matrix ----------------------

gamma_rule = [parse("(p & ~p) | q"), parse("~q | r")]
w = kminus_witness(gamma_rule, parse("r"))
print("the 1-explosive syllogism gets a certificate (psi, chi):")
print("   psi:", w[0])
print("   chi:", w[1])
print("resolution gets none:",
      kminus_witness(parse_rule("p | q, ~q | r |- p | r").premises, parse("p | r")))
print()

# -- model relations -----------------------------------------------------------

print("the three-valued chain models the logic of the eight-element matrix:",
      log_leq([kminus8()], k3(), 1))
print("the paradox matrix does not model the chain's logic (up to cube powers):",
      log_leq([k3()], lp3(), 3))
print()

# -- the inclusion picture --------------------------------------------------------

res = probe_lattice()
print("covering edges recovered by the probe:")
for a, b in res.hasse:
    print(f"   {a} < {b}")
