"""A first tour: formulas, rules, and the catalog of small matrices.

Four truth values suffice to model reasoning with contradictory and
incomplete information: True, False, Neither, Both.  Rules are judged by
exhaustive valuation; a failed rule always comes with a witness valuation.
"""

from demorgan_lab import parse, parse_rule, chi, classical_status, normal_form
from demorgan_lab.matrix import (
    bd4, catalog, etl4, find_countervaluation, k3, lp3, product, validates,
)

# -- formulas ------------------------------------------------------------

f = parse("p & ~p | q")
print("parsed:", f)
print("conjunctive normal form:", normal_form(f, "cnf"))
print("chi(2) =", chi(2), "is a classical", classical_status(chi(2)))
print()

# -- the catalog ----------------------------------------------------------

for name, m in catalog().items():
    print(f"{name}: {m.n} elements, designated {[m.labels[i] for i in sorted(m.designated)]}")
print()

# -- validity and witnesses -------------------------------------------------

ds = parse_rule("p, ~p | q |- q")      # disjunctive syllogism
em = parse_rule("|- p | ~p")           # excluded middle
res = parse_rule("p | q, ~q | r |- p | r")  # resolution

print("disjunctive syllogism holds in ETL4:", validates(etl4(), ds))
print("...but fails in BD4, witnessed by:")
w = find_countervaluation(bd4(), ds)
print("   ", {a: bd4().labels[i] for a, i in w.items()})
print("excluded middle: LP3", validates(lp3(), em), "/ K3", validates(k3(), em))
print("resolution: K3", validates(k3(), res), "/ LP3", validates(lp3(), res))
print()

# -- products: how completeness theorems for explosive extensions arise ------

ecq = parse_rule("p, ~p |- q")
pair = product([etl4(), bd4()])
print("ETL4 x BD4 validates explosion:", validates(pair, ecq))
print("ETL4 x BD4 validates disjunctive syllogism:", validates(pair, ds))
print("(that matrix is exactly the semantics of the explosive part of the")
print(" exactly-true logic over the four-valued base)")

# -- multiple conclusions -----------------------------------------------------

split = parse_rule("p | q |- p, q")
print()
print("p|q |- p,q multiple-conclusion:")
for name in ("BD4", "LP3", "ETL4"):
    print(f"  {name}: {validates(catalog()[name], split)}")
print("(it fails where the designated set is not a prime filter)")
