"""Graphs as semantics: colorings, explosive rules, and classification.

Finite reduced models are presented by pairs of graphs with a counter.
Colorability of a graph decides which contradiction rules its matrix
validates, and the homomorphism order decides the explosive rules.
"""

from demorgan_lab.bridge import (
    TriplePresentation, alpha_rule, classify_reduced, gamma, mu_plus, mu_triple,
)
from demorgan_lab.formula import RuleInstance, chi
from demorgan_lab.graph import (
    GraphPair, complete, cycle, g2, hom_search, is_n_colorable, loop_graph,
    point, s_star_reachable, weak_n_coloring,
)
from demorgan_lab.logics import etlplus_rule
from demorgan_lab.matrix import catalog, find_isomorphism, validates

# -- the basic identifications ---------------------------------------------------

print("mu+(single vertex) is the exactly-true matrix:",
      find_isomorphism(mu_plus(point()), catalog()["ETL4"]) is not None)
print("mu+(loop) is the three-valued chain:",
      find_isomorphism(mu_plus(loop_graph()), catalog()["K3"]) is not None)
print("mu+(edge plus loop) is the eight-element matrix:",
      find_isomorphism(mu_plus(g2()), catalog()["KMINUS8"]) is not None)
print()

# -- colorability correspondence ----------------------------------------------

for g, name in [(complete(3), "K3"), (cycle(5), "C5"), (complete(4), "K4")]:
    gm = gamma(g)
    line = [f"chi_{n} explodes: {validates(gm, RuleInstance.explosive([chi(n)]))}"
            f" (not {n}-colorable: {not is_n_colorable(g, n)})"
            for n in (2, 3)]
    print(f"gamma({name}): " + "; ".join(line))
print()

for n in (1, 2):
    k = complete(n + 2)
    print(f"K{n + 2} is {n + 2}-colorable but not weakly {n}-colorable:",
          is_n_colorable(k, n + 2), weak_n_coloring(k, n) is None,
          f"-> mu+(K{n + 2}) separates the {n}-explosive syllogism from chi_{n + 2}:",
          validates(mu_plus(k), etlplus_rule(n)),
          not validates(mu_plus(k), RuleInstance.explosive([chi(n + 2)])))
print()

# -- explosive rules from graphs ----------------------------------------------

print("the explosive rule of the triangle:")
print("  ", alpha_rule(complete(3)))
print("it holds in mu+(H) exactly when H has no homomorphism into the triangle:")
for h, name in [(complete(2), "K2"), (cycle(5), "C5"), (complete(4), "K4")]:
    v = validates(mu_plus(h), alpha_rule(complete(3)))
    print(f"   H={name}: rule valid {v}, hom exists {hom_search(h, complete(3)) is not None}")
print()

# -- classification and the rewriting order -------------------------------------

t = classify_reduced(catalog()["KMINUS8"])
print("classifying the eight-element matrix recovers its graph:",
      t.plus_graph.to_json())
m = mu_triple(TriplePresentation(complete(2), point(), 1))
t = classify_reduced(m)
print("a mixed presentation roundtrips:",
      t.plus_graph.to_json(), t.minus_graph.to_json(), t.singletons)
print()
reach = s_star_reachable(GraphPair(complete(2), 0))
print("pairs reachable from (K2, 0) by the five rewriting moves:")
for p in reach:
    print(f"   counter={p.counter} graph={p.graph.to_json()}")
