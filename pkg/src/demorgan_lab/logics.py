"""Named logics with finite matrix semantics, rule pools, explosive-part
computations, and the witness algorithm for consequence in the logic of the
eight-element matrix.

Semantics are exact where an exact finite semantics exists (the classical
completeness pairings); the two-variable explosive extensions by the
two-atom contradiction have no exact finite semantics, so they carry a
sound stand-in that is faithful at rule-pool resolution.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .formula import (
    And, Atom, BOT, CONTRADICTION, Formula, Neg, Or, RuleInstance, TOP,
    chi, classical_status, conj, disj, nnf, normal_form, parse_rule,
)
from .frame import (
    disjoint_union as frame_union,
    dual_frame, frame_isomorphic, immediate_quotients, leibniz_subframe,
)
from .graph import complete
from .matrix import (
    FinMatrix, MatrixError, bd4, cl2, etl4, k3, kminus8, leibniz_reduct,
    lp3, product, validates,
)

__all__ = [
    "NamedLogic", "registry", "registry_names",
    "named_rules", "ds_rule", "resolution_rule", "em_rule", "ecq_rule",
    "ko_rule", "chi_explosive", "etlplus_rule", "kominus_rule",
    "lp_cap_etl_rule", "etl_omega_splitting_rule", "bd_mc_rules",
    "clause_pool", "probe_pool", "product_pool", "mc_pool",
    "is_antitheorem_of", "exp_validates", "kminus_witness",
    "log_leq", "LOG_LEQ_YES", "LOG_LEQ_NOT_FOUND",
    "separation_search", "probe_lattice", "ProbeResult",
]


# -- named rules ---------------------------------------------------------------


def ds_rule() -> RuleInstance:
    return parse_rule("p, ~p | q |- q")


def resolution_rule() -> RuleInstance:
    return parse_rule("p | q, ~q | r |- p | r")


def em_rule() -> RuleInstance:
    return parse_rule("|- p | ~p")


def ecq_rule() -> RuleInstance:
    return parse_rule("p, ~p |- q")


def ecq_explosive() -> RuleInstance:
    return parse_rule("p, ~p |- ")


def ko_rule() -> RuleInstance:
    return parse_rule("p & ~p | q |- q | ~q")


def k_axiom() -> RuleInstance:
    return parse_rule("p & ~p | q |- q")


def lp_cap_etl_rule() -> RuleInstance:
    return parse_rule("p, ~p | q | ~q |- q | ~q")


def etl_omega_splitting_rule() -> RuleInstance:
    return parse_rule("p & ~p | q | ~q, q & ~q | p | ~p |- p | ~p")


def chi_explosive(n: int) -> RuleInstance:
    """The n-atom classical contradiction as an explosive rule."""
    return RuleInstance.explosive([chi(n)])


def etlplus_rule(n: int) -> RuleInstance:
    """The n-explosive disjunctive syllogism: chi_n | q, ~q | r entail r."""
    q, r = Atom("q"), Atom("r")
    return RuleInstance.single([Or(chi(n), q), Or(Neg(q), r)], r)


def kominus_rule(n: int) -> RuleInstance:
    q, r = Atom("q"), Atom("r")
    return RuleInstance.single(
        [Or(chi(n), q), Or(Neg(q), Or(r, Neg(r)))], Or(r, Neg(r)))


def bd_mc_rules() -> list[RuleInstance]:
    """The multiple-conclusion axiomatization of the base logic."""
    texts = [
        "p, q |- p & q", "p & q |- p", "p & q |- q",
        "p | q |- p, q", "p |- p | q", "q |- p | q",
        "~p, ~q |- ~(p | q)", "~(p | q) |- ~p", "~(p | q) |- ~q",
        "~(p & q) |- ~p, ~q", "~p |- ~(p & q)", "~q |- ~(p & q)",
        "p |- ~~p", "~~p |- p", "|- T", "F |- ",
    ]
    return [parse_rule(t) for t in texts]


def lp_mc_rule() -> RuleInstance:
    return parse_rule("|- p, ~p")


def k_mc_rule() -> RuleInstance:
    return parse_rule("p, ~p |- ")


def ko_mc_rule() -> RuleInstance:
    return parse_rule("p, ~p |- q, ~q")


def named_rules() -> dict[str, RuleInstance]:
    out = {
        "DS": ds_rule(),
        "RESOLUTION": resolution_rule(),
        "EM": em_rule(),
        "ECQ": ecq_rule(),
        "ECQ_EXPLOSIVE": ecq_explosive(),
        "KO": ko_rule(),
        "K_AXIOM": k_axiom(),
        "LP_CAP_ETL": lp_cap_etl_rule(),
        "ETL_OMEGA_SPLITTING": etl_omega_splitting_rule(),
        "LP_MC": lp_mc_rule(),
        "K_MC": k_mc_rule(),
        "KO_MC": ko_mc_rule(),
    }
    for n in range(1, 5):
        out[f"CHI{n}_EXPLOSIVE"] = chi_explosive(n)
        out[f"ETLPLUS{n}"] = etlplus_rule(n)
        out[f"KOMINUS{n}"] = kominus_rule(n)
    for i, r in enumerate(bd_mc_rules()):
        out[f"BD_MC{i}"] = r
    return out


# -- rule pools ----------------------------------------------------------------


def _clause_menu(atom_names: Sequence[str]) -> list[Formula]:
    lits: list[Formula] = []
    for a in atom_names:
        lits.append(Atom(a))
        lits.append(Neg(Atom(a)))
    menu = list(lits)
    for i in range(len(lits)):
        for j in range(i + 1, len(lits)):
            menu.append(Or(lits[i], lits[j]))
    return menu


def clause_pool() -> list[RuleInstance]:
    """The versioned pool: every rule with at most two premises drawn from
    the one- and two-literal disjunctive clauses over p, q, r, and a single
    clause conclusion.  Deterministic order."""
    menu = _clause_menu(["p", "q", "r"])
    out = []
    prem_sets: list[tuple[Formula, ...]] = [()]
    prem_sets += [(c,) for c in menu]
    prem_sets += [(menu[i], menu[j]) for i in range(len(menu)) for j in range(i + 1, len(menu))]
    for prem in prem_sets:
        for concl in menu:
            out.append(RuleInstance.single(prem, concl))
    return out


def _small_named_rules() -> list[RuleInstance]:
    keep = ["DS", "RESOLUTION", "EM", "ECQ", "ECQ_EXPLOSIVE", "KO", "K_AXIOM",
            "LP_CAP_ETL", "ETL_OMEGA_SPLITTING", "CHI1_EXPLOSIVE",
            "CHI2_EXPLOSIVE", "CHI3_EXPLOSIVE", "ETLPLUS1", "KOMINUS1"]
    rules = named_rules()
    return [rules[k] for k in keep]


def probe_pool() -> list[RuleInstance]:
    """Pool for the lattice probe: the named axioms plus every one- or
    two-premise rule over the two-atom clause menu."""
    menu = _clause_menu(["p", "q"])
    out = _small_named_rules()
    prem_sets: list[tuple[Formula, ...]] = [()]
    prem_sets += [(c,) for c in menu]
    prem_sets += [(menu[i], menu[j]) for i in range(len(menu)) for j in range(i + 1, len(menu))]
    for prem in prem_sets:
        for concl in menu:
            out.append(RuleInstance.single(prem, concl))
    return out


def product_pool() -> list[RuleInstance]:
    """The fixed forty-rule pool used for the product-decomposition sweep."""
    out = _small_named_rules()
    menu = _clause_menu(["p", "q", "r"])
    gen = clause_pool()
    # deterministic straggle through the clause pool for variety
    step = len(gen) // (40 - len(out)) or 1
    for i in range(0, len(gen), step):
        if len(out) >= 40:
            break
        out.append(gen[i])
    return out[:40]


def mc_pool() -> list[RuleInstance]:
    """Multiple-conclusion pool: literal premises/conclusion sets over p, q,
    plus the named multiple-conclusion rules."""
    lits = [Atom("p"), Neg(Atom("p")), Atom("q"), Neg(Atom("q"))]
    out = bd_mc_rules() + [lp_mc_rule(), k_mc_rule(), ko_mc_rule()]
    concl_sets: list[tuple[Formula, ...]] = [()]
    concl_sets += [(l,) for l in lits]
    concl_sets += [(lits[i], lits[j]) for i in range(4) for j in range(i + 1, 4)]
    prem_sets = concl_sets
    for prem in prem_sets:
        for concl in concl_sets:
            out.append(RuleInstance.of(prem, concl))
    return out


# -- the registry --------------------------------------------------------------


@dataclass(frozen=True)
class NamedLogic:
    name: str
    semantics: tuple[FinMatrix, ...]
    axioms: tuple[RuleInstance, ...]
    exact: bool = True  # False: sound finite stand-in, faithful on the pools

    def valid(self, r: RuleInstance) -> bool:
        return all(validates(m, r) for m in self.semantics)


_REGISTRY: dict[str, NamedLogic] = {}


def _build_registry() -> dict[str, NamedLogic]:
    if _REGISTRY:
        return _REGISTRY
    chis = tuple(chi_explosive(n) for n in range(1, 5))
    etlpluses = tuple(etlplus_rule(n) for n in range(1, 5))
    kominuses = tuple(kominus_rule(n) for n in range(1, 5))
    mu_k3 = None

    def mu_plus_k3() -> FinMatrix:
        nonlocal mu_k3
        if mu_k3 is None:
            from .bridge import mu_plus
            mu_k3 = mu_plus(complete(3))
        return mu_k3

    defs: list[NamedLogic] = [
        NamedLogic("BD", (bd4(),), ()),
        NamedLogic("KO", (k3(), lp3()), (ko_rule(),)),
        NamedLogic("K", (k3(),), (resolution_rule(), k_axiom())),
        NamedLogic("LP", (lp3(),), (em_rule(),)),
        NamedLogic("ETL", (etl4(),), (ds_rule(),)),
        NamedLogic("CL", (cl2(),), (ds_rule(), em_rule())),
        NamedLogic("ECQ", (product([etl4(), bd4()]),), (ecq_rule(),)),
        NamedLogic("ECQW", (product([cl2(), bd4()]),), chis),
        NamedLogic("ETLW", (product([cl2(), etl4()]),), (ds_rule(),) + chis),
        NamedLogic("LPVECQ", (product([cl2(), lp3()]),), (em_rule(), ecq_rule())),
        NamedLogic("KOVECQ", (product([cl2(), lp3()]), k3()), (ko_rule(), ecq_rule())),
        NamedLogic("KMINUS", (kminus8(),), etlpluses),
        NamedLogic("KOMINUS", (lp3(), kminus8()), kominuses),
        NamedLogic("ETL2", (product([mu_plus_k3(), etl4()]),),
                   (ds_rule(), chi_explosive(2)), exact=False),
        NamedLogic("ECQ2", (product([mu_plus_k3(), bd4()]),),
                   (chi_explosive(2),), exact=False),
    ]
    for l in defs:
        _REGISTRY[l.name] = l
    return _REGISTRY


_ALIASES = {
    "ECQOMEGA": "ECQW", "ECQ_OMEGA": "ECQW",
    "ETLOMEGA": "ETLW", "ETL_OMEGA": "ETLW",
    "LPORECQ": "LPVECQ", "LP_V_ECQ": "LPVECQ",
    "KOORECQ": "KOVECQ", "KO_V_ECQ": "KOVECQ",
    "K-": "KMINUS", "KO-": "KOMINUS",
}


def registry(name: str) -> NamedLogic:
    """Look up a named logic (case-insensitive)."""
    key = name.upper().replace("∨", "V")
    key = _ALIASES.get(key, key)
    reg = _build_registry()
    if key not in reg:
        raise KeyError(f"unknown logic {name!r}; known: {', '.join(sorted(reg))}")
    return reg[key]


def registry_names() -> list[str]:
    return sorted(_build_registry())


# -- antitheorems and explosive parts ------------------------------------------


def is_antitheorem_of(l: NamedLogic, gamma: Iterable[Formula]) -> bool:
    """No valuation on any semantics matrix designates all of gamma.

    All registry semantics are non-trivial matrices, where this coincides
    with entailing a fresh atom.
    """
    r = RuleInstance.explosive(gamma)
    return all(validates(m, r) for m in l.semantics)


def exp_validates(upper: NamedLogic, base: NamedLogic, r: RuleInstance) -> bool:
    """Validity in the explosive part of `upper` relative to `base`: the
    rule holds in the base, or its premises are an antitheorem of `upper`."""
    if len(r.conclusions) != 1:
        raise ValueError("explosive parts are defined for single-conclusion rules")
    return base.valid(r) or is_antitheorem_of(upper, r.premises)


# -- the witness algorithm for the eight-element matrix ------------------------


def _disjunct_list(f: Formula) -> list[Formula]:
    if isinstance(f, Or):
        return _disjunct_list(f.left) + _disjunct_list(f.right)
    return [f]


def _conjunct_list(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return _conjunct_list(f.left) + _conjunct_list(f.right)
    return [f]


def kminus_witness(
    gamma: Iterable[Formula], phi: Formula
) -> Optional[tuple[Formula, Formula]]:
    """A pair (psi, chi) certifying consequence in the eight-element-matrix
    logic: the premises entail chi | psi and ~psi | phi in the base
    four-valued logic, with chi a classical contradiction.  None when no
    such pair exists.

    Follows the completeness proof's recursion on a disjunctive normal form
    of the premises and a conjunctive normal form of the conclusion: a
    three-way split on disjunctions combining via
    psi = (psi1|psi2) & (psi2|psi3) & (psi3|psi1), chi = chi1|chi2|chi3,
    a conjunction split combining componentwise, and clause-level base
    cases.  Every returned pair is re-verified before being handed back.
    """
    bd = bd4()
    gamma = sorted(set(gamma), key=str)

    def bd_valid(premises: Sequence[Formula], concl: Formula) -> bool:
        return validates(bd, RuleInstance.single(premises, concl))

    def verify(psi: Formula, chif: Formula) -> bool:
        return (
            classical_status(chif) == CONTRADICTION
            and bd_valid(gamma, Or(chif, psi))
            and bd_valid(gamma, Or(Neg(psi), phi))
        )

    g_dnf = normal_form(conj(gamma), "dnf")
    if g_dnf == BOT:
        # inconsistent premises in the base logic: anything follows
        out = (TOP, BOT)
        if not verify(*out):
            raise RuntimeError("internal: trivial witness failed verification")
        return out
    clauses = _disjunct_list(g_dnf)

    def clause_witness(cs: list[Formula], d: Formula) -> Optional[tuple[Formula, Formula]]:
        gf = disj(cs)

        def checked(psi: Formula, chif: Formula) -> bool:
            return (
                classical_status(chif) == CONTRADICTION
                and bd_valid([gf], Or(chif, psi))
                and bd_valid([gf], Or(Neg(psi), d))
            )

        if len(cs) > 2:
            groups = ([cs[1]] + cs[2:], cs[2:] + [cs[0]], [cs[0], cs[1]])
            subs = []
            for delta in groups:
                w = clause_witness(delta, d)
                if w is None:
                    return None
                subs.append(w)
            (p1, c1), (p2, c2), (p3, c3) = subs
            psi = conj([Or(p1, p2), Or(p2, p3), Or(p3, p1)])
            chif = disj([c1, c2, c3])
            if not checked(psi, chif):
                raise RuntimeError("internal: three-way combination failed")
            return psi, chif
        first, last = cs[0], cs[-1]
        candidates = []
        if classical_status(gf) == CONTRADICTION:
            candidates.append((nnf(Neg(gf)), gf))
        candidates.append((gf, BOT))
        if classical_status(first) == CONTRADICTION and len(cs) == 2:
            candidates.append((last, first))
        if classical_status(last) == CONTRADICTION and len(cs) == 2:
            candidates.append((first, last))
        for psi, chif in candidates:
            if checked(psi, chif):
                return psi, chif
        return None

    p_cnf = normal_form(phi, "cnf")
    if p_cnf == TOP:
        ds: list[Formula] = []
    else:
        ds = _conjunct_list(p_cnf)

    parts = []
    for d in ds:
        w = clause_witness(clauses, d)
        if w is None:
            return None
        parts.append(w)
    if parts:
        psi = conj([p for p, _ in parts])
        chif = disj([c for _, c in parts])
    else:
        psi, chif = TOP, BOT
    if not verify(psi, chif):
        raise RuntimeError("internal: combined witness failed verification")
    return psi, chif


# -- comparing logics -----------------------------------------------------------


LOG_LEQ_YES = "yes"
LOG_LEQ_NOT_FOUND = "not-found-up-to-bound"


def log_leq(a: Sequence[FinMatrix], b: FinMatrix, max_power: Optional[int] = None) -> str:
    """Search for the reduct of b among the submatrix-reducts of finite
    products of matrices from a; finding one proves that b models the logic
    of a.

    The search runs dually: the reduct of a submatrix corresponds to the
    Leibniz subframe of a quotient frame, and products to disjoint unions
    of dual frames.  A negative answer is only "not found up to the bound":
    no effective bound is known, so none is invented.
    """
    if max_power is None:
        max_power = b.n
    if max_power < 1:
        raise ValueError("max_power must be at least 1")
    if "demorgan" not in b.flags or any("demorgan" not in m.flags for m in a):
        raise MatrixError("log_leq compares De Morgan matrices")
    target = dual_frame(leibniz_reduct(b))
    duals = [dual_frame(m) for m in a]
    for power in range(1, max_power + 1):
        for combo in itertools.combinations_with_replacement(range(len(a)), power):
            start = frame_union([duals[i] for i in combo])
            if _frame_reachable(start, target):
                return LOG_LEQ_YES
    return LOG_LEQ_NOT_FOUND


def _frame_reachable(start, target) -> bool:
    seen = []
    frontier = [start]
    while frontier:
        f = frontier.pop()
        if any(frame_isomorphic(f, s) for s in seen):
            continue
        seen.append(f)
        nexts = [leibniz_subframe(f)] + list(immediate_quotients(f))
        for nxt in nexts:
            red = leibniz_subframe(nxt)
            if frame_isomorphic(red, target):
                return True
            frontier.append(nxt)
    return False


def separation_search(
    hold: Sequence[RuleInstance],
    fail: Sequence[RuleInstance],
    pool: Iterable[FinMatrix],
) -> Optional[FinMatrix]:
    """First matrix in the pool validating everything in `hold` and
    refuting everything in `fail`."""
    for m in pool:
        if all(validates(m, r) for r in hold) and not any(validates(m, r) for r in fail):
            return m
    return None


# -- the lattice probe -----------------------------------------------------------


PROBE_NAMES = ["BD", "KO", "K", "LP", "CL", "ECQ", "ETL", "ETL2",
               "ECQW", "ETLW", "LPVECQ", "KOVECQ", "KMINUS", "KOMINUS"]


@dataclass
class ProbeResult:
    names: list[str]
    inclusions: list[tuple[str, str]]  # L1 included in L2, at pool resolution
    hasse: list[tuple[str, str]]       # covering edges between classes
    equivalent: list[tuple[str, str]]  # pool-indistinguishable pairs

    def includes(self, a: str, b: str) -> bool:
        return (a, b) in set(self.inclusions)

    def to_json(self) -> str:
        import json
        return json.dumps({
            "names": self.names,
            "inclusions": [list(e) for e in self.inclusions],
            "hasse": [list(e) for e in self.hasse],
            "equivalent": [list(e) for e in self.equivalent],
        })

    def to_dot(self) -> str:
        lines = ["digraph lattice {", "  rankdir=BT;"]
        shown = {n for e in self.hasse for n in e} | set(self.names)
        for n in sorted(shown):
            lines.append(f'  "{n}";')
        for a, b in self.hasse:
            lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines)


def probe_lattice(
    pool: Optional[Sequence[RuleInstance]] = None,
    names: Optional[Sequence[str]] = None,
) -> ProbeResult:
    """Compare registry logics by their pool-valid rule sets and report the
    induced inclusion preorder and its Hasse diagram."""
    if pool is None:
        pool = probe_pool()
    if names is None:
        names = PROBE_NAMES
    logics = {n: registry(n) for n in names}
    valid: dict[str, frozenset[int]] = {}
    for n, l in logics.items():
        valid[n] = frozenset(i for i, r in enumerate(pool) if l.valid(r))
    inclusions = [
        (a, b) for a in names for b in names
        if a != b and valid[a] <= valid[b]
    ]
    incl = set(inclusions)
    equivalent = [(a, b) for (a, b) in inclusions if (b, a) in incl and a < b]
    # Hasse edges on representatives of the equivalence classes
    rep = {}
    for n in names:
        rep[n] = min([n] + [b for (a, b) in equivalent if a == n]
                     + [a for (a, b) in equivalent if b == n])
    strict = {(rep[a], rep[b]) for (a, b) in inclusions if rep[a] != rep[b]}
    hasse = sorted(
        (a, b) for (a, b) in strict
        if not any((a, c) in strict and (c, b) in strict for c in set(rep.values()))
    )
    return ProbeResult(list(names), inclusions, hasse, equivalent)
