import itertools

import pytest

from demorgan_lab.formula import RuleInstance, parse, parse_rule
from demorgan_lab.matrix import (
    FinMatrix, MatrixError, MatrixMap, Partition,
    bd4, catalog, cl2, etl4, evaluate, find_countervaluation,
    find_isomorphism, free_dm_algebra, is_matrix_isomorphism, k3, kminus8,
    leibniz_congruence, leibniz_reduct, lp3, principal_congruence, product,
    split_at, submatrices, validates,
)


def brute_validates(m, r):
    """Reference validity by plain nested-loop valuation enumeration."""
    names = sorted(r.atom_names())
    for vals in itertools.product(range(m.n), repeat=len(names)):
        v = dict(zip(names, vals))
        if all(evaluate(m, v, g) in m.designated for g in r.premises):
            if not any(evaluate(m, v, d) in m.designated for d in r.conclusions):
                return False
    return True


RULES = [
    "p, ~p|q |- q",
    "p|q, ~q|r |- p|r",
    "|- p|~p",
    "p, ~p |- q",
    "p, ~p |- ",
    "p & ~p | q |- q | ~q",
    "p|q |- p, q",
    "p |- ",
    "|- T",
    "F |- ",
    "p & (q | ~p) |- q | r",
]


def test_engine_matches_brute_force():
    mats = [bd4(), k3(), lp3(), cl2(), etl4(), kminus8(), product([cl2(), lp3()])]
    for m in mats:
        for text in RULES:
            r = parse_rule(text)
            assert validates(m, r) == brute_validates(m, r), (m, text)


def test_evaluate_examples():
    m = bd4()
    b = m.labels.index("b")
    assert evaluate(m, {"p": b}, parse("p & ~p")) == b
    km = k3()
    n = km.labels.index("n")
    assert evaluate(km, {"p": n}, parse("p | ~p")) == n
    c = cl2()
    for x in range(2):
        assert evaluate(c, {"p": x}, parse("p | ~p")) == c.top
    with pytest.raises(KeyError):
        evaluate(m, {}, parse("p"))


def test_validates_examples():
    ds = parse_rule("p, ~p|q |- q")
    em = parse_rule("|- p|~p")
    res = parse_rule("p|q, ~q|r |- p|r")
    assert validates(etl4(), ds)
    assert not validates(bd4(), ds)
    assert validates(lp3(), em) and not validates(k3(), em)
    assert validates(k3(), res)
    assert validates(bd4(), parse_rule("p|q |- p, q"))
    expl = parse_rule("p, ~p |- ")
    assert validates(etl4(), expl) and not validates(lp3(), expl)


def test_countervaluation_is_reported_and_minimal():
    ds = parse_rule("p, ~p|q |- q")
    w = find_countervaluation(bd4(), ds)
    assert w == {"p": bd4().labels.index("b"), "q": bd4().labels.index("bot")}
    assert find_countervaluation(etl4(), ds) is None


def test_trivial_and_almost_trivial():
    m = bd4()
    trivial = FinMatrix(m.labels, m.neg, m.top, m.bottom, range(m.n), m.flags,
                        meet=[[m.meet(x, y) for y in range(m.n)] for x in range(m.n)],
                        join=[[m.join(x, y) for y in range(m.n)] for x in range(m.n)])
    # a trivial matrix validates everything except explosive rules
    assert validates(trivial, parse_rule("|- p"))
    assert not validates(trivial, parse_rule("p |- "))
    almost = FinMatrix(m.labels, m.neg, m.top, m.bottom, [], m.flags,
                       meet=[[m.meet(x, y) for y in range(m.n)] for x in range(m.n)],
                       join=[[m.join(x, y) for y in range(m.n)] for x in range(m.n)])
    assert validates(almost, parse_rule("p |- "))
    assert not validates(almost, parse_rule("|- p"))


def test_product_counts():
    p = product([cl2(), cl2()])
    assert p.n == 4
    assert len(p.designated) == 1
    pq = product([etl4(), bd4()])
    assert validates(pq, parse_rule("p, ~p |- q"))
    assert not validates(pq, parse_rule("p, ~p|q |- q"))


def _rule_pool():
    texts = [
        "p, ~p|q |- q", "p|q, ~q|r |- p|r", "|- p|~p", "p, ~p |- q",
        "p & ~p | q |- q | ~q", "p |- p | q", "p & q |- p", "~p |- ~(p & q)",
        "p, q |- p & q", "|- T", "p & ~p |- ", "p & ~p | (q & ~q) |- ",
        "p | q |- q | p", "~~p |- p", "p |- ~~p", "p & ~p | q |- q",
        "|- p", "p |- q", "p, ~p | q | ~q |- q | ~q", "~(p | q) |- ~p",
    ]
    return [parse_rule(t) for t in texts]


def test_product_logic_decomposition():
    # validity in A x B agrees with: (valid in A and valid in B) or the
    # premises are an antitheorem of A or of B
    mats = [bd4(), k3(), lp3(), cl2(), etl4()]
    pool = _rule_pool()
    for a, b in itertools.product(mats, repeat=2):
        ab = product([a, b])
        for r in pool:
            expect = (validates(a, r) and validates(b, r)) \
                or validates(a, RuleInstance.explosive(r.premises)) \
                or validates(b, RuleInstance.explosive(r.premises))
            assert validates(ab, r) == expect, (a, b, str(r))


def test_submatrices_of_bd4():
    # oracle: closure check over all 16 subsets of the carrier
    m = bd4()
    closed = []
    for bits in range(16):
        s = {i for i in range(4) if bits >> i & 1}
        if m.top not in s or m.bottom not in s:
            continue
        if all(m.meet(x, y) in s and m.join(x, y) in s and m.neg[x] in s
               for x in s for y in s):
            closed.append(frozenset(s))
    assert len(closed) == 4  # {bot,top}, {bot,n,top}, {bot,b,top}, all
    subs = list(submatrices(m))
    assert len(subs) == 4
    assert sorted(s.n for s in subs) == sorted(len(c) for c in closed)
    assert any(find_isomorphism(s, k3()) for s in subs if s.n == 3)
    assert any(find_isomorphism(s, lp3()) for s in subs if s.n == 3)
    assert any(find_isomorphism(s, cl2()) for s in subs if s.n == 2)


def test_submatrices_of_cl2():
    assert [s.n for s in submatrices(cl2())] == [2]


def brute_leibniz(m):
    """Reference Leibniz congruence: pairwise separation propagation."""
    n = m.n
    sep = [[(x in m.designated) != (y in m.designated) for y in range(n)] for x in range(n)]
    changed = True
    while changed:
        changed = False
        for x in range(n):
            for y in range(n):
                if sep[x][y]:
                    continue
                if sep[m.neg[x]][m.neg[y]]:
                    sep[x][y] = True
                    changed = True
                    continue
                for c in range(n):
                    if sep[m.meet(x, c)][m.meet(y, c)] or sep[m.join(x, c)][m.join(y, c)]:
                        sep[x][y] = True
                        changed = True
                        break
    ids = []
    for x in range(n):
        ids.append(next(y for y in range(n) if not sep[x][y]))
    return Partition.of(ids)


def test_leibniz_matches_pairwise_reference():
    four_chain = FinMatrix(
        ["bot", "a", "b", "top"], [3, 2, 1, 0], 3, 0, [1, 2, 3], ["demorgan"],
        meet=[[0, 0, 0, 0], [0, 1, 1, 1], [0, 1, 2, 2], [0, 1, 2, 3]],
        join=[[0, 1, 2, 3], [1, 1, 2, 3], [2, 2, 2, 3], [3, 3, 3, 3]])
    for m in [bd4(), k3(), lp3(), etl4(), kminus8(), four_chain,
              product([etl4(), bd4()])]:
        assert leibniz_congruence(m).blocks == brute_leibniz(m).blocks


def test_leibniz_examples():
    assert leibniz_congruence(etl4()).is_identity()
    m = bd4()
    trivial = FinMatrix(m.labels, m.neg, m.top, m.bottom, range(m.n), m.flags,
                        meet=[[m.meet(x, y) for y in range(m.n)] for x in range(m.n)],
                        join=[[m.join(x, y) for y in range(m.n)] for x in range(m.n)])
    assert leibniz_congruence(trivial).n_blocks == 1
    four_chain = FinMatrix(
        ["bot", "a", "b", "top"], [3, 2, 1, 0], 3, 0, [1, 2, 3], ["demorgan"],
        meet=[[0, 0, 0, 0], [0, 1, 1, 1], [0, 1, 2, 2], [0, 1, 2, 3]],
        join=[[0, 1, 2, 3], [1, 1, 2, 3], [2, 2, 2, 3], [3, 3, 3, 3]])
    part = leibniz_congruence(four_chain)
    assert part.same(1, 2) and not part.same(0, 1)
    assert find_isomorphism(leibniz_reduct(four_chain), lp3()) is not None


def test_leibniz_reduct_properties():
    # reduced input -> isomorphic output; reduct of a product with a trivial
    # singleton collapses the trivial factor
    for m in catalog().values():
        red = leibniz_reduct(m)
        assert find_isomorphism(red, m) is not None
        assert leibniz_congruence(red).is_identity()
    one = FinMatrix(["*"], [0], 0, 0, [0], ["demorgan"], meet=[[0]], join=[[0]])
    assert find_isomorphism(leibniz_reduct(product([etl4(), one])), etl4()) is not None


def _sankappanavar_congruent(m, a, b, x, y):
    nb, na = m.neg[b], m.neg[a]
    return (
        m.meet(m.meet(x, a), nb) == m.meet(m.meet(y, a), nb)
        and m.join(m.meet(x, a), na) == m.join(m.meet(y, a), na)
        and m.join(m.join(x, b), na) == m.join(m.join(y, b), na)
        and m.meet(m.join(x, b), nb) == m.meet(m.join(y, b), nb)
    )


def test_principal_congruence_identity():
    m = bd4()
    for x in range(m.n):
        assert principal_congruence(m, x, x).is_identity()


def test_principal_congruence_matches_sankappanavar_on_dm4():
    # exhaustive cross-check of the closure computation against the
    # four-equation characterization, for all pairs a <= b
    m = bd4()
    for a in range(m.n):
        for b in range(m.n):
            if not m.leq(a, b):
                continue
            part = principal_congruence(m, a, b)
            for x in range(m.n):
                for y in range(m.n):
                    assert part.same(x, y) == _sankappanavar_congruent(m, a, b, x, y)


def test_principal_congruence_dm4_collapses():
    # theta(n, top) forces n ~ ~n = n with ~top = bot, so everything merges;
    # the Sankappanavar equations give the same answer (DM4 is simple)
    m = bd4()
    n_idx, top = m.labels.index("n"), m.top
    assert principal_congruence(m, n_idx, top).n_blocks == 1


def test_principal_congruence_nontrivial_case():
    # on the 20-element algebra of the two-generated free case there are
    # proper nontrivial principal congruences
    a, b = parse("a"), parse("b")
    m = free_dm_algebra(["a", "b"], [(a, parse("~a")), (b, parse("~b"))])
    ai = m.labels.index("a")
    bi = m.labels.index("b")
    part = principal_congruence(m, m.meet(ai, bi), ai)
    assert 1 < part.n_blocks < m.n


def test_find_isomorphism():
    assert find_isomorphism(cl2(), cl2()) == (0, 1)
    assert find_isomorphism(bd4(), k3()) is None
    assert find_isomorphism(bd4(), etl4()) is None  # same algebra, other filter
    iso = find_isomorphism(product([cl2(), k3()]), product([k3(), cl2()]))
    assert iso is not None
    assert is_matrix_isomorphism(product([cl2(), k3()]), product([k3(), cl2()]), iso)


def test_split_at():
    p = product([cl2(), cl2()])
    a = p.labels.index("(top,bot)")
    m1, m2, w = split_at(p, a)
    assert find_isomorphism(m1, cl2()) and find_isomorphism(m2, cl2())
    assert is_matrix_isomorphism(p, product([m1, m2]), w)
    # degenerate split at the top
    m1, m2, _ = split_at(bd4(), bd4().top)
    assert (m1.n, m2.n) == (4, 1)
    # eligible elements only
    with pytest.raises(MatrixError):
        split_at(bd4(), bd4().labels.index("b"))
    # DM4 x DM4 at (top, bot): two DM4 blocks
    q = product([bd4(), bd4()])
    at = q.labels.index("(top,bot)")
    s1, s2, w2 = split_at(q, at)
    assert s1.n == s2.n == 4
    assert is_matrix_isomorphism(q, product([s1, s2]), w2)


def test_split_at_all_eligible_catalog_elements():
    for m in catalog().values():
        for a in range(m.n):
            if m.join(a, m.neg[a]) == m.top:
                m1, m2, w = split_at(m, a)  # witness verified inside
                assert is_matrix_isomorphism(m, product([m1, m2]), w)


def test_free_algebra_counts():
    a, b = parse("a"), parse("b")
    assert free_dm_algebra(["a", "b"], [(b, a), (a, parse("~a|b"))]).n == 10
    assert free_dm_algebra(["a", "b"], [(a, parse("~a")), (b, parse("~b"))]).n == 20
    # frozen from the subdirect-power oracle (projection tuple in DM4^4)
    assert free_dm_algebra(["a"], []).n == 6
    with pytest.raises(MatrixError):
        free_dm_algebra(["a", "b", "c", "d"], [])


def test_demorgan_laws_verified_exhaustively():
    for m in catalog().values():
        assert "demorgan" in m.flags
        for x in range(m.n):
            assert m.neg[m.neg[x]] == x
            for y in range(m.n):
                assert m.neg[m.join(x, y)] == m.meet(m.neg[x], m.neg[y])


def test_designated_sets_are_filters():
    for m in catalog().values():
        assert m.is_bd_model()


def test_explosive_validity_antitone_in_designation():
    m = bd4()
    smaller = FinMatrix(m.labels, m.neg, m.top, m.bottom, [m.top], m.flags,
                        meet=[[m.meet(x, y) for y in range(m.n)] for x in range(m.n)],
                        join=[[m.join(x, y) for y in range(m.n)] for x in range(m.n)])
    for text in ["p, ~p |- ", "p & ~p |- ", "p |- "]:
        r = parse_rule(text)
        if validates(m, r):
            assert validates(smaller, r)


def test_json_roundtrip():
    for m in [bd4(), kminus8()]:
        m2 = FinMatrix.from_json(m.to_json())
        assert find_isomorphism(m, m2) is not None
    # the loader re-verifies flags: an identity "negation" is rejected
    with pytest.raises(MatrixError):
        bad = bd4().to_json().replace('"neg": [3, 1, 2, 0]', '"neg": [0, 1, 2, 3]')
        assert '"neg": [0, 1, 2, 3]' in bad
        FinMatrix.from_json(bad)


def test_matrix_map_checks():
    # the diagonal embedding of CL2 into CL2 x CL2 is a strict homomorphism
    p = product([cl2(), cl2()])
    h = tuple(p.labels.index(f"({l},{l})") for l in cl2().labels)
    mm = MatrixMap(cl2(), p, h)
    assert mm.is_homomorphism() and mm.is_strict()
    # collapsing BD4 onto CL2 by designation is not an algebra homomorphism
    bad = MatrixMap(bd4(), cl2(), (0, 0, 1, 1))
    assert not bad.is_homomorphism()
