import random
from fractions import Fraction

from dualcheck import setexpr as se
from dualcheck.funcexpr import Affine, IndicatorOf, NormAtom, Sum, SymVec
from dualcheck.inference import (
    DeclaredFact,
    Engine,
    catalog_fact,
    infer,
    interior_is_empty,
    meets_qri,
    nonneg_certificate,
    _RULE_NAMES,
)
from dualcheck.polyhedra import Notion, interval, orthant, poly
from dualcheck.setexpr import FAILS, HOLDS, UNKNOWN, ORIGIN
from dualcheck.spaces import banach, lp_space, lp_uncountable

F = Fraction
L2 = lp_space()
L2R = lp_uncountable()

PLUS = se.CatalogAtom(se.LP_PLUS, L2, ())
PLUS_UNC = se.CatalogAtom(se.LP_PLUS_UNC, L2R, ())
SUB_C = se.CatalogAtom(se.SUBSPACE_C, L2, ())
SUB_S = se.CatalogAtom(se.SUBSPACE_S, L2, ())
KER = se.CatalogAtom(se.KERNEL, banach("X"), ())
POS_SEQ = se.SymPoint("xpos", frozenset({"strictly_positive"}))


def test_positive_cone_catalog_facts():
    # strictly positive sequences sit in the quasi-relative interior
    assert infer(Notion.QRI, POS_SEQ, PLUS).status is HOLDS
    assert infer(Notion.QI, POS_SEQ, PLUS).status is HOLDS
    # but every stronger notion set is empty
    for notion in (Notion.INT, Notion.CORE, Notion.SQRI, Notion.ICR):
        assert infer(notion, POS_SEQ, PLUS).status is FAILS
        assert catalog_fact(se.LP_PLUS, notion) is FAILS
    assert infer(Notion.QRI, ORIGIN, PLUS).status is FAILS


def test_uncountable_positive_cone_everything_empty():
    assert catalog_fact(se.LP_PLUS_UNC, Notion.QRI, L2R) is FAILS
    assert infer(Notion.QRI, POS_SEQ, PLUS_UNC).status is FAILS
    assert infer(Notion.QI, ORIGIN, PLUS_UNC).status is FAILS


def test_cone_difference_is_whole_space():
    diff = se.MinkSum((PLUS, se.Neg(PLUS)))
    out = infer(Notion.QI, ORIGIN, diff)
    assert out.status is HOLDS
    assert infer(Notion.INT, ORIGIN, diff).status is HOLDS


def test_closed_subspace_facts():
    assert infer(Notion.SQRI, ORIGIN, KER).status is HOLDS
    assert infer(Notion.ICR, ORIGIN, KER).status is HOLDS
    assert infer(Notion.QRI, ORIGIN, KER).status is HOLDS
    assert infer(Notion.QI, ORIGIN, KER).status is FAILS
    assert infer(Notion.CORE, ORIGIN, KER).status is FAILS
    assert catalog_fact(
        se.CLOSED_SUBSPACE, Notion.QI, banach("X"), (("dense", False), ("whole", False))
    ) is FAILS


def test_dense_nonclosed_subspace_difference():
    # C - S for the two interleaved subspaces: dense proper subspace
    d = se.MinkSum((SUB_C, se.Neg(SUB_S)))
    assert infer(Notion.QI, ORIGIN, d).status is HOLDS
    assert infer(Notion.SQRI, ORIGIN, d).status is FAILS
    assert infer(Notion.CORE, ORIGIN, d).status is FAILS
    assert infer(Notion.ICR, ORIGIN, d).status is HOLDS


def test_polyatom_fallback_matches_zero_in():
    box = se.PolyAtom(poly(2, ineqs=[((1, 0), 1), ((0, 1), 1), ((-1, 0), 1), ((0, -1), 1)]))
    assert infer(Notion.QI, ORIGIN, box).status is HOLDS
    corner = se.PolyAtom(orthant(2))
    assert infer(Notion.QI, ORIGIN, corner).status is FAILS
    assert infer(Notion.QRI, ORIGIN, corner).status is FAILS
    seg = se.PolyAtom(poly(1, ineqs=[((1,), 1), ((-1,), 1)]))
    assert infer(Notion.QRI, ORIGIN, seg).status is HOLDS


def test_singleton_facts():
    s0 = se.Singleton(ORIGIN, banach("Z"))
    assert infer(Notion.QRI, ORIGIN, s0).status is HOLDS
    assert infer(Notion.SQRI, ORIGIN, s0).status is HOLDS
    assert infer(Notion.QI, ORIGIN, s0).status is FAILS


def test_product_rule_kills_vertical_ray():
    ray = se.PolyAtom(poly(1, ineqs=[((-1,), 0)]))
    d = se.MinkSum((SUB_C, se.Neg(SUB_S)))
    e = se.Product(d, ray)
    assert infer(Notion.QRI, ORIGIN, e).status is FAILS
    assert infer(Notion.QI, ORIGIN, e).status is FAILS


def test_declared_facts_are_terminal():
    c_set = se.CatalogAtom(se.ABSTRACT_CONVEX, banach("X"), (("label", "C"), ("closed", True)))
    x0 = se.SymPoint("x0", frozenset())
    facts = [
        DeclaredFact(
            Notion.QI, x0, c_set, HOLDS, ("Simons 1998, Ex. 11.3", "x0 is not a support point of C")
        )
    ]
    eng = Engine(facts)
    assert eng.infer(Notion.QI, x0, c_set).status is HOLDS
    # chain: qi at x0 implies qri at x0
    assert eng.infer(Notion.QRI, x0, c_set).status is HOLDS
    # a declared qi point of C makes C - C dense
    diff = se.MinkSum((c_set, se.Neg(c_set)))
    assert eng.infer(Notion.QI, ORIGIN, diff).status is HOLDS
    # provenance carries the citation
    prov = eng.infer(Notion.QI, x0, c_set).prov
    assert any("Simons" in c[0] for st in prov for c in st.cites)


def test_nonneg_certificate_positive_cases():
    cvec = SymVec("c", frozenset({"nonneg", "continuous"}))
    f = Sum(NormAtom("l2"), IndicatorOf(se.Translate(se.Neg(PLUS), se.SymPoint("x0", frozenset({"strictly_positive"})))))
    g = Sum(Affine(cvec), IndicatorOf(PLUS))
    st, _ = nonneg_certificate(f, g, 0)
    assert st is HOLDS
    fi = IndicatorOf(SUB_C)
    gi = IndicatorOf(SUB_S)
    st2, _ = nonneg_certificate(fi, gi, 0)
    assert st2 is HOLDS


def test_nonneg_certificate_unknown_when_decoupled_bound_fails():
    e1 = SymVec("e1", frozenset({"coordinate", "continuous"}))
    f = IndicatorOf(SUB_C)
    g = Sum(Affine(e1), IndicatorOf(SUB_S))
    st, _ = nonneg_certificate(f, g, 0)
    assert st is UNKNOWN


def test_epi_diff_cone_exclusion_via_certificate():
    cvec = SymVec("c", frozenset({"nonneg", "continuous"}))
    f = Sum(NormAtom("l2"), IndicatorOf(se.Translate(se.Neg(PLUS), POS_SEQ)))
    g = Sum(Affine(cvec), IndicatorOf(PLUS))
    node = se.EpiDiffSet(f, g, F(0), L2)
    eng = Engine()
    assert eng.cone_test("sub_cl", ORIGIN, node).status is FAILS
    assert eng.cone_test("whole_cl", ORIGIN, node).status is FAILS


def test_interior_is_empty():
    assert interior_is_empty(PLUS) is HOLDS
    assert interior_is_empty(SUB_C) is HOLDS
    assert interior_is_empty(se.Translate(se.Neg(PLUS), POS_SEQ)) is HOLDS
    assert interior_is_empty(se.WholeSpace(L2)) is FAILS
    assert interior_is_empty(se.PolyAtom(interval(0, 1))) is FAILS
    flat = se.PolyAtom(poly(2, eqs=[((0, 1), 0)], ineqs=[((1, 0), 1)]))
    assert interior_is_empty(flat) is HOLDS


def test_meets_qri():
    eng = Engine()
    # origin witness: 0 in Ker and 0 in qri(Ker)
    out = meets_qri(eng, KER, KER)
    assert out.status is HOLDS
    # empty qri refutes
    out2 = meets_qri(eng, se.WholeSpace(L2R), PLUS_UNC)
    assert out2.status is FAILS
    # numeric route
    a = se.PolyAtom(interval(0, 1))
    b = se.PolyAtom(interval(-1, F(1, 2)))
    assert meets_qri(Engine(), a, b, n=1).status is HOLDS
    c = se.PolyAtom(interval(2, 3))
    assert meets_qri(Engine(), c, b, n=1).status is FAILS


def test_chain_monotonicity_randomized():
    rng = random.Random(5)
    stronger_to_weaker = [
        (Notion.INT, Notion.CORE),
        (Notion.CORE, Notion.SQRI),
        (Notion.SQRI, Notion.ICR),
        (Notion.ICR, Notion.QRI),
        (Notion.CORE, Notion.QI),
        (Notion.QI, Notion.QRI),
    ]
    sets = [
        PLUS,
        PLUS_UNC,
        SUB_C,
        KER,
        se.MinkSum((PLUS, se.Neg(PLUS))),
        se.MinkSum((SUB_C, se.Neg(SUB_S))),
        se.WholeSpace(L2),
        se.Singleton(ORIGIN, L2),
        se.PolyAtom(orthant(2)),
        se.PolyAtom(interval(-1, 1)),
    ]
    for s in sets:
        eng = Engine()
        for strong, weak in stronger_to_weaker:
            a = eng.infer(strong, ORIGIN, s).status
            b = eng.infer(weak, ORIGIN, s).status
            if a is HOLDS:
                assert b is HOLDS, (s, strong, weak)
            if b is FAILS:
                assert a is FAILS, (s, strong, weak)


def test_confluence_under_rule_shuffles():
    rng = random.Random(11)
    sets = [
        PLUS,
        PLUS_UNC,
        SUB_C,
        KER,
        se.MinkSum((SUB_C, se.Neg(SUB_S))),
        se.PolyAtom(orthant(2)),
        se.Singleton(ORIGIN, L2),
        se.WholeSpace(L2),
    ]
    base = {}
    for s in sets:
        for notion in Notion:
            base[(s, notion)] = infer(notion, ORIGIN, s).status
    for _ in range(6):
        order = list(_RULE_NAMES)
        rng.shuffle(order)
        for s in sets:
            eng = Engine(rule_order=order)
            for notion in Notion:
                assert eng.infer(notion, ORIGIN, s).status is base[(s, notion)], (s, notion, order)


def test_never_both_holds_and_fails():
    sets = [
        PLUS,
        SUB_C,
        KER,
        se.MinkSum((SUB_C, se.Neg(SUB_S))),
        se.PolyAtom(orthant(2)),
        se.WholeSpace(L2),
    ]
    for s in sets:
        eng = Engine()
        for kind in ("int", "whole_alg", "whole_cl", "sub_closed", "sub_alg", "sub_cl"):
            outs = eng.cone_test_all_rules(kind, ORIGIN, se.normalize(s))
            statuses = {f.status for _, f in outs}
            assert not (HOLDS in statuses and FAILS in statuses), (s, kind, outs)


def test_qi_lemma_consistency_where_decided():
    # qi(U) holds iff qri(U) holds and qi(U - U) holds, on decided triples
    sets = [PLUS, SUB_C, KER, se.WholeSpace(L2), se.PolyAtom(interval(-1, 1))]
    for u in sets:
        eng = Engine()
        qi_u = eng.infer(Notion.QI, ORIGIN, u).status
        qri_u = eng.infer(Notion.QRI, ORIGIN, u).status
        diff = se.MinkSum((u, se.Neg(u)))
        qi_d = eng.infer(Notion.QI, ORIGIN, diff).status
        if UNKNOWN not in (qi_u, qri_u, qi_d):
            assert (qi_u is HOLDS) == (qri_u is HOLDS and qi_d is HOLDS), u
