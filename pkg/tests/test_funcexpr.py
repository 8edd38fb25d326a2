from fractions import Fraction

import pytest

from dualcheck import setexpr as se
from dualcheck.errors import ImproperFunctionError, RegimeError
from dualcheck.funcexpr import (
    Affine,
    ArgTranslate,
    ConjugateOf,
    IndicatorOf,
    InfConv,
    MINF,
    NormAtom,
    PINF,
    PlusConst,
    PolyFunc,
    Sum,
    SupOfAffine,
    SymVec,
    biconjugate_check,
    conjugate,
    conjugate_polyfunc,
    continuous_everywhere,
    domain,
    domain_lower_bound,
    epi_diff_set,
    er,
    er_add,
    er_le,
    evaluate,
    lower,
    pf_domain,
    pf_value,
)
from dualcheck.polyhedra import contains, interval, poly, whole_space, zero_in, Notion
from dualcheck.spaces import finite, lp_space
from dualcheck.setexpr import HOLDS, FAILS

from oracles import grid

F = Fraction


def ind_interval(lo, hi):
    return IndicatorOf(se.PolyAtom(interval(lo, hi)))


def test_extended_real_conventions():
    assert er_add(PINF, MINF) == PINF
    assert er_add(MINF, er(3)) == MINF
    assert er_add(er(2), er(5)) == er(7)
    assert er_le(MINF, er(0)) and er_le(er(0), PINF)


def test_evaluate_indicator():
    f = ind_interval(0, 1)
    assert evaluate(f, (F(1, 2),)) == er(0)
    assert evaluate(f, (F(2),)) == PINF


def test_evaluate_l1_norm():
    f = NormAtom("l1")
    assert evaluate(f, (1, -2)) == er(3)
    assert evaluate(f, (0, 0)) == er(0)


def test_infconv_of_l1_norms_grid_oracle():
    # (||.||_1 box ||.||_1)(1, 0): brute force over an exact grid gives 1
    pts = grid(-2, 2, F(1, 4), 2)
    x = (F(1), F(0))
    best = min(
        sum(abs(c) for c in u) + sum(abs(a - b) for a, b in zip(x, u)) for u in pts
    )
    assert best == 1
    f = InfConv(NormAtom("l1"), NormAtom("l1"))
    assert evaluate(f, x) == er(best) == er(1)


def test_sum_lowering():
    f = Sum(ind_interval(0, 1), ind_interval(1, 2))
    assert evaluate(f, (1,)) == er(0)
    assert evaluate(f, (F(1, 2),)) == PINF
    d = domain(f, finite(1))
    assert isinstance(d, se.PolyAtom)
    assert contains(d.poly, (1,)) and not contains(d.poly, (0,))


def test_domain_rules():
    assert isinstance(domain(NormAtom("l1"), finite(2)), se.WholeSpace)
    dom = domain(ind_interval(0, 1), finite(1))
    assert isinstance(dom, se.PolyAtom)


def test_conjugate_affine_is_point_indicator():
    c = conjugate(Affine((F(2),), F(0)))
    assert isinstance(c, IndicatorOf)
    inner = se.normalize(c.set_)
    assert isinstance(inner, se.PolyAtom)
    assert contains(inner.poly, (2,)) and not contains(inner.poly, (0,))


def test_conjugate_tilted_cone_indicator():
    # (delta_{l2+} + <c,.>)* = delta_{c - l2+}
    cvec = SymVec("c", frozenset({"nonneg", "continuous"}))
    g = Sum(IndicatorOf(se.CatalogAtom(se.LP_PLUS, lp_space(), ())), Affine(cvec))
    gc = conjugate(g)
    assert isinstance(gc, IndicatorOf)
    s = se.normalize(gc.set_)
    assert isinstance(s, se.Translate)
    assert isinstance(s.inner, se.Neg)
    assert isinstance(s.inner.inner, se.CatalogAtom) and s.inner.inner.cid == se.LP_PLUS
    assert isinstance(s.offset, se.SymPoint) and s.offset.name == "c"


def test_conjugate_subspace_indicator():
    f = IndicatorOf(se.CatalogAtom(se.SUBSPACE_C, lp_space(), ()))
    fc = conjugate(f)
    assert isinstance(fc, IndicatorOf)
    assert isinstance(fc.set_, se.CatalogAtom) and fc.set_.cid == se.SUBSPACE_C_PERP


def test_conjugate_norm_plus_kernel_indicator():
    # (||.|| + delta_Ker)* = delta_{B*(0,1) + R x0*}
    from dualcheck.spaces import banach

    g = Sum(NormAtom("l2"), IndicatorOf(se.CatalogAtom(se.KERNEL, banach("X"), ())))
    gc = conjugate(g)
    assert isinstance(gc, IndicatorOf)
    s = gc.set_
    assert isinstance(s, se.MinkSum)
    cids = {op.cid for op in s.operands}
    assert cids == {se.DUAL_BALL, se.FUNCTIONAL_LINE}


def test_conjugate_sum_without_qualification_is_flagged_inexact():
    f = Sum(ind_interval(0, 1), ind_interval(0, 2))
    fc = conjugate(f)
    assert isinstance(fc, InfConv)
    assert not fc.exact
    g = Sum(NormAtom("l1"), ind_interval(0, 1))
    gc = conjugate(g)
    # a continuous summand is an established qualification
    assert not isinstance(gc, InfConv) or gc.exact


def test_biconjugate_involution_on_samples():
    pts1 = grid(-2, 2, F(1, 2), 1)
    f = SupOfAffine((((F(1),), F(0)), ((F(2),), F(-1))))
    # hand oracle: f*(y) = y - 1 on [1, 2], +inf elsewhere
    pf = lower(f, 1)
    star = conjugate_polyfunc(pf)
    for (y,) in grid(-1, 3, F(1, 2), 1):
        expected = er(y - 1) if 1 <= y <= 2 else PINF
        assert pf_value(star, (y,)) == expected
    assert biconjugate_check(f, pts1)
    pts2 = grid(-1, 1, F(1, 2), 2)
    assert biconjugate_check(NormAtom("l1"), pts2)
    assert biconjugate_check(ind_interval(0, 1), pts1)


def test_conjugate_domain_of_bounded_set_support_is_whole_space():
    pf = lower(IndicatorOf(se.PolyAtom(interval(-1, 1))), 1)
    star = conjugate_polyfunc(pf)
    dom = pf_domain(star)
    assert dom.ineqs == () and dom.eqs == ()
    # support function values: |y|
    assert pf_value(star, (3,)) == er(3)
    assert pf_value(star, (-2,)) == er(2)


def test_conjugate_improper_raises():
    empty = IndicatorOf(se.PolyAtom(poly(1, ineqs=[((1,), -1), ((-1,), 0)])))
    with pytest.raises(ImproperFunctionError):
        conjugate_polyfunc(lower(empty, 1))


def test_l2_norm_is_symbolic_only():
    with pytest.raises(RegimeError):
        lower(NormAtom("l2"), 2)


def test_epi_diff_set_point_indicators():
    f = IndicatorOf(se.PolyAtom(poly(1, eqs=[((1,), 0)])))
    data = epi_diff_set(f, f, 0, finite(1))
    e = data.realized
    assert isinstance(e, se.PolyAtom)
    assert contains(e.poly, (0, 0)) and contains(e.poly, (0, 5))
    assert not contains(e.poly, (0, -1)) and not contains(e.poly, (1, 0))


def test_epi_diff_set_intervals_vertex_oracle():
    f = ind_interval(0, 1)
    data = epi_diff_set(f, f, 0, finite(1))
    e = data.realized.poly
    # [-1,1] x [0, inf): check the corner structure
    for pt, inside in [
        ((-1, 0), True),
        ((1, 0), True),
        ((0, 7), True),
        ((F(3, 2), 0), False),
        ((0, -1), False),
    ]:
        assert contains(e, pt) is inside


def test_epi_diff_contains_vertical_ray_at_zero():
    f = ind_interval(-1, 1)
    g = ind_interval(0, 2)
    data = epi_diff_set(f, g, 0, finite(1))
    assert contains(data.realized.poly, (0, 1))  # (0, r) with r > 0


def test_epi_diff_symbolic_indicator_pair_becomes_product():
    c = IndicatorOf(se.CatalogAtom(se.SUBSPACE_C, lp_space(), ()))
    s = IndicatorOf(se.CatalogAtom(se.SUBSPACE_S, lp_space(), ()))
    data = epi_diff_set(c, s, 0, lp_space())
    assert isinstance(data.realized, se.Product)
    base = data.realized.left
    assert isinstance(base, se.MinkSum)


def test_domain_lower_bound():
    assert domain_lower_bound(NormAtom("l2")) == 0
    assert domain_lower_bound(ind_interval(0, 1)) == 0
    cvec = SymVec("c", frozenset({"nonneg", "continuous"}))
    g = Sum(Affine(cvec), IndicatorOf(se.CatalogAtom(se.LP_PLUS, lp_space(), ())))
    assert domain_lower_bound(g) == 0
    e1 = SymVec("e1", frozenset({"coordinate", "continuous"}))
    h = Sum(Affine(e1), IndicatorOf(se.CatalogAtom(se.SUBSPACE_S, lp_space(), ())))
    assert domain_lower_bound(h) is None
    # numeric route goes through the LP
    k = Sum(Affine((F(1),)), ind_interval(-2, 5))
    assert domain_lower_bound(k, finite(1)) == -2


def test_continuity_attribute():
    assert continuous_everywhere(NormAtom("l2")) is HOLDS
    f = IndicatorOf(se.CatalogAtom(se.LP_PLUS, lp_space(), ()))
    assert continuous_everywhere(f) is FAILS
    assert continuous_everywhere(Sum(NormAtom("l2"), f)) is FAILS


def test_normalize_cone_absorption_and_eq1():
    plus = se.CatalogAtom(se.LP_PLUS, lp_space(), ())
    assert se.normalize(se.MinkSum((plus, plus))) == plus
    assert se.normalize(se.MinkSum((plus, se.Neg(plus)))) == se.WholeSpace(lp_space())
    u = se.CatalogAtom(se.ABSTRACT_CONVEX, lp_space(), (("label", "U"),))
    via_hull = se.normalize(se.ConeHull(se.ConvexHullWithOrigin(u)))
    direct = se.normalize(se.ConeHull(u))
    assert via_hull == direct


def test_normalize_translate_merge():
    plus = se.CatalogAtom(se.LP_PLUS, lp_space(), ())
    x0 = se.SymPoint("x0", frozenset({"strictly_positive"}))
    nested = se.Translate(se.Translate(plus, x0), se.pneg(x0))
    assert se.normalize(nested) == plus
    numeric = se.Translate(
        se.Translate(se.PolyAtom(interval(0, 1)), se.VecPoint((F(1),))),
        se.VecPoint((F(2),)),
    )
    out = se.normalize(numeric)
    assert isinstance(out, se.PolyAtom)
    assert contains(out.poly, (3,)) and contains(out.poly, (4,)) and not contains(out.poly, (0,))


def test_normalize_subspace_self_difference():
    c = se.CatalogAtom(se.SUBSPACE_C, lp_space(), ())
    assert se.normalize(se.MinkSum((c, se.Neg(c)))) == c
