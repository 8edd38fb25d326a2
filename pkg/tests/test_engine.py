import random
from fractions import Fraction

import pytest

from dualcheck import setexpr as se
from dualcheck.engine import (
    AffineMap,
    FenchelInstance,
    LagrangeInstance,
    PerturbationInstance,
    dual_objective_value,
    is_numeric,
    recover_dual_via_separation,
    scalarize,
    solve_dual,
    solve_primal,
    to_perturbation,
    value_report,
)
from dualcheck.errors import ConeMembershipError, UndecidableValueError
from dualcheck.funcexpr import (
    Affine,
    IndicatorOf,
    MINF,
    NormAtom,
    PINF,
    Sum,
    er,
)
from dualcheck.polyhedra import contains, interval, orthant, poly, singleton
from dualcheck.spaces import finite, lp_space

from oracles import enumerate_vertices

F = Fraction


def ind(p):
    return IndicatorOf(se.PolyAtom(p))


def fenchel(f, g, n=1, iid="t", amap=None, gn=None):
    return FenchelInstance(
        instance_id=iid,
        space=finite(n),
        f=f,
        g=g,
        amap=amap,
        gspace=finite(gn) if gn is not None else None,
    )


def test_primal_indicator_overlap():
    inst = fenchel(ind(interval(0, 1)), ind(interval(1, 2)))
    vp, x = solve_primal(inst)
    assert vp == er(0)
    assert x == (F(1),)


def test_perturbation_view_interval_difference():
    inst = fenchel(ind(interval(0, 1)), ind(interval(1, 2)))
    view = to_perturbation(inst)
    p = view.pr_dom_poly
    for pt, inside in [((-2,), True), ((0,), True), ((-1,), True), ((1,), False), ((-3,), False)]:
        assert contains(p, pt) is inside
    assert view.vp == er(0) and view.vp_attained


def test_dual_matches_primal_on_polyhedral_pair():
    f = ind(interval(-1, 1))
    g = ind(interval(-1, 1))
    inst = fenchel(f, g)
    vp, _ = solve_primal(inst)
    vd, y = solve_dual(inst)
    assert vp == er(0) and vd == er(0)
    assert y is not None
    assert dual_objective_value(inst, y) == er(0)


def test_dual_hand_oracle_halfline_plus_tilt():
    # f = delta_{[0,inf)}, g = x + delta_{[0,inf)}: vP = 0;
    # conjugates by hand give vD = 0 with optimizers y in [0, 1]
    half = poly(1, ineqs=[((-1,), 0)])
    f = ind(half)
    g = Sum(Affine((F(1),), F(0)), ind(half))
    inst = fenchel(f, g)
    vp, x = solve_primal(inst)
    assert vp == er(0) and x == (F(0),)
    vd, y = solve_dual(inst)
    assert vd == er(0)
    assert dual_objective_value(inst, y) == er(0)


def test_separation_recovery_trivial_point():
    f = ind(singleton((F(0),)))
    inst = fenchel(f, f)
    vp, _ = solve_primal(inst)
    assert vp == er(0)
    dual = recover_dual_via_separation(inst, 0)
    assert dual_objective_value(inst, dual) == er(0)


def test_separation_recovery_halfline_tilt():
    half = poly(1, ineqs=[((-1,), 0)])
    f = ind(half)
    g = Sum(Affine((F(1),), F(0)), ind(half))
    inst = fenchel(f, g)
    dual = recover_dual_via_separation(inst, 0)
    assert dual_objective_value(inst, dual) == er(0)
    vd, _ = solve_dual(inst)
    assert vd == er(0)


def test_separation_recovery_matches_dual_on_random_instances():
    rng = random.Random(2718)
    hits = 0
    for _ in range(25):
        n = rng.randint(1, 2)
        f = ind(_random_box(rng, n))
        tilt = Affine(tuple(F(rng.randint(-2, 2)) for _ in range(n)), F(rng.randint(-1, 1)))
        g = Sum(tilt, ind(_random_box(rng, n)))
        inst = fenchel(f, g, n=n)
        vp, _ = solve_primal(inst)
        if not vp.is_finite():
            continue
        view = to_perturbation(inst)
        # only instances with 0 interior to the domain difference (the
        # separation needs the first clause)
        from dualcheck.polyhedra import zero_in, Notion

        if not zero_in(Notion.QI, view.pr_dom_poly):
            continue
        hits += 1
        dual = recover_dual_via_separation(inst, vp.value)
        vd, _ = solve_dual(inst)
        assert vd == vp
        assert dual_objective_value(inst, dual) == vp
    assert hits >= 5


def _random_box(rng, n):
    lo = [rng.randint(-3, 0) for _ in range(n)]
    hi = [rng.randint(0, 3) for _ in range(n)]
    rows = []
    for j in range(n):
        e = [F(0)] * n
        e[j] = F(1)
        rows.append((tuple(e), F(hi[j])))
        rows.append((tuple(-c for c in e), F(-lo[j])))
    return poly(n, rows)


def test_weak_duality_randomized():
    rng = random.Random(31415)
    from dualcheck.funcexpr import er_le

    for _ in range(30):
        n = rng.randint(1, 2)
        f = Sum(
            Affine(tuple(F(rng.randint(-2, 2)) for _ in range(n))),
            ind(_random_box(rng, n)),
        )
        g = Sum(
            Affine(tuple(F(rng.randint(-2, 2)) for _ in range(n))),
            ind(_random_box(rng, n)),
        )
        inst = fenchel(f, g, n=n)
        vp, _ = solve_primal(inst)
        vd, _ = solve_dual(inst)
        assert er_le(vd, vp)


def test_fenchel_with_operator():
    # f = delta_{[0,2]} on R, g = delta_{[1,3]} on R, A = multiplication by 2
    inst = fenchel(
        ind(interval(0, 2)),
        ind(interval(1, 3)),
        n=1,
        amap=((F(2),),),
        gn=1,
    )
    vp, x = solve_primal(inst)
    assert vp == er(0)
    assert F(1, 2) <= x[0] <= F(3, 2)
    view = to_perturbation(inst)
    # A(dom f) - dom g = [0,4] - [1,3] = [-3, 3]
    for pt, inside in [((-3,), True), ((3,), True), ((F(7, 2),), False)]:
        assert contains(view.pr_dom_poly, pt) is inside
    vd, _ = solve_dual(inst)
    assert vd == er(0)


def test_lagrange_primal_dual_and_slater():
    # min x1 + x2 over the unit box under x1 + x2 - 1 <= 0
    box = _unit_box2()
    gmap = AffineMap(((F(1), F(1)),), (F(-1),))
    cone = se.PolyAtom(poly(1, ineqs=[((-1,), 0)]))  # R_+
    inst = LagrangeInstance(
        instance_id="lag",
        xspace=finite(2),
        zspace=finite(1),
        f=Affine((F(1), F(1)), F(0)),
        sset=se.PolyAtom(box),
        gmap=gmap,
        cone=cone,
    )
    assert is_numeric(inst)
    vp, x = solve_primal(inst)
    assert vp == er(0) and x == (F(0), F(0))
    vd, z = solve_dual(inst)
    assert vd == er(0)
    assert dual_objective_value(inst, z) == er(0)
    dual = recover_dual_via_separation(inst, 0)
    assert dual_objective_value(inst, dual) == er(0)


def _unit_box2():
    return poly(
        2,
        ineqs=[((1, 0), 1), ((0, 1), 1), ((-1, 0), 0), ((0, -1), 0)],
    )


def test_lagrange_view_projection():
    box = _unit_box2()
    gmap = AffineMap(((F(1), F(0)),), (F(-2),))
    cone = se.PolyAtom(poly(1, ineqs=[((-1,), 0)]))
    inst = LagrangeInstance(
        instance_id="lagv",
        xspace=finite(2),
        zspace=finite(1),
        f=Affine((F(0), F(0)), F(0)),
        sset=se.PolyAtom(box),
        gmap=gmap,
        cone=cone,
    )
    view = to_perturbation(inst)
    # g(box) + R_+ = [-2, -1] + [0, inf) = [-2, inf)
    assert contains(view.pr_dom_poly, (-2,)) and contains(view.pr_dom_poly, (5,))
    assert not contains(view.pr_dom_poly, (F(-5, 2),))


def test_scalarize_numeric():
    gmap = AffineMap(((F(1), F(0)), (F(0), F(1))), (F(-1), F(0)))
    cone = se.PolyAtom(orthant(2))
    out = scalarize((F(1), F(0)), gmap, cone)
    assert isinstance(out, Affine)
    assert out.c == (F(1), F(0)) and out.alpha == F(-1)
    zero = scalarize((F(0), F(0)), gmap, cone)
    assert isinstance(zero, Affine)
    with pytest.raises(ConeMembershipError):
        scalarize((F(-1), F(0)), gmap, cone)


def test_scalarize_rejects_out_of_space_token():
    tok = se.SymPoint("fast_growth", frozenset({"not_in_space"}))
    with pytest.raises(ConeMembershipError):
        scalarize(tok, AffineMap(((F(1),),), (F(0),)), se.PolyAtom(poly(1, ineqs=[((-1,), 0)])))


def test_symbolic_values_come_from_declarations():
    from dualcheck.engine import DeclaredValues

    plus = se.CatalogAtom(se.LP_PLUS, lp_space(), ())
    inst = FenchelInstance(
        instance_id="sym",
        space=lp_space(),
        f=IndicatorOf(plus),
        g=IndicatorOf(se.Neg(plus)),
        values=DeclaredValues(vp=er(0), vp_attained=True, vd=er(0), vd_attained=True),
    )
    assert not is_numeric(inst)
    vp, _ = solve_primal(inst)
    vd, _ = solve_dual(inst)
    assert vp == er(0) and vd == er(0)
    bare = FenchelInstance("bare", lp_space(), IndicatorOf(plus), IndicatorOf(plus))
    with pytest.raises(UndecidableValueError):
        solve_primal(bare)


def test_perturbation_instance_roundtrip():
    # Phi(x, y) = delta_{[0,1]}(x) + delta_{[x-1, x+1]}-ish coupling:
    # use Phi(x,y) = delta(|x| <= 1) + delta(|x - y| <= 1) via polyhedron
    phi_dom = poly(
        2,
        ineqs=[((1, 0), 1), ((-1, 0), 1), ((1, -1), 1), ((-1, 1), 1)],
    )
    phi = IndicatorOf(se.PolyAtom(phi_dom))
    inst = PerturbationInstance(instance_id="phi", nx=1, ny=1, phi=phi)
    vp, x = solve_primal(inst)
    assert vp == er(0)
    vd, y = solve_dual(inst)
    assert vd == er(0)
    view = to_perturbation(inst)
    assert contains(view.pr_dom_poly, (0,)) and contains(view.pr_dom_poly, (2,))
    assert not contains(view.pr_dom_poly, (3,))
    rep = value_report(inst)
    assert rep.gap == er(0) and rep.gap_applicable


def test_value_report_gap_not_applicable_for_doubly_infinite():
    f = Affine((F(1),), F(0))  # unbounded below on the line
    g = Affine((F(1),), F(0))
    inst = fenchel(f, g)
    rep = value_report(inst)
    assert rep.vp == MINF and rep.vd == MINF
    assert rep.gap is None and not rep.gap_applicable
