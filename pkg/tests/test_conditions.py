from fractions import Fraction

import pytest

from dualcheck import setexpr as se
from dualcheck.conditions import (
    Clause,
    ConditionId,
    ConditionVerdict,
    DiagnosisContext,
    FAMILY_FENCHEL,
    check_rc8,
    consistency_check,
    diagnose,
    evaluate_condition,
)
from dualcheck.engine import (
    AffineMap,
    DeclaredValues,
    FenchelInstance,
    LagrangeInstance,
)
from dualcheck.errors import ApplicabilityError
from dualcheck.funcexpr import Affine, IndicatorOf, NormAtom, Sum, er
from dualcheck.polyhedra import interval, orthant, poly
from dualcheck.setexpr import FAILS, HOLDS, UNKNOWN
from dualcheck.spaces import finite, lp_space

F = Fraction


def ind(p):
    return IndicatorOf(se.PolyAtom(p))


def _numeric_pair(f, g, n=1):
    return FenchelInstance("t", finite(n), f, g)


def test_rc3_holds_for_symmetric_intervals():
    # dom f - dom g = [-2, 2]: the origin is in the core
    inst = _numeric_pair(ind(interval(-1, 1)), ind(interval(-1, 1)))
    v = evaluate_condition("3", inst)
    assert v.status is HOLDS
    d = diagnose(inst)
    assert d.strong_duality[0] == "guaranteed-by"
    assert d.verdict("2").status is HOLDS
    assert d.verdict("8").status is HOLDS
    assert d.consistency[0]
    assert d.reverse_check is not None and d.reverse_check[0]


def test_rc_conditions_fail_for_touching_intervals():
    # dom f - dom g = [-1, 1] shifted: f on [0,1], g on [1,2]:
    # difference [-2, 0], the origin is on the boundary
    inst = _numeric_pair(ind(interval(0, 1)), ind(interval(1, 2)))
    d = diagnose(inst)
    assert d.verdict("2").status is FAILS
    assert d.verdict("3").status is FAILS
    # relative interiority also fails at a boundary point of a full-dim set
    assert d.verdict("5").status is FAILS
    # the numeric closedness condition always holds
    assert d.verdict("8").status is HOLDS
    # values still agree (polyhedral strong duality)
    assert d.values.vp == d.values.vd == er(0)
    assert d.strong_duality[0] in ("guaranteed-by", "verified-numerically")
    assert d.consistency[0]


def test_rc4_rc5_on_lower_dimensional_overlap():
    # dom f = dom g = {0}: difference {0}: relative interior holds,
    # interior fails
    point = poly(1, eqs=[((1,), 0)])
    inst = _numeric_pair(ind(point), ind(point))
    d = diagnose(inst)
    assert d.verdict("2").status is FAILS
    assert d.verdict("4").status is HOLDS
    assert d.verdict("5").status is HOLDS
    assert d.verdict("6").status is FAILS  # qi fails in the flat direction
    assert d.consistency[0]


def test_rc1_numeric_continuity():
    inst = _numeric_pair(Sum(NormAtom("l1"), ind(interval(-1, 1))), ind(interval(0, 2)))
    v = evaluate_condition("1", inst)
    assert v.status is HOLDS
    flat = poly(1, eqs=[((1,), 0)])
    inst2 = _numeric_pair(ind(flat), ind(flat))
    assert evaluate_condition("1", inst2).status is FAILS


def test_rc6_numeric_and_separation_consistency():
    inst = _numeric_pair(ind(interval(-1, 1)), ind(interval(-1, 1)))
    v6 = evaluate_condition("6", inst)
    assert v6.status is HOLDS
    from dualcheck.engine import recover_dual_via_separation, dual_objective_value, solve_dual

    dual = recover_dual_via_separation(inst, 0)
    vd, _ = solve_dual(inst)
    assert vd == er(0)
    assert dual_objective_value(inst, dual) == er(0)


def test_phi_family_rejects_primed_and_closedness():
    with pytest.raises(ApplicabilityError):
        ConditionId("phi", "6'")
    with pytest.raises(ApplicabilityError):
        ConditionId("phi", "8")


def test_corrupted_diagnosis_detected():
    inst = _numeric_pair(ind(interval(-1, 1)), ind(interval(-1, 1)))
    d = diagnose(inst)
    assert d.consistency[0]
    # flip RC6 to fails while RC3 holds: the edge RC3 => RC6 must fire
    bad_clause = Clause("forced failure", FAILS)
    tampered = []
    for idx, v in d.verdicts:
        if idx == "6":
            v = ConditionVerdict(v.cid, v.clauses + (bad_clause,))
        tampered.append((idx, v))
    from dataclasses import replace

    bad = replace(d, verdicts=tuple(tampered))
    ok, violations = consistency_check(bad)
    assert not ok
    assert any("RC3" in msg and "RC6" in msg for msg in violations)


def test_lagrange_slater_numeric():
    box = poly(2, ineqs=[((1, 0), 1), ((0, 1), 1), ((-1, 0), 0), ((0, -1), 0)])
    gmap = AffineMap(((F(1), F(1)),), (F(-1),))
    cone = se.PolyAtom(poly(1, ineqs=[((-1,), 0)]))
    inst = LagrangeInstance(
        instance_id="lag",
        xspace=finite(2),
        zspace=finite(1),
        f=Affine((F(1), F(1)), F(0)),
        sset=se.PolyAtom(box),
        gmap=gmap,
        cone=cone,
    )
    d = diagnose(inst)
    assert d.verdict("1").status is HOLDS  # g(0,0) = -1 is interior to -R_+
    assert d.strong_duality[0] == "guaranteed-by"
    assert d.values.vp == d.values.vd == er(0)
    assert d.consistency[0]


def test_lagrange_zero_cone_blocks_slater():
    # C = {0} and S a proper subspace: Slater impossible, the projected
    # set is {0}, so the relative notions hold while the quasi-interior fails
    sub = poly(2, eqs=[((0, 1), 0)])  # the x1-axis inside R^2
    gmap = AffineMap(((F(1), F(0)), (F(0), F(1))), (F(0), F(0)))
    cone = se.PolyAtom(poly(2, eqs=[((1, 0), 0), ((0, 1), 0)]))
    inst = LagrangeInstance(
        instance_id="lag0",
        xspace=finite(2),
        zspace=finite(2),
        f=NormAtom("l1"),
        sset=se.PolyAtom(sub),
        gmap=gmap,
        cone=cone,
    )
    d = diagnose(inst)
    assert d.verdict("1").status is FAILS
    # pr set = S + {0} = the x1-axis: relative notions hold at the origin
    assert d.verdict("4").status is HOLDS
    assert d.verdict("5").status is HOLDS
    assert d.verdict("6").status is FAILS
    assert d.verdict("6'").status is FAILS  # cl(C - C) = {0} is not the space
    assert d.consistency[0]


def test_symbolic_dense_subspace_pair():
    # indicator pair on the interleaved dense subspaces: the quasi-interior
    # condition holds, the closedness one fails (declared witness)
    from dualcheck.engine import SpecialFact

    c_atom = se.CatalogAtom(se.SUBSPACE_C, lp_space(), ())
    s_atom = se.CatalogAtom(se.SUBSPACE_S, lp_space(), ())
    inst = FenchelInstance(
        instance_id="dense-pair",
        space=lp_space(),
        f=IndicatorOf(c_atom),
        g=IndicatorOf(s_atom),
        values=DeclaredValues(
            vp=er(0), vp_attained=True, vp_solution="0",
            vd=er(0), vd_attained=True, vd_solution="{0}",
        ),
    )
    d = diagnose(inst)
    assert d.verdict("6").status is HOLDS
    assert d.verdict("6'").status is FAILS
    assert d.verdict("2").status is FAILS
    assert d.verdict("5").status is FAILS
    assert d.verdict("8").status is FAILS  # derived: the perp sum is not closed
    assert d.strong_duality == ("guaranteed-by", "RC6")
    assert d.consistency[0]


def test_check_rc8_declared_witness_wins():
    from dualcheck.engine import SpecialFact

    c_atom = se.CatalogAtom(se.SUBSPACE_C, lp_space(), ())
    s_atom = se.CatalogAtom(se.SUBSPACE_S, lp_space(), ())
    inst = FenchelInstance(
        instance_id="witnessed",
        space=lp_space(),
        f=IndicatorOf(c_atom),
        g=IndicatorOf(s_atom),
        rc8_fact=SpecialFact(
            FAILS,
            ("Gowda-Teboulle 1990, Ex. 3.3", "(e^1 + S-perp) cap C-perp is empty"),
            "witness e^1: the infimal convolution of the conjugates jumps to +inf",
        ),
        values=DeclaredValues(vp=er(0), vp_attained=True, vd=er(0), vd_attained=True),
    )
    v = check_rc8(inst)
    assert v.status is FAILS
    assert any("e^1" in (c.prov[0].detail if c.prov else "") for c in v.clauses if c.status is FAILS)


def test_gap_propagates_failures():
    # declared gap: every sufficient condition must come out failed
    c_atom = se.CatalogAtom(se.SUBSPACE_C, lp_space(), ())
    s_atom = se.CatalogAtom(se.SUBSPACE_S, lp_space(), ())
    e1 = se.SymPoint("e1", frozenset({"coordinate", "continuous"}))
    from dualcheck.funcexpr import SymVec

    inst = FenchelInstance(
        instance_id="gap",
        space=lp_space(),
        f=IndicatorOf(c_atom),
        g=Sum(Affine(SymVec("e1", frozenset({"coordinate", "continuous"}))), IndicatorOf(s_atom)),
        values=DeclaredValues(vp=er(0), vp_attained=True, vd=None),
    )
    from dataclasses import replace
    from dualcheck.funcexpr import MINF

    inst = replace(inst, values=replace(inst.values, vd=MINF))
    d = diagnose(inst)
    assert d.strong_duality[0] == "gap-detected"
    for idx, v in d.verdicts:
        assert v.status is FAILS, idx
    assert d.consistency[0]
