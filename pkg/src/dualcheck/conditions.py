"""Regularity-condition evaluation and diagnosis assembly.

Every condition is a conjunction of clauses; clauses resolve through the
inference engine, the exact polyhedral backend, or declared certificates,
and carry provenance.  A diagnosis evaluates all conditions of the
instance's family, closes the verdict set under the implication graph
(forward for Holds, contrapositive for Fails, and the weak-duality
contrapositive when a gap is certified), decides the strong-duality
verdict, and re-checks the whole picture for consistency.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import engine as eng
from . import funcexpr as fx
from . import inference as inf
from . import polyhedra as pg
from . import setexpr as se
from .errors import ApplicabilityError, MalformedInputError
from .funcexpr import MINF, PINF, er, er_lt
from .inference import DeclaredFact, Engine, Step
from .polyhedra import Notion
from .setexpr import (
    FAILS,
    HOLDS,
    UNKNOWN,
    FactStatus,
    ORIGIN,
    and3,
    normalize,
    not3,
)

FAMILY_PHI = "phi"
FAMILY_FENCHEL = "fenchel"
FAMILY_LAGRANGE = "lagrange"

INDEX_ORDER = ("1", "2", "3", "4", "5", "6'", "6", "7", "8")


@dataclass(frozen=True)
class ConditionId:
    family: str
    index: str

    def __post_init__(self):
        if self.index not in INDEX_ORDER:
            raise ApplicabilityError(f"unknown condition index {self.index!r}")
        if self.family == FAMILY_PHI and self.index in ("6'", "8"):
            raise ApplicabilityError(
                "the perturbation family carries neither the primed nor the closedness condition"
            )

    @property
    def label(self) -> str:
        return f"RC{self.index}"


def family_indices(family: str) -> tuple[str, ...]:
    if family == FAMILY_PHI:
        return tuple(i for i in INDEX_ORDER if i not in ("6'", "8"))
    return INDEX_ORDER


@dataclass(frozen=True)
class Clause:
    text: str
    status: FactStatus
    prov: tuple[Step, ...] = ()


@dataclass(frozen=True)
class ConditionVerdict:
    cid: ConditionId
    clauses: tuple[Clause, ...]

    @property
    def status(self) -> FactStatus:
        if any(c.status is FAILS for c in self.clauses):
            return FAILS
        if all(c.status is HOLDS for c in self.clauses):
            return HOLDS
        return UNKNOWN

    def blocking_clause(self) -> Optional[Clause]:
        for c in self.clauses:
            if c.status is FAILS:
                return c
        for c in self.clauses:
            if c.status is UNKNOWN:
                return c
        return None


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    hyps: frozenset
    cite: str


_BASE_EDGES = (
    Edge("1", "2", frozenset({"frechet", "lsc", "convex"}), "classical chain"),
    Edge("2", "3", frozenset({"frechet", "lsc", "convex"}), "interior inside the core"),
    Edge("3", "2", frozenset({"frechet", "lsc", "convex"}), "core equals interior for li-convex value functions"),
    Edge("3", "4", frozenset({"frechet", "lsc", "convex"}), "classical chain"),
    Edge("4", "5", frozenset({"frechet", "lsc", "convex"}), "intrinsic-core with closed affine hull"),
    Edge("5", "4", frozenset({"frechet", "lsc", "convex"}), "same equivalence"),
    Edge("3", "6", frozenset({"frechet", "lsc", "convex"}), "core condition implies the quasi-interior one"),
    Edge("6", "7", frozenset({"convex"}), "quasi-interior pair equivalence"),
    Edge("7", "6", frozenset({"convex"}), "quasi-interior pair equivalence"),
    Edge("1", "6", frozenset({"convex"}), "continuity implies the quasi-interior condition"),
)

_EDGES = {
    FAMILY_PHI: _BASE_EDGES,
    FAMILY_FENCHEL: _BASE_EDGES
    + (
        Edge("5", "8", frozenset({"frechet", "lsc", "convex"}), "interior-point conditions force closedness"),
        Edge("1", "8", frozenset({"lsc", "convex"}), "continuity forces closedness"),
        Edge("6'", "6", frozenset({"convex"}), "the primed condition is stronger"),
        Edge("6", "8", frozenset({"finite_dim", "lsc", "convex"}), "finite-dimensional collapse"),
    ),
    FAMILY_LAGRANGE: _BASE_EDGES
    + (
        Edge("5", "8", frozenset({"frechet", "lsc", "convex"}), "interior-point conditions force closedness"),
        Edge("1", "8", frozenset({"lsc", "convex"}), "continuity forces closedness"),
        Edge("6'", "6", frozenset({"convex"}), "the primed condition is stronger"),
    ),
}

_SUFFICIENCY_HYPS = {
    "1": frozenset({"convex"}),
    "2": frozenset({"frechet", "lsc", "convex"}),
    "3": frozenset({"frechet", "lsc", "convex"}),
    "4": frozenset({"frechet", "lsc", "convex"}),
    "5": frozenset({"frechet", "lsc", "convex"}),
    "6'": frozenset({"convex"}),
    "6": frozenset({"convex"}),
    "7": frozenset({"convex"}),
    "8": frozenset({"lsc", "convex"}),
}


# -- context -----------------------------------------------------------------------


class DiagnosisContext:
    def __init__(self, instance: eng.Instance):
        self.instance = instance
        if isinstance(instance, eng.FenchelInstance):
            self.family = FAMILY_FENCHEL
        elif isinstance(instance, eng.LagrangeInstance):
            self.family = FAMILY_LAGRANGE
        else:
            self.family = FAMILY_PHI
        self.numeric = eng.is_numeric(instance)
        self.values = eng.value_report(instance)
        self.view = eng.to_perturbation(instance)
        self.engine = self._build_engine()
        self._check_precondition()

    # the paper's standing assumption: the primal problem is feasible
    def _check_precondition(self):
        if self.values.vp is not None and self.values.vp == PINF:
            raise MalformedInputError(
                "the primal problem is infeasible; the pair violates the standing "
                "nonempty-domain assumption"
            )

    def _domains(self):
        instance = self.instance
        if isinstance(instance, eng.FenchelInstance):
            dom_f = fx.domain(instance.f, instance.space)
            dom_g = fx.domain(instance.g, instance.yspace)
            return dom_f, dom_g
        return None, None

    def _build_engine(self) -> Engine:
        facts = []
        instance = self.instance
        specs = getattr(instance, "fact_specs", ())
        for spec in specs:
            target = self._resolve_ref(spec.ref)
            if target is None:
                continue
            facts.append(
                DeclaredFact(spec.notion, spec.point, target, spec.status, spec.cite)
            )
        if (
            self.view.epi_pr is not None
            and self.view.vp is not None
            and self.view.vp.is_finite()
            and self.view.vp_attained
        ):
            facts.append(
                DeclaredFact(
                    None,
                    ORIGIN,
                    self.view.epi_pr,
                    HOLDS,
                    ("", "the primal optimum is attained, so the origin pair lies in the set"),
                )
            )
        return Engine(facts)

    def _resolve_ref(self, ref):
        if isinstance(ref, str):
            if ref in ("epidiff", "conic"):
                return self.view.epi_pr
            if ref == "prdom":
                return self.view.pr_dom
            if ref == "domf":
                dom_f, _ = self._domains()
                return dom_f
            if ref == "domg":
                _, dom_g = self._domains()
                return dom_g
            return None
        return ref

    # -- ambient hypothesis predicates --------------------------------------

    def hyp(self, name: str) -> FactStatus:
        instance = self.instance
        if name == "frechet":
            if isinstance(instance, eng.FenchelInstance):
                ok = instance.space.frechet and instance.yspace.frechet
            elif isinstance(instance, eng.LagrangeInstance):
                ok = instance.xspace.frechet and instance.zspace.frechet
            else:
                ok = True
            return HOLDS if ok else FAILS
        if name == "finite_dim":
            return HOLDS if self.numeric else FAILS
        if name == "lsc":
            return self.lsc_package()
        if name == "convex":
            return self.convexity()
        raise KeyError(name)

    def hyps_ok(self, hyps) -> bool:
        return all(self.hyp(h) is HOLDS for h in hyps)

    def lsc_package(self) -> FactStatus:
        instance = self.instance
        if self.numeric:
            return HOLDS
        if isinstance(instance, eng.FenchelInstance):
            return and3(self._flag_or("lsc_f", fx.is_lsc(instance.f)),
                        self._flag_or("lsc_g", fx.is_lsc(instance.g)))
        if isinstance(instance, eng.LagrangeInstance):
            return and3(
                self._flag_or("s_closed", se.attrs(normalize(instance.sset)).closed),
                self._flag_or("lsc_f", fx.is_lsc(instance.f)),
                self._g_epiclosed(),
            )
        return self._flag_or("lsc_phi", fx.is_lsc(instance.phi))

    def _g_epiclosed(self) -> FactStatus:
        instance = self.instance
        declared = instance.flag("g_epiclosed")
        if declared is not None:
            return HOLDS if declared else FAILS
        if isinstance(instance.gmap, (eng.AffineMap, eng.IdentityMap, eng.NegIdentityMap, eng.ShiftMap)):
            return HOLDS  # continuous affine maps have closed epigraphs
        return UNKNOWN

    def convexity(self) -> FactStatus:
        instance = self.instance
        declared = instance.flag("convex")
        if declared is not None:
            return HOLDS if declared else FAILS
        if isinstance(instance, eng.FenchelInstance):
            return and3(fx.is_convex(instance.f), fx.is_convex(instance.g))
        if isinstance(instance, eng.LagrangeInstance):
            linear_map = isinstance(
                instance.gmap, (eng.AffineMap, eng.IdentityMap, eng.NegIdentityMap, eng.ShiftMap)
            )
            return and3(
                fx.is_convex(instance.f),
                se.attrs(normalize(instance.sset)).convex,
                HOLDS if linear_map else UNKNOWN,
            )
        return fx.is_convex(instance.phi)

    def _flag_or(self, name: str, fallback: FactStatus) -> FactStatus:
        declared = self.instance.flag(name)
        if declared is not None:
            return HOLDS if declared else FAILS
        return fallback


# -- clause evaluators ----------------------------------------------------------------


def _fact_clause(text: str, fact: inf.Fact) -> Clause:
    return Clause(text, fact.status, fact.prov)


def _status_clause(text: str, status: FactStatus, detail: str = "", cites=()) -> Clause:
    prov = (Step("clause", detail or text, tuple(cites)),) if detail or cites else ()
    return Clause(text, status, prov)


def _frechet_clause(ctx: DiagnosisContext) -> Clause:
    return _status_clause(
        "the underlying spaces are Frechet",
        ctx.hyp("frechet"),
        "space tags",
    )


def _lsc_clauses(ctx: DiagnosisContext) -> list[Clause]:
    instance = ctx.instance
    if isinstance(instance, eng.FenchelInstance):
        return [
            _status_clause("f is lower semicontinuous", ctx._flag_or("lsc_f", HOLDS if ctx.numeric else fx.is_lsc(instance.f))),
            _status_clause("g is lower semicontinuous", ctx._flag_or("lsc_g", HOLDS if ctx.numeric else fx.is_lsc(instance.g))),
        ]
    if isinstance(instance, eng.LagrangeInstance):
        return [
            _status_clause("S is closed", ctx._flag_or("s_closed", HOLDS if ctx.numeric else se.attrs(normalize(instance.sset)).closed)),
            _status_clause("f is lower semicontinuous", ctx._flag_or("lsc_f", HOLDS if ctx.numeric else fx.is_lsc(instance.f))),
            _status_clause("the constraint map has a closed ordering epigraph", HOLDS if ctx.numeric else ctx._g_epiclosed()),
        ]
    return [_status_clause("the perturbation function is lower semicontinuous", HOLDS if ctx.numeric else fx.is_lsc(instance.phi))]


def _pr_notion_clause(ctx: DiagnosisContext, notion: Notion, text: str) -> Clause:
    fact = ctx.engine.infer(notion, ORIGIN, ctx.view.pr_dom)
    return _fact_clause(text, fact)


def _aff_closed_clause(ctx: DiagnosisContext) -> Clause:
    text = "the affine hull of the projected domain is a closed subspace"
    if ctx.numeric:
        return _status_clause(text, HOLDS, "finite-dimensional affine hulls are closed")
    a = se.attrs(normalize(ctx.view.pr_dom))
    if a.aff_whole is HOLDS:
        return _status_clause(text, HOLDS, "the affine hull is the whole space")
    if a.subspace is HOLDS and a.contains_origin is HOLDS:
        if a.closed is HOLDS:
            return _status_clause(text, HOLDS, "the set is a closed subspace, its own affine hull")
        if a.closed is FAILS:
            return _status_clause(text, FAILS, "the set is a non-closed subspace, its own affine hull")
    return _status_clause(text, UNKNOWN, "no affine-hull rule applies")


def _exclusion_clause(ctx: DiagnosisContext) -> Clause:
    text = "the origin pair avoids the quasi-relative interior of the shifted epigraph projection"
    if ctx.view.epi_pr is None:
        return _status_clause(text, UNKNOWN, "no finite primal value to shift by")
    hull = se.ConvexHullWithOrigin(ctx.view.epi_pr)
    fact = ctx.engine.infer(Notion.QRI, ORIGIN, hull)
    return Clause(text, not3(fact.status), fact.prov)


def _diff_of_pr(ctx: DiagnosisContext) -> se.SetExpr:
    d = ctx.view.pr_dom
    return normalize(se.MinkSum((d, se.Neg(d))))


def _continuity_clause(ctx: DiagnosisContext) -> Clause:
    text = "some common domain point where one summand is continuous"
    instance = ctx.instance
    if ctx.family == FAMILY_FENCHEL:
        if ctx.numeric:
            pf_f, pf_g = eng._fenchel_polyfuncs(instance)
            dom_f, dom_g = fx.pf_domain(pf_f), fx.pf_domain(pf_g)
            amap = eng._amap_rows(instance)
            if amap is None:
                hit = pg.strictly_feasible_point(dom_f, dom_g) or pg.strictly_feasible_point(
                    dom_g, dom_f
                )
            else:
                # continuity of g at Ax' (or of f at x') over the coupled domain
                n = instance.space.dim
                pre_g = _preimage(dom_g, amap, n)
                hit = pg.strictly_feasible_point(dom_f, pre_g) or pg.strictly_feasible_point(
                    pre_g, dom_f
                )
            return _status_clause(
                text,
                HOLDS if hit is not None else FAILS,
                "strict-feasibility LP over the joint domain",
            )
        dom_f, dom_g = ctx._domains()
        if fx.continuous_everywhere(instance.f) is HOLDS or fx.continuous_everywhere(instance.g) is HOLDS:
            return _status_clause(text, HOLDS, "one summand is finite and continuous everywhere")
        f_thin = inf.interior_is_empty(dom_f)
        g_thin = inf.interior_is_empty(dom_g)
        if f_thin is HOLDS and g_thin is HOLDS:
            return _status_clause(
                text, FAILS, "both domains have empty interior, so neither summand is continuous anywhere"
            )
        return _status_clause(text, UNKNOWN, "continuity undecided")
    if ctx.family == FAMILY_LAGRANGE:
        return _slater_clause(ctx)
    # perturbation family: continuity of Phi(x', .) at 0
    instance = ctx.instance
    pf = fx.lower(instance.phi, instance.nx + instance.ny)
    dom = fx.pf_domain(pf)
    hit = _slice_interior_point(dom, instance.nx, instance.ny)
    return _status_clause(
        "some x' with the slice y -> Phi(x', y) continuous at 0",
        HOLDS if hit else FAILS,
        "box-vertex LP over the domain slices",
    )


def _preimage(p: pg.Polyhedron, amap, n: int) -> pg.Polyhedron:
    rows = []
    eqs = []
    m = len(amap)
    for a, b in p.ineqs:
        coeff = [Fraction(0)] * n
        for i in range(m):
            for j in range(n):
                coeff[j] += a[i] * amap[i][j]
        rows.append((tuple(coeff), b))
    for e, d in p.eqs:
        coeff = [Fraction(0)] * n
        for i in range(m):
            for j in range(n):
                coeff[j] += e[i] * amap[i][j]
        eqs.append((tuple(coeff), d))
    return pg.poly(n, rows, eqs)


def _slice_interior_point(dom: pg.Polyhedron, nx: int, ny: int) -> bool:
    """Is there x' with (x', y) in dom for all y in a small box around 0?"""
    from itertools import product as iproduct

    from .exactlp import LE, LinearProgram, Optimal, Row, solve_lp

    rows = []
    for signs in iproduct((Fraction(1), Fraction(-1)), repeat=ny):
        for a, b in dom.ineqs:
            drift = sum(a[nx + j] * signs[j] for j in range(ny))
            rows.append(Row(a[:nx] + (drift,), LE, b))
    for e, d in dom.eqs:
        if any(e[nx + j] != 0 for j in range(ny)):
            return False  # an equality in y kills the slice interior
        rows.append(Row(e[:nx] + (Fraction(0),), "=", d))
    t_up = tuple(Fraction(0) for _ in range(nx)) + (Fraction(1),)
    rows.append(Row(t_up, LE, Fraction(1)))
    out = solve_lp(LinearProgram(nx + 1, t_up, "max", tuple(rows)))
    return isinstance(out, Optimal) and out.value > 0


def _slater_clause(ctx: DiagnosisContext) -> Clause:
    text = "a feasible point maps into the negative interior of the ordering cone"
    instance = ctx.instance
    if ctx.numeric:
        pf_f, s_poly, c_poly, gmap = eng._lagrange_ground(instance)
        if c_poly.eqs:
            return _status_clause(text, FAILS, "the cone carries equalities, so its interior is empty")
        ground = pg.intersect(fx.pf_domain(pf_f), s_poly)
        nx = s_poly.n
        strict_rows = []
        for a, b in c_poly.ineqs:
            coeff = [Fraction(0)] * nx
            rhs = b
            for i, ai in enumerate(a):
                for j in range(nx):
                    coeff[j] += -ai * gmap.rows[i][j]
                rhs += ai * gmap.shift[i]
            strict_rows.append((tuple(coeff), rhs))
        strict = pg.Polyhedron(nx, tuple(strict_rows), ())
        hit = pg.strictly_feasible_point(strict, ground)
        return _status_clause(text, HOLDS if hit is not None else FAILS, "strict-feasibility LP")
    cone = normalize(instance.cone)
    if inf.interior_is_empty(cone) is HOLDS:
        return _status_clause(text, FAILS, "the ordering cone has empty interior")
    return _status_clause(text, UNKNOWN, "cone interior undecided")


def _slater_qri_clause(ctx: DiagnosisContext) -> Clause:
    text = "a feasible point maps into minus the quasi-relative interior of the cone"
    instance = ctx.instance
    declared = instance.slater_qri_fact
    if declared is not None:
        return _status_clause(text, declared.status, declared.note or "declared certificate", (declared.cite,))
    cone = normalize(instance.cone)
    if ctx.numeric:
        pf_f, s_poly, c_poly, gmap = eng._lagrange_ground(instance)
        ground = pg.intersect(fx.pf_domain(pf_f), s_poly)
        nx = s_poly.n
        imp = set(pg.implicit_rows(c_poly)) if not pg.is_empty(c_poly) else set()
        strict_rows = []
        weak_rows = list(ground.ineqs)
        weak_eqs = list(ground.eqs)
        for idx, (a, b) in enumerate(c_poly.ineqs):
            coeff = [Fraction(0)] * nx
            rhs = b
            for i, ai in enumerate(a):
                for j in range(nx):
                    coeff[j] += -ai * gmap.rows[i][j]
                rhs += ai * gmap.shift[i]
            if idx in imp:
                weak_eqs.append((tuple(coeff), rhs))
            else:
                strict_rows.append((tuple(coeff), rhs))
        for e, d in c_poly.eqs:
            coeff = [Fraction(0)] * nx
            rhs = d
            for i, ei in enumerate(e):
                for j in range(nx):
                    coeff[j] += -ei * gmap.rows[i][j]
                rhs += ei * gmap.shift[i]
            weak_eqs.append((tuple(coeff), rhs))
        strict = pg.Polyhedron(nx, tuple(strict_rows), ())
        weak = pg.Polyhedron(nx, tuple(weak_rows), tuple(weak_eqs))
        hit = pg.strictly_feasible_point(strict, weak)
        return _status_clause(text, HOLDS if hit is not None else FAILS, "relative-interior LP on the cone rows")
    flat = cone
    while isinstance(flat, (se.Neg, se.Translate, se.Scale)):
        flat = flat.inner
    if isinstance(flat, se.CatalogAtom):
        desc = se.catalog_notion_set(flat.cid, "qri", flat.params)
        if desc == se.EMPTY_SET:
            cite = se.catalog_cite(flat.cid) or ("", "")
            return _status_clause(text, FAILS, "the cone's quasi-relative interior is empty", (cite,))
    if isinstance(cone, se.Singleton) and se.is_origin(cone.point):
        dom_f = fx.domain(instance.f, instance.xspace)
        ground = normalize(se.Intersect(dom_f, instance.sset))
        image = normalize(se.ImageSet(instance.gmap, ground, instance.zspace))
        fact = ctx.engine.member(ORIGIN, image)
        return Clause(text, fact.status, fact.prov + (Step("zero-cone", "qri({0}) = {0}: the map must hit zero"),))
    return _status_clause(text, UNKNOWN, "no rule for this cone")


def _cl_cc_clause(ctx: DiagnosisContext) -> Clause:
    text = "the cone spans a dense subspace: cl(C - C) is the whole space"
    instance = ctx.instance
    diff = normalize(se.MinkSum((instance.cone, se.Neg(instance.cone))))
    fact = ctx.engine.infer(Notion.QI, ORIGIN, diff)
    return Clause(text, fact.status, fact.prov)


def _meets_qri_clause(ctx: DiagnosisContext) -> Clause:
    text = "dom f meets the quasi-relative interior of dom g"
    instance = ctx.instance
    declared = instance.meets_qri_fact
    if declared is not None:
        return _status_clause(text, declared.status, declared.note or "declared certificate", (declared.cite,))
    dom_f, dom_g = ctx._domains()
    n = instance.space.dim if ctx.numeric else None
    fact = inf.meets_qri(ctx.engine, dom_f, dom_g, n)
    return Clause(text, fact.status, fact.prov)


def _qi_domg_diff_clause(ctx: DiagnosisContext) -> Clause:
    text = "the origin is quasi-interior to dom g - dom g"
    _, dom_g = ctx._domains()
    diff = normalize(se.MinkSum((dom_g, se.Neg(dom_g))))
    fact = ctx.engine.infer(Notion.QI, ORIGIN, diff)
    return Clause(text, fact.status, fact.prov)


def check_rc8(instance: eng.Instance, ctx: Optional[DiagnosisContext] = None) -> ConditionVerdict:
    """Closedness of the conjugate-epigraph sum."""
    if isinstance(instance, eng.PerturbationInstance):
        raise ApplicabilityError("no closedness condition for the perturbation family")
    ctx = ctx or DiagnosisContext(instance)
    cid = ConditionId(ctx.family, "8")
    clauses = _lsc_clauses(ctx)
    text = "the conjugate-epigraph sum is weak*-closed"
    declared = getattr(instance, "rc8_fact", None)
    if ctx.numeric:
        clauses.append(
            _status_clause(text, HOLDS, "sums of polyhedral epigraphs are polyhedral, hence closed")
        )
        return ConditionVerdict(cid, tuple(clauses))
    if declared is not None:
        clauses.append(
            _status_clause(text, declared.status, declared.note or "declared certificate", (declared.cite,))
        )
        return ConditionVerdict(cid, tuple(clauses))
    if ctx.family == FAMILY_FENCHEL and isinstance(instance.f, fx.IndicatorOf) and isinstance(
        instance.g, fx.IndicatorOf
    ):
        cf = fx.conjugate(instance.f)
        cg = fx.conjugate(instance.g)
        if isinstance(cf, fx.IndicatorOf) and isinstance(cg, fx.IndicatorOf):
            total = normalize(se.MinkSum((cf.set_, cg.set_)))
            closed = se.attrs(total).closed
            if closed is not UNKNOWN:
                clauses.append(
                    _status_clause(
                        text,
                        closed,
                        "the sum of the conjugate indicator domains decides closedness",
                    )
                )
                return ConditionVerdict(cid, tuple(clauses))
    clauses.append(_status_clause(text, UNKNOWN, "no certificate"))
    return ConditionVerdict(cid, tuple(clauses))


def evaluate_condition(
    cid_or_index, instance: eng.Instance, ctx: Optional[DiagnosisContext] = None
) -> ConditionVerdict:
    ctx = ctx or DiagnosisContext(instance)
    index = cid_or_index.index if isinstance(cid_or_index, ConditionId) else str(cid_or_index)
    cid = ConditionId(ctx.family, index)
    if index == "1":
        return ConditionVerdict(cid, (_continuity_clause(ctx),))
    if index in ("2", "3", "4", "5"):
        clauses = [_frechet_clause(ctx)] + _lsc_clauses(ctx)
        if index == "2":
            clauses.append(_pr_notion_clause(ctx, Notion.INT, "the origin is interior to the projected domain"))
        elif index == "3":
            clauses.append(_pr_notion_clause(ctx, Notion.CORE, "the origin is in the core of the projected domain"))
        elif index == "4":
            clauses.append(_aff_closed_clause(ctx))
            clauses.append(_pr_notion_clause(ctx, Notion.ICR, "the origin is in the intrinsic core of the projected domain"))
        else:
            clauses.append(_pr_notion_clause(ctx, Notion.SQRI, "the origin is in the strong quasi-relative interior of the projected domain"))
        return ConditionVerdict(cid, tuple(clauses))
    if index == "6'":
        if ctx.family == FAMILY_FENCHEL:
            clauses = [
                _meets_qri_clause(ctx),
                _qi_domg_diff_clause(ctx),
                _exclusion_clause(ctx),
            ]
        elif ctx.family == FAMILY_LAGRANGE:
            clauses = [
                _slater_qri_clause(ctx),
                _cl_cc_clause(ctx),
                _exclusion_clause(ctx),
            ]
        else:
            raise ApplicabilityError("no primed condition for the perturbation family")
        return ConditionVerdict(cid, tuple(clauses))
    if index == "6":
        clauses = [
            _pr_notion_clause(ctx, Notion.QI, "the origin is quasi-interior to the projected domain"),
            _exclusion_clause(ctx),
        ]
        return ConditionVerdict(cid, tuple(clauses))
    if index == "7":
        d = ctx.view.pr_dom
        diff = _diff_of_pr(ctx)
        qi_diff = ctx.engine.infer(Notion.QI, ORIGIN, diff)
        clauses = [
            Clause("the origin is quasi-interior to the difference of the projected domain with itself", qi_diff.status, qi_diff.prov),
            _pr_notion_clause(ctx, Notion.QRI, "the origin is in the quasi-relative interior of the projected domain"),
            _exclusion_clause(ctx),
        ]
        return ConditionVerdict(cid, tuple(clauses))
    if index == "8":
        return check_rc8(instance, ctx)
    raise ApplicabilityError(f"unknown condition index {index!r}")


# -- diagnosis ------------------------------------------------------------------------


@dataclass(frozen=True)
class Diagnosis:
    instance_id: str
    family: str
    verdicts: tuple[tuple[str, ConditionVerdict], ...]
    values: eng.ValueReport
    strong_duality: tuple[str, str]  # (kind, detail)
    consistency: tuple[bool, tuple[str, ...]]
    reverse_check: Optional[tuple[bool, str]] = None

    def verdict(self, index: str) -> ConditionVerdict:
        for idx, v in self.verdicts:
            if idx == index:
                return v
        raise KeyError(index)


def _gap_detected(values: eng.ValueReport) -> bool:
    if values.vp is None or values.vd is None:
        return False
    return er_lt(values.vd, values.vp)


def diagnose(instance: eng.Instance) -> Diagnosis:
    ctx = DiagnosisContext(instance)
    verdicts: dict[str, ConditionVerdict] = {}
    for index in family_indices(ctx.family):
        verdicts[index] = evaluate_condition(index, instance, ctx)
    _close_under_implications(ctx, verdicts)
    strong = _strong_duality_verdict(ctx, verdicts)
    reverse = _reverse_check(ctx)
    ok, violations = _consistency(ctx, verdicts, strong)
    return Diagnosis(
        instance_id=getattr(instance, "instance_id", ""),
        family=ctx.family,
        verdicts=tuple((i, verdicts[i]) for i in family_indices(ctx.family)),
        values=ctx.values,
        strong_duality=strong,
        consistency=(ok, tuple(violations)),
        reverse_check=reverse,
    )


def _close_under_implications(ctx: DiagnosisContext, verdicts: dict):
    edges = [e for e in _EDGES[ctx.family] if ctx.hyps_ok(e.hyps)]
    gap = _gap_detected(ctx.values)
    changed = True
    while changed:
        changed = False
        for e in edges:
            src, dst = verdicts.get(e.src), verdicts.get(e.dst)
            if src is None or dst is None:
                continue
            if src.status is HOLDS and dst.status is UNKNOWN:
                verdicts[e.dst] = _implied_holds(dst, e)
                changed = True
            elif dst.status is FAILS and src.status is UNKNOWN:
                verdicts[e.src] = _implied_fails(src, e)
                changed = True
        if gap:
            for index, v in list(verdicts.items()):
                if v.status is UNKNOWN and ctx.hyps_ok(_SUFFICIENCY_HYPS[index]):
                    verdicts[index] = _refuted_by_gap(v)
                    changed = True


def _implied_holds(v: ConditionVerdict, e: Edge) -> ConditionVerdict:
    step = Step("implication", f"implied by RC{e.src} ({e.cite})")
    new_clauses = tuple(
        Clause(c.text, HOLDS, c.prov + (step,)) if c.status is not HOLDS else c
        for c in v.clauses
    )
    return ConditionVerdict(v.cid, new_clauses)


def _implied_fails(v: ConditionVerdict, e: Edge) -> ConditionVerdict:
    step = Step("contrapositive", f"RC{e.src} implies RC{e.dst}, and RC{e.dst} fails ({e.cite})")
    derived = Clause("derived refutation along the implication graph", FAILS, (step,))
    return ConditionVerdict(v.cid, v.clauses + (derived,))


def _refuted_by_gap(v: ConditionVerdict) -> ConditionVerdict:
    step = Step(
        "weak-duality-contrapositive",
        "a duality gap is certified, so no sufficient condition can hold",
    )
    derived = Clause("derived refutation from the certified gap", FAILS, (step,))
    return ConditionVerdict(v.cid, v.clauses + (derived,))


def _strong_duality_verdict(ctx: DiagnosisContext, verdicts: dict) -> tuple[str, str]:
    values = ctx.values
    if _gap_detected(values):
        return ("gap-detected", f"vP = {values.vp}, vD = {values.vd}")
    for index in family_indices(ctx.family):
        v = verdicts.get(index)
        if v is not None and v.status is HOLDS and ctx.hyps_ok(_SUFFICIENCY_HYPS[index]):
            return ("guaranteed-by", f"RC{index}")
    if values.vp is not None and values.vp == MINF:
        return ("verified-numerically", "the primal value is -inf; weak duality forces equality")
    if (
        values.vp is not None
        and values.vd is not None
        and values.vp == values.vd
        and values.vd_attained
    ):
        return ("verified-numerically", "equal exact values with dual attainment")
    return ("undecided", "no sufficient condition established and values incomplete")


def _reverse_check(ctx: DiagnosisContext) -> Optional[tuple[bool, str]]:
    """With certified strong duality and dual attainment the origin pair
    cannot be quasi-interior to the hull of the shifted epigraph projection."""
    values = ctx.values
    if not ctx.numeric or values.vp is None or not values.vp.is_finite():
        return None
    if values.vd != values.vp or not values.vd_attained:
        return None
    if ctx.view.epi_pr_poly is None:
        return None
    inside = pg.zero_in(Notion.QI, ctx.view.epi_pr_poly)
    if inside:
        return (False, "strong duality holds yet the origin pair is quasi-interior to the projection")
    return (True, "the origin pair avoids the quasi-interior, as strong duality demands")


def consistency_check(d: Diagnosis) -> tuple[bool, tuple[str, ...]]:
    """Re-check a finished diagnosis against the implication graph."""
    verdicts = dict(d.verdicts)
    violations = []
    for e in _EDGES[d.family]:
        src, dst = verdicts.get(e.src), verdicts.get(e.dst)
        if src is None or dst is None:
            continue
        if src.status is HOLDS and dst.status is FAILS:
            violations.append(f"RC{e.src} holds but RC{e.dst} fails ({e.cite})")
    if d.strong_duality[0] == "gap-detected":
        for index, v in verdicts.items():
            if v.status is HOLDS:
                violations.append(f"gap detected while RC{index} holds")
    return (not violations, tuple(violations))


def _consistency(ctx: DiagnosisContext, verdicts: dict, strong) -> tuple[bool, list]:
    violations = []
    for e in _EDGES[ctx.family]:
        if not ctx.hyps_ok(e.hyps):
            continue
        src, dst = verdicts.get(e.src), verdicts.get(e.dst)
        if src is None or dst is None:
            continue
        if src.status is HOLDS and dst.status is FAILS:
            violations.append(f"RC{e.src} holds but RC{e.dst} fails ({e.cite})")
    if strong[0] == "gap-detected":
        for index, v in verdicts.items():
            if v.status is HOLDS and ctx.hyps_ok(_SUFFICIENCY_HYPS[index]):
                violations.append(f"gap detected while RC{index} holds")
    return (not violations, violations)
