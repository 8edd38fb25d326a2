"""Convex function expression trees and Fenchel conjugation.

Functions are immutable trees.  In the numeric regime every tree lowers
to an exact H-representation of its epigraph (``PolyFunc``), values are
computed by interval arithmetic on the fibers, and the conjugate is the
projection of the LP-dual multiplier system of the epigraph, so f* is
again a PolyFunc.  In the symbolic regime conjugation is a rule table
(indicators of subspaces and cones, norms, tilts, translations) and
values are decided structurally or not at all.

Extended-real arithmetic uses the convex-analysis conventions
(+inf) + (-inf) = +inf and 0 * (+inf) = +inf, 0 * (-inf) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import polyhedra as pg
from . import setexpr as se
from .errors import (
    ImproperFunctionError,
    RegimeError,
    UndecidableValueError,
)
from .exactlp import EQ, LE, LinearProgram, Optimal, Row, Unbounded, dot, solve_lp
from .setexpr import (
    FAILS,
    HOLDS,
    UNKNOWN,
    FactStatus,
    Point,
    SetExpr,
    and3,
    attrs,
    normalize,
)
from .spaces import SpaceTag, banach

ZERO = Fraction(0)
ONE = Fraction(1)


# -- extended reals -----------------------------------------------------------


@dataclass(frozen=True)
class ExtReal:
    kind: str  # "num" | "pinf" | "minf"
    value: Fraction = ZERO

    def is_finite(self) -> bool:
        return self.kind == "num"

    def __repr__(self):
        if self.kind == "pinf":
            return "+inf"
        if self.kind == "minf":
            return "-inf"
        from .exactlp import rat_str

        return rat_str(self.value)


PINF = ExtReal("pinf")
MINF = ExtReal("minf")


def er(x) -> ExtReal:
    if isinstance(x, ExtReal):
        return x
    return ExtReal("num", Fraction(x))


def er_add(a: ExtReal, b: ExtReal) -> ExtReal:
    if a.kind == "pinf" or b.kind == "pinf":
        return PINF  # includes (+inf) + (-inf) = +inf
    if a.kind == "minf" or b.kind == "minf":
        return MINF
    return ExtReal("num", a.value + b.value)


def er_neg(a: ExtReal) -> ExtReal:
    if a.kind == "pinf":
        return MINF
    if a.kind == "minf":
        return PINF
    return ExtReal("num", -a.value)


def er_sub(a: ExtReal, b: ExtReal) -> ExtReal:
    return er_add(a, er_neg(b))


def er_scale(lam: Fraction, a: ExtReal) -> ExtReal:
    if lam == 0:
        return PINF if a.kind == "pinf" else ExtReal("num", ZERO)
    if a.kind == "num":
        return ExtReal("num", lam * a.value)
    if lam > 0:
        return a
    return er_neg(a)


def er_le(a: ExtReal, b: ExtReal) -> bool:
    order = {"minf": 0, "num": 1, "pinf": 2}
    if a.kind == "num" and b.kind == "num":
        return a.value <= b.value
    return order[a.kind] <= order[b.kind]


def er_lt(a: ExtReal, b: ExtReal) -> bool:
    return er_le(a, b) and a != b


# -- function expressions -----------------------------------------------------


@dataclass(frozen=True)
class SymVec:
    """Named vector of an infinite-dimensional space; attrs are predicates
    such as 'nonneg', 'coordinate', 'continuous'."""

    name: str
    attrs: frozenset[str] = frozenset()

    def __repr__(self):
        return self.name


VecOrSym = Union[tuple, SymVec]


@dataclass(frozen=True)
class Affine:
    c: VecOrSym
    alpha: Fraction = ZERO


@dataclass(frozen=True)
class IndicatorOf:
    set_: SetExpr


@dataclass(frozen=True)
class NormAtom:
    kind: str  # "l1" | "l2" | "linf"


@dataclass(frozen=True)
class SupOfAffine:
    pieces: tuple[tuple[tuple, Fraction], ...]


@dataclass(frozen=True)
class Sum:
    a: "FunctionExpr"
    b: "FunctionExpr"


@dataclass(frozen=True)
class InfConv:
    a: "FunctionExpr"
    b: "FunctionExpr"
    exact: bool = False
    exact_reason: str = ""


@dataclass(frozen=True)
class ArgTranslate:
    """x maps to f(x - shift)."""

    f: "FunctionExpr"
    shift: VecOrSym


@dataclass(frozen=True)
class PrecomposeLinear:
    matrix: tuple  # rows of the map, domain -> function space
    f: "FunctionExpr"


@dataclass(frozen=True)
class PlusConst:
    f: "FunctionExpr"
    const: Fraction


@dataclass(frozen=True)
class ConjugateOf:
    f: "FunctionExpr"


FunctionExpr = Union[
    Affine,
    IndicatorOf,
    NormAtom,
    SupOfAffine,
    Sum,
    InfConv,
    ArgTranslate,
    PrecomposeLinear,
    PlusConst,
    ConjugateOf,
]


@dataclass(frozen=True)
class EpiDiffData:
    f: FunctionExpr
    g: FunctionExpr
    v: Fraction
    realized: SetExpr


# -- attribute derivation -----------------------------------------------------


def is_convex(f: FunctionExpr) -> FactStatus:
    if isinstance(f, (Affine, NormAtom, SupOfAffine, ConjugateOf)):
        return HOLDS
    if isinstance(f, IndicatorOf):
        return attrs(normalize(f.set_)).convex
    if isinstance(f, (Sum, InfConv)):
        return and3(is_convex(f.a), is_convex(f.b))
    if isinstance(f, (ArgTranslate, PlusConst)):
        return is_convex(f.f)
    if isinstance(f, PrecomposeLinear):
        return is_convex(f.f)
    return UNKNOWN


def is_lsc(f: FunctionExpr) -> FactStatus:
    if isinstance(f, (Affine, NormAtom, SupOfAffine, ConjugateOf)):
        return HOLDS
    if isinstance(f, IndicatorOf):
        return attrs(normalize(f.set_)).closed
    if isinstance(f, Sum):
        return and3(is_lsc(f.a), is_lsc(f.b))
    if isinstance(f, (ArgTranslate, PlusConst)):
        return is_lsc(f.f)
    if isinstance(f, PrecomposeLinear):
        return is_lsc(f.f)
    return UNKNOWN


def continuous_everywhere(f: FunctionExpr) -> FactStatus:
    if isinstance(f, (NormAtom, SupOfAffine)):
        return HOLDS
    if isinstance(f, Affine):
        if isinstance(f.c, SymVec):
            return HOLDS if "continuous" in f.c.attrs else UNKNOWN
        return HOLDS
    if isinstance(f, IndicatorOf):
        w = attrs(normalize(f.set_)).whole
        if w is HOLDS:
            return HOLDS
        if w is FAILS:
            return FAILS
        return UNKNOWN
    if isinstance(f, Sum):
        return and3(continuous_everywhere(f.a), continuous_everywhere(f.b))
    if isinstance(f, (ArgTranslate, PlusConst)):
        return continuous_everywhere(f.f)
    return UNKNOWN


def domain(f: FunctionExpr, space: Optional[SpaceTag] = None) -> SetExpr:
    """Structural domain as a set expression."""
    if isinstance(f, (Affine, NormAtom, SupOfAffine)):
        if space is None:
            raise UndecidableValueError("full-domain atom needs a space tag")
        return se.WholeSpace(space)
    if isinstance(f, IndicatorOf):
        return normalize(f.set_)
    if isinstance(f, Sum):
        da = domain(f.a, space)
        db = domain(f.b, space)
        return normalize(se.Intersect(da, db))
    if isinstance(f, InfConv):
        return normalize(se.MinkSum((domain(f.a, space), domain(f.b, space))))
    if isinstance(f, ArgTranslate):
        base = domain(f.f, space)
        off = _as_point(f.shift)
        return normalize(se.Translate(base, off))
    if isinstance(f, PlusConst):
        return domain(f.f, space)
    if isinstance(f, ConjugateOf):
        simplified = conjugate(f.f)
        if not isinstance(simplified, ConjugateOf):
            return domain(simplified, space)
        raise UndecidableValueError("no structural domain rule for this conjugate")
    raise UndecidableValueError("no structural domain rule for this node")


def _as_point(v: VecOrSym) -> Point:
    if isinstance(v, SymVec):
        return se.SymPoint(v.name, v.attrs)
    return se.VecPoint(tuple(Fraction(x) for x in v))


# -- symbolic conjugation -----------------------------------------------------


def _annihilator(s: SetExpr) -> Optional[SetExpr]:
    if isinstance(s, se.CatalogAtom):
        table = {
            se.SUBSPACE_C: se.SUBSPACE_C_PERP,
            se.SUBSPACE_S: se.SUBSPACE_S_PERP,
            se.KERNEL: se.FUNCTIONAL_LINE,
        }
        if s.cid in table:
            return se.CatalogAtom(table[s.cid], s.space_tag, s.params)
        if s.cid == se.CLOSED_SUBSPACE and s.param("whole", False):
            return se.Singleton(se.ORIGIN, s.space_tag)
    if isinstance(s, se.WholeSpace):
        return se.Singleton(se.ORIGIN, s.space_tag)
    return None


def _polar(s: SetExpr) -> Optional[SetExpr]:
    if isinstance(s, se.CatalogAtom) and s.cid in (se.LP_PLUS, se.LP_PLUS_UNC):
        return se.Neg(s)
    if isinstance(s, se.Neg):
        inner = _polar(s.inner)
        if inner is not None:
            return normalize(se.Neg(inner))
    if attrs(s).subspace is HOLDS:
        return _annihilator(s)
    return None


def conjugate(f: FunctionExpr) -> FunctionExpr:
    """Rule-table Fenchel conjugate.

    Falls back to an unevaluated ConjugateOf node when no rule applies;
    the numeric backend can still evaluate such nodes through the
    epigraph machinery.
    """
    if is_proper(f) is FAILS:
        raise ImproperFunctionError("conjugate of an improper function")

    if isinstance(f, Affine):
        if isinstance(f.c, SymVec):
            target: SetExpr = se.Singleton(se.SymPoint(f.c.name, f.c.attrs), _sym_space(f))
        else:
            target = se.PolyAtom(pg.singleton(f.c))
        out: FunctionExpr = IndicatorOf(target)
        return PlusConst(out, -f.alpha) if f.alpha != 0 else out

    if isinstance(f, NormAtom):
        if f.kind in ("l1", "linf"):
            return ConjugateOf(f)  # dual box; the numeric backend evaluates it
        return IndicatorOf(se.CatalogAtom(se.DUAL_BALL, banach("X*"), ()))

    if isinstance(f, IndicatorOf):
        s = normalize(f.set_)
        ann = _annihilator(s) if attrs(s).subspace is HOLDS else None
        if ann is not None:
            return IndicatorOf(normalize(ann))
        if attrs(s).cone is HOLDS:
            pol = _polar(s)
            if pol is not None:
                return IndicatorOf(normalize(pol))
        if isinstance(s, se.Singleton):
            if isinstance(s.point, se.VecPoint):
                return Affine(s.point.coords, ZERO)
            if isinstance(s.point, se._Origin):
                return Affine(SymVec("0", frozenset({"zero", "continuous"})), ZERO)
            if isinstance(s.point, se.SymPoint):
                return Affine(SymVec(s.point.name, s.point.attrs | {"continuous"}), ZERO)
        if isinstance(s, se.Translate):
            # delta_{U + a})* = delta_U* + <., a>
            inner_conj = conjugate(IndicatorOf(s.inner))
            shift_vec = _point_as_vec(s.offset)
            if shift_vec is not None:
                return Sum(inner_conj, Affine(shift_vec, ZERO))
        return ConjugateOf(f)

    if isinstance(f, Sum):
        for fn, other in ((f.a, f.b), (f.b, f.a)):
            if isinstance(fn, Affine):
                # tilt rule, exact unconditionally:
                # (g + <c,.> + alpha)*(y) = g*(y - c) - alpha
                inner = conjugate(other)
                shifted = ArgTranslate(inner, fn.c)
                shifted = _push_argtranslate(shifted)
                return PlusConst(shifted, -fn.alpha) if fn.alpha != 0 else shifted
        ca = conjugate(f.a)
        cb = conjugate(f.b)
        exact = continuous_everywhere(f.a) is HOLDS or continuous_everywhere(f.b) is HOLDS
        reason = "one summand is finite and continuous everywhere" if exact else ""
        if isinstance(ca, IndicatorOf) and isinstance(cb, IndicatorOf) and exact:
            # exact infimal convolution of indicators is the indicator of the sum
            return IndicatorOf(normalize(se.MinkSum((ca.set_, cb.set_))))
        return InfConv(ca, cb, exact=exact, exact_reason=reason)

    if isinstance(f, InfConv):
        return Sum(conjugate(f.a), conjugate(f.b))

    if isinstance(f, ArgTranslate):
        shift_vec = f.shift if not isinstance(f.shift, SymVec) else f.shift
        return Sum(conjugate(f.f), Affine(shift_vec, ZERO))

    if isinstance(f, PlusConst):
        return PlusConst(conjugate(f.f), -f.const)

    if isinstance(f, ConjugateOf):
        inner = f.f
        if (
            is_proper(inner) is not FAILS
            and is_convex(inner) is HOLDS
            and is_lsc(inner) is HOLDS
        ):
            return inner
        return ConjugateOf(f)

    return ConjugateOf(f)


def _sym_space(f: Affine) -> SpaceTag:
    # symbolic affine atoms keep no space of their own; the instance does
    return banach("X*")


def _point_as_vec(p: Point) -> Optional[VecOrSym]:
    if isinstance(p, se.VecPoint):
        return p.coords
    if isinstance(p, se.SymPoint):
        return SymVec(p.name, p.attrs)
    if isinstance(p, se.NegPoint):
        return SymVec(f"-{p.base.name}", p.base.attrs)
    return None


def _push_argtranslate(node: ArgTranslate) -> FunctionExpr:
    """delta_S(x - c) = delta_{S + c}(x); keeps indicator conjugates tidy."""
    if isinstance(node.f, IndicatorOf):
        off = _as_point(node.shift)
        return IndicatorOf(normalize(se.Translate(node.f.set_, off)))
    if isinstance(node.f, PlusConst):
        return PlusConst(_push_argtranslate(ArgTranslate(node.f.f, node.shift)), node.f.const)
    return node


def is_proper(f: FunctionExpr) -> FactStatus:
    if isinstance(f, (Affine, NormAtom, SupOfAffine)):
        return HOLDS
    if isinstance(f, IndicatorOf):
        ne = attrs(normalize(f.set_)).nonempty
        return ne
    if isinstance(f, Sum):
        # proper unless a domain is empty; conservative
        if is_proper(f.a) is FAILS or is_proper(f.b) is FAILS:
            return FAILS
        return UNKNOWN
    if isinstance(f, (ArgTranslate, PlusConst)):
        return is_proper(f.f)
    if isinstance(f, (InfConv, PrecomposeLinear, ConjugateOf)):
        return UNKNOWN
    return UNKNOWN


# -- numeric lowering ---------------------------------------------------------


@dataclass(frozen=True)
class PolyFunc:
    """Exact polyhedral function: H-representation of its epigraph over
    (x, t), with t the last coordinate."""

    n: int
    epi: pg.Polyhedron


def lower_set(s: SetExpr, n: int) -> pg.Polyhedron:
    s = normalize(s)
    if isinstance(s, se.PolyAtom):
        if s.poly.n != n:
            raise RegimeError("set dimension mismatch")
        return s.poly
    if isinstance(s, se.WholeSpace):
        return pg.whole_space(n)
    if isinstance(s, se.Singleton) and isinstance(s.point, se.VecPoint):
        return pg.singleton(s.point.coords)
    if isinstance(s, se.Neg):
        return pg.neg(lower_set(s.inner, n))
    if isinstance(s, se.Translate) and isinstance(s.offset, se.VecPoint):
        return pg.translate(lower_set(s.inner, n), s.offset.coords)
    if isinstance(s, se.Scale):
        return pg.scale(lower_set(s.inner, n), s.factor)
    if isinstance(s, se.MinkSum):
        polys = [lower_set(o, n) for o in s.operands]
        acc = polys[0]
        for q in polys[1:]:
            acc = pg.minkowski_sum(acc, q)
        return acc
    if isinstance(s, se.Intersect):
        return pg.intersect(lower_set(s.left, n), lower_set(s.right, n))
    if isinstance(s, se.Product):
        ln = s.left.space.dim
        rn = s.right.space.dim
        if ln is None or rn is None or ln + rn != n:
            raise RegimeError("product factors are not finite-dimensional")
        return pg.product(lower_set(s.left, ln), lower_set(s.right, rn))
    raise RegimeError(f"set has no finite-dimensional realization: {type(s).__name__}")


def lower(f: FunctionExpr, n: int) -> PolyFunc:
    """Epigraph H-representation of a polyhedral function expression."""
    if isinstance(f, Affine):
        if isinstance(f.c, SymVec):
            raise RegimeError("symbolic pairing in the numeric regime")
        c = tuple(Fraction(x) for x in f.c)
        row = (c + (Fraction(-1),), -f.alpha)
        return PolyFunc(n, pg.poly(n + 1, ineqs=[row]))
    if isinstance(f, IndicatorOf):
        dom = lower_set(f.set_, n)
        rows = [(a + (ZERO,), b) for a, b in dom.ineqs]
        rows.append((tuple(ZERO for _ in range(n)) + (-ONE,), ZERO))
        eqs = [(e + (ZERO,), d) for e, d in dom.eqs]
        return PolyFunc(n, pg.poly(n + 1, rows, eqs))
    if isinstance(f, NormAtom):
        if f.kind == "l1":
            rows = []
            for mask in range(2**n):
                sgn = tuple(ONE if (mask >> j) & 1 else -ONE for j in range(n))
                rows.append((sgn + (-ONE,), ZERO))
            return PolyFunc(n, pg.poly(n + 1, rows))
        if f.kind == "linf":
            rows = []
            for j in range(n):
                for s_ in (ONE, -ONE):
                    a = [ZERO] * n
                    a[j] = s_
                    rows.append((tuple(a) + (-ONE,), ZERO))
            return PolyFunc(n, pg.poly(n + 1, rows))
        raise RegimeError("the l2 norm lives in the symbolic regime only")
    if isinstance(f, SupOfAffine):
        rows = []
        for c, alpha in f.pieces:
            c = tuple(Fraction(x) for x in c)
            rows.append((c + (-ONE,), -Fraction(alpha)))
        return PolyFunc(n, pg.poly(n + 1, rows))
    if isinstance(f, Sum):
        fa = lower(f.a, n)
        fb = lower(f.b, n)
        # (x, t, u): (x, u) in epi a, (x, t - u) in epi b; drop u
        total = n + 2
        rows = []
        for a, b in fa.epi.ineqs:
            rows.append((a[:n] + (ZERO, a[n]), b))
        for a, b in fb.epi.ineqs:
            rows.append((a[:n] + (a[n], -a[n]), b))
        eqs = []
        for e, d in fa.epi.eqs:
            eqs.append((e[:n] + (ZERO, e[n]), d))
        for e, d in fb.epi.eqs:
            eqs.append((e[:n] + (e[n], -e[n]), d))
        big = pg.poly(total, rows, eqs)
        return PolyFunc(n, pg.project(big, range(n + 1)))
    if isinstance(f, InfConv):
        fa = lower(f.a, n)
        fb = lower(f.b, n)
        return PolyFunc(n, pg.minkowski_sum(fa.epi, fb.epi))
    if isinstance(f, ArgTranslate):
        if isinstance(f.shift, SymVec):
            raise RegimeError("symbolic shift in the numeric regime")
        base = lower(f.f, n)
        shift = tuple(Fraction(x) for x in f.shift) + (ZERO,)
        return PolyFunc(n, pg.translate(base.epi, shift))
    if isinstance(f, PlusConst):
        base = lower(f.f, n)
        shift = tuple(ZERO for _ in range(n)) + (Fraction(f.const),)
        return PolyFunc(n, pg.translate(base.epi, shift))
    if isinstance(f, PrecomposeLinear):
        m = len(f.matrix)  # map R^n -> R^m, inner function on R^m
        base = lower(f.f, m)
        rows = []
        for a, b in base.epi.ineqs:
            coeff = [ZERO] * n
            for i in range(m):
                for j in range(n):
                    coeff[j] += a[i] * Fraction(f.matrix[i][j])
            rows.append((tuple(coeff) + (a[m],), b))
        eqs = []
        for e, d in base.epi.eqs:
            coeff = [ZERO] * n
            for i in range(m):
                for j in range(n):
                    coeff[j] += e[i] * Fraction(f.matrix[i][j])
            eqs.append((tuple(coeff) + (e[m],), d))
        return PolyFunc(n, pg.poly(n + 1, rows, eqs))
    if isinstance(f, ConjugateOf):
        base = lower(f.f, n)
        return conjugate_polyfunc(base)
    raise RegimeError(f"no numeric lowering for {type(f).__name__}")


def pf_domain(pf: PolyFunc) -> pg.Polyhedron:
    return pg.project(pf.epi, range(pf.n))


def pf_value(pf: PolyFunc, x: Sequence) -> ExtReal:
    """f(x) as the bottom of the epigraph fiber over x."""
    x = tuple(Fraction(v) for v in x)
    n = pf.n
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None

    def tighten(lo, hi, ct, gap, eq=False):
        if ct == 0:
            ok = (gap == 0) if eq else (gap >= 0)
            return lo, hi, ok
        bound = gap / ct
        if eq:
            lo = bound if lo is None or bound > lo else lo
            hi = bound if hi is None or bound < hi else hi
        elif ct > 0:
            hi = bound if hi is None or bound < hi else hi
        else:
            lo = bound if lo is None or bound > lo else lo
        return lo, hi, True

    for a, b in pf.epi.ineqs:
        lo, hi, ok = tighten(lo, hi, a[n], b - dot(a[:n], x))
        if not ok:
            return PINF
    for e, d in pf.epi.eqs:
        lo, hi, ok = tighten(lo, hi, e[n], d - dot(e[:n], x), eq=True)
        if not ok:
            return PINF
    if lo is not None and hi is not None and lo > hi:
        return PINF
    if lo is None:
        return MINF
    return ExtReal("num", lo)


def pf_is_improper(pf: PolyFunc) -> bool:
    if pg.is_empty(pf.epi):
        return True  # identically +inf
    n = pf.n
    down = all(a[n] >= 0 for a, _ in pf.epi.ineqs) and all(e[n] == 0 for e, _ in pf.epi.eqs)
    return down  # (0,...,0,-1) is a recession direction: value -inf somewhere


def conjugate_polyfunc(pf: PolyFunc) -> PolyFunc:
    """H-representation of the conjugate's epigraph.

    s >= f*(y) iff the LP sup {<y,x> - t : (x,t) in epi f} is at most s;
    by LP duality that is the existence of multipliers lam >= 0, mu with
    lam^T G + mu^T E = (y, -1) and lam^T h + mu^T d <= s.  Projecting the
    multipliers out yields epi f* exactly.
    """
    if pf_is_improper(pf):
        raise ImproperFunctionError("conjugate of an improper polyhedral function")
    n = pf.n
    G = pf.epi.ineqs
    E = pf.epi.eqs
    k, l = len(G), len(E)
    total = n + 1 + k + l  # (y, s, lam, mu)
    eqs = []
    for coord in range(n + 1):
        coeff = [ZERO] * total
        for i, (a, _) in enumerate(G):
            coeff[n + 1 + i] = a[coord]
        for j, (e, _) in enumerate(E):
            coeff[n + 1 + k + j] = e[coord]
        if coord < n:
            coeff[coord] = -ONE
            eqs.append((tuple(coeff), ZERO))
        else:
            eqs.append((tuple(coeff), -ONE))
    rows = []
    cost = [ZERO] * total
    cost[n] = -ONE
    for i, (_, b) in enumerate(G):
        cost[n + 1 + i] = b
    for j, (_, d) in enumerate(E):
        cost[n + 1 + k + j] = d
    rows.append((tuple(cost), ZERO))  # lam.h + mu.d - s <= 0
    for i in range(k):
        coeff = [ZERO] * total
        coeff[n + 1 + i] = -ONE
        rows.append((tuple(coeff), ZERO))  # lam >= 0
    big = pg.poly(total, rows, eqs)
    return PolyFunc(n, pg.project(big, range(n + 1)))


def evaluate(f: FunctionExpr, x, space: Optional[SpaceTag] = None) -> ExtReal:
    """Exact value of f at x (numeric vector or symbolic point)."""
    if isinstance(x, (tuple, list)):
        n = len(x)
        return pf_value(lower(f, n), x)
    return _sym_value(f, x)


def _sym_value(f: FunctionExpr, p: Point) -> ExtReal:
    if isinstance(f, Affine):
        if se.is_origin(p):
            return er(f.alpha)
        raise UndecidableValueError("no pairing rule for this point")
    if isinstance(f, NormAtom):
        if se.is_origin(p):
            return er(0)
        raise UndecidableValueError("no norm rule for this point")
    if isinstance(f, IndicatorOf):
        s = normalize(f.set_)
        if se.is_origin(p):
            c = attrs(s).contains_origin
            if c is HOLDS:
                return er(0)
            if c is FAILS:
                return PINF
        raise UndecidableValueError("membership undecided for this point")
    if isinstance(f, Sum):
        return er_add(_sym_value(f.a, p), _sym_value(f.b, p))
    if isinstance(f, PlusConst):
        return er_add(_sym_value(f.f, p), er(f.const))
    if isinstance(f, ArgTranslate):
        shifted = se.padd(p, se.pneg(_as_point(f.shift)))
        if shifted is None:
            raise UndecidableValueError("point algebra cannot shift this point")
        return _sym_value(f.f, shifted)
    raise UndecidableValueError(f"no symbolic value rule for {type(f).__name__}")


# -- lower bounds for the nonnegativity certificate --------------------------

# inner products known to be bounded below on specific catalog sets
_PAIRING_LB = {
    ("nonneg", se.LP_PLUS): ZERO,
    ("nonneg", se.LP_PLUS_UNC): ZERO,
    ("coordinate", se.LP_PLUS): ZERO,
    ("coordinate", se.LP_PLUS_UNC): ZERO,
}


def _pairing_lb(c: VecOrSym, s: SetExpr) -> Optional[Fraction]:
    s = normalize(s)
    if not isinstance(s, se.CatalogAtom):
        return None
    if isinstance(c, SymVec):
        for attr in sorted(c.attrs):
            val = _PAIRING_LB.get((attr, s.cid))
            if val is not None:
                return val
    return None


def domain_lower_bound(f: FunctionExpr, space: Optional[SpaceTag] = None) -> Optional[Fraction]:
    """A proved lower bound for inf f over dom f, or None."""
    if space is not None and space.finite_dim:
        try:
            pf = lower(f, space.dim)
        except RegimeError:
            return None
        out = _minimize_pf(pf)
        return out.value if isinstance(out, Optimal) else None
    if isinstance(f, IndicatorOf):
        return ZERO
    if isinstance(f, NormAtom):
        return ZERO
    if isinstance(f, PlusConst):
        base = domain_lower_bound(f.f, space)
        return None if base is None else base + f.const
    if isinstance(f, Affine):
        if not isinstance(f.c, SymVec) and all(Fraction(x) == 0 for x in f.c):
            return Fraction(f.alpha)
        if isinstance(f.c, SymVec) and "zero" in f.c.attrs:
            return Fraction(f.alpha)
        return None
    if isinstance(f, Sum):
        for fn, other in ((f.a, f.b), (f.b, f.a)):
            if isinstance(fn, Affine) and isinstance(other, IndicatorOf):
                pl = _pairing_lb(fn.c, other.set_)
                if pl is not None:
                    return pl + Fraction(fn.alpha)
        la = domain_lower_bound(f.a, space)
        lb_ = domain_lower_bound(f.b, space)
        if la is not None and lb_ is not None:
            return la + lb_
        return None
    return None


def _minimize_pf(pf: PolyFunc):
    obj = tuple(ZERO for _ in range(pf.n)) + (ONE,)
    rows = [Row(a, LE, b) for a, b in pf.epi.ineqs]
    rows += [Row(e, EQ, d) for e, d in pf.epi.eqs]
    return solve_lp(LinearProgram(pf.n + 1, obj, "min", tuple(rows)))


# -- epigraph difference sets -------------------------------------------------


def _both_indicators(f: FunctionExpr, g: FunctionExpr):
    if isinstance(f, IndicatorOf) and isinstance(g, IndicatorOf):
        return normalize(f.set_), normalize(g.set_)
    return None


def epi_diff_poly(pf_f: PolyFunc, pf_g: PolyFunc, v: Fraction) -> pg.Polyhedron:
    """{(x - y, f(x) + g(y) - v + eps) : eps >= 0} as an exact H-rep."""
    n = pf_f.n
    # coordinates: w (n), r (1), y (n), tf (1), tg (1); x = w + y,
    # eps = r + v - tf - tg >= 0
    total = 2 * n + 3
    W, R, Y, TF, TG = 0, n, n + 1, 2 * n + 1, 2 * n + 2
    rows = []
    for a, b in pf_f.epi.ineqs:  # rows on (x, tf) with x = w + y
        coeff = [ZERO] * total
        for j in range(n):
            coeff[W + j] = a[j]
            coeff[Y + j] = a[j]
        coeff[TF] = a[n]
        rows.append((tuple(coeff), b))
    eqs = []
    for e, d in pf_f.epi.eqs:
        coeff = [ZERO] * total
        for j in range(n):
            coeff[W + j] = e[j]
            coeff[Y + j] = e[j]
        coeff[TF] = e[n]
        eqs.append((tuple(coeff), d))
    for a, b in pf_g.epi.ineqs:  # rows on (y, tg)
        coeff = [ZERO] * total
        for j in range(n):
            coeff[Y + j] = a[j]
        coeff[TG] = a[n]
        rows.append((tuple(coeff), b))
    for e, d in pf_g.epi.eqs:
        coeff = [ZERO] * total
        for j in range(n):
            coeff[Y + j] = e[j]
        coeff[TG] = e[n]
        eqs.append((tuple(coeff), d))
    # eps >= 0 : -r + tf + tg <= v
    coeff = [ZERO] * total
    coeff[R] = -ONE
    coeff[TF] = ONE
    coeff[TG] = ONE
    rows.append((tuple(coeff), v))
    big = pg.poly(total, rows, eqs)
    return pg.project(big, range(n + 1))


def epi_diff_set(
    f: FunctionExpr, g: FunctionExpr, v, space: SpaceTag
) -> EpiDiffData:
    v = Fraction(v)
    if is_proper(f) is FAILS or is_proper(g) is FAILS:
        raise ImproperFunctionError("epigraph difference needs proper functions")
    if space.finite_dim:
        n = space.dim
        poly_e = epi_diff_poly(lower(f, n), lower(g, n), v)
        return EpiDiffData(f, g, v, se.PolyAtom(poly_e))
    pair = _both_indicators(f, g)
    if pair is not None:
        a, b = pair
        base = normalize(se.MinkSum((a, se.Neg(b))))
        ray = se.PolyAtom(pg.poly(1, ineqs=[((-ONE,), v)]))  # r >= -v
        return EpiDiffData(f, g, v, se.Product(base, ray))
    return EpiDiffData(f, g, v, se.EpiDiffSet(f, g, v, space))


def biconjugate_check(f: FunctionExpr, samples: Sequence[Sequence]) -> bool:
    """f** = f at every sample and Young-Fenchel on all sample pairs."""
    if not samples:
        return True
    n = len(samples[0])
    pf = lower(f, n)
    star = conjugate_polyfunc(pf)
    star2 = conjugate_polyfunc(star)
    for x in samples:
        if pf_value(star2, x) != pf_value(pf, x):
            return False
    for x in samples:
        fx = pf_value(pf, x)
        for y in samples:
            fy = pf_value(star, y)
            lhs = er_add(fx, fy)
            rhs = er(dot(tuple(Fraction(v) for v in x), tuple(Fraction(v) for v in y)))
            if not er_le(rhs, lhs):
                return False
    return True
