"""Exact computations on H-representation polyhedra.

A :class:`Polyhedron` is ``{x : a.x <= b for every inequality row,
e.x = d for every equality row}`` in a fixed finite dimension.  Emptiness
is always computed, never stored.  Every geometric question below reduces
to a handful of exact LPs:

* implicit equalities / affine hull — one LP per inequality row,
* relative-interior points — a single max-slack LP,
* the six interiority notions, which collapse in finite dimension to the
  interior test (Int, Core, Qi) and the relative-interior test (Sqri,
  Icr, Qri),
* normal cones from active rows, duals of finitely generated cones,
* projections by Fourier-Motzkin with LP-backed redundancy pruning,
* Minkowski sums via an extended system and projection.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import (
    DimensionMismatchError,
    EmptyPolyhedronError,
    MalformedInputError,
    MembershipError,
)
from .exactlp import (
    EQ,
    LE,
    LinearProgram,
    Optimal,
    Row,
    Unbounded,
    Vec,
    dot,
    solve_lp,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class Notion(Enum):
    """Interiority notions; values fix the canonical report order."""

    INT = "int"
    CORE = "core"
    QI = "qi"
    SQRI = "sqri"
    ICR = "icr"
    QRI = "qri"


def _fvec(xs: Sequence) -> Vec:
    return tuple(Fraction(x) for x in xs)


def _primitive(coeffs: Vec, rhs: Fraction) -> tuple[Vec, Fraction]:
    """Scale a row to coprime integer entries with a positive leading sign."""
    dens = [c.denominator for c in coeffs] + [rhs.denominator]
    mul = 1
    for d in dens:
        mul = mul * d // gcd(mul, d)
    ints = [int(c * mul) for c in coeffs] + [int(rhs * mul)]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(Fraction(v) for v in ints[:-1]), Fraction(ints[-1])


@dataclass(frozen=True)
class Polyhedron:
    n: int
    ineqs: tuple[tuple[Vec, Fraction], ...]
    eqs: tuple[tuple[Vec, Fraction], ...]

    def __post_init__(self):
        for a, _ in self.ineqs:
            if len(a) != self.n:
                raise DimensionMismatchError("inequality row length != n")
        for e, _ in self.eqs:
            if len(e) != self.n:
                raise DimensionMismatchError("equality row length != n")


def poly(n: int, ineqs: Iterable = (), eqs: Iterable = ()) -> Polyhedron:
    """Canonicalizing constructor: drops vacuous rows, keeps contradictions."""
    cin = []
    for a, b in ineqs:
        a, b = _fvec(a), Fraction(b)
        if all(c == 0 for c in a) and b >= 0:
            continue  # vacuous 0.x <= b
        cin.append((a, b))
    ceq = []
    for e, d in eqs:
        e, d = _fvec(e), Fraction(d)
        if all(c == 0 for c in e) and d == 0:
            continue
        ceq.append((e, d))
    return Polyhedron(n, tuple(cin), tuple(ceq))


def whole_space(n: int) -> Polyhedron:
    return poly(n)


def interval(lo, hi) -> Polyhedron:
    return poly(1, ineqs=[((1,), hi), ((-1,), -Fraction(lo))])


def orthant(n: int) -> Polyhedron:
    return poly(n, ineqs=[(tuple(-ONE if j == k else ZERO for j in range(n)), ZERO) for k in range(n)])


def singleton(pt: Sequence) -> Polyhedron:
    pt = _fvec(pt)
    n = len(pt)
    return poly(n, eqs=[(tuple(ONE if j == k else ZERO for j in range(n)), pt[k]) for k in range(n)])


def contains(p: Polyhedron, x: Sequence) -> bool:
    x = _fvec(x)
    if len(x) != p.n:
        raise DimensionMismatchError("point dimension mismatch")
    return all(dot(a, x) <= b for a, b in p.ineqs) and all(
        dot(e, x) == d for e, d in p.eqs
    )


def _rows(p: Polyhedron) -> list[tuple[Vec, str, Fraction]]:
    out = [(a, LE, b) for a, b in p.ineqs]
    out += [(e, EQ, d) for e, d in p.eqs]
    return out


def _solve_over(p: Polyhedron, obj: Vec, sense: str):
    prog = LinearProgram(p.n, obj, sense, tuple(Row(a, rel, b) for a, rel, b in _rows(p)))
    return solve_lp(prog)


def is_empty(p: Polyhedron) -> bool:
    out = _solve_over(p, tuple(ZERO for _ in range(p.n)), "min")
    return not isinstance(out, (Optimal, Unbounded))


def feasible_point(p: Polyhedron) -> Optional[Vec]:
    out = _solve_over(p, tuple(ZERO for _ in range(p.n)), "min")
    if isinstance(out, Optimal):
        return out.point
    if isinstance(out, Unbounded):
        return out.point
    return None


def extremum(p: Polyhedron, obj: Sequence, sense: str):
    """LP outcome of optimizing obj over p."""
    return _solve_over(p, _fvec(obj), sense)


def implicit_rows(p: Polyhedron) -> tuple[int, ...]:
    """Indices of inequality rows satisfied with equality by every point.

    Row a.x <= b is implicit exactly when min a.x over p equals b (the
    maximum is always <= b, so this pins a.x = b on all of p).
    """
    out = []
    for idx, (a, b) in enumerate(p.ineqs):
        res = _solve_over(p, a, "min")
        if isinstance(res, Optimal) and res.value == b:
            out.append(idx)
    return tuple(out)


@dataclass(frozen=True)
class AffineSubspace:
    """Consistent system of equalities in reduced row-echelon form."""

    n: int
    eqs: tuple[tuple[Vec, Fraction], ...]

    def rank(self) -> int:
        return len(self.eqs)

    def dim(self) -> int:
        return self.n - self.rank()

    def is_whole(self) -> bool:
        return self.rank() == 0

    def contains(self, x: Sequence) -> bool:
        x = _fvec(x)
        return all(dot(e, x) == d for e, d in self.eqs)

    def basepoint(self) -> Vec:
        x = [ZERO] * self.n
        for e, d in self.eqs:
            lead = next(j for j, c in enumerate(e) if c != 0)
            x[lead] = d  # echelon: leading columns are disjoint and unit
        return tuple(x)

    def basis(self) -> tuple[Vec, ...]:
        """Spanning directions of the subspace (null space of the rows)."""
        leads = set()
        for e, _ in self.eqs:
            leads.add(next(j for j, c in enumerate(e) if c != 0))
        out = []
        for j in range(self.n):
            if j in leads:
                continue
            v = [ZERO] * self.n
            v[j] = ONE
            for e, _ in self.eqs:
                lead = next(k for k, c in enumerate(e) if c != 0)
                v[lead] = -e[j]
            out.append(tuple(v))
        return tuple(out)


def _echelon(eqs: Sequence[tuple[Vec, Fraction]], n: int) -> tuple[tuple[Vec, Fraction], ...]:
    rows = [list(e) + [d] for e, d in eqs]
    pivots = []
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    out = []
    for i in range(len(rows)):
        e, d = tuple(rows[i][:n]), rows[i][n]
        if all(c == 0 for c in e):
            if d != 0:
                raise EmptyPolyhedronError("inconsistent equality system")
            continue
        out.append((e, d))
    return tuple(out)


def affine_hull(p: Polyhedron) -> AffineSubspace:
    """Stored equalities plus all implicit inequality rows, reduced."""
    if is_empty(p):
        raise EmptyPolyhedronError("affine hull of an empty polyhedron")
    eqs = list(p.eqs)
    for idx in implicit_rows(p):
        a, b = p.ineqs[idx]
        eqs.append((a, b))
    return AffineSubspace(p.n, _echelon(eqs, p.n))


def relative_interior_point(p: Polyhedron) -> Optional[Vec]:
    """A point satisfying every non-implicit inequality strictly, or None."""
    if is_empty(p):
        return None
    imp = set(implicit_rows(p))
    n = p.n
    rows = []
    for idx, (a, b) in enumerate(p.ineqs):
        if idx in imp:
            rows.append(Row(a + (ZERO,), EQ, b))
        else:
            rows.append(Row(a + (ONE,), LE, b))
    for e, d in p.eqs:
        rows.append(Row(e + (ZERO,), EQ, d))
    t_up = tuple(ZERO for _ in range(n)) + (ONE,)
    rows.append(Row(t_up, LE, ONE))
    obj = t_up
    prog = LinearProgram(n + 1, obj, "max", tuple(rows))
    out = solve_lp(prog)
    assert isinstance(out, Optimal) and out.value > 0, "nonempty polyhedra have relative interior"
    return out.point[:n]


def zero_in(notion: Notion, p: Polyhedron) -> bool:
    """Does the origin belong to notion(p)?

    In finite dimension Int, Core and Qi coincide with the interior and
    Sqri, Icr, Qri with the relative interior, so exactly two tests exist.
    """
    zero = tuple(ZERO for _ in range(p.n))
    if not contains(p, zero):
        return False
    if notion in (Notion.INT, Notion.CORE, Notion.QI):
        if p.eqs:
            return False
        # all rows strict at 0 already rules out implicit equalities:
        # an implicit row through 0 would have rhs 0
        return all(b > 0 for _, b in p.ineqs)
    imp = set(implicit_rows(p))
    return all(b > 0 for idx, (_, b) in enumerate(p.ineqs) if idx not in imp)


@dataclass(frozen=True)
class FinitelyGeneratedCone:
    """cone = {sum lambda_i g_i + sum mu_j l_j : lambda >= 0, mu free}."""

    n: int
    generators: tuple[Vec, ...]
    lineality: tuple[Vec, ...]


def normal_cone(p: Polyhedron, x: Sequence) -> FinitelyGeneratedCone:
    x = _fvec(x)
    if not contains(p, x):
        raise MembershipError("normal cone requested at a point outside the set")
    gens = tuple(a for a, b in p.ineqs if dot(a, x) == b)
    lin = tuple(e for e, _ in p.eqs)
    return FinitelyGeneratedCone(p.n, gens, lin)


def cone_member(k: FinitelyGeneratedCone, v: Sequence) -> bool:
    """Exact membership: does v = sum lambda g + sum mu l have a solution?"""
    v = _fvec(v)
    gens, lin = k.generators, k.lineality
    m = len(gens) + len(lin)
    if m == 0:
        return all(c == 0 for c in v)
    rows = []
    for coord in range(k.n):
        coeffs = tuple(g[coord] for g in gens) + tuple(l[coord] for l in lin)
        rows.append(Row(coeffs, EQ, v[coord]))
    bounds = tuple((ZERO, None) for _ in gens) + tuple((None, None) for _ in lin)
    prog = LinearProgram(m, tuple(ZERO for _ in range(m)), "min", tuple(rows), bounds)
    return isinstance(solve_lp(prog), (Optimal, Unbounded))


def is_linear_subspace(k: FinitelyGeneratedCone) -> bool:
    """True iff -g lies back in the cone for every generator."""
    return all(cone_member(k, tuple(-c for c in g)) for g in k.generators)


def is_trivial_cone(k: FinitelyGeneratedCone) -> bool:
    """True iff the cone is exactly {0}."""
    return all(all(c == 0 for c in g) for g in k.generators) and all(
        all(c == 0 for c in l) for l in k.lineality
    )


def dual_cone(k: FinitelyGeneratedCone) -> Polyhedron:
    """{y : <y,g> >= 0 for generators, <y,l> = 0 for lineality}."""
    return poly(
        k.n,
        ineqs=[(tuple(-c for c in g), ZERO) for g in k.generators],
        eqs=[(l, ZERO) for l in k.lineality],
    )


# -- projection ------------------------------------------------------------


def _dedupe(rows: list[tuple[Vec, Fraction]]) -> list[tuple[Vec, Fraction]]:
    seen = set()
    out = []
    for a, b in rows:
        a, b = _primitive(a, b)
        if all(c == 0 for c in a) and b >= 0:
            continue
        key = (a, b)
        if key not in seen:
            seen.add(key)
            out.append((a, b))
    return out


def _prune_lp(ineqs: list[tuple[Vec, Fraction]], eqs: list[tuple[Vec, Fraction]], n: int):
    """Drop rows implied by the rest (one max-LP per candidate row)."""
    kept = list(ineqs)
    i = 0
    while i < len(kept):
        a, b = kept[i]
        others = kept[:i] + kept[i + 1 :]
        q = Polyhedron(n, tuple(others), tuple(eqs))
        res = _solve_over(q, a, "max")
        if isinstance(res, Optimal) and res.value <= b:
            kept.pop(i)
        elif isinstance(res, Optimal):
            i += 1
        elif isinstance(res, Unbounded):
            i += 1
        else:  # remaining system already infeasible; the row adds nothing
            kept.pop(i)
    return kept


def _eliminate(ineqs, eqs, k, n):
    """Remove variable k from the system (substitution or Fourier-Motzkin)."""
    for idx, (e, d) in enumerate(eqs):
        if e[k] != 0:
            piv, pd = e, d
            rest = eqs[:idx] + eqs[idx + 1 :]
            new_eqs = []
            for e2, d2 in rest:
                if e2[k] != 0:
                    f = e2[k] / piv[k]
                    e2 = tuple(x - f * y for x, y in zip(e2, piv))
                    d2 = d2 - f * pd
                new_eqs.append((e2, d2))
            new_in = []
            for a, b in ineqs:
                if a[k] != 0:
                    f = a[k] / piv[k]
                    a = tuple(x - f * y for x, y in zip(a, piv))
                    b = b - f * pd
                new_in.append((a, b))
            return new_in, new_eqs
    pos = [(a, b) for a, b in ineqs if a[k] > 0]
    neg = [(a, b) for a, b in ineqs if a[k] < 0]
    zero = [(a, b) for a, b in ineqs if a[k] == 0]
    combined = list(zero)
    for ap, bp in pos:
        for an, bn in neg:
            coeff = tuple(x / ap[k] - y / an[k] for x, y in zip(ap, an))
            rhs = bp / ap[k] - bn / an[k]
            combined.append((coeff, rhs))
    return combined, list(eqs)


def _project_full(ineqs, eqs, drop: Sequence[int], n: int, prune: bool = True):
    ineqs = _dedupe(list(ineqs))
    eqs = list(eqs)
    for k in drop:
        ineqs, eqs = _eliminate(ineqs, eqs, k, n)
        ineqs = _dedupe(ineqs)
        if prune and len(ineqs) > 1:
            ineqs = _prune_lp(ineqs, eqs, n)
    return ineqs, eqs


def project(p: Polyhedron, keep: Sequence[int]) -> Polyhedron:
    """Coordinate projection onto the (sorted) kept coordinates."""
    keep = sorted(set(keep))
    if any(k < 0 or k >= p.n for k in keep):
        raise DimensionMismatchError("projection index out of range")
    drop = [k for k in range(p.n) if k not in keep]
    ineqs, eqs = _project_full(p.ineqs, p.eqs, drop, p.n)
    for a, _ in ineqs:
        assert all(a[k] == 0 for k in drop)
    for e, _ in eqs:
        assert all(e[k] == 0 for k in drop)
    new_in = [(tuple(a[k] for k in keep), b) for a, b in ineqs]
    new_eq = [(tuple(e[k] for k in keep), d) for e, d in eqs]
    return poly(len(keep), new_in, new_eq)


def _embed(rows, n_total: int, offset: int):
    out = []
    for a, b in rows:
        full = [ZERO] * n_total
        for j, c in enumerate(a):
            full[offset + j] = c
        out.append((tuple(full), b))
    return out


def minkowski_sum(p: Polyhedron, q: Polyhedron) -> Polyhedron:
    """H-representation of {u + v : u in p, v in q}."""
    if p.n != q.n:
        raise DimensionMismatchError("Minkowski sum needs equal dimensions")
    n = p.n
    total = 3 * n  # (z, u, v)
    ineqs = _embed(p.ineqs, total, n) + _embed(q.ineqs, total, 2 * n)
    eqs = _embed(p.eqs, total, n) + _embed(q.eqs, total, 2 * n)
    for j in range(n):
        e = [ZERO] * total
        e[j] = ONE
        e[n + j] = -ONE
        e[2 * n + j] = -ONE
        eqs.append((tuple(e), ZERO))
    big = Polyhedron(total, tuple(ineqs), tuple(eqs))
    return project(big, range(n))


def neg(p: Polyhedron) -> Polyhedron:
    return poly(
        p.n,
        ineqs=[(tuple(-c for c in a), b) for a, b in p.ineqs],
        eqs=[(tuple(-c for c in e), d) for e, d in p.eqs],
    )


def translate(p: Polyhedron, t: Sequence) -> Polyhedron:
    t = _fvec(t)
    return poly(
        p.n,
        ineqs=[(a, b + dot(a, t)) for a, b in p.ineqs],
        eqs=[(e, d + dot(e, t)) for e, d in p.eqs],
    )


def scale(p: Polyhedron, lam) -> Polyhedron:
    lam = Fraction(lam)
    if lam <= 0:
        raise MalformedInputError("scale expects a positive factor")
    return poly(
        p.n,
        ineqs=[(a, lam * b) for a, b in p.ineqs],
        eqs=[(e, lam * d) for e, d in p.eqs],
    )


def intersect(p: Polyhedron, q: Polyhedron) -> Polyhedron:
    if p.n != q.n:
        raise DimensionMismatchError("intersection needs equal dimensions")
    return poly(p.n, p.ineqs + q.ineqs, p.eqs + q.eqs)


def product(p: Polyhedron, q: Polyhedron) -> Polyhedron:
    total = p.n + q.n
    return poly(
        total,
        _embed(p.ineqs, total, 0) + _embed(q.ineqs, total, p.n),
        _embed(p.eqs, total, 0) + _embed(q.eqs, total, p.n),
    )


def strictly_feasible_point(strict: Polyhedron, weak: Optional[Polyhedron] = None) -> Optional[Vec]:
    """A point of ``weak`` satisfying every inequality of ``strict`` strictly.

    Returns None when no such point exists (in particular when ``strict``
    has a nontrivial equality row, which kills the interior).
    """
    n = strict.n
    if weak is not None and weak.n != n:
        raise DimensionMismatchError("mismatched dimensions")
    if strict.eqs:
        return None
    rows = [Row(a + (ONE,), LE, b) for a, b in strict.ineqs]
    if weak is not None:
        rows += [Row(a + (ZERO,), LE, b) for a, b in weak.ineqs]
        rows += [Row(e + (ZERO,), EQ, d) for e, d in weak.eqs]
    t_up = tuple(ZERO for _ in range(n)) + (ONE,)
    rows.append(Row(t_up, LE, ONE))
    prog = LinearProgram(n + 1, t_up, "max", tuple(rows))
    out = solve_lp(prog)
    if isinstance(out, Optimal) and out.value > 0:
        return out.point[:n]
    return None
