"""Exact linear programming over the rationals.

Dense two-phase simplex with Bland's pivot rule (smallest eligible index
enters, smallest-index basic variable leaves on ratio ties), which makes
every solve deterministic and cycle-free.  All arithmetic is
``fractions.Fraction``; there is no tolerance anywhere.

Every outcome carries a certificate that :func:`verify_certificate` can
replay independently of the solver:

* ``Optimal`` — a feasible point plus dual multipliers that reproduce the
  optimal value exactly (LP strong duality),
* ``Infeasible`` — a Farkas combination of the rows yielding 0 <= negative,
* ``Unbounded`` — a feasible point plus an improving recession ray.

Dual-multiplier sign convention, for ``min`` problems: y_i <= 0 on <=-rows,
y_i >= 0 on >=-rows, free on =-rows, sum_i y_i a_i = c and y.b = value.
For ``max`` problems all signs flip (so y_i >= 0 on <=-rows) and
y.b = value still holds.  Multipliers are indexed by ``expanded_rows``,
i.e. the stored rows followed by one row per finite variable bound.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DimensionMismatchError, MalformedInputError, SolverLimitError

Rat = Fraction
Vec = tuple[Rat, ...]

LE = "<="
EQ = "="
GE = ">="
_RELS = (LE, EQ, GE)

MIN = "min"
MAX = "max"

_ZERO = Fraction(0)
_ONE = Fraction(1)


def rat(x) -> Rat:
    """Coerce ints, strings like ``3/2``, and Fractions to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise MalformedInputError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise MalformedInputError(f"floats are not exact: {x!r}")
    raise MalformedInputError(f"cannot interpret {x!r} as a rational")


def rat_str(q: Rat) -> str:
    """Canonical ``p/q`` rendering (plain integer when the denominator is 1)."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vec(xs: Sequence) -> Vec:
    return tuple(rat(x) for x in xs)


def dot(a: Sequence[Rat], b: Sequence[Rat]) -> Rat:
    return sum((x * y for x, y in zip(a, b)), _ZERO)


@dataclass(frozen=True)
class Row:
    coeffs: Vec
    rel: str
    rhs: Rat

    def __post_init__(self):
        if self.rel not in _RELS:
            raise MalformedInputError(f"unknown relation {self.rel!r}")


@dataclass(frozen=True)
class LinearProgram:
    n: int
    objective: Vec
    sense: str
    rows: tuple[Row, ...]
    # per-variable (lower, upper); None entries mean free in that direction
    bounds: Optional[tuple[tuple[Optional[Rat], Optional[Rat]], ...]] = None

    def __post_init__(self):
        if self.sense not in (MIN, MAX):
            raise MalformedInputError(f"sense must be min or max, got {self.sense!r}")
        if len(self.objective) != self.n:
            raise DimensionMismatchError("objective length != n")
        for r in self.rows:
            if len(r.coeffs) != self.n:
                raise DimensionMismatchError("row length != n")
        if self.bounds is not None and len(self.bounds) != self.n:
            raise DimensionMismatchError("bounds length != n")


def lp(
    sense: str,
    objective: Sequence,
    rows: Sequence[tuple[Sequence, str, object]],
    bounds: Optional[Sequence[tuple[Optional[object], Optional[object]]]] = None,
) -> LinearProgram:
    """Convenience constructor coercing entries to rationals."""
    n = len(objective)
    rws = tuple(Row(vec(a), rel, rat(b)) for a, rel, b in rows)
    bds = None
    if bounds is not None:
        bds = tuple(
            (None if lo is None else rat(lo), None if hi is None else rat(hi))
            for lo, hi in bounds
        )
    return LinearProgram(n, vec(objective), sense, rws, bds)


def expanded_rows(p: LinearProgram) -> tuple[Row, ...]:
    """Stored rows followed by bound rows, in the order the dual multipliers use."""
    out = list(p.rows)
    if p.bounds is not None:
        for j, (lo, hi) in enumerate(p.bounds):
            e = tuple(_ONE if k == j else _ZERO for k in range(p.n))
            if lo is not None:
                out.append(Row(e, GE, lo))
            if hi is not None:
                out.append(Row(e, LE, hi))
    return tuple(out)


@dataclass(frozen=True)
class Optimal:
    point: Vec
    value: Rat
    dual: Vec  # one multiplier per expanded row


@dataclass(frozen=True)
class Infeasible:
    farkas: Vec  # one coefficient per expanded row


@dataclass(frozen=True)
class Unbounded:
    point: Vec
    ray: Vec


LpOutcome = Union[Optimal, Infeasible, Unbounded]


def _max_pivots() -> int:
    raw = os.environ.get("DUALCHECK_MAX_PIVOTS", "")
    try:
        return int(raw) if raw else 200_000
    except ValueError:
        return 200_000


class _Simplex:
    """Two-phase tableau simplex on the standard form derived from an LP.

    Standard form: free variables split x = x+ - x-, one slack per
    inequality row, rows sign-flipped so the right-hand side is >= 0,
    artificial basis.  Artificial columns stay in the tableau after phase
    one (ineligible to enter) so the dual vector can be read off the cost
    row.
    """

    def __init__(self, p: LinearProgram):
        self.lp = p
        self.exp = expanded_rows(p)
        self.n = p.n
        self.m = len(self.exp)
        self.nslack = sum(1 for r in self.exp if r.rel != EQ)
        self.N = 2 * self.n + self.nslack  # structural columns
        self.ncols = self.N + self.m + 1  # + artificials + rhs
        self.max_pivots = _max_pivots()
        self.pivots = 0
        self._build()

    def _build(self):
        n, m = self.n, self.m
        self.sigma: list[int] = []
        self.T: list[list[Rat]] = []
        slack_at = 0
        self.slack_col_of_row: list[Optional[int]] = []
        for i, r in enumerate(self.exp):
            row = [_ZERO] * self.ncols
            for j, a in enumerate(r.coeffs):
                row[j] = a
                row[n + j] = -a
            if r.rel == EQ:
                self.slack_col_of_row.append(None)
            else:
                col = 2 * n + slack_at
                row[col] = _ONE if r.rel == LE else -_ONE
                self.slack_col_of_row.append(col)
                slack_at += 1
            row[-1] = r.rhs
            s = 1 if r.rhs >= 0 else -1
            if s < 0:
                row = [-x for x in row]
            row[self.N + i] = _ONE  # artificial
            self.sigma.append(s)
            self.T.append(row)
        self.basis = [self.N + i for i in range(m)]
        # min-sense structural cost vector
        c = self.lp.objective
        if self.lp.sense == MAX:
            c = tuple(-x for x in c)
        self.cost2 = [_ZERO] * (self.N + m)
        for j in range(n):
            self.cost2[j] = c[j]
            self.cost2[n + j] = -c[j]

    # -- tableau mechanics ------------------------------------------------

    def _pivot(self, r: int, j: int):
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise SolverLimitError(
                f"pivot budget exceeded ({self.max_pivots}); "
                "raise DUALCHECK_MAX_PIVOTS"
            )
        T = self.T
        piv = T[r][j]
        T[r] = [x / piv for x in T[r]]
        for i in range(self.m):
            if i != r and T[i][j] != 0:
                f = T[i][j]
                T[i] = [a - f * b for a, b in zip(T[i], T[r])]
        if self.z[j] != 0:
            f = self.z[j]
            self.z = [a - f * b for a, b in zip(self.z, T[r])]
        self.basis[r] = j

    def _set_costs(self, cost: list[Rat]):
        # reduced-cost row: z_j = c_j - c_B . T[:,j]; last cell = -objective
        z = list(cost) + [_ZERO]
        for i in range(self.m):
            cb = cost[self.basis[i]]
            if cb != 0:
                z = [a - cb * b for a, b in zip(z, self.T[i])]
        self.z = z

    def _iterate(self, eligible) -> Optional[int]:
        """Run simplex to optimality; return entering column on unboundedness."""
        while True:
            enter = None
            for j in range(self.N + self.m):
                if eligible(j) and self.z[j] < 0:
                    enter = j
                    break
            if enter is None:
                return None
            leave = None
            best = None
            for i in range(self.m):
                t = self.T[i][enter]
                if t > 0:
                    ratio = self.T[i][-1] / t
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leave]
                    ):
                        best = ratio
                        leave = i
            if leave is None:
                return enter
            self._pivot(leave, enter)

    # -- certificate extraction -------------------------------------------

    def _duals(self, cost: list[Rat]) -> Vec:
        # y_i (flipped system) = c_art_i - z_art_i; unflip with sigma.
        ys = []
        for i in range(self.m):
            y = cost[self.N + i] - self.z[self.N + i]
            ys.append(self.sigma[i] * y)
        return tuple(ys)

    def _point(self) -> Vec:
        vals = [_ZERO] * (self.N + self.m)
        for i in range(self.m):
            vals[self.basis[i]] = self.T[i][-1]
        return tuple(vals[j] - vals[self.n + j] for j in range(self.n))

    def _ray(self, enter: int) -> Vec:
        d = [_ZERO] * (self.N + self.m)
        d[enter] = _ONE
        for i in range(self.m):
            d[self.basis[i]] = -self.T[i][enter]
        return tuple(d[j] - d[self.n + j] for j in range(self.n))

    # -- driver -------------------------------------------------------------

    def solve(self) -> LpOutcome:
        m = self.m
        if m > 0:
            cost1 = [_ZERO] * self.N + [_ONE] * m
            self._set_costs(cost1)
            unb = self._iterate(lambda j: j < self.N)
            assert unb is None, "phase one is bounded below by zero"
            if -self.z[-1] > 0:  # objective = -last cell of cost row
                y1 = self._duals(cost1)
                farkas = tuple(-y for y in y1)
                return Infeasible(farkas)
            # drive surviving artificials out of the basis where possible
            for i in range(m):
                if self.basis[i] >= self.N and self.T[i][-1] == 0:
                    for j in range(self.N):
                        if self.T[i][j] != 0:
                            self._pivot(i, j)
                            break
        cost2 = list(self.cost2)
        self._set_costs(cost2)
        enter = self._iterate(lambda j: j < self.N)
        if enter is not None:
            point = self._point()
            ray = self._ray(enter)
            return Unbounded(point, ray)
        point = self._point()
        value_min = -self.z[-1]
        y = self._duals(cost2)
        if self.lp.sense == MAX:
            return Optimal(point, -value_min, tuple(-v for v in y))
        return Optimal(point, value_min, y)


def solve_lp(p: LinearProgram) -> LpOutcome:
    """Solve exactly; deterministic for identical inputs."""
    if not isinstance(p, LinearProgram):
        raise MalformedInputError("solve_lp expects a LinearProgram")
    return _Simplex(p).solve()


def _row_holds(r: Row, x: Vec) -> bool:
    lhs = dot(r.coeffs, x)
    if r.rel == LE:
        return lhs <= r.rhs
    if r.rel == GE:
        return lhs >= r.rhs
    return lhs == r.rhs


def verify_certificate(p: LinearProgram, out: LpOutcome) -> bool:
    """Replay the certificate in ``out`` with independent exact arithmetic."""
    exp = expanded_rows(p)
    n = p.n

    if isinstance(out, Optimal):
        if len(out.point) != n or len(out.dual) != len(exp):
            return False
        if not all(_row_holds(r, out.point) for r in exp):
            return False
        if dot(p.objective, out.point) != out.value:
            return False
        # sign conditions (min: y<=0 on <=, y>=0 on >=; max: flipped)
        flip = -1 if p.sense == MAX else 1
        for r, y in zip(exp, out.dual):
            s = flip * y
            if r.rel == LE and s > 0:
                return False
            if r.rel == GE and s < 0:
                return False
        combo = [_ZERO] * n
        ybr = _ZERO
        for r, y in zip(exp, out.dual):
            for j, a in enumerate(r.coeffs):
                combo[j] += y * a
            ybr += y * r.rhs
        if tuple(combo) != tuple(p.objective):
            return False
        return ybr == out.value

    if isinstance(out, Infeasible):
        if len(out.farkas) != len(exp):
            return False
        for r, lam in zip(exp, out.farkas):
            if r.rel == LE and lam < 0:
                return False
            if r.rel == GE and lam > 0:
                return False
        combo = [_ZERO] * n
        lb = _ZERO
        for r, lam in zip(exp, out.farkas):
            for j, a in enumerate(r.coeffs):
                combo[j] += lam * a
            lb += lam * r.rhs
        return all(c == 0 for c in combo) and lb < 0

    if isinstance(out, Unbounded):
        if len(out.point) != n or len(out.ray) != n:
            return False
        if not all(_row_holds(r, out.point) for r in exp):
            return False
        if all(x == 0 for x in out.ray):
            return False
        for r in exp:
            d = dot(r.coeffs, out.ray)
            if r.rel == LE and d > 0:
                return False
            if r.rel == GE and d < 0:
                return False
            if r.rel == EQ and d != 0:
                return False
        drift = dot(p.objective, out.ray)
        return drift < 0 if p.sense == MIN else drift > 0

    return False
