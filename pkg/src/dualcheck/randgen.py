"""Generators for the randomized property suites.

Everything draws from an explicit ``random.Random`` so runs are
reproducible; the test suites seed from DUALCHECK_SEED (default 0) and the
CLI's global --seed reseeds the module default.
"""

from __future__ import annotations

import os
import random
from fractions import Fraction

from . import setexpr as se
from .engine import AffineMap, FenchelInstance, LagrangeInstance
from .funcexpr import Affine, IndicatorOf, Sum
from .polyhedra import Polyhedron, poly
from .spaces import finite

ZERO = Fraction(0)
ONE = Fraction(1)


def suite_seed(default: int = 0) -> int:
    raw = os.environ.get("DUALCHECK_SEED", "")
    try:
        return int(raw) if raw else default
    except ValueError:
        return default


def random_polyhedron_with_origin(rng: random.Random, n: int) -> Polyhedron:
    """Random H-representation guaranteed to contain the origin."""
    rows = []
    for _ in range(rng.randint(1, n + 3)):
        a = tuple(Fraction(rng.randint(-3, 3)) for _ in range(n))
        rows.append((a, Fraction(rng.randint(0, 3))))
    eqs = []
    if rng.random() < 0.3:
        e = tuple(Fraction(rng.randint(-2, 2)) for _ in range(n))
        eqs.append((e, ZERO))
    return poly(n, rows, eqs)


def random_box(rng: random.Random, n: int, around_zero: bool = False) -> Polyhedron:
    rows = []
    for j in range(n):
        lo = rng.randint(-3, -1) if around_zero else rng.randint(-3, 0)
        hi = rng.randint(1, 3) if around_zero else rng.randint(0, 3)
        e = [ZERO] * n
        e[j] = ONE
        rows.append((tuple(e), Fraction(hi)))
        rows.append((tuple(-c for c in e), Fraction(-lo)))
    return poly(n, rows)


def random_tilted_indicator(rng: random.Random, n: int, around_zero: bool = False):
    box = random_box(rng, n, around_zero)
    c = tuple(Fraction(rng.randint(-2, 2)) for _ in range(n))
    alpha = Fraction(rng.randint(-1, 1))
    return Sum(Affine(c, alpha), IndicatorOf(se.PolyAtom(box)))


def random_fenchel_core_instance(rng: random.Random, tag: str) -> FenchelInstance:
    """Random pair whose domains are boxes around a shared center, so the
    origin is interior to the domain difference."""
    n = rng.randint(1, 2)
    center = [rng.randint(-2, 2) for _ in range(n)]
    f_box = _box_around(rng, center, n)
    g_box = _box_around(rng, center, n)
    f = Sum(Affine(tuple(Fraction(rng.randint(-2, 2)) for _ in range(n)), ZERO), IndicatorOf(se.PolyAtom(f_box)))
    g = Sum(Affine(tuple(Fraction(rng.randint(-2, 2)) for _ in range(n)), ZERO), IndicatorOf(se.PolyAtom(g_box)))
    return FenchelInstance(instance_id=tag, space=finite(n), f=f, g=g)


def _box_around(rng: random.Random, center, n: int) -> Polyhedron:
    rows = []
    for j in range(n):
        lo = center[j] - rng.randint(1, 2)
        hi = center[j] + rng.randint(1, 2)
        e = [ZERO] * n
        e[j] = ONE
        rows.append((tuple(e), Fraction(hi)))
        rows.append((tuple(-c for c in e), Fraction(-lo)))
    return poly(n, rows)


def random_lagrange_slater_instance(rng: random.Random, tag: str) -> LagrangeInstance:
    """Random cone-constrained instance with a built-in strict point: the
    origin sits inside S and maps strictly into -C."""
    n = rng.randint(1, 2)
    m = rng.randint(1, 2)
    s_box = random_box(rng, n, around_zero=True)
    rows = tuple(
        tuple(Fraction(rng.randint(-2, 2)) for _ in range(n)) for _ in range(m)
    )
    shift = tuple(Fraction(-rng.randint(1, 2)) for _ in range(m))  # g(0) < 0
    gmap = AffineMap(rows, shift)
    cone_rows = [(tuple(-ONE if j == k else ZERO for j in range(m)), ZERO) for k in range(m)]
    cone = se.PolyAtom(poly(m, cone_rows))  # the nonnegative orthant
    f = Affine(tuple(Fraction(rng.randint(-2, 2)) for _ in range(n)), ZERO)
    fobj = Sum(f, IndicatorOf(se.PolyAtom(random_box(rng, n, around_zero=True))))
    return LagrangeInstance(
        instance_id=tag,
        xspace=finite(n),
        zspace=finite(m),
        f=fobj,
        sset=se.PolyAtom(s_box),
        gmap=gmap,
        cone=cone,
    )
