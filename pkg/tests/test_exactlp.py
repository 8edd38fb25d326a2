import random
from fractions import Fraction

import pytest

from dualcheck.errors import DimensionMismatchError
from dualcheck.exactlp import (
    GE,
    LE,
    Infeasible,
    Optimal,
    Unbounded,
    lp,
    rat_str,
    solve_lp,
    verify_certificate,
)

from oracles import brute_min_over_vertices


def test_single_bound_maximum():
    p = lp("max", [1], [([1], LE, 1)])
    out = solve_lp(p)
    assert isinstance(out, Optimal)
    assert out.point == (Fraction(1),)
    assert out.value == 1
    assert verify_certificate(p, out)


def test_trivial_infeasibility_certificate():
    # x <= -1 together with -x <= 0 is the 0 <= -1 contradiction
    p = lp("min", [0], [([1], LE, -1), ([-1], LE, 0)])
    out = solve_lp(p)
    assert isinstance(out, Infeasible)
    assert out.farkas == (Fraction(1), Fraction(1))
    assert verify_certificate(p, out)


def test_box_minimum_matches_vertex_oracle():
    # frozen via brute force over the four vertices of the unit square: 0 at the origin
    obj = [Fraction(1), Fraction(1)]
    ineqs = [((1, 0), 1), ((0, 1), 1), ((-1, 0), 0), ((0, -1), 0)]
    expected = brute_min_over_vertices(obj, ineqs, [], 2)
    assert expected == 0
    p = lp(
        "min",
        [1, 1],
        [],
        bounds=[(0, 1), (0, 1)],
    )
    out = solve_lp(p)
    assert isinstance(out, Optimal)
    assert out.value == expected == 0
    assert out.point == (Fraction(0), Fraction(0))
    assert verify_certificate(p, out)


def test_certificate_rejects_wrong_optimum():
    p = lp("max", [1], [([1], LE, 1)])
    fake = Optimal((Fraction(2),), Fraction(2), (Fraction(1),))
    assert not verify_certificate(p, fake)


def test_certificate_rejects_wrong_dual():
    p = lp("max", [1], [([1], LE, 1)])
    fake = Optimal((Fraction(1),), Fraction(1), (Fraction(2),))
    assert not verify_certificate(p, fake)


def test_unbounded_certificate():
    p = lp("max", [1, 0], [([0, 1], LE, 1), ([0, -1], LE, 0)])
    out = solve_lp(p)
    assert isinstance(out, Unbounded)
    assert verify_certificate(p, out)


def test_no_constraints_unbounded():
    p = lp("max", [1], [])
    out = solve_lp(p)
    assert isinstance(out, Unbounded)
    assert verify_certificate(p, out)


def test_equality_rows_and_duals():
    # min x + y  s.t.  x + y = 2, x >= 0, y >= 0
    p = lp("min", [1, 1], [([1, 1], "=", 2)], bounds=[(0, None), (0, None)])
    out = solve_lp(p)
    assert isinstance(out, Optimal)
    assert out.value == 2
    assert verify_certificate(p, out)


def test_dimension_mismatch_rejected():
    with pytest.raises(DimensionMismatchError):
        lp("min", [1, 2], [([1], LE, 0)])


def test_fractional_data_stays_exact():
    p = lp(
        "max",
        ["1/3", "1/7"],
        [(["2/3", 1], LE, "5/3"), ([1, 0], GE, "1/9"), ([0, 1], GE, 0)],
    )
    out = solve_lp(p)
    assert isinstance(out, Optimal)
    assert verify_certificate(p, out)
    assert out.value.denominator > 1  # genuinely fractional optimum


def test_random_lps_self_verify_and_permutation_invariant():
    rng = random.Random(20240817)
    for _ in range(60):
        n = rng.randint(1, 3)
        rows = []
        # random box keeps everything bounded, plus a few random cuts
        for j in range(n):
            e = [0] * n
            e[j] = 1
            rows.append((tuple(e), LE, rng.randint(1, 4)))
            rows.append((tuple(-x for x in e), LE, rng.randint(0, 3)))
        for _ in range(rng.randint(0, 3)):
            a = tuple(Fraction(rng.randint(-3, 3)) for _ in range(n))
            rows.append((a, LE, rng.randint(-1, 5)))
        obj = [Fraction(rng.randint(-4, 4)) for _ in range(n)]
        sense = rng.choice(["min", "max"])
        p = lp(sense, obj, rows)
        out = solve_lp(p)
        assert verify_certificate(p, out)
        perm = list(range(len(rows)))
        rng.shuffle(perm)
        p2 = lp(sense, obj, [rows[i] for i in perm])
        out2 = solve_lp(p2)
        assert verify_certificate(p2, out2)
        assert type(out) is type(out2)
        if isinstance(out, Optimal):
            assert out.value == out2.value


def test_rat_str_canonical():
    assert rat_str(Fraction(3, 2)) == "3/2"
    assert rat_str(Fraction(-4, 2)) == "-2"
    assert rat_str(Fraction(0)) == "0"
