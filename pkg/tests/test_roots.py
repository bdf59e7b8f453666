import math
import random

import pytest

from conftest import LIFT_THREE, REFERENCE_FIVE, REFERENCE_FOUR, dense_sign_changes, random_sum, separated_roots
from expsum import (
    Asymptote,
    DomainError,
    ExpSum,
    IdenticallyZeroError,
    analyze,
    derivative,
    evaluate,
    find_roots,
    intersections,
    make_pair,
    polynomial_lift,
    sign_change_bound,
    solve_level,
    sync_at_point,
    zero_point,
)
from expsum.roots import default_window, isolate_roots, scaled_value
from expsum.sync import pairs_from_sum


def test_lift_roots():
    roots = find_roots(LIFT_THREE, (-2, 3))
    assert roots == pytest.approx([0.0, math.log(2), math.log(3)], abs=1e-8)
    assert sign_change_bound(LIFT_THREE) == 3


def test_positive_term_has_no_roots():
    assert find_roots(ExpSum.of((2.0, 0.7))) == []
    assert find_roots(ExpSum.of((2.0, 0.7), (1.0, 0.2)), (-50, 50)) == []


def test_synchronized_reference_set():
    pairs, _ = pairs_from_sum(REFERENCE_FOUR)
    res = sync_at_point(pairs, 0, 5.0)
    for p in res.synchronized:
        roots = find_roots(p.as_expsum(), (-10, 20))
        assert roots == pytest.approx([5.0], abs=1e-6)
    total = res.to_expsum()
    found = find_roots(total, (-20, 40))
    scanned = dense_sign_changes(total, -20, 40)
    assert len(found) == len(scanned) == 1
    assert found[0] == pytest.approx(scanned[0], abs=1e-3)


def test_sign_change_bound_examples():
    assert sign_change_bound(ExpSum.of((1, 0.9), (2, 0.5))) == 0
    assert sign_change_bound(REFERENCE_FOUR) == 1
    assert sign_change_bound(ExpSum()) == 0


def test_two_extremum_reference_sum():
    rep = analyze(REFERENCE_FIVE)
    assert len(rep.extrema) == 2
    assert rep.extremum_kinds == ("min", "max")
    assert rep.right_asymptote is Asymptote.TO_ZERO_ABOVE
    assert rep.left_asymptote is Asymptote.TO_PLUS_INFINITY
    scanned = dense_sign_changes(derivative(REFERENCE_FIVE, 1), *rep.window)
    assert rep.extrema == pytest.approx(scanned, abs=1e-3)
    assert len(rep.inflections) == 2
    assert len(rep.roots) <= rep.sign_change_bound


def test_single_term_report():
    rep = analyze(ExpSum.of((-3.0, 0.4)))
    assert (rep.roots, rep.extrema, rep.inflections) == ((), (), ())
    assert rep.right_asymptote is Asymptote.TO_ZERO_BELOW
    assert rep.left_asymptote is Asymptote.TO_MINUS_INFINITY
    assert analyze(ExpSum.of((2.0, 1.0))).left_asymptote is Asymptote.CONSTANT


def test_lift_report():
    rep = analyze(LIFT_THREE)
    assert len(rep.roots) == 3
    assert len(rep.extrema) == 2
    assert rep.sign_change_bound == 3
    for a, b in zip(rep.roots, rep.roots[1:]):
        assert any(a < x < b for x in rep.extrema)


def test_identically_zero_and_bad_windows():
    with pytest.raises(IdenticallyZeroError):
        find_roots(ExpSum())
    with pytest.raises(IdenticallyZeroError):
        analyze(ExpSum())
    for w in [(1, 1), (2, 1), (float("nan"), 1), (0, float("inf"))]:
        with pytest.raises(DomainError):
            find_roots(LIFT_THREE, w)
    with pytest.raises(DomainError):
        find_roots(LIFT_THREE, tol=0)


def test_tangential_root():
    s = ExpSum.of((1, math.exp(2)), (-2, math.e), (1, 1.0))
    roots = isolate_roots(s, (-3, 3))
    assert len(roots) == 1
    assert roots[0].tangential
    assert roots[0].x == pytest.approx(0.0, abs=1e-6)
    assert analyze(s, (-3, 3)).tangential_roots == (roots[0].x,)


def test_intersections():
    s = ExpSum.of((1, 0.9), (-2, 0.5))
    with pytest.raises(IdenticallyZeroError):
        intersections(s, s)
    assert intersections(ExpSum.of((1, 0.9)), ExpSum.of((1, 0.5))) == pytest.approx([0.0], abs=1e-15)


def test_random_intersections_match_dense_scan(rng):
    for _ in range(40):
        a, b = random_sum(rng, rng.randint(1, 4)), random_sum(rng, rng.randint(1, 4))
        diff = a - b
        if not diff.terms:
            continue
        lo, hi = default_window(diff)
        found = intersections(a, b, (lo, hi))
        scanned = dense_sign_changes(diff, lo, hi)
        assert len(found) == len(scanned)


def test_solve_level():
    assert solve_level(ExpSum.of((1, 0.5)), 2.0, (-5, 5)) == pytest.approx([-1.0], abs=1e-14)
    s = ExpSum.of((3, 0.8), (-1, 0.3), (0.5, 0.1))
    assert any(abs(x) < 1e-12 for x in solve_level(s, evaluate(s, 0.0), (-5, 5)))


def test_level_between_extrema_has_three_solutions():
    rep = analyze(REFERENCE_FIVE)
    lo_val, hi_val = sorted(evaluate(REFERENCE_FIVE, x) for x in rep.extrema)
    # The sum tends to 0 on the right, so a third crossing needs a level above 0.
    level = 0.5 * (max(lo_val, 0.0) + hi_val)
    sols = solve_level(REFERENCE_FIVE, level)
    assert len(sols) == 3
    shifted = REFERENCE_FIVE + ExpSum.of((-level, 1.0))
    assert len(dense_sign_changes(shifted, *default_window(shifted))) == 3


def test_polynomial_lift():
    assert polynomial_lift([1.0]).as_pairs() == [(1.0, math.e), (-1.0, 1.0)]
    three = polynomial_lift([1, 2, 3])
    assert three.coefficients == (1.0, -6.0, 11.0, -6.0)
    assert three.bases == pytest.approx([math.exp(3), math.exp(2), math.e, 1.0], rel=1e-15)
    neg = polynomial_lift([2, 4], -1.0)
    assert neg.coefficients == (-1.0, 6.0, -8.0)
    assert find_roots(neg) == pytest.approx([math.log(2), math.log(4)], abs=1e-10)
    with pytest.raises(DomainError):
        polynomial_lift([1, 1])
    with pytest.raises(DomainError):
        polynomial_lift([-1])


def test_roots_are_certified_and_bounded(rng):
    for _ in range(300):
        s = random_sum(rng, rng.randint(1, 7))
        rep = analyze(s)
        assert len(rep.roots) <= rep.sign_change_bound
        for r in rep.roots:
            assert abs(scaled_value(s, r)) <= 1e-10
        for a, b in zip(rep.roots, rep.roots[1:]):
            assert any(a < x < b for x in rep.extrema)


def test_random_lifts(rng):
    for _ in range(20):
        roots = separated_roots(rng, rng.randint(1, 6))
        found = find_roots(polynomial_lift(roots))
        assert found == pytest.approx([math.log(r) for r in roots], abs=1e-8)


def test_deterministic_output():
    s = random_sum(random.Random(3), 6)
    assert analyze(s) == analyze(s)


def test_default_window_covers_crossovers():
    s = ExpSum.of((1, 0.9), (-5, 0.5))
    lo, hi = default_window(s)
    assert lo < zero_point(make_pair(1, 0.9, 5, 0.5)) < hi
