import math
import random

import numpy as np
import pytest

from conftest import REFERENCE_FIVE, REFERENCE_FOUR, dense_sign_changes
from expsum import (
    DomainError,
    ExpSum,
    ExpTerm,
    InfeasibleAdditionError,
    PairKind,
    PointKind,
    Side,
    SyncInfeasibleError,
    add_strong_terms,
    characteristic_point,
    derivative,
    evaluate,
    find_roots,
    make_pair,
    pick_sync_point,
    proportional_split,
    split_shared_mi,
    sync_at_point,
    zero_point,
)
from expsum.sync import pairs_from_sum, split_sum, synchronize_sum

SPLIT_PI = [(2.5, 0.9), (1.2, 0.8), (0.4, 0.6), (0.35, 0.5)]
SPLIT_MI = (2.0, 0.1)


def pieces_of(result):
    """Unmerged terms of a result, the magnitudes that reconstruction works with."""
    if hasattr(result, "synchronized"):
        return [t for p in result.synchronized for t in p.as_expsum().terms] + list(result.residuals)
    return [t for m in result.members() for t in m.terms]


def assert_same_function(result, b: ExpSum, lo=-5.0, hi=25.0, rel=1e-10):
    a = result.to_expsum()
    pieces = pieces_of(result) + list(b.terms)
    for k in np.linspace(lo, hi, 100):
        scale = max(abs(t.coefficient) * t.base ** k for t in pieces)
        assert abs(evaluate(a, k) - evaluate(b, k)) <= rel * scale


def random_homogeneous(rng, kind, n):
    pairs = []
    for _ in range(n):
        hi = rng.uniform(0.3, 0.95)
        lo = rng.uniform(0.05, hi - 0.05)
        c_p, c_m = rng.uniform(0.1, 10), rng.uniform(0.1, 10)
        pairs.append(make_pair(c_p, hi, c_m, lo) if kind is PairKind.HPF else make_pair(c_p, lo, c_m, hi))
    return pairs


def test_point_kind():
    assert PointKind.derivative_zero(0) == PointKind.ZERO
    assert PointKind.derivative_zero(1) == PointKind.EXTREMUM
    assert PointKind.derivative_zero(2) == PointKind.INFLECTION
    assert PointKind.parse("inflection").order == 2
    assert PointKind.parse("d5").order == 5
    with pytest.raises(DomainError):
        PointKind.parse("saddle")
    with pytest.raises(DomainError):
        PointKind(-1)


def test_proportional_split():
    assert proportional_split(8, [6, 4, 3]) == pytest.approx([3.69231, 2.46154, 1.84615], abs=1e-5)
    assert proportional_split(1, [3, 4, 3]) == pytest.approx([0.3, 0.4, 0.3], rel=1e-15)
    assert proportional_split(10, [5], d=1) == [4.0]
    for d in (-0.1, 5.0, 7.0):
        with pytest.raises(DomainError):
            proportional_split(10, [5], d=d)
    with pytest.raises(DomainError):
        proportional_split(1, [])


def test_proportional_split_stays_below_partners(rng):
    for _ in range(200):
        mi = [rng.uniform(0.1, 5) for _ in range(rng.randint(1, 5))]
        c_p = rng.uniform(0.1, 20)
        d = rng.uniform(0, 0.99) * min(c_p, sum(mi))
        shares = proportional_split(c_p, mi, d)
        assert math.fsum(shares) == pytest.approx(min(c_p, sum(mi)) - d, rel=1e-12)
        if d > 0 or c_p <= sum(mi):
            assert all(s <= m * (1 + 1e-15) for s, m in zip(shares, mi))


def test_four_term_reference_synchronization():
    pairs, leftover = pairs_from_sum(REFERENCE_FOUR)
    assert leftover == []
    assert [p.c_p for p in pairs] == pytest.approx([3.69231, 2.46154, 1.84615], abs=1e-5)
    assert pick_sync_point(pairs, PointKind.ZERO, Side.PI) == pytest.approx(4.12205, abs=1e-5)
    res = sync_at_point(pairs, PointKind.ZERO, 5.0, Side.PI)
    assert [p.c_p for p in res.synchronized] == pytest.approx([3.32957, 0.526749, 0.158766], abs=1e-5)
    assert math.fsum(r.coefficient for r in res.residuals) == pytest.approx(3.984915, abs=1e-5)
    assert all(r.base == 0.9 for r in res.residuals)
    for p in res.synchronized:
        assert zero_point(p) == pytest.approx(5.0, abs=1e-8)
    assert_same_function(res, REFERENCE_FOUR)


def test_five_term_reference_synchronization():
    res = synchronize_sum(REFERENCE_FIVE, "zero", k0=20.0)
    assert [p.c_p for p in res.synchronized] == pytest.approx([0.284492, 0.0012029, 0.000023533], rel=1e-3)
    assert pick_sync_point(res.original, "zero") == pytest.approx(19.5494, abs=1e-4)
    assert_same_function(res, REFERENCE_FIVE)


def test_identity_synchronization():
    p = make_pair(3.0, 0.8, 2.0, 0.3)
    res = sync_at_point([p], PointKind.ZERO, zero_point(p))
    assert res.synchronized == (p,)
    assert res.residuals == ()
    assert pick_sync_point([p], PointKind.INFLECTION) == characteristic_point(p, 2)


@pytest.mark.parametrize("kind", [PairKind.HPF, PairKind.LPF])
@pytest.mark.parametrize("side", [Side.PI, Side.MI])
@pytest.mark.parametrize("order", [0, 1, 2])
def test_residual_signs_follow_the_chosen_side(kind, side, order):
    rng = random.Random(hash((kind.value, side.value, order)) & 0xFFFF)
    for _ in range(1000 // 12 + 1):
        pairs = random_homogeneous(rng, kind, rng.randint(1, 5))
        k0 = pick_sync_point(pairs, order, side)
        res = sync_at_point(pairs, order, k0, side)
        for r in res.residuals:
            if side is Side.PI:
                assert r.coefficient >= 0
            else:
                assert r.coefficient <= 0
        for p in res.synchronized:
            assert characteristic_point(p, order) == pytest.approx(k0, abs=1e-8)
        original = ExpSum(tuple(t for p in pairs for t in p.as_expsum().terms))
        assert_same_function(res, original, lo=k0 - 10, hi=k0 + 10)


def test_sync_errors():
    hpf, lpf = make_pair(1, 0.9, 1, 0.5), make_pair(1, 0.5, 1, 0.9)
    with pytest.raises(DomainError):
        sync_at_point([hpf, lpf], PointKind.ZERO, 0.0)
    with pytest.raises(DomainError):
        sync_at_point([], PointKind.ZERO, 0.0)
    with pytest.raises(SyncInfeasibleError) as info:
        sync_at_point([hpf, make_pair(1, 0.9, 1, 0.1)], PointKind.ZERO, 500.0)
    assert info.value.pair_index == 1
    with pytest.raises(SyncInfeasibleError):
        sync_at_point([hpf], PointKind.ZERO, -1e4, Side.MI)


def test_inflection_split_of_four_terms():
    res = split_shared_mi(SPLIT_PI, SPLIT_MI, PointKind.INFLECTION)
    assert math.fsum(p.c_m for p in res.pairs) == pytest.approx(2.0, rel=1e-10)
    points = [characteristic_point(p, 2) for p in res.pairs]
    assert max(points) - min(points) <= 1e-8
    assert res.common_point == pytest.approx(points[0], abs=1e-8)
    assert all(p.kind is PairKind.HPF for p in res.pairs)
    assert_same_function(res, ExpSum.of(*SPLIT_PI, (-2.0, 0.1)))


def test_single_term_split_is_the_pair_itself():
    res = split_shared_mi([(3.0, 0.9)], (1.5, 0.4), "extremum")
    assert res.pairs == (make_pair(3.0, 0.9, 1.5, 0.4),)
    assert res.common_point == characteristic_point(res.pairs[0], 1)


def test_zero_split_against_dense_scan():
    res = split_shared_mi([(1, 0.9), (1, 0.8)], (-2, 0.5), "zero")
    assert math.fsum(p.c_m for p in res.pairs) == pytest.approx(2.0, rel=1e-12)
    for p in res.pairs:
        crossings = dense_sign_changes(p.as_expsum(), -5, 5, 100_001)
        assert len(crossings) == 1
        assert crossings[0] == pytest.approx(res.common_point, abs=1e-4)


def test_low_pair_split():
    res = split_shared_mi([(0.5, 0.3), (0.8, 0.2), (0.2, 0.1)], (3.0, 0.7), PointKind.EXTREMUM)
    assert all(p.kind is PairKind.LPF for p in res.pairs)
    assert math.fsum(p.c_m for p in res.pairs) == pytest.approx(3.0, rel=1e-10)
    for p in res.pairs:
        assert characteristic_point(p, 1) == pytest.approx(res.common_point, abs=1e-8)


def test_split_errors():
    with pytest.raises(DomainError):
        split_shared_mi([(1, 0.9), (1, 0.3)], (1, 0.5), "zero")
    with pytest.raises(DomainError):
        split_shared_mi([(1, 0.5)], (1, 0.5), "zero")
    with pytest.raises(DomainError):
        split_shared_mi([(-1, 0.9)], (1, 0.5), "zero")
    with pytest.raises(DomainError):
        split_shared_mi([], (1, 0.5), "zero")
    with pytest.raises(DomainError):
        split_shared_mi([(1, 0.9)], (0.0, 0.5), "zero")


def test_share_curves_increase():
    j = 2
    t_m = SPLIT_MI[1]
    ks = np.linspace(-20, 20, 100)
    for c, t in SPLIT_PI:
        values = [c * (math.log(t) / math.log(t_m)) ** j * (t / t_m) ** k for k in ks]
        assert all(a < b for a, b in zip(values, values[1:]))


def test_random_splits_conserve_and_synchronize(rng):
    for _ in range(200):
        t_m = rng.uniform(0.05, 0.5)
        pis = [(rng.uniform(0.1, 5), rng.uniform(t_m + 0.02, 0.95)) for _ in range(rng.randint(2, 5))]
        pis = list({t: (c, t) for c, t in pis}.values())
        c_m = rng.uniform(0.1, 5)
        order = rng.randint(0, 2)
        res = split_shared_mi(pis, (c_m, t_m), order)
        assert math.fsum(p.c_m for p in res.pairs) == pytest.approx(c_m, rel=1e-10)
        for p in res.pairs:
            assert characteristic_point(p, order) == pytest.approx(res.common_point, abs=1e-8)


def test_adding_no_strong_terms_changes_nothing():
    res = split_shared_mi(SPLIT_PI, SPLIT_MI, "inflection")
    assert add_strong_terms(res, []) is res


def _nearest_root(s, x):
    roots = find_roots(s, (x - 5, x + 5))
    return min(roots, key=lambda r: abs(r - x))


def test_strong_term_moves_the_common_point_left():
    base = split_shared_mi(SPLIT_PI, SPLIT_MI, "inflection")
    res = add_strong_terms(base, [(0.5, 0.85)], "inflection")
    assert res.common_point < base.common_point
    assert math.fsum(sh[0].coefficient for sh in res.shares) == pytest.approx(0.5, rel=1e-10)
    assert all(sh[0].coefficient > 0 for sh in res.shares)
    for m in res.members():
        assert _nearest_root(derivative(m, 2), res.common_point) == pytest.approx(res.common_point, abs=1e-8)
    assert_same_function(res, ExpSum.of(*SPLIT_PI, (-2.0, 0.1), (0.5, 0.85)))
    assert res.history == (base.common_point, res.common_point)


def test_strong_terms_are_added_weakest_first():
    base = split_shared_mi([(1, 0.6), (1, 0.5)], (2, 0.2), "zero")
    res = add_strong_terms(base, [(0.3, 0.9), (0.2, 0.7)])
    assert [sh[0].base for sh in res.shares[:1]] == [0.7]
    assert [t.base for t in res.shares[0]] == [0.7, 0.9]
    assert len(res.history) == 3
    assert res.history[0] > res.history[1] > res.history[2]
    for m in res.members():
        assert _nearest_root(m, res.common_point) == pytest.approx(res.common_point, abs=1e-8)
    for sh, total in ((0, 0.2), (1, 0.3)):
        assert math.fsum(s[sh].coefficient for s in res.shares) == pytest.approx(total, rel=1e-10)


def test_share_curves_decrease_left_of_the_old_point():
    base = split_shared_mi([(1, 0.6), (1, 0.5)], (2, 0.2), "zero")
    strong = ExpTerm(0.4, 0.9)
    ks = np.linspace(base.common_point - 30, base.common_point, 100)
    for m in base.members():
        # share needed to put the zero of m + share * 0.9**k at k
        values = [-evaluate(m, k) / strong.base ** k for k in ks]
        assert all(a > b for a, b in zip(values, values[1:]))


def test_low_pair_strong_terms():
    base = split_shared_mi([(0.5, 0.3), (0.8, 0.2)], (3.0, 0.7), "zero")
    res = add_strong_terms(base, [(-0.5, 0.9)])
    assert math.fsum(-sh[0].coefficient for sh in res.shares) == pytest.approx(0.5, rel=1e-10)
    for m in res.members():
        assert _nearest_root(m, res.common_point) == pytest.approx(res.common_point, abs=1e-8)


def test_strong_term_preconditions():
    base = split_shared_mi(SPLIT_PI, SPLIT_MI, "inflection")
    with pytest.raises(DomainError):
        add_strong_terms(base, [(-0.5, 0.95)])
    with pytest.raises(DomainError):
        add_strong_terms(base, [(0.5, 0.05)])


def test_infeasible_strong_term():
    # The shares only reach 1e100 about 1e7 units to the left, past the
    # widest search window.
    base = split_shared_mi([(1.0, 0.6), (1.0, 0.55)], (2.0, 0.5), "zero")
    with pytest.raises(InfeasibleAdditionError) as info:
        add_strong_terms(base, [(1e100, 0.50001)])
    assert info.value.term == ExpTerm(1e100, 0.50001)


def test_split_sum_leaves_minority_terms():
    res, rest = split_sum(ExpSum.of((1, 0.9), (1, 0.8), (-2, 0.5), (0.5, 0.1)), "zero")
    assert len(res.pairs) == 2
    assert rest == [ExpTerm(0.5, 0.1)]
    with pytest.raises(DomainError):
        split_sum(ExpSum.of((1, 0.9), (-1, 0.5), (-1, 0.4)), "zero")


def test_sum_preservation_on_random_results(rng):
    from conftest import random_sum

    done = 0
    while done < 1000:
        s = random_sum(rng, rng.randint(2, 6))
        try:
            res = synchronize_sum(s, rng.randint(0, 2), residual_side=rng.choice([Side.PI, Side.MI]),
                                  adjust=rng.choice([Side.PI, Side.MI]))
        except (DomainError, SyncInfeasibleError):
            continue
        k0 = res.sync_point
        assert_same_function(res, s, lo=k0 - 10, hi=k0 + 10)
        done += 1
