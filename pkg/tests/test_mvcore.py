from fractions import Fraction as F
import itertools

import pytest
from hypothesis import given, strategies as st

from lukmodal.mvcore import (
    DOUBLE_PLUS, DOUBLE_TIMES, IDENTITY, UnaryTerm, dyadic_surrogate, eval_term,
    grid, implies, in_grid, is_dyadic, join, meet, neg, odot, oplus, power,
    synthesize_tau, synthesize_tau_for_grid, truth_value,
)

unit = st.fractions(min_value=0, max_value=1, max_denominator=1000)


def test_neg_examples():
    assert neg(F(0)) == 1
    assert neg(F(1, 2)) == F(1, 2)
    assert neg(F(3, 4)) == F(1, 4)


def test_implies_examples():
    assert implies(F(4, 5), F(1, 2)) == F(7, 10)
    for x in grid(12):
        assert implies(x, x) == 1
        assert implies(F(0), x) == 1


def test_binary_examples():
    assert oplus(F(1, 2), F(3, 4)) == 1
    assert odot(F(1, 2), F(1, 2)) == 0
    assert join(F(1, 3), F(2, 3)) == F(2, 3)
    assert meet(F(1, 3), F(2, 3)) == F(1, 3)


def test_join_meet_match_implication_chains():
    # x | y is (x -> y) -> y and x & y is ~(~x | ~y)
    points = [F(k, 12) for k in range(13)]
    for x, y in itertools.product(points, repeat=2):
        assert join(x, y) == implies(implies(x, y), y)
        chain_or = implies(implies(neg(x), neg(y)), neg(y))
        assert meet(x, y) == neg(chain_or)


def test_grid():
    assert grid(1) == [0, 1]
    assert grid(2) == [0, F(1, 2), 1]
    with pytest.raises(ValueError):
        grid(0)


def test_grid3_closed_under_oplus():
    g = set(grid(3))
    pairs = list(itertools.product(g, repeat=2))
    assert len(pairs) == 16
    assert all(oplus(a, b) in g for a, b in pairs)


@pytest.mark.parametrize("n", range(1, 13))
def test_grid_closure_exhaustive(n):
    g = set(grid(n))
    for a, b in itertools.product(g, repeat=2):
        for op in (oplus, odot, implies, join, meet):
            assert op(a, b) in g
        assert neg(a) in g


def test_order_characterisation_and_de_morgan():
    g = grid(12)
    for x, y in itertools.product(g, repeat=2):
        assert (implies(x, y) == 1) == (x <= y)
        assert odot(x, y) == neg(oplus(neg(x), neg(y)))


def test_power_matches_repeated_odot():
    for x in grid(10):
        acc = x
        for m in range(1, 6):
            assert power(x, m) == acc
            acc = odot(acc, x)


def test_is_dyadic():
    assert is_dyadic(F(3, 8))
    assert not is_dyadic(F(1, 3))
    assert is_dyadic(F(1))
    assert is_dyadic(F(0))


def test_in_grid():
    assert in_grid(F(1, 2), 4)
    assert not in_grid(F(1, 2), 3)


def test_truth_value_parsing():
    assert truth_value("3/4") == F(3, 4)
    assert truth_value("1") == 1
    assert truth_value(0) == 0
    for bad in ("5/4", "-1/2", "x"):
        with pytest.raises(ValueError):
            truth_value(bad)
    with pytest.raises(TypeError):
        truth_value(0.5)


def threshold_ok(t, r, points):
    return all((eval_term(t, x) == 1) == (x >= r) and eval_term(t, x) <= 1 for x in points)


K64 = [F(k, 64) for k in range(65)]


def test_tau_examples():
    assert synthesize_tau(1) == IDENTITY
    half = synthesize_tau(F(1, 2))
    assert half.steps == (DOUBLE_PLUS,)
    assert threshold_ok(half, F(1, 2), K64)
    three_q = synthesize_tau(F(3, 4))
    assert three_q.steps == (DOUBLE_TIMES, DOUBLE_PLUS)
    assert threshold_ok(three_q, F(3, 4), K64)


@pytest.mark.parametrize("bad", [F(0), F(1, 3), F(2, 5)])
def test_tau_rejects(bad):
    with pytest.raises(ValueError):
        synthesize_tau(bad)


def test_tau_grid_examples():
    t = synthesize_tau_for_grid(F(2, 3), 3)
    assert t == synthesize_tau(F(5, 8))
    assert dyadic_surrogate(F(2, 3), 3) == F(5, 8)
    assert threshold_ok(t, F(2, 3), grid(3))
    assert synthesize_tau_for_grid(1, 7) == IDENTITY
    t = synthesize_tau_for_grid(F(1, 2), 2)
    assert t.steps == (DOUBLE_PLUS,)
    assert [eval_term(t, x) for x in grid(2)] == [0, 1, 1]


def test_eval_term_examples():
    assert eval_term(IDENTITY, F(1, 3)) == F(1, 3)
    assert eval_term(UnaryTerm((DOUBLE_PLUS,)), F(1, 4)) == F(1, 2)
    # 7/10 * 7/10 = 2/5, then 2/5 + 2/5 = 4/5
    assert eval_term(UnaryTerm((DOUBLE_TIMES, DOUBLE_PLUS)), F(7, 10)) == F(4, 5)


def dyadics(max_den=64):
    return sorted({F(a, d) for d in (1, 2, 4, 8, 16, 32, 64) if d <= max_den for a in range(1, d + 1)})


def test_tau_all_dyadics_on_fine_grid():
    points = [F(k, 256) for k in range(257)]
    for r in dyadics():
        t = synthesize_tau(r)
        assert threshold_ok(t, r, points), r
        assert t.threshold() == r


def test_synthesized_terms_are_monotone():
    g = grid(64)
    for r in dyadics():
        vals = [eval_term(synthesize_tau(r), x) for x in g]
        assert vals == sorted(vals)


@given(st.lists(st.sampled_from([DOUBLE_PLUS, DOUBLE_TIMES]), max_size=8), unit, unit)
def test_any_term_is_monotone(steps, x, y):
    t = UnaryTerm(tuple(steps))
    lo, hi = min(x, y), max(x, y)
    assert eval_term(t, lo) <= eval_term(t, hi)


@given(st.integers(1, 40), st.data())
def test_grid_tau_conditions(n, data):
    k = data.draw(st.integers(1, n))
    r = F(k, n)
    t = synthesize_tau_for_grid(r, n)
    assert threshold_ok(t, r, grid(n))


@given(st.integers(1, 30), st.fractions(min_value=F(1, 97), max_value=1, max_denominator=97))
def test_grid_tau_for_off_grid_thresholds(n, r):
    t = synthesize_tau_for_grid(r, n)
    assert threshold_ok(t, r, grid(n))
    s = dyadic_surrogate(r, n)
    assert is_dyadic(s) and 0 < s <= r
