import math

import pytest

from geodesic_lab.arith import Mat2
from geodesic_lab.quadforms.census import (
    census_all,
    census_reciprocal,
    census_summary,
    census_table,
    classes_of_trace,
    matrix_side_counts,
    power_traces,
    primitive_counts_all,
    primitive_counts_reciprocal,
    prime_geodesic_ratio,
    proper_root,
    reciprocal_classes_form_side,
    reciprocal_classes_of_trace,
    remove_powers,
    sl2z_with_trace,
    symmetric_matrices,
)
from geodesic_lab.semigroup import word_to_matrix


def test_smallest_census():
    assert census_all(4) == 1
    assert census_reciprocal(4) == 1
    with pytest.raises(ValueError):
        census_all(3)
    with pytest.raises(ValueError):
        census_reciprocal(2)


def test_power_traces():
    # traces of g^k for trace(g) = 3: 3, 7, 18, 47, ...
    assert power_traces(3, 100) == [7, 18, 47]
    assert power_traces(10, 50) == []


def test_remove_powers_peels_squares():
    totals = {t: classes_of_trace(t) for t in range(3, 60)}
    prim = remove_powers(dict(totals))
    # trace 7 holds the square of the trace-3 class
    assert prim[7] == totals[7] - prim[3]
    assert all(v >= 0 for v in prim.values())


def test_proper_root():
    g = word_to_matrix((1, 2))
    assert proper_root(g @ g) == (g, 2)
    h, k = proper_root(g @ g @ g)
    assert (h, k) == (g, 3)
    assert proper_root(g) is None
    assert proper_root(word_to_matrix((1, 1))) is None
    neg = Mat2(*(-x for x in (g @ g).entries()))
    assert proper_root(neg)[1] == 2


def test_symmetric_matrices():
    for t in range(3, 200):
        for a, b, d in symmetric_matrices(t):
            assert a + d == t and a * d - b * b == 1
        brute = [(a, b, t - a) for a in range(1, t) for b in range(-t, t + 1) if a * (t - a) - b * b == 1]
        assert sorted(symmetric_matrices(t)) == sorted(brute)
    assert symmetric_matrices(4) == []


def test_sl2z_with_trace_complete():
    t, bound = 5, 120
    brute = sorted(
        (a, b, c, t - a)
        for a in range(-11, 12)
        for b in range(-11, 12)
        for c in range(-11, 12)
        if a * (t - a) - b * c == 1 and a * a + b * b + c * c + (t - a) ** 2 < bound
    )
    assert sl2z_with_trace(t, bound) == brute


@pytest.mark.parametrize("X", [20, 100, 200])
def test_dual_census_equality(X):
    m = matrix_side_counts(X)
    a = primitive_counts_all(X)
    r = primitive_counts_reciprocal(X)
    assert all(m[t] == (a[t], r[t]) for t in range(3, X))


def test_matrix_side_sharded():
    assert matrix_side_counts(120, shards=3) == matrix_side_counts(120)


def test_reciprocal_two_ways():
    for t in range(3, 300):
        assert reciprocal_classes_form_side(t) == reciprocal_classes_of_trace(t), t


def test_census_monotone_and_bounded():
    prev_a = prev_r = 0
    for X in range(4, 120, 7):
        a, r = census_all(X), census_reciprocal(X)
        assert a >= prev_a and r >= prev_r and r <= a
        prev_a, prev_r = a, r


def test_census_sharded():
    assert census_all(300, shards=4) == census_all(300)
    assert census_reciprocal(500, shards=4) == census_reciprocal(500)


def test_census_table_and_summary():
    rows = census_table(30)
    assert [r["trace"] for r in rows] == list(range(3, 30))
    assert all(r["disc"] == r["trace"] ** 2 - 4 for r in rows)
    assert sum(r["primitive"] for r in rows) == census_all(30)
    s = census_summary(100)
    assert s["reciprocal"] == census_reciprocal(100)
    assert math.isclose(s["reciprocal_ratio"], s["reciprocal"] / 100)


def test_reciprocal_trend():
    r2 = census_reciprocal(100) / 100
    r4 = census_reciprocal(10_000) / 10_000
    assert 0.25 <= r4 <= 0.50
    assert abs(r4 - 3 / 8) < abs(r2 - 3 / 8)


def test_prime_geodesic_ratio_near_one():
    X = 1000
    assert 0.9 <= prime_geodesic_ratio(X, census_all(X)) <= 1.2
