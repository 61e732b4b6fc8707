import math
import random
from itertools import product

import pytest

from geodesic_lab.arith import frob2
from geodesic_lab.semigroup import (
    ball_count,
    ball_records,
    build_pi,
    enumerate_ball,
    estimate_dimension_counting,
    estimate_dimension_pressure,
    format_ball_record,
    generator,
    dimension_defect_ratio,
    pigeonhole_slice,
    word_to_matrix,
)


def brute_ball(alphabet, norm_sq):
    # the all-ones word has the smallest norm at each length
    max_len = 2
    while frob2(word_to_matrix((1,) * (max_len + 2))) < norm_sq:
        max_len += 2
    out = []
    for ln in range(2, max_len + 1, 2):
        for w in product(range(1, alphabet + 1), repeat=ln):
            if frob2(word_to_matrix(w)) < norm_sq:
                out.append(w)
    return sorted(out)


def test_word_to_matrix_examples():
    assert word_to_matrix((1, 1)).rows() == ((2, 1), (1, 1))
    assert word_to_matrix((1, 2)).rows() == ((3, 1), (2, 1))
    assert word_to_matrix((2, 2)).rows() == ((5, 2), (2, 1))


@pytest.mark.parametrize("bad", [(), (1,), (1, 2, 3), (0, 1), (1, -2)])
def test_word_to_matrix_rejects(bad):
    with pytest.raises(ValueError):
        word_to_matrix(bad)


def test_word_to_matrix_alphabet_bound():
    with pytest.raises(ValueError):
        word_to_matrix((1, 3), alphabet=2)


def test_generators_have_det_minus_one():
    for a in range(1, 6):
        assert generator(a).det == -1


def test_ball_examples():
    assert [w for w, _ in enumerate_ball(1, norm_sq=50)] == [(1, 1), (1, 1, 1, 1)]
    got = [(w, frob2(m)) for w, m in enumerate_ball(2, norm_sq=50)]
    assert got == [((1, 1), 7), ((1, 1, 1, 1), 47), ((1, 2), 15), ((2, 1), 15), ((2, 2), 34)]
    assert list(enumerate_ball(2, norm_sq=7)) == []
    assert ball_count(2, math.sqrt(50) + 1e-9) == 5


@pytest.mark.parametrize("alphabet,norm_sq", [(1, 10**4), (2, 3000), (3, 2000), (4, 300)])
def test_ball_matches_brute_force(alphabet, norm_sq):
    assert [w for w, _, _ in ball_records(alphabet, norm_sq=norm_sq)] == brute_ball(alphabet, norm_sq)


def test_pruning_monotone():
    rng = random.Random(7)
    for _ in range(100_000):
        w = tuple(rng.randint(1, 5) for _ in range(rng.randint(1, 8)))
        # any prefix, odd or even: only the (nonnegative) entries matter
        a, b, c, d = 1, 0, 0, 1
        for g in w:
            a, b, c, d = g * a + b, a, g * c + d, c
        g = rng.randint(1, 5)
        na, nc = g * a + b, g * c + d
        assert na * na + a * a + nc * nc + c * c >= a * a + b * b + c * c + d * d


@pytest.mark.parametrize("alphabet", [1, 2, 3, 4])
@pytest.mark.parametrize("shards", [2, 3, 8, 20])
def test_sharded_enumeration_identical(alphabet, shards):
    norm_sq = 10**6 if alphabet <= 2 else 10**5
    assert ball_records(alphabet, norm_sq=norm_sq, shards=shards) == ball_records(alphabet, norm_sq=norm_sq)


def test_sharded_count_large():
    assert len(ball_records(4, norm_sq=10**6, shards=8)) == ball_count(4, norm_sq=10**6)


def test_word_matrix_injective():
    for ln in range(2, 9, 2):
        mats = {word_to_matrix(w).entries() for w in product((1, 2, 3), repeat=ln)}
        assert len(mats) == 3**ln


def test_ball_record_format():
    assert format_ball_record((1, 2), (3, 1, 2, 1), 15) == "1,2\t3,1,2,1\t15"


def test_pigeonhole_slice():
    s = pigeonhole_slice(2, norm_sq=50)
    assert s.length == 2 and len(s) == 4
    one = pigeonhole_slice(1, norm_sq=10**6)
    # every layer has one element, so the tie goes to the shortest length
    assert len(one) == 1 and one.length == 2
    with pytest.raises(ValueError):
        pigeonhole_slice(2, norm_sq=7)


@pytest.mark.parametrize("alphabet,norm_sq", [(2, 10**4), (3, 10**5), (5, 10**4)])
def test_pigeonhole_bound(alphabet, norm_sq):
    recs = ball_records(alphabet, norm_sq=norm_sq)
    s = pigeonhole_slice(alphabet, norm_sq=norm_sq)
    max_len = max(len(w) for w, _, _ in recs)
    assert len(s) >= len(recs) / (max_len / 2)
    assert all(len(w) == s.length and frob2(m) < norm_sq for w, m in s)


def test_build_pi_small():
    pi = build_pi(2, x_sq=50, y_sq=50, z_sq=50)
    assert len(pi) == 64
    words = [w for w, _ in pi]
    assert len(set(words)) == 64
    assert all(len(w) == 6 for w in words)
    f = pi.frob_values()
    assert list(f) == [frob2(m) for _, m in pi]
    assert all(x < pi.norm_sq for x in f)
    assert pi.decode(words[5]) == (words[5][:2], words[5][2:4], words[5][4:])


def test_pi_frob_values_sharded():
    pi = build_pi(3, x_sq=3000, y_sq=200, z_sq=3000)
    assert (pi.frob_values(1) == pi.frob_values(8)).all()


def test_pi_huge_norms_use_exact_integers():
    pi = build_pi(1, x_sq=10**10, y_sq=50, z_sq=10**10)
    assert pi.norm_sq > 2**62
    f = pi.frob_values()
    assert f.dtype == object
    w, m = next(iter(pi))
    assert f[0] == frob2(m)


def test_pressure_examples():
    assert estimate_dimension_pressure(1, 5) == 0
    d = estimate_dimension_pressure(2, 12)
    assert abs(d - 0.5313) <= 0.005
    d50 = estimate_dimension_pressure(50, 3)
    target = 1 - 6 / (math.pi**2 * 50)
    assert abs((1 - d50) - (1 - target)) <= 0.5 * (1 - target)


def test_counting_estimator():
    c2 = estimate_dimension_counting(2, [100, 300, 1000, 3000, 10000])
    assert 0.50 <= c2 <= 0.56
    assert abs(c2 - estimate_dimension_pressure(2, 12)) < 0.03
    ones = [estimate_dimension_counting(1, ns) for ns in ([10, 100, 1000], [10**4, 10**6, 10**8])]
    assert ones[1] < ones[0] < 0.15
    ests = [estimate_dimension_counting(a, [100, 300, 1000]) for a in (1, 2, 3, 4)]
    assert ests == sorted(ests)
    with pytest.raises(ValueError):
        estimate_dimension_counting(2, [100, 200])


@pytest.mark.parametrize("alphabet,depth", [(10, 4), (20, 3), (50, 3)])
def test_defect_trend(alphabet, depth):
    assert 0.5 <= dimension_defect_ratio(alphabet, estimate_dimension_pressure(alphabet, depth)) <= 1.5
