import math
import random
from collections import deque
from itertools import product

import pytest

from geodesic_lab.arith import Mat2, gram
from geodesic_lab.quadforms.forms import (
    QForm,
    attracting_cf_period,
    canonical_rotation,
    classes_of_disc,
    count_cycles,
    cycle,
    form_of,
    gram_word,
    invert_cycle,
    is_primitive,
    is_reciprocal,
    is_reduced,
    low_lying_period,
    matrix_of_form,
    minimal_period,
    reduce,
    rho_step,
)
from geodesic_lab.semigroup import ball_records, word_to_matrix


def random_form(rng):
    while True:
        A, B, C = (rng.randint(-500, 500) for _ in range(3))
        D = B * B - 4 * A * C
        if D > 0 and math.isqrt(D) ** 2 != D:
            return QForm(A, B, C)


def random_hyperbolic(rng, alphabet=3, max_half=3):
    w = tuple(rng.randint(1, alphabet) for _ in range(2 * rng.randint(1, max_half)))
    return word_to_matrix(w)


def orbit_classes(D, cap=1000):
    """Count SL2(Z) orbits of reduced forms by closure under S and T^{+-1}."""
    reduced = {g.astuple() for c in classes_of_disc(D) for g in c}
    comp = {}
    n = 0
    for f in sorted(reduced):
        if f in comp:
            continue
        n += 1
        comp[f] = n
        todo = deque([f])
        while todo:
            A, B, C = todo.popleft()
            for g in ((C, -B, A), (A, B + 2 * A, A + B + C), (A, B - 2 * A, A - B + C)):
                if max(map(abs, g)) <= cap and g not in comp:
                    comp[g] = n
                    todo.append(g)
    return len({comp[f] for f in reduced})


def test_form_of_examples():
    f = form_of(Mat2(2, 1, 1, 1))
    assert f.astuple() == (1, -1, -1) and f.disc == 5
    g = form_of(Mat2(13, 5, 5, 2))
    assert g.astuple() == (5, -11, -5) and g.disc == 221
    with pytest.raises(ValueError):
        form_of(Mat2.identity())


def test_form_of_sign_normalized():
    g = Mat2(-2, -1, -1, -1)
    assert form_of(g) == form_of(Mat2(2, 1, 1, 1))


def test_matrix_of_form_inverts():
    rng = random.Random(4)
    for _ in range(200):
        g = random_hyperbolic(rng)
        assert matrix_of_form(form_of(g)) == g


def test_qform_rejects_square_disc():
    with pytest.raises(ValueError):
        QForm(1, 2, 0)
    with pytest.raises(ValueError):
        QForm(1, 0, 1)


def test_reduce_examples():
    assert reduce(QForm(1, 1, -1)) == QForm(1, 1, -1)
    assert reduce(QForm(1, -1, -1)) in {QForm(1, 1, -1), QForm(-1, 1, 1)}


def test_reduce_idempotent_and_reduced():
    rng = random.Random(5)
    for _ in range(10_000):
        f = random_form(rng)
        r = reduce(f)
        assert is_reduced(r) and r.disc == f.disc
        assert reduce(r) == r


def test_reduction_step_window():
    rng = random.Random(6)
    for _ in range(2000):
        f = random_form(rng)
        g = rho_step(f)
        s = math.sqrt(f.disc)
        assert g.A == f.C and (g.B + f.B) % (2 * abs(f.C)) == 0
        if f.C * f.C < f.disc:
            assert s - 2 * abs(f.C) < g.B < s


def test_cycle_d5():
    c = cycle(QForm(1, 1, -1))
    assert len(c) == 2 and set(c) == {QForm(1, 1, -1), QForm(-1, 1, 1)}
    assert len(classes_of_disc(5)) == 1
    with pytest.raises(ValueError):
        classes_of_disc(4)
    with pytest.raises(ValueError):
        classes_of_disc(7)


def test_cycles_closed_even_and_reduced():
    for D in range(5, 2000):
        if D % 4 not in (0, 1) or math.isqrt(D) ** 2 == D:
            continue
        cycles = classes_of_disc(D)
        assert len(cycles) == count_cycles(D)
        members = [f for c in cycles for f in c]
        assert len(members) == len(set(members))
        for c in cycles:
            assert len(c) % 2 == 0
            assert all(is_reduced(f) for f in c)
            assert rho_step(c.forms[-1]) == c.forms[0]
            assert c.key == min(c.forms)
            assert all(cycle(f) == c for f in c)


def test_class_number_matches_orbit_oracle():
    for D in (221, 5, 12, 69, 145, 316):
        assert orbit_classes(D) == len(classes_of_disc(D)), D


def test_primitive_only_filter():
    # 45 = 3^2 * 5: forms of content 3 come from disc 5
    full = classes_of_disc(45)
    prim = classes_of_disc(45, primitive_only=True)
    assert len(full) == len(prim) + len(classes_of_disc(5))


def test_discriminant_conservation():
    for w, ent, _ in ball_records(3, norm_sq=900):
        g = Mat2(*ent)
        assert form_of(g).disc == g.trace**2 - 4


def test_conjugacy_soundness():
    rng = random.Random(8)
    for _ in range(300):
        g = random_hyperbolic(rng)
        u = word_to_matrix(tuple(rng.randint(1, 4) for _ in range(2 * rng.randint(1, 2))))
        h = u @ g @ u.inverse()
        assert cycle(form_of(h)) == cycle(form_of(g))


def test_inverse_class_involution():
    for D in range(5, 2000):
        if D % 4 not in (0, 1) or math.isqrt(D) ** 2 == D:
            continue
        for c in classes_of_disc(D):
            inv = invert_cycle(c)
            assert invert_cycle(inv) == c
            assert {QForm(-f.C, f.B, -f.A) for f in c} == set(inv)
            if D + 4 == math.isqrt(D + 4) ** 2:
                g = matrix_of_form(c.key)
                assert cycle(form_of(g.inverse())) == inv


def test_inverse_class_is_not_the_b_flip():
    # (A, -B, C) is the improper (reversed) class, which differs from the inverse class in general
    g = word_to_matrix((1, 1, 2, 1, 2, 2))
    f = form_of(g)
    inv = cycle(form_of(g.inverse()))
    assert cycle(QForm(f.A, -f.B, f.C)) != inv


def test_gram_always_reciprocal():
    for w, ent, _ in ball_records(2, norm_sq=2500):
        S = gram(Mat2(*ent))
        assert is_reciprocal(S)


def test_reciprocity_examples():
    assert not is_reciprocal(word_to_matrix((1, 1, 2, 1, 2, 2)))
    # (1,2) has no symmetric conjugate: no symmetric SL2(Z) matrix has trace 4
    g = word_to_matrix((1, 2))
    assert not is_reciprocal(g)
    assert not any(a * (4 - a) - 1 == b * b for a in range(1, 4) for b in range(0, 3))
    assert is_reciprocal(gram(g))


def test_reciprocal_iff_reversal_is_rotation_for_even_rotations():
    rng = random.Random(9)
    for _ in range(300):
        w = tuple(rng.randint(1, 3) for _ in range(2 * rng.randint(1, 4)))
        rev = w[::-1]
        # even rotations of w give the same matrix class in SL2(Z)
        even_rot = {w[k:] + w[:k] for k in range(0, len(w), 2)}
        if rev in even_rot:
            assert is_reciprocal(word_to_matrix(w))


def test_is_primitive_examples():
    assert is_primitive((1, 1))
    assert not is_primitive((1, 1, 1, 1))
    assert not is_primitive((1, 2, 1, 2))
    assert is_primitive((1, 2, 1, 1))
    assert minimal_period((1, 2, 1, 2, 1, 2)) == 2


def test_canonical_rotation_and_gram_word():
    assert canonical_rotation((2, 1, 1, 2)) == (1, 1, 2, 2)
    assert gram_word((1, 2)) == (2, 1, 1, 2)
    for w in product((1, 2, 3), repeat=4):
        g = word_to_matrix(w)
        assert word_to_matrix(gram_word(w)) == gram(g)


def test_low_lying_period():
    assert low_lying_period((1, 2), 2) == (True, (1, 2))
    assert low_lying_period(gram_word((1, 2)), 2) == (True, (2, 1, 1, 2))
    assert low_lying_period((1, 3), 2)[0] is False
    with pytest.raises(ValueError):
        low_lying_period((1,), 2)


def test_attracting_cf_period_is_word_rotation():
    rng = random.Random(10)
    for _ in range(300):
        w = tuple(rng.randint(1, 4) for _ in range(2 * rng.randint(1, 4)))
        period = attracting_cf_period(word_to_matrix(w))
        p = minimal_period(w)
        rots = {(w + w)[k:k + p] for k in range(p)}
        assert len(period) == p and period in rots
