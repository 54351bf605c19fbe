from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from geronimus.errors import DegenerateDenominator, MismatchAt
from geronimus.moments import custom_moments, divided_measure, laguerre_head, laguerre_moments
from geronimus.opcore import bilinear, build_gram, monic_ops, regularity_check, second_kind
from geronimus.oracle import check_orthogonality
from geronimus.scalars import Polynomial, solve_linear
from geronimus.single import (mass_form_eval_1, p_star_determinant, transform_single,
                              verify_mass_vs_gram_1)

F = Fraction


def P(*coeffs):
    return Polynomial(tuple(F(c) for c in coeffs))


def base_of(alpha, n):
    base = laguerre_moments(alpha)
    ops = monic_ops(build_gram(base, n))
    return base, ops, second_kind(base, ops)


def test_laguerre_identity():
    _, ops, sk = base_of(1, 10)
    st_ = transform_single(ops, sk, 1, 10)
    assert st_.a == {n: n for n in range(1, 11)}
    assert st_.p_star[1] == P(-1, 1)


def test_first_coefficient_by_hand():
    _, ops, sk = base_of(1, 1)
    p1_0, q1_0 = ops.polys[1](0), sk.q0[1]
    assert (p1_0, q1_0) == (-2, 1)
    assert transform_single(ops, sk, 1, 1).a[1] == -(1 * p1_0 + q1_0) / (1 * 1 + 0)


@pytest.mark.parametrize("alpha", [0, F(1, 2), 2])
def test_zero_parameter(alpha):
    _, ops, sk = base_of(alpha, 4)
    with pytest.raises(DegenerateDenominator) as exc:
        transform_single(ops, sk, 0, 4)
    assert exc.value.level == 1 and str(exc.value) == "DegenerateDenominator(1)"
    assert exc.value.partial.n_max == 0


def test_degenerate_at_higher_level_keeps_lower_levels():
    _, ops, sk = base_of(1, 6)
    # d_2* = s0* P_1(0) + Q_1(0) vanishes at s0* = 1/2
    with pytest.raises(DegenerateDenominator) as exc:
        transform_single(ops, sk, F(1, 2), 6)
    assert exc.value.level == 2
    assert exc.value.partial.n_max == 1 and 1 in exc.value.partial.a


params = st.fractions(min_value=-8, max_value=8, max_denominator=7).filter(lambda x: x != 0)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([0, F(1, 2), 1, 2, 3]), params)
def test_single_invariants(alpha, s0_star):
    N = 7
    base, ops, sk = base_of(alpha, N)
    try:
        st_ = transform_single(ops, sk, s0_star, N)
    except DegenerateDenominator as exc:
        # level-n failure coincides with the first vanishing minor of the [.,.]_1 Gram
        assert regularity_check(build_gram(exc.partial.form, N)).first_failure == exc.level
        return
    g1 = build_gram(st_.form, N)
    assert check_orthogonality(g1, st_.p_star).ok
    for n in range(1, N + 1):
        assert st_.p_star[n] - ops.polys[n] - ops.polys[n - 1] * st_.a[n] == Polynomial()
        assert p_star_determinant(ops, sk, s0_star, n) == st_.p_star[n]
        # one-unknown solve of [P_n + a P_{n-1}, 1]_1 = 0
        one = Polynomial.constant(1)
        (a,) = solve_linear([[bilinear(st_.form, ops.polys[n - 1], one)]],
                            [-bilinear(st_.form, ops.polys[n], one)])
        assert a == st_.a[n]
        assert st_.h_star_sq[n] == st_.a[n] * ops.norms_sq[n - 1]
        assert bilinear(st_.form, st_.p_star[n], st_.p_star[n]) == st_.h_star_sq[n]
    assert st_.h_star_sq[0] == s0_star
    if regularity_check(g1).positive_definite:
        assert all(v > 0 for v in st_.a.values())


def test_mass_form_examples():
    div = divided_measure(laguerre_moments(1), 1, [1])
    one, t = P(1), P(0, 1)
    for s0_star in (F(3), F(-1, 2)):
        assert mass_form_eval_1(div, s0_star, one, one) == s0_star
        assert mass_form_eval_1(div, s0_star, t, one) == laguerre_moments(1).moment(0)
    assert mass_form_eval_1(div, 1, P(-1, 1), P(-1, 1)) == 1


@pytest.mark.parametrize("s0_star", [1, F(7, 3), -2])
def test_mass_vs_gram(s0_star):
    base = laguerre_moments(1)
    verify_mass_vs_gram_1(divided_measure(base, 1, [1]), s0_star, 6)
    # head-invariance: a wrong head is absorbed by the mass coefficient
    verify_mass_vs_gram_1(divided_measure(base, 1, [2]), s0_star, 6)
    verify_mass_vs_gram_1(divided_measure(custom_moments([1, 2, 3]), 1, [5]), 7, 1)


def test_mass_vs_gram_reports_mismatch(monkeypatch):
    import geronimus.single as single

    real = single.mass_form_eval_1

    def off_by_one(div, s0_star, f, g):
        bump = 1 if (f.degree, g.degree) == (2, 3) else 0
        return real(div, s0_star, f, g) + bump

    monkeypatch.setattr(single, "mass_form_eval_1", off_by_one)
    with pytest.raises(MismatchAt) as exc:
        single.verify_mass_vs_gram_1(divided_measure(laguerre_moments(1), 1, [1]), 1, 4)
    assert (exc.value.i, exc.value.j) == (2, 3)


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_laguerre_head_matches_target(alpha):
    head = laguerre_head(alpha, 1)
    _, ops, sk = base_of(alpha, 8)
    st_ = transform_single(ops, sk, head[0], 8)
    assert all(st_.a[n] == n for n in range(1, 9))
