from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from geronimus.double import (p_ss_determinant, sobolev_eval, sobolev_mass_matrix, system_entries,
                              transform_double, verify_sobolev_vs_gram_2)
from geronimus.errors import DegenerateDeterminant, IndexOutOfRange
from geronimus.moments import custom_moments, divided_measure, laguerre_head, laguerre_moments
from geronimus.opcore import bilinear, build_gram, monic_ops, regularity_check, second_kind
from geronimus.oracle import check_orthogonality
from geronimus.scalars import Polynomial, solve_linear

F = Fraction


def base_of(alpha, n):
    base = laguerre_moments(alpha)
    ops = monic_ops(build_gram(base, n))
    return base, ops, second_kind(base, ops)


def test_laguerre_composition_coefficients():
    _, ops, sk = base_of(2, 10)
    dt = transform_double(ops, sk, F(1, 2), F(1, 2), 1, 10)
    assert dt.b == {n: 2 * n for n in range(1, 11)}
    assert dt.c == {n: n * (n - 1) for n in range(2, 11)}
    assert dt.d_ss[1] == F(1, 2)


def test_b2_c2_by_linear_solve():
    _, ops, sk = base_of(2, 2)
    e = system_entries(ops, sk, (F(1, 2), F(1, 2), F(1)))
    (u1, v1), (u2, v2) = e[1], e[0]
    assert solve_linear([[u1, u2], [v1, v2]], [-e[2][0], -e[2][1]]) == [4, 2]


def test_system_entry_at_zero():
    for corner in [(F(1, 2), F(1, 2), F(1)), (F(3), F(-2), F(5, 7))]:
        _, ops, sk = base_of(2, 1)
        assert system_entries(ops, sk, corner)[0] == (corner[0], corner[1])


@pytest.mark.parametrize("corner", [(1, 1, 1), (2, 3, F(9, 2)), (F(1, 3), -1, 3)])
def test_singular_corner(corner):
    # d_2** = s1**^2 - s0** s2** for every base, so a rank-one corner is singular at n = 2
    _, ops, sk = base_of(2, 5)
    with pytest.raises(DegenerateDeterminant) as exc:
        transform_double(ops, sk, *corner, 5)
    assert exc.value.level == 2 and str(exc.value) == "DegenerateDeterminant(2)"
    assert exc.value.partial.n_max == 1


def test_singular_corner_custom_base():
    base = custom_moments([1, 1, 2, 6, 24, 120, 720])
    ops = monic_ops(build_gram(base, 3))
    sk = second_kind(base, ops)
    with pytest.raises(DegenerateDeterminant) as exc:
        transform_double(ops, sk, 1, 0, 0, 3)
    assert exc.value.level == 2


def test_zero_first_corner():
    _, ops, sk = base_of(2, 3)
    with pytest.raises(DegenerateDeterminant) as exc:
        transform_double(ops, sk, 0, 1, 1, 3)
    assert exc.value.level == 1


def test_degenerate_at_level_three():
    # pick s2** so that d_3** = 0 while d_2** != 0: d_3 is affine in s2**
    _, ops, sk = base_of(2, 5)
    s0, s1 = F(1), F(1, 3)

    def d3(s2):
        e = system_entries(ops, sk, (s0, s1, s2))
        (u1, v1), (u2, v2) = e[2], e[1]
        return u1 * v2 - v1 * u2

    lo, hi = d3(F(0)), d3(F(1))
    s2 = -lo / (hi - lo)
    assert d3(s2) == 0 and s1 ** 2 - s0 * s2 != 0
    with pytest.raises(DegenerateDeterminant) as exc:
        transform_double(ops, sk, s0, s1, s2, 5)
    assert exc.value.level == 3
    assert regularity_check(build_gram(exc.value.partial.form, 5)).first_failure == 3


corners = st.tuples(*[st.fractions(min_value=-6, max_value=6, max_denominator=5)] * 3)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([0, F(1, 2), 1, 2, 3]), corners)
def test_double_invariants(alpha, corner):
    N = 7
    base, ops, sk = base_of(alpha, N)
    try:
        dt = transform_double(ops, sk, *corner, N)
    except DegenerateDeterminant as exc:
        # d** certificate and Gram regularity checked independently; they agree
        assert regularity_check(build_gram(exc.partial.form, N)).first_failure == exc.level
        return
    g2 = build_gram(dt.form, N)
    assert regularity_check(g2).regular
    assert check_orthogonality(g2, dt.p_ss).ok
    s0, s1 = base.moment(0), base.moment(1)
    assert dt.h_ss_sq[0] == corner[0]
    assert dt.h_ss_sq[1] == corner[2] + corner[1] * (dt.b[1] - s1 / s0)
    for n in range(1, N + 1):
        expect = ops.polys[n] + ops.polys[n - 1] * dt.b[n]
        if n >= 2:
            expect = expect + ops.polys[n - 2] * dt.c[n]
            assert p_ss_determinant(ops, sk, corner, n) == dt.p_ss[n]
            assert dt.h_ss_sq[n] == dt.c[n] * ops.norms_sq[n - 2]
        assert dt.p_ss[n] == expect
        assert bilinear(dt.form, dt.p_ss[n], dt.p_ss[n]) == dt.h_ss_sq[n]
    if regularity_check(g2).positive_definite:
        assert all(v > 0 for v in dt.c.values())


def test_sobolev_mass_examples():
    base = laguerre_moments(2)
    div = divided_measure(base, 2, [F(1, 2), F(1, 2)])
    m0, m1, m2 = div.moment(0), div.moment(1), div.moment(2)
    assert sobolev_mass_matrix(div, m0, m1, m2).m == ((0, 0), (0, 0))
    lam1, lam2 = F(3, 4), F(5)
    mass = sobolev_mass_matrix(div, F(1, 2) + lam1, F(1, 2), 1 + lam2)
    assert mass.is_diagonal and mass.lambdas == (lam1, lam2)
    assert sobolev_mass_matrix(div, 0, 0, 0).m == ((-m0, -m1), (-m1, -m2))
    # lambda_1 = 0 is accepted
    assert sobolev_mass_matrix(div, F(1, 2), F(1, 2), 1 + lam2).lambdas == (0, lam2)


def test_sobolev_eval_examples():
    div = divided_measure(laguerre_moments(2), 2, [F(1, 2), F(1, 2)])
    corner = (F(2), F(-1, 3), F(7))
    mass = sobolev_mass_matrix(div, *corner)
    one, t, t2 = Polynomial.monomial(0), Polynomial.monomial(1), Polynomial.monomial(2)
    assert sobolev_eval(div, mass, one, one) == corner[0]
    assert sobolev_eval(div, mass, t, t) == corner[2]
    assert sobolev_eval(div, mass, t, one) == corner[1]
    assert sobolev_eval(div, mass, t2, one) == laguerre_moments(2).moment(0)


@pytest.mark.parametrize("corner", [(F(1, 2), F(1, 2), 1), (3, -2, F(1, 5)), (0, 0, 0)])
def test_sobolev_vs_gram(corner):
    base = laguerre_moments(2)
    verify_sobolev_vs_gram_2(divided_measure(base, 2, [F(1, 2), F(1, 2)]), corner, 6)
    verify_sobolev_vs_gram_2(divided_measure(base, 2, [F(9), F(-4, 7)]), corner, 6)


def test_sobolev_vs_gram_beyond_moments():
    div = divided_measure(custom_moments([1, 2, 3, 4]), 2, [1, 1])
    with pytest.raises(IndexOutOfRange):
        verify_sobolev_vs_gram_2(div, (1, 0, 1), 4)


@pytest.mark.parametrize("alpha", [2, 3, F(7, 2)])
def test_double_equals_two_single_steps(alpha):
    from geronimus.single import transform_single

    N = 9
    base, ops, sk = base_of(alpha, N)
    a = laguerre_head(alpha, 1)[0]
    head2 = laguerre_head(alpha, 2)
    st1 = transform_single(ops, sk, a, N)
    mid = st1.form.as_functional()
    ops_mid = monic_ops(build_gram(mid, N))
    st2 = transform_single(ops_mid, second_kind(mid, ops_mid), head2[0], N)
    dt = transform_double(ops, sk, head2[0], head2[1], base.moment(0), N)
    assert st2.p_star == dt.p_ss
