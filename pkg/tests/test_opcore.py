from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from geronimus.errors import IndexOutOfRange, NotRegular
from geronimus.moments import custom_moments, geronimus1_moments, geronimus2_moments, laguerre_moments
from geronimus.opcore import (bilinear, build_gram, form_orthogonality_defects, monic_ops, r_values,
                              regularity_check, second_kind)
from geronimus.oracle import check_orthogonality, heine_polynomial, oracle_det
from geronimus.scalars import Polynomial

F = Fraction
SHIPPED = [0, F(1, 2), 1, 2, 3]


def P(*coeffs):
    return Polynomial(tuple(F(c) for c in coeffs))


def test_build_gram_examples():
    assert build_gram(laguerre_moments(0), 2).entries == ((1, 1, 2), (1, 2, 6), (2, 6, 24))
    assert build_gram(geronimus1_moments(laguerre_moments(1), 1), 1).entries == ((1, 1), (1, 2))
    g0 = build_gram(geronimus2_moments(laguerre_moments(1), 7, 0, 0), 0)
    assert g0.entries == ((7,),)


def test_build_gram_propagates_missing_moments():
    with pytest.raises(IndexOutOfRange):
        build_gram(custom_moments([1, 2, 3]), 2)


def test_gram_shape_flags():
    g = build_gram(laguerre_moments(1), 4)
    assert g.hankel and g.is_symmetric()
    q = build_gram(geronimus2_moments(laguerre_moments(1), 1, 0, 5), 4)
    assert q.is_symmetric() and not q.hankel


def test_regularity_examples():
    rep = regularity_check(build_gram(laguerre_moments(0), 4))
    assert rep.regular and rep.positive_definite
    zero = regularity_check(build_gram(geronimus1_moments(laguerre_moments(1), 0), 3))
    assert zero.first_failure == 1 and not zero.regular
    corner = regularity_check(build_gram(geronimus2_moments(custom_moments([1, 1, 2]), 1, 0, 0), 2))
    assert corner.first_failure == 2
    indefinite = regularity_check(build_gram(geronimus1_moments(laguerre_moments(1), -1), 3))
    assert indefinite.regular and not indefinite.positive_definite and indefinite.first_nonpositive == 1


def test_monic_ops_examples():
    ops = monic_ops(build_gram(laguerre_moments(0), 3))
    assert ops.polys[1] == P(-1, 1)
    assert ops.polys[2] == P(2, -4, 1)
    assert ops.b[0] == 1 and ops.b[1] == 3
    assert ops.c_sq[0] == 1 and ops.norms_sq[1] == 1
    ops1 = monic_ops(build_gram(laguerre_moments(1), 2))
    assert ops1.polys[1] == P(-2, 1) and ops1.norms_sq[1] == 2
    assert ops1.polys[0] == P(1) and ops1.norms_sq[0] == 1


def test_monic_ops_not_regular():
    with pytest.raises(NotRegular) as exc:
        monic_ops(build_gram(custom_moments([1, 1, 1, 1, 1]), 2))
    assert exc.value.level == 2
    assert str(exc.value) == "NotRegular(2)"


@pytest.mark.parametrize("alpha", SHIPPED)
def test_recurrence_and_norm_chain(alpha):
    N = 10
    ops = monic_ops(build_gram(laguerre_moments(alpha), N))
    t = Polynomial.monomial(1)
    for n in range(1, N):
        resid = t * ops.polys[n] - ops.polys[n + 1] - ops.polys[n] * ops.b[n] - ops.polys[n - 1] * ops.c_sq[n - 1]
        assert resid == Polynomial()
        assert ops.norms_sq[n] == ops.c_sq[n - 1] * ops.norms_sq[n - 1]
    a = F(alpha)
    # closed forms for normalized Laguerre: b_n = 2n + alpha + 1, c_{n-1}^2 = n (n + alpha)
    assert list(ops.b[:N]) == [2 * n + a + 1 for n in range(N)]
    assert list(ops.c_sq[:N]) == [(n + 1) * (n + 1 + a) for n in range(N)]


@pytest.mark.parametrize("alpha", SHIPPED)
def test_orthogonality_and_monic(alpha):
    ops = monic_ops(build_gram(laguerre_moments(alpha), 8))
    for n, p in enumerate(ops.polys):
        assert p.degree == n and p.is_monic
    assert not form_orthogonality_defects(laguerre_moments(alpha), ops.polys)
    assert check_orthogonality(ops.gram, ops.polys).ok


@pytest.mark.parametrize("alpha", SHIPPED)
def test_heine_agrees(alpha):
    ops = monic_ops(build_gram(laguerre_moments(alpha), 6))
    for n in range(7):
        assert heine_polynomial(ops.gram, n) == ops.polys[n]


def test_heine_examples():
    g = build_gram(laguerre_moments(0), 2)
    assert heine_polynomial(g, 2) == P(2, -4, 1)
    assert heine_polynomial(g, 0) == P(1)
    m = custom_moments([3, 5, 11])
    assert heine_polynomial(build_gram(m, 1), 1) == P(F(-5, 3), 1)


def test_second_kind_examples():
    base = laguerre_moments(0)
    ops = monic_ops(build_gram(base, 4))
    sk = second_kind(base, ops)
    assert sk.q[0] == Polynomial()
    assert sk.q[1] == P(1) and sk.q0[1] == 1
    assert sk.q[2] == P(-3, 1) and sk.q0[2] == -3 and sk.qp0[2] == 1
    base1 = laguerre_moments(1)
    ops1 = monic_ops(build_gram(base1, 2))
    sk1 = second_kind(base1, ops1)
    assert sk1.q0[1] == 1 and ops1.polys[1](0) == -2


def _q_by_definition(base, p: Polynomial, x):
    # (P(t) - P(x)) / (t - x) expanded via t^k - x^k = (t - x) sum t^i x^(k-1-i)
    total = F(0)
    for k, c in enumerate(p.coeffs):
        for i in range(k):
            total += c * base.moment(i) * F(x) ** (k - 1 - i)
    return total


@pytest.mark.parametrize("alpha", SHIPPED)
def test_second_kind_invariants(alpha):
    base = laguerre_moments(alpha)
    ops = monic_ops(build_gram(base, 9))
    sk = second_kind(base, ops)
    for n in range(1, 10):
        assert sk.q[n].degree == n - 1 and sk.q[n].lead == base.moment(0)
        for x in (0, 1, F(-2, 3)):
            assert sk.q[n](x) == _q_by_definition(base, ops.polys[n], x)
        assert sk.q0[n] == sk.q[n](0) and sk.qp0[n] == sk.q[n].derivative()(0)


def test_r_values_examples():
    base = laguerre_moments(2)
    ops = monic_ops(build_gram(base, 3))
    sk = second_kind(base, ops)
    zero = r_values(sk, ops, 0)
    assert all(zero[n] == (sk.q0[n], sk.qp0[n]) for n in range(4))
    assert r_values(sk, ops, 7)[0] == (7, 0)
    assert r_values(sk, ops, F(1, 2))[2] == (1, -3)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 40), st.integers(1, 9)), min_size=7, max_size=10, unique_by=lambda p: p[0]))
def test_random_discrete_measures(points):
    nodes = [F(x, 3) for x, _ in points]
    weights = [F(w) for _, w in points]
    moments = [sum(w * x ** k for x, w in zip(nodes, weights)) for k in range(13)]
    base = custom_moments(moments)
    g = build_gram(base, 6)
    rep = regularity_check(g)
    assert rep.positive_definite
    ops = monic_ops(g)
    for n in range(7):
        for k in range(n):
            assert bilinear(base, ops.polys[n], Polynomial.monomial(k)) == 0
        assert ops.norms_sq[n] > 0
        assert oracle_det(g.leading(n + 1)) == rep.minors[n]
