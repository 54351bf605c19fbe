"""Single Geronimus transformation at the origin.

Given monic ``P_n`` orthogonal for ``(.,.)_0`` and the free value
``s0* = [1, 1]_1``, the transformed family is ``P_n* = P_n + A_n P_{n-1}``
with

    A_n = -(s0* P_n(0) + Q_n(0)) / (s0* P_{n-1}(0) + Q_{n-1}(0)).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import DegenerateDenominator, DomainError, InternalConsistencyError, MismatchAt
from .moments import DividedMeasure, GeronimusMoments1, geronimus1_moments
from .opcore import MonicOPS, SecondKindValues, bilinear, form_orthogonality_defects
from .report import CheckReport
from .scalars import Polynomial, RationalLike, as_rational

__all__ = [
    "SingleTransform",
    "transform_single",
    "p_star_determinant",
    "mass_form_eval_1",
    "verify_mass_vs_gram_1",
]


@dataclass(frozen=True)
class SingleTransform:
    """Output of :func:`transform_single`.

    ``a`` and ``d_star`` are keyed by ``n = 1 .. N``; ``p_star`` and
    ``h_star_sq`` are indexed from 0.
    """

    a: dict
    p_star: tuple
    d_star: dict
    h_star_sq: tuple
    s0_star: Fraction
    form: GeronimusMoments1 = field(repr=False)

    @property
    def n_max(self) -> int:
        return len(self.p_star) - 1

    def with_coefficient(self, n: int, value: RationalLike) -> "SingleTransform":
        """Copy with ``A_n`` overwritten; used for fault injection."""
        a = dict(self.a)
        a[n] = as_rational(value)
        return replace(self, a=a)


def _numerator(ops: MonicOPS, sk: SecondKindValues, s0_star: Fraction, n: int) -> Fraction:
    return s0_star * ops.polys[n](0) + sk.q0[n]


def transform_single(ops: MonicOPS, sk: SecondKindValues, s0_star: RationalLike,
                     n_max: int) -> SingleTransform:
    """Connection coefficients ``A_1 .. A_N`` and the transformed family.

    Each ``A_n`` is also obtained by solving ``[P_n + a P_{n-1}, 1]_1 = 0``
    directly on the transformed Gram entries; a disagreement is an internal
    error.  Every ``P_n*`` is checked orthogonal for ``[.,.]_1`` and the norm
    chain ``(h_{n+1}*)^2 = A_{n+1} h_n^2`` is checked against direct
    evaluation.

    Raises
    ------
    DegenerateDenominator
        At the first ``n`` with ``d_n* = 0``; ``exc.partial`` holds the
        levels below ``n``.
    """
    s0_star = as_rational(s0_star)
    if n_max > ops.degree:
        raise DomainError(f"n_max={n_max} exceeds available degree {ops.degree}")
    form = geronimus1_moments(sk.base, s0_star)
    one = Polynomial.constant(1)

    a: dict[int, Fraction] = {}
    d_star: dict[int, Fraction] = {}
    p_star = [one]
    h_star_sq = [s0_star]

    def partial() -> SingleTransform:
        return SingleTransform(dict(a), tuple(p_star), dict(d_star), tuple(h_star_sq), s0_star, form)

    for n in range(1, n_max + 1):
        d = _numerator(ops, sk, s0_star, n - 1)
        if d == 0:
            raise DegenerateDenominator(n, partial())
        a_n = -_numerator(ops, sk, s0_star, n) / d

        direct = -bilinear(form, ops.polys[n], one) / bilinear(form, ops.polys[n - 1], one)
        if direct != a_n:
            raise InternalConsistencyError(f"A_{n}: quotient {a_n} != direct solve {direct}")

        d_star[n] = d
        a[n] = a_n
        p_star.append(ops.polys[n] + a_n * ops.polys[n - 1])
        h_star_sq.append(a_n * ops.norms_sq[n - 1])

    defects = form_orthogonality_defects(form, p_star)
    if defects:
        n, k, v = defects[0]
        raise InternalConsistencyError(f"[P*_{n}, t^{k}]_1 = {v} != 0")
    for n, p in enumerate(p_star):
        direct = bilinear(form, p, p)
        if direct != h_star_sq[n]:
            raise InternalConsistencyError(f"(h*_{n})^2 chain {h_star_sq[n]} != direct {direct}")
    return partial()


def p_star_determinant(ops: MonicOPS, sk: SecondKindValues, s0_star: RationalLike, n: int) -> Polynomial:
    """``P_n*`` as the 2x2 determinant ``|P_n e_n; P_{n-1} d_n*| / d_n*``."""
    s0_star = as_rational(s0_star)
    e = _numerator(ops, sk, s0_star, n)
    d = _numerator(ops, sk, s0_star, n - 1)
    if d == 0:
        raise DegenerateDenominator(n)
    return (ops.polys[n] * d - ops.polys[n - 1] * e) * (1 / d)


def mass_form_eval_1(div: DividedMeasure, s0_star: RationalLike, f: Polynomial, g: Polynomial) -> Fraction:
    """``int f g dmu_1 + (s0* - m_0) f(0) g(0)``."""
    if div.order != 1:
        raise DomainError("mass form needs a divided measure of order 1")
    s0_star = as_rational(s0_star)
    return div.integral(f.coeffs, g.coeffs) + (s0_star - div.moment(0)) * f(0) * g(0)


def verify_mass_vs_gram_1(div: DividedMeasure, s0_star: RationalLike, n: int) -> CheckReport:
    """Compare the mass representation with ``[t^i, t^j]_1`` for all ``i, j <= n``."""
    form = geronimus1_moments(div.base, s0_star)
    checks = 0
    for i in range(n + 1):
        for j in range(n + 1):
            lhs = mass_form_eval_1(div, s0_star, Polynomial.monomial(i), Polynomial.monomial(j))
            rhs = form.entry(i, j)
            if lhs != rhs:
                raise MismatchAt(i, j, lhs, rhs, "mass form vs [.,.]_1 Gram")
            checks += 1
    return CheckReport("mass form vs [.,.]_1 Gram", checks)
