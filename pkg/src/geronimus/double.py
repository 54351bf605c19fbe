"""Double Geronimus transformation and its Sobolev-type representation.

The transformed family is ``P_n** = P_n + B_n P_{n-1} + C_n P_{n-2}``.  For
``n >= 2`` the pair ``(B_n, C_n)`` solves the 2x2 system obtained from
``[P_n**, 1]_2 = [P_n**, t]_2 = 0``, whose entries are expressed through
``R_k(0; s1**)``, ``R_k'(0; s1**)`` and ``P_k(0)``, ``P_k'(0)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .errors import (DegenerateDeterminant, DomainError, InternalConsistencyError, MismatchAt,
                     SingularMatrix)
from .moments import DividedMeasure, GeronimusMoments2, geronimus2_moments
from .opcore import MonicOPS, SecondKindValues, bilinear, form_orthogonality_defects, r_values
from .report import CheckReport
from .scalars import Polynomial, RationalLike, as_rational, solve_linear

__all__ = [
    "DoubleTransform",
    "SobolevMassMatrix",
    "system_entries",
    "transform_double",
    "p_ss_determinant",
    "sobolev_mass_matrix",
    "sobolev_eval",
    "verify_sobolev_vs_gram_2",
]


@dataclass(frozen=True)
class DoubleTransform:
    """Output of :func:`transform_double`.

    ``b`` is keyed by ``1 .. N``, ``c`` by ``2 .. N`` and ``d_ss`` by
    ``1 .. N`` (``d_1** = s0**``, the pivot fixing ``B_1``).  ``p_ss`` and
    ``h_ss_sq`` are indexed from 0.
    """

    b: dict
    c: dict
    p_ss: tuple
    d_ss: dict
    h_ss_sq: tuple
    corner: tuple
    form: GeronimusMoments2 = field(repr=False)

    @property
    def n_max(self) -> int:
        return len(self.p_ss) - 1

    def with_coefficient(self, name: str, n: int, value: RationalLike) -> "DoubleTransform":
        """Copy with ``B_n`` or ``C_n`` overwritten; used for fault injection."""
        if name not in ("b", "c"):
            raise DomainError(f"unknown coefficient {name!r}")
        coeffs = dict(getattr(self, name))
        coeffs[n] = as_rational(value)
        return replace(self, **{name: coeffs})


def system_entries(ops: MonicOPS, sk: SecondKindValues, corner: Sequence[Fraction]) -> list[tuple[Fraction, Fraction]]:
    """``([P_k, 1]_2, [P_k, t]_2)`` for every available ``k``, via the R-functions.

    ``[P_k, 1]_2 = R_k'(0; s1**) + s0** P_k(0)`` and
    ``[P_k, t]_2 = R_k(0; s1**) + (s2** - s_0) P_k'(0)``.  The second entry
    subtracts the base moment ``s_0 = (1, 1)_0``, which is what
    ``((P_k - P_k(0) - t P_k'(0)) / t, 1)_0 = Q_k(0) - s_0 P_k'(0)`` yields.
    """
    s0_ss, s1_ss, s2_ss = corner
    s0 = sk.base.moment(0)
    out = []
    for k, (r, rp) in enumerate(r_values(sk, ops, s1_ss)):
        p = ops.polys[k]
        out.append((rp + s0_ss * p(0), r + (s2_ss - s0) * p.derivative()(0)))
    return out


def transform_double(ops: MonicOPS, sk: SecondKindValues, s0_ss: RationalLike, s1_ss: RationalLike,
                     s2_ss: RationalLike, n_max: int) -> DoubleTransform:
    """Coefficients ``B_n``, ``C_n`` and the transformed family up to ``n_max``.

    The system entries are cross-checked against the Gram entries of
    ``[.,.]_2``; every ``P_n**`` is rebuilt from the 3x3 determinant formula
    and compared coefficientwise, checked orthogonal, and its norm compared
    with the chain ``(h_{n+2}**)^2 = C_{n+2} h_n^2``.

    Raises
    ------
    DegenerateDeterminant
        At the first ``n`` whose 2x2 system is singular (``n = 1`` when
        ``s0** = 0``).
    """
    corner = tuple(as_rational(x) for x in (s0_ss, s1_ss, s2_ss))
    if n_max > ops.degree:
        raise DomainError(f"n_max={n_max} exceeds available degree {ops.degree}")
    form = geronimus2_moments(sk.base, *corner)
    entries = system_entries(ops, sk, corner)
    one, t = Polynomial.constant(1), Polynomial.monomial(1)
    for k in range(n_max + 1):
        direct = (bilinear(form, ops.polys[k], one), bilinear(form, ops.polys[k], t))
        if direct != entries[k]:
            raise InternalConsistencyError(f"system entries at k={k}: {entries[k]} != Gram {direct}")

    b: dict[int, Fraction] = {}
    c: dict[int, Fraction] = {}
    d_ss: dict[int, Fraction] = {}
    p_ss = [one]

    def partial() -> DoubleTransform:
        chain = _norm_chain(ops, form, b, c, len(p_ss) - 1)
        return DoubleTransform(dict(b), dict(c), tuple(p_ss), dict(d_ss), tuple(chain), corner, form)

    if n_max >= 1:
        if entries[0][0] == 0:
            raise DegenerateDeterminant(1, partial())
        d_ss[1] = entries[0][0]
        b[1] = -entries[1][0] / entries[0][0]
        p_ss.append(ops.polys[1] + b[1] * ops.polys[0])

    for n in range(2, n_max + 1):
        (u1, v1), (u2, v2) = entries[n - 1], entries[n - 2]
        d = u1 * v2 - v1 * u2
        if d == 0:
            raise DegenerateDeterminant(n, partial())
        try:
            bn, cn = solve_linear([[u1, u2], [v1, v2]], [-entries[n][0], -entries[n][1]])
        except SingularMatrix:
            raise DegenerateDeterminant(n, partial()) from None
        d_ss[n] = d
        b[n], c[n] = bn, cn
        p_ss.append(ops.polys[n] + bn * ops.polys[n - 1] + cn * ops.polys[n - 2])

    for n in range(2, n_max + 1):
        via_det = p_ss_determinant(ops, sk, corner, n)
        if via_det != p_ss[n]:
            raise InternalConsistencyError(f"P**_{n}: system route != determinant route")
    defects = form_orthogonality_defects(form, p_ss)
    if defects:
        n, k, v = defects[0]
        raise InternalConsistencyError(f"[P**_{n}, t^{k}]_2 = {v} != 0")
    result = partial()
    for n, p in enumerate(p_ss):
        direct = bilinear(form, p, p)
        if direct != result.h_ss_sq[n]:
            raise InternalConsistencyError(f"(h**_{n})^2 chain {result.h_ss_sq[n]} != direct {direct}")
    return result


def _norm_chain(ops: MonicOPS, form: GeronimusMoments2, b, c, n_max: int) -> list[Fraction]:
    s0_ss, s1_ss, s2_ss = form.corner
    out = [s0_ss]
    if n_max >= 1:
        s0, s1 = form.base.moment(0), form.base.moment(1)
        out.append(s2_ss + s1_ss * (b[1] - s1 / s0))
    for n in range(2, n_max + 1):
        out.append(c[n] * ops.norms_sq[n - 2])
    return out


def p_ss_determinant(ops: MonicOPS, sk: SecondKindValues, corner: Sequence[RationalLike], n: int) -> Polynomial:
    """``P_n**`` from the 3x3 determinant with polynomial first column, ``n >= 2``."""
    s0_ss, s1_ss, s2_ss = (as_rational(x) for x in corner)
    s0 = sk.base.moment(0)
    rv = r_values(sk, ops, s1_ss)
    rows = []
    for k in (n, n - 1, n - 2):
        p = ops.polys[k]
        r, rp = rv[k]
        rows.append((p, rp + s0_ss * p(0), r + (s2_ss - s0) * p.derivative()(0)))
    (p0, a0, b0), (p1, a1, b1), (p2, a2, b2) = rows
    d = a1 * b2 - b1 * a2
    if d == 0:
        raise DegenerateDeterminant(n)
    expansion = p0 * d - p1 * (a0 * b2 - b0 * a2) + p2 * (a0 * b1 - b0 * a1)
    return expansion * (1 / d)


@dataclass(frozen=True)
class SobolevMassMatrix:
    m: tuple  # ((M00, M01), (M10, M11))

    @property
    def is_diagonal(self) -> bool:
        return self.m[0][1] == 0

    @property
    def lambdas(self) -> tuple[Fraction, Fraction]:
        return self.m[0][0], self.m[1][1]

    def quadratic(self, u: tuple, v: tuple) -> Fraction:
        return sum((u[i] * self.m[i][j] * v[j] for i in range(2) for j in range(2)), Fraction(0))


def sobolev_mass_matrix(div: DividedMeasure, s0_ss: RationalLike, s1_ss: RationalLike,
                        s2_ss: RationalLike) -> SobolevMassMatrix:
    """``M = corner - [[m_0, m_1], [m_1, m_2]]`` with ``m_k`` the moments of ``mu_2``."""
    if div.order != 2:
        raise DomainError("Sobolev mass matrix needs a divided measure of order 2")
    s0, s1, s2 = (as_rational(x) for x in (s0_ss, s1_ss, s2_ss))
    m0, m1, m2 = div.moment(0), div.moment(1), div.moment(2)
    return SobolevMassMatrix(((s0 - m0, s1 - m1), (s1 - m1, s2 - m2)))


def sobolev_eval(div: DividedMeasure, mass: SobolevMassMatrix, f: Polynomial, g: Polynomial) -> Fraction:
    """``int f g dmu_2 + (f(0), f'(0)) M (g(0), g'(0))^T``."""
    fd, gd = f.derivative(), g.derivative()
    return div.integral(f.coeffs, g.coeffs) + mass.quadratic((f(0), fd(0)), (g(0), gd(0)))


def verify_sobolev_vs_gram_2(div: DividedMeasure, corner: Sequence[RationalLike], n: int) -> CheckReport:
    """Compare the Sobolev representation with ``[t^i, t^j]_2`` for all ``i, j <= n``."""
    form = geronimus2_moments(div.base, *corner)
    mass = sobolev_mass_matrix(div, *corner)
    checks = 0
    for i in range(n + 1):
        for j in range(n + 1):
            lhs = sobolev_eval(div, mass, Polynomial.monomial(i), Polynomial.monomial(j))
            rhs = form.entry(i, j)
            if lhs != rhs:
                raise MismatchAt(i, j, lhs, rhs, "Sobolev form vs [.,.]_2 Gram")
            checks += 1
    return CheckReport("Sobolev form vs [.,.]_2 Gram", checks)
