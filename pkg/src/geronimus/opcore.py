"""Monic orthogonal polynomials from a Gram matrix.

The Gram matrix is taken in the monomial basis.  ``P_n`` is obtained by one
exact linear solve per degree instead of iterated Gram-Schmidt, so a failure
surfaces as :class:`NotRegular` at the exact minor that vanished.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Protocol, Sequence

from .errors import InternalConsistencyError, NotRegular, SingularMatrix
from .moments import MomentFunctional
from .scalars import Polynomial, RationalLike, det, solve_linear

__all__ = [
    "GramMatrix",
    "RegularityReport",
    "MonicOPS",
    "SecondKindValues",
    "bilinear",
    "build_gram",
    "regularity_check",
    "monic_ops",
    "second_kind",
    "r_values",
]


class Form(Protocol):
    def entry(self, i: int, j: int) -> Fraction: ...


def bilinear(form: Form, f: Polynomial, g: Polynomial) -> Fraction:
    """Evaluate the bilinear form on two polynomials via its Gram entries."""
    total = Fraction(0)
    for i, fi in enumerate(f.coeffs):
        if fi:
            for j, gj in enumerate(g.coeffs):
                if gj:
                    total += fi * gj * form.entry(i, j)
    return total


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple
    source: str = ""
    form: object = field(default=None, compare=False, repr=False)

    @property
    def size(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]

    def leading(self, k: int) -> list[list[Fraction]]:
        return [list(row[:k]) for row in self.entries[:k]]

    @property
    def hankel(self) -> bool:
        n = self.size
        for total in range(2 * n - 1):
            vals = {self.entries[i][total - i] for i in range(max(0, total - n + 1), min(total, n - 1) + 1)}
            if len(vals) > 1:
                return False
        return True

    def is_symmetric(self) -> bool:
        return all(self.entries[i][j] == self.entries[j][i]
                   for i in range(self.size) for j in range(i))


def build_gram(form: Form, n: int) -> GramMatrix:
    """Exact ``(n + 1) x (n + 1)`` Gram matrix of ``form`` in the monomial basis."""
    entries = tuple(tuple(form.entry(i, j) for j in range(n + 1)) for i in range(n + 1))
    source = getattr(form, "label", None) or type(form).__name__
    return GramMatrix(entries, source, form)


@dataclass(frozen=True)
class RegularityReport:
    minors: tuple
    first_failure: int | None
    first_nonpositive: int | None

    @property
    def regular(self) -> bool:
        return self.first_failure is None

    @property
    def positive_definite(self) -> bool:
        return self.first_nonpositive is None


def regularity_check(g: GramMatrix) -> RegularityReport:
    """Leading principal minors of ``g``; index ``k`` refers to the k x k minor."""
    minors = tuple(det(g.leading(k)) for k in range(1, g.size + 1))
    first_zero = next((k + 1 for k, m in enumerate(minors) if m == 0), None)
    first_nonpos = next((k + 1 for k, m in enumerate(minors) if m <= 0), None)
    return RegularityReport(minors, first_zero, first_nonpos)


@dataclass(frozen=True)
class MonicOPS:
    """``P_0 .. P_N`` with norms; ``b``/``c_sq`` only for Hankel sources.

    ``b[n]`` is ``b_n`` and ``c_sq[n]`` is ``(c_n)^2``, both for ``n < N``.
    """

    polys: tuple
    norms_sq: tuple
    gram: GramMatrix = field(repr=False)
    b: tuple | None = None
    c_sq: tuple | None = None

    @property
    def degree(self) -> int:
        return len(self.polys) - 1


def monic_ops(g: GramMatrix) -> MonicOPS:
    """Monic orthogonal polynomials of every degree the Gram matrix supports.

    Raises
    ------
    NotRegular
        At the first vanishing leading minor.
    """
    size = g.size
    polys: list[Polynomial] = []
    norms: list[Fraction] = []
    for n in range(size):
        if n == 0:
            p = Polynomial.constant(1)
        else:
            a = g.leading(n)
            rhs = [-g.entry(n, k) for k in range(n)]
            try:
                x = solve_linear([[a[j][k] for j in range(n)] for k in range(n)], rhs)
            except SingularMatrix:
                raise NotRegular(n) from None
            p = Polynomial(tuple(x) + (Fraction(1),))
        h2 = bilinear(g, p, p)
        if h2 == 0:
            raise NotRegular(n + 1)
        polys.append(p)
        norms.append(h2)

    b = c_sq = None
    if g.hankel and size >= 2:
        b, c_sq = _recurrence(g, polys, norms)
    return MonicOPS(tuple(polys), tuple(norms), g, b, c_sq)


def _recurrence(g: GramMatrix, polys, norms):
    n_max = len(polys) - 1
    b = []
    c_sq = []
    for n in range(n_max):
        p = polys[n]
        tpp = bilinear(g, p.shift(), p)
        b.append(tpp / norms[n])
        c_sq.append(norms[n + 1] / norms[n])
    for n in range(n_max):
        prev = c_sq[n - 1] * polys[n - 1] if n > 0 else Polynomial()
        residual = polys[n].shift() - polys[n + 1] - b[n] * polys[n] - prev
        if residual.coeffs:
            raise InternalConsistencyError(f"three-term recurrence fails at n={n}: {residual}")
    return tuple(b), tuple(c_sq)


@dataclass(frozen=True)
class SecondKindValues:
    """``Q_n`` together with ``Q_n(0)`` and ``Q_n'(0)``."""

    q: tuple
    q0: tuple
    qp0: tuple
    base: MomentFunctional = field(repr=False)


def _apply(base: MomentFunctional, p: Polynomial) -> Fraction:
    return sum((c * base.moment(k) for k, c in enumerate(p.coeffs) if c), Fraction(0))


def second_kind(base: MomentFunctional, ops: MonicOPS) -> SecondKindValues:
    """Second-kind polynomials by applying the functional to divided differences.

    ``Q_n'(0)`` is computed twice: by differentiating ``Q_n`` and by applying
    the functional to ``(P_n(t) - P_n(0) - t P_n'(0)) / t^2``.
    """
    qs, q0s, qp0s = [], [], []
    for p in ops.polys:
        coeffs = p.coeffs
        q = Polynomial(tuple(
            sum((coeffs[k] * base.moment(k - 1 - j) for k in range(j + 1, len(coeffs))), Fraction(0))
            for j in range(max(len(coeffs) - 1, 0))
        ))
        via_derivative = q.derivative()(0)
        numer = p - Polynomial.constant(p(0)) - Polynomial.monomial(1, p.derivative()(0))
        via_functional = _apply(base, Polynomial(numer.coeffs[2:]))
        if via_derivative != via_functional:
            raise InternalConsistencyError(
                f"Q'_n(0) routes disagree at n={p.degree}: {via_derivative} vs {via_functional}")
        qs.append(q)
        q0s.append(q(0))
        qp0s.append(via_derivative)
    return SecondKindValues(tuple(qs), tuple(q0s), tuple(qp0s), base)


def r_values(sk: SecondKindValues, ops: MonicOPS, s: RationalLike) -> list[tuple[Fraction, Fraction]]:
    """``(R_n(0; s), R_n'(0; s))`` with ``R_n = s P_n + Q_n``, for every available ``n``."""
    s = Fraction(s)
    out = []
    for n, p in enumerate(ops.polys):
        out.append((s * p(0) + sk.q0[n], s * p.derivative()(0) + sk.qp0[n]))
    return out


def form_orthogonality_defects(form: Form, polys: Sequence[Polynomial]) -> list[tuple[int, int, Fraction]]:
    """All ``(n, k, value)`` with ``form(P_n, t^k) != 0`` for ``k < n``."""
    bad = []
    for n, p in enumerate(polys):
        for k in range(n):
            v = bilinear(form, p, Polynomial.monomial(k))
            if v:
                bad.append((n, k, v))
    return bad
