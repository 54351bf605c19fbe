"""Exact scalars, dense polynomials and banded matrices.

Rationals are plain :class:`fractions.Fraction` values.  Square-root-bearing
quantities are carried as mpmath floats drawn from a private
:class:`mpmath.MPContext`, so the working precision is explicit and never
leaks into global state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import mpmath
from mpmath.libmp import from_rational, round_nearest, to_rational

from .errors import DimensionMismatch, DomainError, SingularMatrix

__all__ = [
    "Rational",
    "as_rational",
    "format_rational",
    "DEFAULT_PRECISION",
    "bigfloat_context",
    "to_bigfloat",
    "bigfloat_to_rational",
    "Polynomial",
    "poly_eval",
    "poly_derivative",
    "BandedMatrix",
    "band_mul",
    "solve_linear",
    "det",
]

Rational = Fraction
RationalLike = Union[Fraction, int, str]

DEFAULT_PRECISION = 256


def as_rational(value: RationalLike) -> Fraction:
    """Parse ``value`` as an exact rational.

    Accepts ints, Fractions and strings of the form ``"p/q"`` or ``"p"``.
    Floats are refused: they would smuggle rounding into exact pipelines.
    """
    if isinstance(value, bool):
        raise DomainError(f"not a rational: {value!r}")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise DomainError(f"not an exact rational literal: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not an exact rational literal: {value!r}") from exc
    raise DomainError(f"not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    """Canonical ``"p/q"`` text, always with an explicit denominator."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


# -- big floats ------------------------------------------------------------


@lru_cache(maxsize=None)
def bigfloat_context(precision: int = DEFAULT_PRECISION) -> mpmath.MPContext:
    """Return a dedicated mpmath context working at ``precision`` bits.

    Contexts are cached per precision and must not be mutated by callers.
    """
    if precision < 64:
        raise DomainError(f"precision must be >= 64 bits, got {precision}")
    ctx = mpmath.MPContext()
    ctx.prec = precision
    return ctx


def to_bigfloat(value: RationalLike, ctx: mpmath.MPContext):
    """Correctly rounded (to nearest) conversion of a rational into ``ctx``."""
    r = as_rational(value)
    return ctx.make_mpf(from_rational(r.numerator, r.denominator, ctx.prec, round_nearest))


def bigfloat_to_rational(x) -> Fraction:
    """Exact rational value of a finite mpmath float."""
    return Fraction(*to_rational(x._mpf_))


# -- polynomials ------------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial with exact coefficients, ``coeffs[k]`` multiplies ``t**k``."""

    coeffs: tuple = ()

    def __post_init__(self):
        cs = [Fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, k: int, scale: RationalLike = 1) -> "Polynomial":
        return cls((0,) * k + (Fraction(scale),))

    @classmethod
    def constant(cls, c: RationalLike) -> "Polynomial":
        return cls((Fraction(c),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_monic(self) -> bool:
        return self.lead == 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __call__(self, x: RationalLike) -> Fraction:
        return poly_eval(self, x)

    def derivative(self) -> "Polynomial":
        return poly_derivative(self)

    def shift(self, k: int = 1) -> "Polynomial":
        """Multiply by ``t**k``."""
        if not self.coeffs:
            return self
        return Polynomial((0,) * k + self.coeffs)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(self.coeff(k) + other.coeff(k) for k in range(n)))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if not self.coeffs or not other.coeffs:
                return Polynomial()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in enumerate(other.coeffs):
                        out[i + j] += a * b
            return Polynomial(tuple(out))
        if isinstance(other, (int, Fraction)):
            return Polynomial(tuple(c * other for c in self.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Polynomial({[format_rational(c) for c in self.coeffs]})"


def poly_eval(p: Polynomial, x: RationalLike) -> Fraction:
    """Horner evaluation, exact."""
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_derivative(p: Polynomial) -> Polynomial:
    return Polynomial(tuple(k * c for k, c in enumerate(p.coeffs) if k > 0))


# -- banded matrices --------------------------------------------------------


def _is_bigfloat(x) -> bool:
    return isinstance(x, mpmath.ctx_mp_python.mpf)


@dataclass(frozen=True)
class BandedMatrix:
    """Square matrix stored by diagonals.

    ``diags[d]`` holds the entries ``(i, i + d)``; ``d`` runs from ``-lo`` to
    ``hi``.  Diagonal ``d`` has ``n - |d|`` entries.
    """

    n: int
    lo: int
    hi: int
    diags: dict = field(compare=False)
    kind: str = "rational"

    def __post_init__(self):
        extra = set(self.diags) - set(range(-self.lo, self.hi + 1))
        if extra:
            raise DimensionMismatch(f"diagonals {sorted(extra)} outside declared band")
        diags = {}
        for d in range(-self.lo, self.hi + 1):
            vals = self.diags.get(d)
            want = max(self.n - abs(d), 0)
            if vals is None:
                diags[d] = (Fraction(0),) * want
            elif len(vals) != want:
                raise DimensionMismatch(f"diagonal {d} has {len(vals)} entries, expected {want}")
            else:
                diags[d] = tuple(vals)
        object.__setattr__(self, "diags", diags)

    def __eq__(self, other):
        if not isinstance(other, BandedMatrix):
            return NotImplemented
        return self.n == other.n and self.to_dense() == other.to_dense()

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], lo: int | None = None, hi: int | None = None,
                   kind: str | None = None) -> "BandedMatrix":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix is not square")
        if lo is None:
            lo = max([i - j for i in range(n) for j in range(n) if rows[i][j] != 0], default=0)
            lo = max(lo, 0)
        if hi is None:
            hi = max([j - i for i in range(n) for j in range(n) if rows[i][j] != 0], default=0)
            hi = max(hi, 0)
        for i in range(n):
            for j in range(n):
                if (j - i > hi or i - j > lo) and rows[i][j] != 0:
                    raise DimensionMismatch(f"entry ({i},{j}) lies outside band ({lo},{hi})")
        diags = {d: tuple(rows[i][i + d] for i in range(max(0, -d), min(n, n - d)))
                 for d in range(-lo, hi + 1)}
        if kind is None:
            kind = "bigfloat" if any(_is_bigfloat(x) for r in rows for x in r) else "rational"
        return cls(n, lo, hi, diags, kind)

    @classmethod
    def identity(cls, n: int) -> "BandedMatrix":
        return cls(n, 0, 0, {0: (Fraction(1),) * n})

    def entry(self, i: int, j: int):
        d = j - i
        if d > self.hi or -d > self.lo:
            return Fraction(0)
        return self.diags[d][min(i, j)]

    def to_dense(self) -> list[list]:
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    def transpose(self) -> "BandedMatrix":
        return BandedMatrix(self.n, self.hi, self.lo, {-d: v for d, v in self.diags.items()}, self.kind)

    def leading(self, m: int) -> "BandedMatrix":
        """Leading ``m`` x ``m`` block."""
        m = min(m, self.n)
        lo, hi = min(self.lo, max(m - 1, 0)), min(self.hi, max(m - 1, 0))
        return BandedMatrix(m, lo, hi, {d: self.diags[d][: m - abs(d)] for d in range(-lo, hi + 1)},
                            self.kind)

    def is_symmetric(self) -> bool:
        return all(self.entry(i, j) == self.entry(j, i)
                   for i in range(self.n) for j in range(i + 1, min(self.n, i + self.hi + 1)))

    def map(self, fn, kind: str | None = None) -> "BandedMatrix":
        return BandedMatrix(self.n, self.lo, self.hi,
                            {d: tuple(fn(x) for x in v) for d, v in self.diags.items()},
                            kind or self.kind)


def band_mul(a: BandedMatrix, b: BandedMatrix) -> BandedMatrix:
    """Product of two banded matrices; bandwidths add and are clipped to ``n - 1``."""
    if a.n != b.n:
        raise DimensionMismatch(f"dimension mismatch: {a.n} vs {b.n}")
    if a.kind != b.kind:
        raise DimensionMismatch(f"scalar kind mismatch: {a.kind} vs {b.kind}")
    n = a.n
    lo = min(a.lo + b.lo, max(n - 1, 0))
    hi = min(a.hi + b.hi, max(n - 1, 0))
    diags = {}
    for d in range(-lo, hi + 1):
        vals = []
        for i in range(max(0, -d), min(n, n - d)):
            j = i + d
            acc = None
            for k in range(max(i - a.lo, j - b.hi, 0), min(i + a.hi, j + b.lo, n - 1) + 1):
                term = a.entry(i, k) * b.entry(k, j)
                acc = term if acc is None else acc + term
            vals.append(Fraction(0) if acc is None else acc)
        diags[d] = tuple(vals)
    return BandedMatrix(n, lo, hi, diags, a.kind)


# -- exact dense linear algebra ---------------------------------------------


def _integer_rows(a: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction] | None):
    rows = []
    for i, row in enumerate(a):
        full = [Fraction(x) for x in row] + ([Fraction(rhs[i])] if rhs is not None else [])
        scale = math.lcm(*(x.denominator for x in full)) if full else 1
        rows.append([x.numerator * (scale // x.denominator) for x in full])
    return rows


def _bareiss(m: list[list[int]], ncols: int) -> tuple[list[list[int]], int]:
    """In-place fraction-free elimination over the first ``ncols`` columns.

    Returns the echelon matrix and the row-swap sign.
    """
    n = len(m)
    sign = 1
    prev = 1
    for k in range(min(n, ncols)):
        p = next((r for r in range(k, n) if m[r][k] != 0), None)
        if p is None:
            raise SingularMatrix(k)
        if p != k:
            m[k], m[p] = m[p], m[k]
            sign = -sign
        piv = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, len(row_i)):
                row_i[j] = (row_i[j] * piv - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = piv
    return m, sign


def solve_linear(a: Sequence[Sequence[RationalLike]], rhs: Sequence[RationalLike]) -> list[Fraction]:
    """Solve ``a x = rhs`` exactly.

    Rows are scaled to integers and eliminated with Bareiss' fraction-free
    scheme, pivoting on the first nonzero entry of each column.

    Raises
    ------
    SingularMatrix
        If some column has no nonzero pivot.
    """
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatch("coefficient matrix is not square")
    if len(rhs) != n:
        raise DimensionMismatch("right-hand side has wrong length")
    if n == 0:
        return []
    m, _ = _bareiss(_integer_rows(a, rhs), n)
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(m[i][n])
        for j in range(i + 1, n):
            acc -= m[i][j] * x[j]
        x[i] = acc / m[i][i]
    return x


def det(a: Sequence[Sequence[RationalLike]]) -> Fraction:
    """Exact determinant via Bareiss elimination."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    rows = [[Fraction(x) for x in row] for row in a]
    scales = [math.lcm(*(x.denominator for x in row)) for row in rows]
    ints = [[x.numerator * (s // x.denominator) for x in row] for row, s in zip(rows, scales)]
    try:
        m, sign = _bareiss(ints, n)
    except SingularMatrix:
        return Fraction(0)
    return Fraction(sign * m[n - 1][n - 1], math.prod(scales))
