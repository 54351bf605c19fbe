"""Brute-force reference constructions.

Nothing here calls into the main solve or multiply routines: determinants use
their own plain Gaussian elimination on Fractions and products use a naive
dense triple loop.  Slow on purpose.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import NotRegular
from .scalars import BandedMatrix, Polynomial, band_mul

__all__ = ["OracleReport", "heine_polynomial", "check_orthogonality", "dense_mul_check", "oracle_det"]


@dataclass
class OracleReport:
    checks: int = 0
    failure: str | None = None
    norms_sq: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failure is None


def oracle_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = -result
        result *= m[c][c]
        for r in range(c + 1, n):
            factor = m[r][c] / m[c][c]
            if factor:
                for k in range(c, n):
                    m[r][k] -= factor * m[c][k]
    return result


def heine_polynomial(g, n: int) -> Polynomial:
    """Monic degree-``n`` orthogonal polynomial as a ratio of bordered Gram determinants.

    ``P_n(t) = det [[G(i, j)]_{i<n}; [1, t, .., t^n]] / det G_n``; the
    coefficient of ``t^k`` is a signed cofactor of the bordered matrix.
    """
    for k in range(1, n + 1):
        if oracle_det([[g.entry(i, j) for j in range(k)] for i in range(k)]) == 0:
            raise NotRegular(k)
    if n == 0:
        return Polynomial.constant(1)
    top = [[g.entry(i, j) for j in range(n + 1)] for i in range(n)]
    denom = oracle_det([row[:n] for row in top])
    coeffs = []
    for k in range(n + 1):
        minor = [[row[j] for j in range(n + 1) if j != k] for row in top]
        coeffs.append((-1) ** (n + k) * oracle_det(minor) / denom)
    return Polynomial(tuple(coeffs))


def _pair(g, f: Polynomial, h: Polynomial) -> Fraction:
    total = Fraction(0)
    for i in range(len(f.coeffs)):
        for j in range(len(h.coeffs)):
            total += f.coeffs[i] * h.coeffs[j] * g.entry(i, j)
    return total


def check_orthogonality(g, polys: Sequence[Polynomial]) -> OracleReport:
    """``form(P_n, t^k) = 0`` for every ``k < n``, recording ``form(P_n, P_n)``."""
    report = OracleReport()
    for n, p in enumerate(polys):
        for k in range(n):
            v = _pair(g, p, Polynomial.monomial(k))
            report.checks += 1
            if v != 0 and report.failure is None:
                report.failure = f"orthogonality fails at (n={n}, k={k}): {v}"
        report.norms_sq.append(_pair(g, p, p))
    return report


def dense_mul_check(a: BandedMatrix, b: BandedMatrix) -> OracleReport:
    """Compare :func:`band_mul` entrywise with a naive dense product."""
    report = OracleReport()
    n = a.n
    da, db = a.to_dense(), b.to_dense()
    fast = band_mul(a, b)
    for i in range(n):
        for j in range(n):
            slow = sum((da[i][k] * db[k][j] for k in range(n)), Fraction(0))
            report.checks += 1
            if fast.entry(i, j) != slow and report.failure is None:
                report.failure = f"product differs at ({i},{j}): {fast.entry(i, j)} != {slow}"
    return report
