"""Monic Jacobi matrices, their Darboux (UL/LU) factors, and symmetric Cholesky structure.

Conventions follow ``t P = J P`` for the column vector ``P = (P_0, P_1, ...)``:
row ``n`` of a monic Jacobi matrix holds ``(c_{n-1})^2, b_n, 1``.  The
connection ``P* = L_mon P`` makes ``L_mon`` unit lower triangular and the
expansion ``t P = U_mon P*`` (or ``t^2 P = U_mon P**``) makes ``U_mon`` upper.

Finite sections: a product ``U L`` of truncated factors is exact only on its
leading ``N - g`` block, where ``g`` is the upper bandwidth of ``U``.  ``L U``
of lower-times-upper truncations is exact everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .double import DoubleTransform
from .errors import DomainError, ExpansionResidual, MismatchAt, ToleranceExceeded, ZeroE
from .opcore import MonicOPS, bilinear, build_gram, monic_ops
from .report import CheckReport
from .scalars import (BandedMatrix, DEFAULT_PRECISION, Polynomial, band_mul, bigfloat_context,
                      to_bigfloat)
from .single import SingleTransform

__all__ = [
    "MonicJacobi",
    "DarbouxFactors",
    "CholeskyReport",
    "expand_in_basis",
    "build_monic_jacobi",
    "multiplication_matrix",
    "darboux_factors_single",
    "darboux_factors_double",
    "verify_darboux",
    "symmetric_cholesky_check",
]

Transform = Union[SingleTransform, DoubleTransform]


@dataclass(frozen=True)
class MonicJacobi:
    """Truncated matrix of multiplication by ``t**power`` in a monic basis."""

    matrix: BandedMatrix
    power: int = 1

    @property
    def N(self) -> int:
        return self.matrix.n

    def entry(self, i: int, j: int) -> Fraction:
        return self.matrix.entry(i, j)


def expand_in_basis(poly: Polynomial, basis: Sequence[Polynomial]) -> list[Fraction]:
    """Coefficients of ``poly`` in a monic basis with ``deg basis[k] = k``."""
    if poly.degree >= len(basis):
        raise DomainError(f"degree {poly.degree} exceeds basis of size {len(basis)}")
    coeffs = [Fraction(0)] * len(basis)
    rem = poly
    for k in range(poly.degree, -1, -1):
        ck = rem.coeff(k)
        if ck:
            coeffs[k] = ck
            rem = rem - ck * basis[k]
    if rem.coeffs:
        raise ExpansionResidual(poly.degree, "non-monic basis")
    return coeffs


def build_monic_jacobi(ops: MonicOPS, N: int) -> MonicJacobi:
    """``N x N`` section of ``J_mon`` from the recurrence data of a Hankel family."""
    if ops.b is None or len(ops.b) < N:
        raise DomainError(f"recurrence data available for {0 if ops.b is None else len(ops.b)} rows, need {N}")
    diags = {0: tuple(ops.b[:N])}
    if N > 1:
        diags[1] = (Fraction(1),) * (N - 1)
        diags[-1] = tuple(ops.c_sq[: N - 1])
    lo = hi = 1 if N > 1 else 0
    return MonicJacobi(BandedMatrix(N, lo, hi, diags), 1)


def multiplication_matrix(polys: Sequence[Polynomial], N: int, power: int) -> MonicJacobi:
    """Matrix of multiplication by ``t**power`` in the monic basis ``polys``.

    Row ``n`` expands ``t**power P_n`` over ``polys[: n + power + 1]``; the
    family must reach degree ``N - 1 + power``.  Coefficients below
    ``n - power`` must vanish (orthogonality), else :class:`ExpansionResidual`.
    """
    if len(polys) < N + power:
        raise DomainError(f"need polynomials up to degree {N - 1 + power}")
    rows = []
    for n in range(N):
        coeffs = expand_in_basis(polys[n].shift(power), polys[: n + power + 1])
        if any(coeffs[k] for k in range(max(n - power, 0))):
            raise ExpansionResidual(n, f"t^{power} P_{n} leaves the band")
        rows.append(coeffs)
    band = min(power, max(N - 1, 0))
    dense = [[rows[i][j] if j < len(rows[i]) else Fraction(0) for j in range(N)] for i in range(N)]
    return MonicJacobi(BandedMatrix.from_dense(dense, band, band), power)


@dataclass(frozen=True)
class DarbouxFactors:
    """``L_mon`` (unit lower) and ``U_mon`` (upper) for a single or double step.

    ``u_coeffs`` maps names to dicts keyed by index: ``F`` for a single step,
    ``D`` and ``E`` for a double step.
    """

    kind: str
    l_mon: BandedMatrix
    u_mon: BandedMatrix
    u_coeffs: dict = field(default_factory=dict)

    @property
    def guard(self) -> int:
        return 1 if self.kind == "single" else 2


def darboux_factors_single(base_ops: MonicOPS, st: SingleTransform, N: int) -> DarbouxFactors:
    """``L_mon`` from ``A_n``; ``U_mon`` from ``t P_n = P*_{n+1} + F_{n+1} P*_n``."""
    if st.n_max < N or base_ops.degree < N - 1:
        raise DomainError(f"single transform must reach degree {N}")
    f: dict[int, Fraction] = {}
    for n in range(N):
        coeffs = expand_in_basis(base_ops.polys[n].shift(), st.p_star[: n + 2])
        if any(coeffs[:n]):
            raise ExpansionResidual(n, "t P_n has components below P*_n")
        f[n + 1] = coeffs[n]
    l_mon = BandedMatrix(N, 1, 0, {0: (Fraction(1),) * N, -1: tuple(st.a[n] for n in range(1, N))})
    u_mon = BandedMatrix(N, 0, 1, {0: tuple(f[n] for n in range(1, N + 1)), 1: (Fraction(1),) * (N - 1)})
    return DarbouxFactors("single", l_mon, u_mon, {"F": f})


def darboux_factors_double(base_ops: MonicOPS, dt: DoubleTransform, N: int) -> DarbouxFactors:
    """``L_mon`` from ``B_n, C_n``; ``U_mon`` from ``t^2 P_n = P**_{n+2} + D_{n+1} P**_{n+1} + E_{n+1} P**_n``.

    Raises
    ------
    ZeroE
        If some ``E_{n+1}`` vanishes.
    """
    if dt.n_max < N + 1 or base_ops.degree < N - 1:
        raise DomainError(f"double transform must reach degree {N + 1}")
    d: dict[int, Fraction] = {}
    e: dict[int, Fraction] = {}
    for n in range(N):
        coeffs = expand_in_basis(base_ops.polys[n].shift(2), dt.p_ss[: n + 3])
        if any(coeffs[:n]):
            raise ExpansionResidual(n, "t^2 P_n has components below P**_n")
        if coeffs[n] == 0:
            raise ZeroE(n)
        e[n + 1], d[n + 1] = coeffs[n], coeffs[n + 1]
    l_mon = BandedMatrix(N, 2, 0, {
        0: (Fraction(1),) * N,
        -1: tuple(dt.b[n] for n in range(1, N)),
        -2: tuple(dt.c[n] for n in range(2, N)),
    })
    u_mon = BandedMatrix(N, 0, 2, {
        0: tuple(e[n] for n in range(1, N + 1)),
        1: tuple(d[n] for n in range(1, N)),
        2: (Fraction(1),) * (N - 2),
    })
    return DarbouxFactors("double", l_mon, u_mon, {"D": d, "E": e})


def _compare(lhs: BandedMatrix, rhs: BandedMatrix, size: int, identity: str) -> int:
    checks = 0
    for i in range(size):
        for j in range(size):
            a, b = lhs.entry(i, j), rhs.entry(i, j)
            if a != b:
                raise MismatchAt(i, j, a, b, identity)
            checks += 1
    return checks


def verify_darboux(j: MonicJacobi, f: DarbouxFactors, target: MonicJacobi) -> CheckReport:
    """Check ``U L = J`` (or ``J^2``) and ``L U = target`` on the leading ``N - g`` block.

    ``target`` is ``J*_mon`` for a single step and ``J**_mon`` for a double
    step.  Raises :class:`MismatchAt` at the first differing entry in
    row-major order, ``U L`` first.
    """
    g = f.guard
    N = f.l_mon.n
    if N <= g:
        raise DomainError(f"N={N} leaves no block outside the guard band {g}")
    if j.N != N or target.N != N:
        raise DomainError("all matrices must share the truncation size")
    size = N - g
    ul = band_mul(f.u_mon, f.l_mon)
    lu = band_mul(f.l_mon, f.u_mon)
    if f.kind == "single":
        checks = _compare(ul, j.matrix, size, "J_mon = U_mon L_mon")
        checks += _compare(lu, target.matrix, size, "J*_mon = L_mon U_mon")
    else:
        checks = _compare(ul, band_mul(j.matrix, j.matrix), size, "J_mon^2 = U_mon L_mon")
        checks += _compare(lu, target.matrix, size, "J**_mon = L_mon U_mon")
    return CheckReport(f"Darboux ({f.kind})", checks, {"block": size})


@dataclass(frozen=True)
class CholeskyReport:
    kind: str
    residual: object
    tolerance: object
    psi_residual: object
    exact_checks: int
    precision: int
    l_factor: BandedMatrix = field(repr=False)
    j_symmetric: BandedMatrix = field(repr=False)


def _cholesky_data(transform: Transform, base_ops: MonicOPS, N: int):
    """Per-kind rational ingredients: coefficient table, transformed norms, power, polys."""
    if isinstance(transform, SingleTransform):
        coeff = {(n + 1, n): transform.a[n + 1] for n in range(N - 1)}
        return "single", coeff, transform.h_star_sq, 1, transform.p_star
    coeff = {}
    for n in range(N - 1):
        coeff[(n + 1, n)] = transform.b[n + 1]
        if n + 2 < N:
            coeff[(n + 2, n)] = transform.c[n + 2]
    return "double", coeff, transform.h_ss_sq, 2, transform.p_ss


def symmetric_cholesky_check(transform: Transform, base_ops: MonicOPS, N: int,
                             precision: int = DEFAULT_PRECISION) -> CholeskyReport:
    """Check the structured Cholesky factorization of the symmetric ``J*`` or ``J**``.

    ``J*`` (resp. ``J**``) is assembled from Gram evaluations
    ``[t^k P_n, P_m] / (h_n h_m)``; ``L`` is assembled from the connection
    coefficients alone, ``L[n][n] = h_n / h_n*`` and
    ``L[n+k][n] = coeff_{n+k} h_n / h_{n+k}*``.  The floating residual must
    not exceed ``2**(-precision/2)``.  Every entry is also checked exactly in
    rational form: ``(L L^T)[i][j] * h_i* h_j*`` is rational and must equal
    the Gram numerator, and the norm chains must agree with direct
    evaluation.  For a single step, the similarity by
    ``Psi = diag(1, c_0*, c_0* c_1*, ...)`` is checked to symmetrize ``J*_mon``.
    """
    kind, coeff, hs_sq, power, polys = _cholesky_data(transform, base_ops, N)
    h_sq = base_ops.norms_sq
    if len(polys) < N + (power - 1) or len(h_sq) < N:
        raise DomainError("transform too short for the requested section")
    if any(x <= 0 for x in h_sq[:N]) or any(x <= 0 for x in hs_sq[:N]):
        raise DomainError("Cholesky structure needs positive definite forms")
    form = transform.form
    ctx = bigfloat_context(precision)
    tol = ctx.ldexp(ctx.mpf(1), -(precision // 2))

    # rational middle matrix [t^power P_n, P_m] and exact entry check
    exact_checks = 0
    band = power
    middle = {}
    for n in range(N):
        for m in range(max(0, n - band), min(N, n + band + 1)):
            middle[(n, m)] = bilinear(form, polys[n].shift(power), polys[m])
    for n in range(N):
        for m in range(N):
            if abs(n - m) > band:
                continue
            # numerator of (L L^T)[n][m] h_n* h_m*: sum_k coeff(n,k) coeff(m,k) h_k^2
            num = Fraction(0)
            for k in range(max(0, n - band, m - band), min(n, m) + 1):
                cn = Fraction(1) if k == n else coeff.get((n, k), Fraction(0))
                cm = Fraction(1) if k == m else coeff.get((m, k), Fraction(0))
                num += cn * cm * h_sq[k]
            if num != middle[(n, m)]:
                raise MismatchAt(n, m, num, middle[(n, m)], f"Cholesky numerator ({kind})")
            exact_checks += 1
    for n in range(N):
        direct = bilinear(form, polys[n], polys[n])
        if direct != hs_sq[n]:
            raise MismatchAt(n, n, hs_sq[n], direct, "transformed norm chain")
        exact_checks += 1

    h = [ctx.sqrt(to_bigfloat(x, ctx)) for x in h_sq[:N]]
    hs = [ctx.sqrt(to_bigfloat(x, ctx)) for x in hs_sq[:N]]
    l_dense = [[ctx.zero] * N for _ in range(N)]
    for n in range(N):
        l_dense[n][n] = h[n] / hs[n]
    for (r, c), val in coeff.items():
        l_dense[r][c] = to_bigfloat(val, ctx) * h[c] / hs[r]
    j_dense = [[ctx.zero] * N for _ in range(N)]
    for (n, m), val in middle.items():
        j_dense[n][m] = to_bigfloat(val, ctx) / (hs[n] * hs[m])

    l_mat = BandedMatrix.from_dense(l_dense, power if N > 1 else 0, 0, kind="bigfloat")
    j_mat = BandedMatrix.from_dense(j_dense, min(band, N - 1), min(band, N - 1), kind="bigfloat")
    llt = band_mul(l_mat, l_mat.transpose())
    residual = ctx.zero
    for i in range(N):
        for k in range(N):
            diff = llt.entry(i, k) - j_mat.entry(i, k)
            residual = max(residual, abs(ctx.convert(diff)))
    if residual > tol:
        raise ToleranceExceeded(residual, tol, f"J - L L^T ({kind})")

    psi_residual = None
    if kind == "single":
        psi_residual = _psi_residual(transform, N, ctx, j_mat)
        if psi_residual > tol:
            raise ToleranceExceeded(psi_residual, tol, "Psi-similarity")
    return CholeskyReport(kind, residual, tol, psi_residual, exact_checks, precision, l_mat, j_mat)


def _psi_residual(st: SingleTransform, N: int, ctx, j_sym: BandedMatrix):
    """Max deviation of ``Psi^-1 J*_mon Psi`` from both symmetry and the Gram-built ``J*``."""
    star_ops = monic_ops(build_gram(st.form, N))
    j_mon = build_monic_jacobi(star_ops, N)
    psi = [ctx.one]
    for n in range(N - 1):
        psi.append(psi[-1] * ctx.sqrt(to_bigfloat(star_ops.c_sq[n], ctx)))
    worst = ctx.zero
    for i in range(N):
        for k in range(max(0, i - 1), min(N, i + 2)):
            sim = to_bigfloat(j_mon.entry(i, k), ctx) * psi[k] / psi[i]
            sim_t = to_bigfloat(j_mon.entry(k, i), ctx) * psi[i] / psi[k]
            worst = max(worst, abs(sim - sim_t), abs(sim - j_sym.entry(i, k)))
    return worst
