"""End-to-end runs: base family, transform, factorization, and the invariant suite."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .double import (DoubleTransform, p_ss_determinant, sobolev_mass_matrix, transform_double,
                     verify_sobolev_vs_gram_2)
from .errors import GeronimusError, InternalConsistencyError
from .factor import (DarbouxFactors, MonicJacobi, build_monic_jacobi, darboux_factors_double,
                     darboux_factors_single, multiplication_matrix, symmetric_cholesky_check,
                     verify_darboux)
from .moments import MomentFunctional, divided_measure
from .opcore import (MonicOPS, SecondKindValues, build_gram, monic_ops, regularity_check,
                     second_kind)
from .oracle import check_orthogonality, heine_polynomial
from .scalars import DEFAULT_PRECISION, Polynomial
from .single import SingleTransform, p_star_determinant, transform_single, verify_mass_vs_gram_1

__all__ = [
    "Base",
    "prepare",
    "run_single",
    "run_double",
    "Factorization",
    "factorize_single",
    "factorize_double",
    "CheckResult",
    "SuiteConfig",
    "verify_suite",
]


@dataclass(frozen=True)
class Base:
    moments: MomentFunctional
    ops: MonicOPS
    sk: SecondKindValues


def prepare(moments: MomentFunctional, degree: int) -> Base:
    ops = monic_ops(build_gram(moments, degree))
    return Base(moments, ops, second_kind(moments, ops))


def run_single(moments: MomentFunctional, s0_star, n: int) -> tuple[Base, SingleTransform]:
    base = prepare(moments, n)
    return base, transform_single(base.ops, base.sk, s0_star, n)


def run_double(moments: MomentFunctional, corner: Sequence, n: int) -> tuple[Base, DoubleTransform]:
    base = prepare(moments, n)
    return base, transform_double(base.ops, base.sk, *corner, n)


@dataclass(frozen=True)
class Factorization:
    base: Base
    transform: SingleTransform | DoubleTransform
    jacobi: MonicJacobi
    factors: DarbouxFactors
    target: MonicJacobi


def factorize_single(moments: MomentFunctional, s0_star, N: int,
                     transform: SingleTransform | None = None) -> Factorization:
    base, st = run_single(moments, s0_star, N)
    st = transform or st
    target = build_monic_jacobi(monic_ops(build_gram(st.form, N)), N)
    return Factorization(base, st, build_monic_jacobi(base.ops, N),
                         darboux_factors_single(base.ops, st, N), target)


def factorize_double(moments: MomentFunctional, corner: Sequence, N: int,
                     transform: DoubleTransform | None = None) -> Factorization:
    base, dt = run_double(moments, corner, N + 1)
    dt = transform or dt
    target = multiplication_matrix(dt.p_ss, N, 2)
    return Factorization(base, dt, build_monic_jacobi(base.ops, N),
                         darboux_factors_double(base.ops, dt, N), target)


# -- invariant suite ----------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class SuiteConfig:
    moments: MomentFunctional
    kind: str
    params: tuple
    N: int
    precision: int = DEFAULT_PRECISION
    head: tuple | None = None
    corrupt: tuple[str, int] | None = None
    max_heine: int = 8


def _expect(cond: bool, what: str) -> None:
    if not cond:
        raise InternalConsistencyError(what)


def _corrupted(t, corrupt):
    if corrupt is None:
        return t
    name, n = corrupt
    if isinstance(t, SingleTransform):
        if name != "a" or n not in t.a:
            raise GeronimusError(f"cannot corrupt {name}:{n} in a single transform")
        return t.with_coefficient(n, t.a[n] + 1)
    table = {"b": t.b, "c": t.c}.get(name)
    if table is None or n not in table:
        raise GeronimusError(f"cannot corrupt {name}:{n} in a double transform")
    return t.with_coefficient(name, n, table[n] + 1)


def verify_suite(cfg: SuiteConfig) -> Iterator[CheckResult]:
    """Run every invariant for one instance, yielding results until the first failure.

    Regularity failures of the input propagate as exceptions; identity
    failures are yielded as a failed :class:`CheckResult` and end the run.
    """
    N = cfg.N
    degree = N + 1 if cfg.kind == "double" else N
    base = prepare(cfg.moments, degree)
    ops, sk = base.ops, base.sk
    if cfg.kind == "single":
        clean = transform_single(ops, sk, cfg.params[0], degree)
    else:
        clean = transform_double(ops, sk, *cfg.params, degree)
    t = _corrupted(clean, cfg.corrupt)

    checks: list[tuple[str, Callable[[], object]]] = []

    def add(name):
        def deco(fn):
            checks.append((name, fn))
            return fn
        return deco

    @add("base orthogonality (oracle)")
    def _():
        rep = check_orthogonality(ops.gram, ops.polys)
        _expect(rep.ok, rep.failure or "")
        _expect(list(rep.norms_sq) == list(ops.norms_sq), "norms disagree with oracle")

    @add("Heine determinant route = linear-solve route")
    def _():
        for n in range(min(cfg.max_heine, ops.degree) + 1):
            _expect(heine_polynomial(ops.gram, n) == ops.polys[n], f"Heine mismatch at n={n}")

    @add("norm chain h_n^2 = c_{n-1}^2 h_{n-1}^2")
    def _():
        for n in range(1, ops.degree + 1):
            _expect(ops.norms_sq[n] == ops.c_sq[n - 1] * ops.norms_sq[n - 1], f"n={n}")

    @add("second-kind degree and leading coefficient")
    def _():
        s0 = cfg.moments.moment(0)
        _expect(not sk.q[0].coeffs, "Q_0 must vanish")
        for n in range(1, ops.degree + 1):
            _expect(sk.q[n].degree == n - 1 and sk.q[n].lead == s0, f"Q_{n}")

    if cfg.kind == "single":
        _single_checks(add, cfg, base, t)
    else:
        _double_checks(add, cfg, base, t)

    for name, fn in checks:
        try:
            fn()
        except (GeronimusError, AssertionError) as exc:
            yield CheckResult(name, False, str(exc))
            return
        yield CheckResult(name, True)


def _single_checks(add, cfg: SuiteConfig, base: Base, st: SingleTransform) -> None:
    ops, sk, N = base.ops, base.sk, cfg.N
    s0_star = cfg.params[0]
    gram1 = build_gram(st.form, N)

    @add("Darboux J_mon = U L, J*_mon = L U")
    def _():
        if N >= 2:
            fac = factorize_single(cfg.moments, s0_star, N, transform=st)
            verify_darboux(fac.jacobi, fac.factors, fac.target)

    @add("connection shape P*_n = P_n + A_n P_{n-1}")
    def _():
        for n in range(1, st.n_max + 1):
            _expect(st.p_star[n] - ops.polys[n] - st.a[n] * ops.polys[n - 1] == Polynomial(),
                    f"n={n}")

    @add("determinant form of P*_n")
    def _():
        for n in range(1, st.n_max + 1):
            _expect(p_star_determinant(ops, sk, s0_star, n) == st.p_star[n], f"n={n}")

    @add("orthogonality of P* for [.,.]_1 (oracle)")
    def _():
        rep = check_orthogonality(gram1, st.p_star)
        _expect(rep.ok, rep.failure or "")

    @add("norm chain (h*_{n+1})^2 = A_{n+1} h_n^2")
    def _():
        rep = check_orthogonality(gram1, st.p_star)
        _expect(rep.norms_sq[0] == st.s0_star, "(h*_0)^2 = s0*")
        for n in range(st.n_max):
            _expect(rep.norms_sq[n + 1] == st.a[n + 1] * ops.norms_sq[n], f"n={n}")

    @add("positive definite [.,.]_1 implies A_n > 0")
    def _():
        if regularity_check(gram1).positive_definite:
            _expect(all(v > 0 for v in st.a.values()), "some A_n <= 0")

    @add("mass form = [.,.]_1 Gram, head-invariant")
    def _():
        head = cfg.head or (Fraction(0),)
        for h in (head, (head[0] + 1,)):
            verify_mass_vs_gram_1(divided_measure(cfg.moments, 1, h), s0_star, min(N, 8))

    @add("Cholesky J* = L L^T")
    def _():
        rep = regularity_check(gram1)
        if rep.positive_definite and regularity_check(ops.gram).positive_definite:
            symmetric_cholesky_check(st, ops, N, cfg.precision)


def _double_checks(add, cfg: SuiteConfig, base: Base, dt: DoubleTransform) -> None:
    ops, sk, N = base.ops, base.sk, cfg.N
    corner = dt.corner
    gram2 = build_gram(dt.form, dt.n_max)

    @add("Darboux J_mon^2 = U L, J**_mon = L U")
    def _():
        if N >= 3:
            fac = factorize_double(cfg.moments, corner, N, transform=dt)
            verify_darboux(fac.jacobi, fac.factors, fac.target)

    @add("connection shape P**_n = P_n + B_n P_{n-1} + C_n P_{n-2}")
    def _():
        for n in range(1, dt.n_max + 1):
            expect = ops.polys[n] + dt.b[n] * ops.polys[n - 1]
            if n >= 2:
                expect = expect + dt.c[n] * ops.polys[n - 2]
            _expect(dt.p_ss[n] == expect, f"n={n}")

    @add("system route = determinant route for P**_n")
    def _():
        for n in range(2, dt.n_max + 1):
            _expect(p_ss_determinant(ops, sk, corner, n) == dt.p_ss[n], f"n={n}")

    @add("orthogonality of P** for [.,.]_2 (oracle)")
    def _():
        rep = check_orthogonality(gram2, dt.p_ss)
        _expect(rep.ok, rep.failure or "")

    @add("norm chain (h**_{n+2})^2 = C_{n+2} h_n^2 and (h**_1)^2 closed form")
    def _():
        rep = check_orthogonality(gram2, dt.p_ss)
        s0, s1 = cfg.moments.moment(0), cfg.moments.moment(1)
        _expect(rep.norms_sq[0] == corner[0], "(h**_0)^2 = s0**")
        _expect(rep.norms_sq[1] == corner[2] + corner[1] * (dt.b[1] - s1 / s0), "(h**_1)^2")
        for n in range(dt.n_max - 1):
            _expect(rep.norms_sq[n + 2] == dt.c[n + 2] * ops.norms_sq[n], f"n={n}")

    @add("positive definite [.,.]_2 implies C_n > 0")
    def _():
        if regularity_check(gram2).positive_definite:
            _expect(all(v > 0 for v in dt.c.values()), "some C_n <= 0")

    @add("Sobolev form = [.,.]_2 Gram, head-invariant")
    def _():
        head = cfg.head or (Fraction(0), Fraction(0))
        for h in (head, (head[0] + 1, head[1] - 1)):
            div = divided_measure(cfg.moments, 2, h)
            verify_sobolev_vs_gram_2(div, corner, min(N, 8))
            mass = sobolev_mass_matrix(div, *corner)
            _expect(mass.m[0][1] == mass.m[1][0], "M symmetric")

    @add("Cholesky J** = L L^T")
    def _():
        g = build_gram(dt.form, N)
        if regularity_check(g).positive_definite and regularity_check(ops.gram).positive_definite:
            symmetric_cholesky_check(dt, ops, N, cfg.precision)

