"""Command-line front end: ``geronimus transform | factorize | verify``."""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import click

from .double import sobolev_mass_matrix
from .errors import DomainError, GeronimusError, IndexOutOfRange, RegularityError
from .export import (banded_to_csv, banded_to_json, double_to_json, dumps, rational_formatter,
                     single_to_json, transform_to_csv, transform_to_latex)
from .factor import symmetric_cholesky_check, verify_darboux
from .moments import (MomentFunctional, custom_moments, divided_measure, laguerre_head,
                      laguerre_moments, moments_from_json)
from .opcore import build_gram, regularity_check
from .pipeline import SuiteConfig, factorize_double, factorize_single, run_double, run_single, verify_suite
from .scalars import DEFAULT_PRECISION, as_rational, band_mul, bigfloat_context

PRECISION_ENV = "GERONIMUS_PRECISION"
EXIT_REGULARITY, EXIT_VERIFY = 3, 1  # click reports usage errors with 2


@dataclass(frozen=True)
class RunConfig:
    moments: MomentFunctional
    kind: str
    params: tuple
    N: int
    fmt: str
    precision: int
    output: Path | None
    decimal: int | None
    head: tuple | None


def _rational(text: str, what: str) -> Fraction:
    try:
        return as_rational(text.strip())
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"{text!r} is not an exact rational ({exc})", param_hint=what)


def _load_custom(path: str | None) -> MomentFunctional:
    if path is None:
        raise click.UsageError("--measure custom needs --file")
    try:
        values = moments_from_json(Path(path).read_text())
    except OSError as exc:
        raise click.UsageError(f"cannot read {path}: {exc.strerror}")
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise click.UsageError(f"bad moments file {path}: {exc}")
    if not values:
        raise click.UsageError(f"moments file {path} is empty")
    return custom_moments(values, label=Path(path).name)


def _config(measure, alpha, file, kind, s0star, corner, n, fmt, precision, output, decimal) -> RunConfig:
    if n < 1:
        raise click.BadParameter("N must be at least 1", param_hint="--n")
    if precision is None:
        env = os.environ.get(PRECISION_ENV)
        try:
            precision = int(env) if env else DEFAULT_PRECISION
        except ValueError:
            raise click.UsageError(f"{PRECISION_ENV}={env!r} is not an integer")
    if precision < 64:
        raise click.BadParameter("precision must be at least 64 bits", param_hint="--precision")
    head = None
    if measure == "laguerre":
        a = _rational(alpha or "0", "--alpha")
        try:
            moments = laguerre_moments(a)
        except DomainError as exc:
            raise click.BadParameter(str(exc), param_hint="--alpha")
        if kind == "single" and a > 0:
            head = tuple(laguerre_head(a, 1))
        elif kind == "double" and a > 1:
            head = tuple(laguerre_head(a, 2))
    else:
        moments = _load_custom(file)

    if kind == "single":
        if s0star is not None:
            params = (_rational(s0star, "--s0star"),)
        elif head is not None:
            params = (head[0],)
        else:
            raise click.UsageError("--s0star is required unless the Laguerre parameter fixes it (alpha > 0)")
    else:
        if corner is not None:
            parts = corner.split(",")
            if len(parts) != 3:
                raise click.BadParameter("expected three values s0,s1,s2", param_hint="--corner")
            params = tuple(_rational(p, "--corner") for p in parts)
        elif head is not None:
            params = (head[0], head[1], moments.moment(0))
        else:
            raise click.UsageError("--corner is required unless the Laguerre parameter fixes it (alpha > 1)")
    return RunConfig(moments, kind, params, n, fmt, precision,
                     Path(output) if output else None, decimal, head)


def _options(fn):
    opts = [
        click.option("--measure", type=click.Choice(["laguerre", "custom"]), default="laguerre",
                     show_default=True),
        click.option("--alpha", default=None, help="Laguerre parameter, exact rational (default 0)."),
        click.option("--file", "file", default=None, help="JSON array of \"p/q\" moments (custom measure)."),
        click.option("--single/--double", "single", default=True, help="Transformation kind."),
        click.option("--s0star", default=None, help="Free parameter of the single step."),
        click.option("--corner", default=None, help="s0**,s1**,s2** for the double step."),
        click.option("--n", "n", type=int, default=10, show_default=True, help="Largest degree N."),
        click.option("--format", "fmt", type=click.Choice(["csv", "json", "latex"]), default="csv",
                     show_default=True),
        click.option("--precision", type=int, default=None,
                     help=f"BigFloat bits (default ${PRECISION_ENV} or {DEFAULT_PRECISION})."),
        click.option("--output", default=None, help="Output file (transform) or directory (factorize)."),
        click.option("--decimal", type=int, default=None,
                     help="Emit decimals with this many significant digits instead of p/q."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _build(kw) -> RunConfig:
    return _config(kw["measure"], kw["alpha"], kw["file"], "single" if kw["single"] else "double",
                   kw["s0star"], kw["corner"], kw["n"], kw["fmt"], kw["precision"], kw["output"],
                   kw["decimal"])


def _regularity_exit(exc: RegularityError):
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_REGULARITY)


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        click.echo(text, nl=False)
    else:
        path.write_text(text, newline="")


@click.group()
def main():
    """Exact single and double Geronimus transformations."""


@main.command()
@_options
def transform(**kw):
    """Connection coefficients, certificates, norms and polynomials."""
    cfg = _build(kw)
    fmt = rational_formatter(cfg.decimal)
    try:
        if cfg.kind == "single":
            _, t = run_single(cfg.moments, cfg.params[0], cfg.N)
        else:
            _, t = run_double(cfg.moments, cfg.params, cfg.N)
    except RegularityError as exc:
        _regularity_exit(exc)
    except IndexOutOfRange as exc:
        raise click.UsageError(f"not enough moments for N={cfg.N}: {exc}")
    if cfg.fmt == "csv":
        text = transform_to_csv(t, fmt)
    elif cfg.fmt == "latex":
        text = transform_to_latex(t)
    elif cfg.kind == "single":
        text = dumps(single_to_json(t, fmt))
    else:
        mass = None
        if cfg.head is not None:
            mass = sobolev_mass_matrix(divided_measure(cfg.moments, 2, cfg.head), *cfg.params)
        text = dumps(double_to_json(t, fmt, mass))
    _emit(text, cfg.output)


@main.command()
@_options
def factorize(**kw):
    """Darboux factors L_mon, U_mon with the Jacobi matrices they relate."""
    cfg = _build(kw)
    fmt = rational_formatter(cfg.decimal)
    guard = 1 if cfg.kind == "single" else 2
    if cfg.N <= guard:
        raise click.BadParameter(f"N={cfg.N} leaves no block outside the guard band of {guard}",
                                 param_hint="--n")
    try:
        if cfg.kind == "single":
            fac = factorize_single(cfg.moments, cfg.params[0], cfg.N)
            mats = {"L_mon": fac.factors.l_mon, "U_mon": fac.factors.u_mon,
                    "J_mon": fac.jacobi.matrix, "J_star_mon": fac.target.matrix}
        else:
            fac = factorize_double(cfg.moments, cfg.params, cfg.N)
            mats = {"L_mon": fac.factors.l_mon, "U_mon": fac.factors.u_mon,
                    "J_mon": fac.jacobi.matrix, "J_mon_sq": band_mul(fac.jacobi.matrix, fac.jacobi.matrix),
                    "J_star_star_mon": fac.target.matrix}
    except RegularityError as exc:
        _regularity_exit(exc)
    except IndexOutOfRange as exc:
        raise click.UsageError(f"not enough moments for N={cfg.N}: {exc}")

    try:
        report = verify_darboux(fac.jacobi, fac.factors, fac.target)
    except AssertionError as exc:
        click.echo(f"verification failed: {exc}", err=True)
        sys.exit(EXIT_VERIFY)
    verification = {"darboux": "exact", "block": report.details["block"], "max_residual": "0"}
    base_pd = regularity_check(fac.base.ops.gram).positive_definite
    if base_pd and regularity_check(build_gram(fac.transform.form, cfg.N)).positive_definite:
        ch = symmetric_cholesky_check(fac.transform, fac.base.ops, cfg.N, cfg.precision)
        ctx = bigfloat_context(cfg.precision)
        verification["cholesky"] = {
            "exact_checks": ch.exact_checks,
            "precision": ch.precision,
            "residual": ctx.nstr(ch.residual, 10),
            "tolerance": ctx.nstr(ch.tolerance, 10),
        }
    doc = {
        "kind": cfg.kind,
        "N": cfg.N,
        "params": [fmt(p) for p in cfg.params],
        "matrices": {name: banded_to_json(m, fmt) for name, m in mats.items()},
        "verified": verification,
    }
    if cfg.output is None:
        _emit(dumps(doc) if cfg.fmt != "csv" else
              "".join(f"{name}\r\n{banded_to_csv(m, fmt)}\r\n" for name, m in mats.items()), None)
        return
    cfg.output.mkdir(parents=True, exist_ok=True)
    (cfg.output / "factors.json").write_text(dumps(doc))
    for name, m in mats.items():
        (cfg.output / f"{name}.csv").write_text(banded_to_csv(m, fmt), newline="")
    click.echo(f"verified: exact ({report.identity}, block {report.details['block']})")


@main.command()
@_options
@click.option("--corrupt", default=None, help="Fault injection, e.g. a:3, b:3 or c:3.")
def verify(corrupt, **kw):
    """Run the full invariant suite; exit 1 at the first failing identity."""
    cfg = _build(kw)
    bad = None
    if corrupt is not None:
        name, _, idx = corrupt.partition(":")
        if name not in ("a", "b", "c") or not idx.isdigit():
            raise click.BadParameter("expected a:<n>, b:<n> or c:<n>", param_hint="--corrupt")
        if (name == "a") != (cfg.kind == "single"):
            raise click.BadParameter(f"{name} does not belong to a {cfg.kind} transform",
                                     param_hint="--corrupt")
        bad = (name, int(idx))
    suite = SuiteConfig(cfg.moments, cfg.kind, cfg.params, cfg.N, cfg.precision, cfg.head, bad)
    try:
        results = list(verify_suite(suite))
    except RegularityError as exc:
        _regularity_exit(exc)
    except GeronimusError as exc:
        raise click.UsageError(str(exc))
    for r in results:
        click.echo(f"{'PASS' if r.ok else 'FAIL'}  {r.name}" + (f": {r.detail}" if r.detail else ""))
    if not results[-1].ok:
        click.echo(f"error: identity failed: {results[-1].name}", err=True)
        sys.exit(EXIT_VERIFY)


if __name__ == "__main__":
    main()
