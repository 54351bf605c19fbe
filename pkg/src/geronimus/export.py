"""Serialization: exact ``p/q`` strings in JSON/CSV, decimal on request, LaTeX polynomials."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Callable

from .double import DoubleTransform, SobolevMassMatrix
from .scalars import BandedMatrix, Polynomial, bigfloat_context, format_rational, to_bigfloat
from .single import SingleTransform

Formatter = Callable[[object], str]


def rational_formatter(decimal_digits: int | None = None) -> Formatter:
    """Exact ``p/q`` text, or ``decimal_digits`` significant digits when given."""
    if decimal_digits is None:
        def fmt(x) -> str:
            if isinstance(x, (Fraction, int)):
                return format_rational(x)
            return str(x)
        return fmt

    bits = max(64, int(decimal_digits * 3.33) + 16)
    ctx = bigfloat_context(bits)

    def fmt_dec(x) -> str:
        if isinstance(x, (Fraction, int)):
            x = to_bigfloat(x, ctx)
        return ctx.nstr(x, decimal_digits)

    return fmt_dec


def polynomial_to_json(p: Polynomial, fmt: Formatter = format_rational) -> list[str]:
    return [fmt(c) for c in p.coeffs]


def polynomial_to_latex(p: Polynomial) -> str:
    """Descending powers, rational coefficients as ``\\frac``."""
    if not p.coeffs:
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if mag.denominator == 1:
            num = "" if (mag == 1 and k > 0) else str(mag.numerator)
        else:
            num = rf"\frac{{{mag.numerator}}}{{{mag.denominator}}}"
        var = "" if k == 0 else ("t" if k == 1 else f"t^{{{k}}}")
        parts.append((sign, num + var))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out


def banded_to_json(m: BandedMatrix, fmt: Formatter = format_rational) -> dict:
    return {
        "n": m.n,
        "lower": m.lo,
        "upper": m.hi,
        "diagonals": {str(d): [fmt(x) for x in m.diags[d]] for d in range(-m.lo, m.hi + 1)},
    }


def banded_to_csv(m: BandedMatrix, fmt: Formatter = format_rational) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    for row in m.to_dense():
        writer.writerow([fmt(x) for x in row])
    return buf.getvalue()


def _opt(mapping: dict, n: int, fmt: Formatter) -> str:
    return fmt(mapping[n]) if n in mapping else ""


def single_to_json(st: SingleTransform, fmt: Formatter = format_rational) -> dict:
    return {
        "kind": "single",
        "s0_star": fmt(st.s0_star),
        "N": st.n_max,
        "A": {str(n): fmt(v) for n, v in sorted(st.a.items())},
        "d_star": {str(n): fmt(v) for n, v in sorted(st.d_star.items())},
        "h_star_sq": [fmt(v) for v in st.h_star_sq],
        "P_star": [polynomial_to_json(p, fmt) for p in st.p_star],
    }


def double_to_json(dt: DoubleTransform, fmt: Formatter = format_rational,
                   mass: SobolevMassMatrix | None = None) -> dict:
    out = {
        "kind": "double",
        "corner": [fmt(x) for x in dt.corner],
        "N": dt.n_max,
        "B": {str(n): fmt(v) for n, v in sorted(dt.b.items())},
        "C": {str(n): fmt(v) for n, v in sorted(dt.c.items())},
        "d_ss": {str(n): fmt(v) for n, v in sorted(dt.d_ss.items())},
        "h_ss_sq": [fmt(v) for v in dt.h_ss_sq],
        "P_ss": [polynomial_to_json(p, fmt) for p in dt.p_ss],
    }
    if mass is not None:
        out["M"] = [[fmt(x) for x in row] for row in mass.m]
    return out


def transform_to_csv(t: SingleTransform | DoubleTransform, fmt: Formatter = format_rational) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    if isinstance(t, SingleTransform):
        writer.writerow(["n", "A_n", "d_star_n", "h_star_sq_n"])
        for n in range(t.n_max + 1):
            writer.writerow([n, _opt(t.a, n, fmt), _opt(t.d_star, n, fmt), fmt(t.h_star_sq[n])])
    else:
        writer.writerow(["n", "B_n", "C_n", "d_ss_n", "h_ss_sq_n"])
        for n in range(t.n_max + 1):
            writer.writerow([n, _opt(t.b, n, fmt), _opt(t.c, n, fmt), _opt(t.d_ss, n, fmt),
                             fmt(t.h_ss_sq[n])])
    return buf.getvalue()


def transform_to_latex(t: SingleTransform | DoubleTransform) -> str:
    if isinstance(t, SingleTransform):
        name, polys = "P^{*}", t.p_star
    else:
        name, polys = "P^{**}", t.p_ss
    return "".join(f"{name}_{{{n}}}(t) = {polynomial_to_latex(p)} \\\\\n" for n, p in enumerate(polys))


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
