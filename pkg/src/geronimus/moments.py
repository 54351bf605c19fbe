"""Moment functionals and the Gram entries of the transformed bilinear forms.

Every form exposes ``entry(i, j)``, the value of the form on ``(t**i, t**j)``.
That single method is all the downstream machinery consumes.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DomainError, IndexOutOfRange
from .scalars import RationalLike, as_rational, det, format_rational

__all__ = [
    "MomentFunctional",
    "GeronimusMoments1",
    "GeronimusMoments2",
    "DividedMeasure",
    "laguerre_moments",
    "laguerre_head",
    "custom_moments",
    "geronimus1_moments",
    "geronimus2_moments",
    "divided_measure",
    "moments_to_json",
    "moments_from_json",
]


class MomentFunctional:
    """Lazily generated moment sequence ``s_k``.

    ``gen(k)`` must be deterministic.  Generated values are cached under a
    lock so one instance may be shared between threads.
    """

    def __init__(self, gen: Callable[[int], Fraction], label: str = "", length: int | None = None):
        self._gen = gen
        self._cache: dict[int, Fraction] = {}
        self._lock = threading.Lock()
        self.label = label
        self.length = length

    def moment(self, k: int) -> Fraction:
        if k < 0:
            raise IndexOutOfRange(k, self.length or 0)
        if self.length is not None and k >= self.length:
            raise IndexOutOfRange(k, self.length)
        with self._lock:
            value = self._cache.get(k)
            if value is None:
                value = Fraction(self._gen(k))
                self._cache[k] = value
        return value

    def moments(self, count: int) -> list[Fraction]:
        return [self.moment(k) for k in range(count)]

    def entry(self, i: int, j: int) -> Fraction:
        return self.moment(i + j)

    def hankel_positive(self, size: int) -> bool:
        """True if every leading principal minor of ``(s_{i+j})`` up to ``size`` is positive."""
        return all(
            det([[self.moment(i + j) for j in range(k)] for i in range(k)]) > 0
            for k in range(1, size + 1)
        )

    def __repr__(self) -> str:
        return f"MomentFunctional({self.label!r})"


def laguerre_moments(alpha: RationalLike) -> MomentFunctional:
    """Probability-normalized Laguerre moments ``s_k = (alpha + 1)_k``."""
    alpha = as_rational(alpha)
    if alpha <= -1:
        raise DomainError(f"Laguerre parameter must exceed -1, got {alpha}")

    def gen(k: int) -> Fraction:
        out = Fraction(1)
        for j in range(1, k + 1):
            out *= alpha + j
        return out

    return MomentFunctional(gen, label=f"laguerre(alpha={format_rational(alpha)})")


def laguerre_head(alpha: RationalLike, order: int) -> list[Fraction]:
    """Leading moments of ``t**(alpha - order) e**-t / Gamma(alpha + 1)``.

    These complete the Laguerre moments into the moments of the measure
    divided by ``t**order``.  Finite only for ``alpha > order - 1``.
    """
    alpha = as_rational(alpha)
    if alpha <= order - 1:
        raise DomainError(f"divided measure of order {order} needs alpha > {order - 1}")
    head = []
    for k in range(order):
        denom = Fraction(1)
        for j in range(k + 1 - order, 1):
            denom *= alpha + j
        head.append(1 / denom)
    return head


def custom_moments(values: Sequence[RationalLike], label: str = "custom") -> MomentFunctional:
    vals = [as_rational(v) for v in values]
    if not vals:
        raise DomainError("moment list must be non-empty")
    return MomentFunctional(lambda k: vals[k], label=label, length=len(vals))


@dataclass(frozen=True)
class GeronimusMoments1:
    """Form with ``[t f, g] = (f, g)_0``; its moment sequence is ``(s0*, s_0, s_1, ...)``."""

    base: MomentFunctional
    s0_star: Fraction

    def moment(self, k: int) -> Fraction:
        return self.s0_star if k == 0 else self.base.moment(k - 1)

    def entry(self, i: int, j: int) -> Fraction:
        return self.moment(i + j)

    def as_functional(self) -> MomentFunctional:
        length = None if self.base.length is None else self.base.length + 1
        return MomentFunctional(self.moment, label=f"geronimus1({self.base.label})", length=length)


@dataclass(frozen=True)
class GeronimusMoments2:
    """Form with ``[t^2 f, g] = (f, g)_0`` and a free symmetric 2x2 corner."""

    base: MomentFunctional
    s0_ss: Fraction
    s1_ss: Fraction
    s2_ss: Fraction

    @property
    def corner(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.s0_ss, self.s1_ss, self.s2_ss)

    def entry(self, i: int, j: int) -> Fraction:
        if i < 2 and j < 2:
            return (self.s0_ss, self.s1_ss, self.s2_ss)[i + j]
        return self.base.moment(i + j - 2)


def geronimus1_moments(base: MomentFunctional, s0_star: RationalLike) -> GeronimusMoments1:
    return GeronimusMoments1(base, as_rational(s0_star))


def geronimus2_moments(base: MomentFunctional, s0_ss: RationalLike, s1_ss: RationalLike,
                       s2_ss: RationalLike) -> GeronimusMoments2:
    return GeronimusMoments2(base, as_rational(s0_ss), as_rational(s1_ss), as_rational(s2_ss))


@dataclass(frozen=True)
class DividedMeasure:
    """Moments ``m_k`` of ``mu / t**order``: caller-supplied head, then ``m_{k+order} = s_k``."""

    base: MomentFunctional
    order: int
    head: tuple = field(default=())

    def moment(self, k: int) -> Fraction:
        if k < self.order:
            return self.head[k]
        return self.base.moment(k - self.order)

    def integral(self, coeffs_f: Sequence[Fraction], coeffs_g: Sequence[Fraction]) -> Fraction:
        """``sum_ij f_i g_j m_{i+j}``, the integral of ``f g`` against the divided measure."""
        total = Fraction(0)
        for i, fi in enumerate(coeffs_f):
            if fi:
                for j, gj in enumerate(coeffs_g):
                    if gj:
                        total += fi * gj * self.moment(i + j)
        return total


def divided_measure(base: MomentFunctional, order: int, head: Sequence[RationalLike]) -> DividedMeasure:
    if order not in (1, 2):
        raise DomainError(f"order must be 1 or 2, got {order}")
    if len(head) != order:
        raise DomainError(f"order {order} needs exactly {order} head moments, got {len(head)}")
    return DividedMeasure(base, order, tuple(as_rational(h) for h in head))


def moments_to_json(values: Sequence[Fraction]) -> str:
    return json.dumps([format_rational(v) for v in values])


def moments_from_json(text: str) -> list[Fraction]:
    data = json.loads(text)
    if not isinstance(data, list) or not data:
        raise DomainError("moment file must hold a non-empty JSON array")
    out = []
    for item in data:
        if not isinstance(item, (str, int)) or isinstance(item, bool):
            raise DomainError(f"moment entries must be 'p/q' strings, got {item!r}")
        out.append(as_rational(item))
    return out
