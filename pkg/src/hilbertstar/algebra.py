"""Exact scalars and truncated power series in the deformation parameter hbar.

Scalars are :class:`fractions.Fraction` throughout.  A :class:`HbarSeries`
keeps the coefficients of ``hbar**0 .. hbar**order``; anything beyond
``order`` is unknown, so binary operations truncate to the smaller order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Union

Scalar = Fraction
ScalarLike = Union[Fraction, int, str]


def scalar(value: ScalarLike) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: they would smuggle rounding into an exact engine.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        if "/" in text:
            num, den = text.split("/", 1)
            if int(den) == 0:
                raise ZeroDivisionError(f"zero denominator in {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


def format_scalar(value: Fraction) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class HbarSeries:
    """Truncated formal power series ``sum_r coeffs[r] * hbar**r``."""

    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least the hbar^0 coefficient")
        object.__setattr__(self, "coeffs", tuple(scalar(c) for c in self.coeffs))

    @classmethod
    def constant(cls, value: ScalarLike, order: int) -> "HbarSeries":
        return cls((scalar(value),) + (Fraction(0),) * order)

    @classmethod
    def zero(cls, order: int) -> "HbarSeries":
        return cls.constant(0, order)

    @classmethod
    def one(cls, order: int) -> "HbarSeries":
        return cls.constant(1, order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, r: int) -> Fraction:
        return self.coeffs[r]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "HbarSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return HbarSeries(self.coeffs[: order + 1])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _coerce(self, other) -> "HbarSeries":
        if isinstance(other, HbarSeries):
            return other
        return HbarSeries.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        k = min(self.order, other.order)
        return HbarSeries(tuple(self.coeffs[r] + other.coeffs[r] for r in range(k + 1)))

    __radd__ = __add__

    def __neg__(self):
        return HbarSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, HbarSeries):
            c = scalar(other)
            return HbarSeries(tuple(c * a for a in self.coeffs))
        k = min(self.order, other.order)
        out = [Fraction(0)] * (k + 1)
        for i in range(k + 1):
            a = self.coeffs[i]
            if not a:
                continue
            for j in range(k + 1 - i):
                out[i + j] += a * other.coeffs[j]
        return HbarSeries(tuple(out))

    __rmul__ = __mul__

    def __str__(self):
        parts = []
        for r, c in enumerate(self.coeffs):
            if not c:
                continue
            if r == 0:
                parts.append(format_scalar(c))
            else:
                h = "hbar" if r == 1 else f"hbar^{r}"
                parts.append({1: h, -1: f"-{h}"}.get(c, f"{format_scalar(c)}*{h}"))
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"{body} + O(hbar^{self.order + 1})"


def series_add(a: HbarSeries, b: HbarSeries) -> HbarSeries:
    return a + b


def series_mul(a: HbarSeries, b: HbarSeries) -> HbarSeries:
    return a * b


def series_exp(s: ScalarLike, order: int) -> HbarSeries:
    """``exp(s * hbar)`` through ``hbar**order``: coefficients ``s**r / r!``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    s = scalar(s)
    return HbarSeries(tuple(s**r / factorial(r) for r in range(order + 1)))


def series_sum(items: Iterable[HbarSeries], order: int) -> HbarSeries:
    total = HbarSeries.zero(order)
    for item in items:
        total = total + item
    return total
