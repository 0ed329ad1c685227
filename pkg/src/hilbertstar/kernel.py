"""Operator kernels A on H and their Hilbert-Schmidt classification.

Kernels are given either as a finite matrix (zero outside its top-left
block), as a structured diagonal ``diag(lambda_1, lambda_2, ...)`` or as the
identity/zero operator.  Differences are kept formal when they do not
collapse to one of those shapes.

Classification works on a normal form: every diagonal-type kernel is a
finite linear combination of the sequences ``i**p`` and ``r**i``, and every
finite matrix is a Hilbert-Schmidt perturbation.  The dominant sequence of
the combination then decides square-summability and boundedness.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

from .algebra import ScalarLike, format_scalar, scalar

Vector = Dict[int, Fraction]


class NonHSKernel(ValueError):
    """Raised when an operation needs a Hilbert-Schmidt kernel and gets another."""


class UndecidableClass(ValueError):
    """Raised when the class of a formal kernel expression cannot be decided."""


# -- diagonal generators -----------------------------------------------------


@dataclass(frozen=True)
class PowerLaw:
    """``lambda_i = i**p``."""

    p: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", scalar(self.p))

    def value(self, i: int) -> Fraction:
        if self.p.denominator != 1:
            raise ValueError(
                f"i^{format_scalar(self.p)} is irrational in general; "
                "only integer exponents can be applied exactly"
            )
        return Fraction(i) ** self.p.numerator


@dataclass(frozen=True)
class Geometric:
    """``lambda_i = r**i``."""

    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", scalar(self.r))

    def value(self, i: int) -> Fraction:
        return self.r**i


@dataclass(frozen=True)
class Constant:
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", scalar(self.c))

    def value(self, i: int) -> Fraction:
        return self.c


Generator = (PowerLaw, Geometric, Constant)


# -- kernels -----------------------------------------------------------------


class OperatorKernel:
    """Base class; subclasses are frozen dataclasses."""

    def entry(self, i: int, j: int) -> Fraction:
        raise NotImplementedError

    def apply(self, v: Mapping[int, Fraction]) -> Vector:
        raise NotImplementedError

    def __sub__(self, other: "OperatorKernel") -> "OperatorKernel":
        return kernel_sub(self, other)


@dataclass(frozen=True)
class Zero(OperatorKernel):
    def entry(self, i, j):
        return Fraction(0)

    def apply(self, v):
        return {}


@dataclass(frozen=True)
class Identity(OperatorKernel):
    def entry(self, i, j):
        return Fraction(1 if i == j else 0)

    def apply(self, v):
        return {i: c for i, c in v.items() if c}


@dataclass(frozen=True)
class FiniteMatrix(OperatorKernel):
    """Square matrix acting on ``e_1..e_n``; zero elsewhere.

    Stored trimmed to the smallest square block holding every nonzero entry,
    so zero padding does not change the value.
    """

    rows: Tuple[Tuple[Fraction, ...], ...] = field(default=())

    def __post_init__(self):
        rows = [tuple(scalar(a) for a in row) for row in self.rows]
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("FiniteMatrix needs a square array of entries")
        size = 0
        for i, row in enumerate(rows):
            for j, a in enumerate(row):
                if a:
                    size = max(size, i + 1, j + 1)
        object.__setattr__(self, "rows", tuple(row[:size] for row in rows[:size]))

    @property
    def size(self) -> int:
        return len(self.rows)

    def entry(self, i, j):
        if 1 <= i <= self.size and 1 <= j <= self.size:
            return self.rows[i - 1][j - 1]
        return Fraction(0)

    def apply(self, v):
        out = {}
        for j, c in v.items():
            if not c or j > self.size:
                continue
            for i in range(1, self.size + 1):
                a = self.rows[i - 1][j - 1]
                if a:
                    out[i] = out.get(i, Fraction(0)) + a * c
        return {i: c for i, c in out.items() if c}


@dataclass(frozen=True)
class Diagonal(OperatorKernel):
    generator: object

    def __post_init__(self):
        if not isinstance(self.generator, Generator):
            raise TypeError(f"unknown diagonal generator {self.generator!r}")

    def entry(self, i, j):
        if i != j:
            return Fraction(0)
        return self.generator.value(i)

    def apply(self, v):
        out = {}
        for i, c in v.items():
            if c:
                a = self.generator.value(i) * c
                if a:
                    out[i] = a
        return out


@dataclass(frozen=True)
class Difference(OperatorKernel):
    """Formal ``a - b``; entries and images are computed componentwise."""

    a: OperatorKernel
    b: OperatorKernel

    def entry(self, i, j):
        return self.a.entry(i, j) - self.b.entry(i, j)

    def apply(self, v):
        out = dict(self.a.apply(v))
        for i, c in self.b.apply(v).items():
            out[i] = out.get(i, Fraction(0)) - c
        return {i: c for i, c in out.items() if c}


def identity_plus(kernel: OperatorKernel, sign: int) -> "_Shifted":
    """``A + I`` (sign=+1) or ``A - I`` (sign=-1), for entry lookups only."""
    return _Shifted(kernel, sign)


@dataclass(frozen=True)
class _Shifted:
    kernel: OperatorKernel
    sign: int

    def entry(self, i, j):
        a = self.kernel.entry(i, j)
        return a + self.sign if i == j else a

    def apply(self, v):
        out = dict(self.kernel.apply(v))
        for i, c in v.items():
            out[i] = out.get(i, Fraction(0)) + self.sign * c
        return {i: c for i, c in out.items() if c}


def apply(kernel: OperatorKernel, v: Mapping[int, ScalarLike]) -> Vector:
    return kernel.apply({int(i): scalar(c) for i, c in v.items()})


def pairing(xi: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Fraction:
    """Canonical pairing ``<xi, y>`` of a sparse H*-vector with an H-vector."""
    if len(xi) > len(y):
        xi, y = y, xi
    return sum((c * y[i] for i, c in xi.items() if i in y), Fraction(0))


# -- normal form and classification -----------------------------------------

# Keys of the normal form: ("power", p) for i**p and ("geom", r) for r**i.
_ONE = ("power", Fraction(0))


def _diagonal_form(kernel: OperatorKernel) -> Tuple[Dict[tuple, Fraction], bool]:
    """Return (combination of diagonal sequences, has finite-matrix part)."""
    if isinstance(kernel, Zero):
        return {}, False
    if isinstance(kernel, Identity):
        return {_ONE: Fraction(1)}, False
    if isinstance(kernel, FiniteMatrix):
        return {}, kernel.size > 0
    if isinstance(kernel, Diagonal):
        g = kernel.generator
        if isinstance(g, Constant):
            return ({_ONE: g.c} if g.c else {}), False
        if isinstance(g, PowerLaw):
            return {("power", g.p): Fraction(1)}, False
        if g.r == 0:
            return {}, False
        if g.r == 1:
            return {_ONE: Fraction(1)}, False
        return {("geom", g.r): Fraction(1)}, False
    if isinstance(kernel, Difference):
        fa, ha = _diagonal_form(kernel.a)
        fb, hb = _diagonal_form(kernel.b)
        out = dict(fa)
        for key, c in fb.items():
            out[key] = out.get(key, Fraction(0)) - c
        return {k: c for k, c in out.items() if c}, ha or hb
    raise UndecidableClass(f"no normal form for {kernel!r}")


def _growth(key: tuple) -> Tuple[Fraction, Fraction]:
    """(base, exponent) such that the sequence is of size base**i * i**exponent."""
    kind, param = key
    if kind == "power":
        return Fraction(1), param
    return abs(param), Fraction(0)


class HSClass(enum.Enum):
    HILBERT_SCHMIDT = "hilbert_schmidt"
    BOUNDED_NOT_HS = "bounded_not_hs"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class HSClassification:
    hs_class: HSClass
    certificate: str
    hs_norm_sq: Optional[Fraction] = None

    @property
    def is_hs(self) -> bool:
        return self.hs_class is HSClass.HILBERT_SCHMIDT


def _describe(key: tuple) -> str:
    kind, param = key
    if kind == "power":
        return "1" if param == 0 else f"i^({format_scalar(param)})"
    return f"({format_scalar(param)})^i"


def _exact_norm_sq(form: Dict[tuple, Fraction]) -> Optional[Fraction]:
    # Closed forms only for a single geometric sequence; sums of powers are zeta values.
    if len(form) == 1:
        (key, c), = form.items()
        if key[0] == "geom" and abs(key[1]) < 1:
            r2 = key[1] ** 2
            return c * c * r2 / (1 - r2)
    return None


def hs_classify(kernel: OperatorKernel) -> HSClassification:
    """Decide whether ``kernel`` is Hilbert-Schmidt, bounded only, or unbounded."""
    form, has_finite = _diagonal_form(kernel)
    finite_sq = None
    if isinstance(kernel, FiniteMatrix):
        finite_sq = sum((a * a for row in kernel.rows for a in row), Fraction(0))
    if not form:
        if has_finite:
            return HSClassification(
                HSClass.HILBERT_SCHMIDT,
                "finitely many nonzero matrix entries",
                finite_sq,
            )
        return HSClassification(HSClass.HILBERT_SCHMIDT, "zero operator", Fraction(0))

    top = max(_growth(k) for k in form)
    dominant = sorted((k for k in form if _growth(k) == top), key=str)
    base, expo = top
    desc = " + ".join(
        _describe(k) if form[k] == 1 else f"{format_scalar(form[k])}*{_describe(k)}" for k in dominant
    )
    extra = " plus a finite-rank part" if has_finite else ""
    if base > 1 or (base == 1 and expo > 0):
        return HSClassification(
            HSClass.UNBOUNDED,
            f"diagonal entries grow like {desc}{extra}: sup_i |lambda_i| = infinity",
        )
    if base < 1 or 2 * expo < -1:
        if base < 1:
            why = f"sum_i |{desc}|^2 converges (geometric, |r| = {format_scalar(base)} < 1)"
        else:
            why = f"sum_i |{desc}|^2 converges (p-series, 2p = {format_scalar(2 * expo)} < -1)"
        norm = None if has_finite else _exact_norm_sq(form)
        return HSClassification(HSClass.HILBERT_SCHMIDT, why + extra, norm)
    return HSClassification(
        HSClass.BOUNDED_NOT_HS,
        f"diagonal entries of size {desc}{extra}: bounded, but "
        f"sum_i |lambda_i|^2 diverges (2p = {format_scalar(2 * expo)} >= -1)",
    )


def kernel_sub(a: OperatorKernel, b: OperatorKernel) -> OperatorKernel:
    """``a - b``, collapsed to a structured kernel when one fits exactly."""
    if a == b:
        return Zero()
    if isinstance(b, Zero):
        return a
    if isinstance(a, FiniteMatrix) and isinstance(b, FiniteMatrix):
        n = max(a.size, b.size)
        return FiniteMatrix(
            tuple(tuple(a.entry(i, j) - b.entry(i, j) for j in range(1, n + 1)) for i in range(1, n + 1))
        )
    if isinstance(a, (FiniteMatrix, Difference)) or isinstance(b, (FiniteMatrix, Difference)):
        return Difference(a, b)
    form, _ = _diagonal_form(Difference(a, b))
    if not form:
        return Zero()
    if len(form) == 1:
        (key, c), = form.items()
        if key == _ONE:
            return Identity() if c == 1 else Diagonal(Constant(c))
        if c == 1:
            kind, param = key
            return Diagonal(PowerLaw(param) if kind == "power" else Geometric(param))
    return Difference(a, b)


def describe_kernel(kernel: OperatorKernel) -> str:
    if isinstance(kernel, Zero):
        return "0"
    if isinstance(kernel, Identity):
        return "I"
    if isinstance(kernel, FiniteMatrix):
        return "[" + "; ".join(" ".join(format_scalar(a) for a in row) for row in kernel.rows) + "]"
    if isinstance(kernel, Diagonal):
        g = kernel.generator
        if isinstance(g, PowerLaw):
            return f"diag(i^({format_scalar(g.p)}))"
        if isinstance(g, Geometric):
            return f"diag(({format_scalar(g.r)})^i)"
        return f"diag({format_scalar(g.c)})"
    if isinstance(kernel, Difference):
        return f"({describe_kernel(kernel.a)} - {describe_kernel(kernel.b)})"
    return repr(kernel)
