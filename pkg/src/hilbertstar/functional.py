"""Sparse polynomial functionals on the phase space W = H + H*.

A variable is a :class:`Slot` ``(leg, index)``: ``x_i`` lives on the ``H`` leg
and ``eta_i`` on the ``HSTAR`` leg, ``i >= 1``.  A monomial is a sorted tuple
of ``(slot, exponent)`` pairs, H slots before H* slots.  Polynomials are
immutable mappings from monomials to nonzero Fractions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Optional, Tuple

from .algebra import ScalarLike, format_scalar, scalar
from .kernel import HSClass, OperatorKernel, hs_classify


class Leg(enum.IntEnum):
    H = 0
    HSTAR = 1


class Slot(NamedTuple):
    leg: Leg
    index: int

    @property
    def name(self) -> str:
        return ("x" if self.leg == Leg.H else "eta") + str(self.index)

    def swapped(self) -> "Slot":
        return Slot(Leg(1 - self.leg), self.index)


def x(i: int) -> Slot:
    if i < 1:
        raise ValueError("basis indices start at 1")
    return Slot(Leg.H, i)


def eta(i: int) -> Slot:
    if i < 1:
        raise ValueError("basis indices start at 1")
    return Slot(Leg.HSTAR, i)


Monomial = Tuple[Tuple[Slot, int], ...]
ONE: Monomial = ()


def make_monomial(powers: Mapping[Slot, int]) -> Monomial:
    for slot, e in powers.items():
        if slot.index < 1:
            raise ValueError(f"basis indices start at 1, got {slot.name}")
        if e < 0:
            raise ValueError(f"negative exponent on {slot.name}")
    return tuple(sorted((Slot(Leg(s.leg), s.index), e) for s, e in powers.items() if e))


@lru_cache(maxsize=1 << 16)
def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    powers = dict(a)
    for s, e in b:
        powers[s] = powers.get(s, 0) + e
    return tuple(sorted(powers.items()))


@lru_cache(maxsize=1 << 16)
def mono_partial(m: Monomial, slot: Slot) -> Tuple[int, Optional[Monomial]]:
    """(factor, monomial) of d/d(slot) m; factor 0 when slot is absent."""
    for k, (s, e) in enumerate(m):
        if s == slot:
            if e == 1:
                return e, m[:k] + m[k + 1 :]
            return e, m[:k] + ((s, e - 1),) + m[k + 1 :]
    return 0, None


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class PolyFunctional:
    """Finitely supported polynomial in the variables ``x_i`` and ``eta_i``.

    ``n`` is the ambient truncation: an upper bound on the basis indices in
    play.  It only bounds iteration and is max-ed under binary operations.
    """

    __slots__ = ("terms", "n", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, ScalarLike]] = None, n: int = 0):
        clean: Dict[Monomial, Fraction] = {}
        top = 0
        for m, c in (terms or {}).items():
            c = scalar(c)
            if c:
                clean[m] = c
                for s, _ in m:
                    top = max(top, s.index)
        self.terms = clean
        self.n = max(n, top)
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction], n: int) -> "PolyFunctional":
        # Trusted constructor: terms already nonzero Fractions with indices <= n.
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.n = n
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: ScalarLike) -> "PolyFunctional":
        return cls({ONE: c})

    @classmethod
    def var(cls, slot: Slot) -> "PolyFunctional":
        return cls({((slot, 1),): 1})

    @classmethod
    def monomial(cls, powers: Mapping[Slot, int], coeff: ScalarLike = 1) -> "PolyFunctional":
        return cls({make_monomial(powers): coeff})

    # -- inspection --------------------------------------------------------

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((mono_degree(m) for m in self.terms), default=-1)

    def slots(self) -> set:
        return {s for m in self.terms for s, _ in m}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (mono_degree(t[0]), t[0]))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PolyFunctional.constant(other)
        if not isinstance(other, PolyFunctional):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"PolyFunctional({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            factors = " ".join(s.name + (f"^{e}" if e > 1 else "") for s, e in m)
            if not factors:
                out.append(format_scalar(c))
            elif c == 1:
                out.append(factors)
            elif c == -1:
                out.append("-" + factors)
            else:
                out.append(f"{format_scalar(c)} {factors}")
        return " + ".join(out).replace("+ -", "- ")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, PolyFunctional):
            other = PolyFunctional.constant(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m, 0) + c
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return PolyFunctional._raw(terms, max(self.n, other.n))

    __radd__ = __add__

    def __neg__(self):
        return PolyFunctional._raw({m: -c for m, c in self.terms.items()}, self.n)

    def __sub__(self, other):
        if not isinstance(other, PolyFunctional):
            other = PolyFunctional.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return PolyFunctional.constant(other) - self

    def __mul__(self, other):
        if isinstance(other, PolyFunctional):
            return poly_mul(self, other)
        c = scalar(other)
        if not c:
            return PolyFunctional._raw({}, self.n)
        return PolyFunctional._raw({m: c * v for m, v in self.terms.items()}, self.n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = PolyFunctional.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def truncate_degree(self, d: int) -> "PolyFunctional":
        """Drop every term of total degree above ``d``."""
        return PolyFunctional._raw({m: c for m, c in self.terms.items() if mono_degree(m) <= d}, self.n)


def poly_mul(F: PolyFunctional, G: PolyFunctional, max_degree: Optional[int] = None) -> PolyFunctional:
    """Exact product; with ``max_degree`` terms above that total degree are skipped."""
    terms: Dict[Monomial, Fraction] = {}
    if max_degree is None:
        for a, ca in F.terms.items():
            for b, cb in G.terms.items():
                m = mono_mul(a, b)
                terms[m] = terms.get(m, 0) + ca * cb
    else:
        gs = [(b, cb, mono_degree(b)) for b, cb in G.terms.items()]
        for a, ca in F.terms.items():
            room = max_degree - mono_degree(a)
            for b, cb, db in gs:
                if db <= room:
                    m = mono_mul(a, b)
                    terms[m] = terms.get(m, 0) + ca * cb
    return PolyFunctional._raw({m: c for m, c in terms.items() if c}, max(F.n, G.n))


def partial(F: PolyFunctional, slot: Slot) -> PolyFunctional:
    """Formal derivative with respect to the variable at ``slot``."""
    terms: Dict[Monomial, Fraction] = {}
    for m, c in F.terms.items():
        e, dm = mono_partial(m, slot)
        if e:
            terms[dm] = terms.get(dm, 0) + e * c
    return PolyFunctional._raw(terms, F.n)


def partials(F: PolyFunctional, slots: Iterable[Slot]) -> PolyFunctional:
    for s in slots:
        if F.is_zero():
            break
        F = partial(F, s)
    return F


@dataclass(frozen=True)
class Point:
    """A point (x, eta) of W with finitely many nonzero coordinates."""

    x: Mapping[int, Fraction] = field(default_factory=dict)
    eta: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "x", {int(i): scalar(c) for i, c in self.x.items() if scalar(c)})
        object.__setattr__(self, "eta", {int(i): scalar(c) for i, c in self.eta.items() if scalar(c)})

    def coordinate(self, slot: Slot) -> Fraction:
        src = self.x if slot.leg == Leg.H else self.eta
        return src.get(slot.index, Fraction(0))


def evaluate(F: PolyFunctional, p: Point) -> Fraction:
    """Substitute ``p``; coordinates absent from ``p`` are 0."""
    total = Fraction(0)
    for m, c in F.terms.items():
        v = c
        for s, e in m:
            v *= p.coordinate(s) ** e
            if not v:
                break
        total += v
    return total


def symplectic_form(p1: Point, p2: Point) -> Fraction:
    """``omega((x1, eta1), (x2, eta2)) = eta1(x2) - eta2(x1)``."""
    first = sum((c * p2.x.get(i, 0) for i, c in p1.eta.items()), Fraction(0))
    second = sum((c * p1.x.get(i, 0) for i, c in p2.eta.items()), Fraction(0))
    return first - second


# -- Hilbert-Schmidt membership -------------------------------------------------


@dataclass(frozen=True)
class KernelQuadratic:
    """The quadratic ``Q_A(x, eta) = <eta, A x>`` for a structured kernel A.

    Its mixed second derivatives are the matrix entries of A, so it is of
    Hilbert-Schmidt type exactly when A is a Hilbert-Schmidt operator.
    """

    kernel: OperatorKernel


class HSVerdict(enum.Enum):
    IN_FHS = "in_fhs"
    NOT_IN_FHS = "not_in_fhs"


@dataclass(frozen=True)
class HSFunctionCheck:
    verdict: HSVerdict
    reason: str


def hs_check_fn(F) -> HSFunctionCheck:
    if isinstance(F, PolyFunctional):
        return HSFunctionCheck(
            HSVerdict.IN_FHS, "finitely supported polynomial: every derivative family is finite"
        )
    if isinstance(F, KernelQuadratic):
        cls = hs_classify(F.kernel)
        why = f"sum_ij |d_i d_j* Q_A|^2 = sum_ij |A_ij|^2; {cls.certificate}"
        if cls.hs_class is HSClass.HILBERT_SCHMIDT:
            return HSFunctionCheck(HSVerdict.IN_FHS, why)
        return HSFunctionCheck(HSVerdict.NOT_IN_FHS, why)
    raise TypeError(
        f"cannot decide Hilbert-Schmidt type for {type(F).__name__}; "
        "only polynomials and kernel quadratics are supported"
    )


def kernel_quadratic_truncated(kernel: OperatorKernel, n: int) -> PolyFunctional:
    """``sum_{i,j<=n} A_ij eta_i x_j``: the part of Q_A visible on indices <= n."""
    terms = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            a = kernel.entry(i, j)
            if a:
                terms[make_monomial({eta(i): 1, x(j): 1})] = a
    return PolyFunctional(terms, n)
