"""Closed-form calculus on the exponentials ``Phi_{y,xi}(x, eta) = exp(<eta, y> + <xi, x>)``.

Because every product in the exponential family has constant coefficients,
it acts on exponentials by a scalar prefactor:

    Phi_{y,xi} *A Phi_{y',xi'}
        = exp(hbar (<xi, (A+I) y'> + <xi', (A-I) y>)) Phi_{y+y', xi+xi'}.

An :class:`ExpFunctional` is a finite combination of exponentials with
hbar-series coefficients, so the whole product reduces to vector arithmetic
and :func:`~hilbertstar.algebra.series_exp`.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, Mapping, Tuple

from .algebra import HbarSeries, ScalarLike, scalar, series_exp
from .functional import PolyFunctional, eta, make_monomial, x
from .kernel import OperatorKernel, identity_plus, pairing
from .star import HbarPoly, star

SparseVec = Tuple[Tuple[int, Fraction], ...]


def sparse_vec(v: Mapping[int, ScalarLike]) -> SparseVec:
    items = []
    for i, c in v.items():
        i, c = int(i), scalar(c)
        if i < 1:
            raise ValueError("basis indices start at 1")
        if c:
            items.append((i, c))
    return tuple(sorted(items))


def _vec_add(a: SparseVec, b: SparseVec) -> SparseVec:
    out = dict(a)
    for i, c in b:
        out[i] = out.get(i, Fraction(0)) + c
    return tuple(sorted((i, c) for i, c in out.items() if c))


class ExpFunctional:
    """``sum_k c_k Phi_{y_k, xi_k}`` with hbar-series coefficients ``c_k``.

    Terms are keyed by ``(y, xi)``; equal keys merge and zero series drop out.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Tuple[HbarSeries, Mapping, Mapping]] = ()):
        merged: Dict[Tuple[SparseVec, SparseVec], HbarSeries] = {}
        for coeff, y, xi in terms:
            key = (sparse_vec(dict(y)), sparse_vec(dict(xi)))
            merged[key] = merged[key] + coeff if key in merged else coeff
        self.terms = {k: c for k, c in merged.items() if not c.is_zero()}

    @classmethod
    def phi(cls, y: Mapping = None, xi: Mapping = None, coeff: HbarSeries = None, order: int = 0) -> "ExpFunctional":
        return cls([(coeff if coeff is not None else HbarSeries.one(order), y or {}, xi or {})])

    @classmethod
    def unit(cls, order: int) -> "ExpFunctional":
        return cls.phi(order=order)

    def __iter__(self):
        for (y, xi), c in self.terms.items():
            yield c, dict(y), dict(xi)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, ExpFunctional):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "ExpFunctional") -> "ExpFunctional":
        return ExpFunctional(
            [(c, dict(y), dict(xi)) for (y, xi), c in self.terms.items()]
            + [(c, dict(y), dict(xi)) for (y, xi), c in other.terms.items()]
        )

    def __sub__(self, other: "ExpFunctional") -> "ExpFunctional":
        return self + ExpFunctional([(-c, y, xi) for c, y, xi in other])

    def __repr__(self):
        body = ", ".join(f"{c} * Phi[y={dict(y)}, xi={dict(xi)}]" for (y, xi), c in sorted(self.terms.items()))
        return f"ExpFunctional({body})"


def symbol_exponent(kernel: OperatorKernel, y, xi, y2, xi2) -> Fraction:
    """``<xi, (A+I) y2> + <xi2, (A-I) y>`` for sparse vectors given as dicts."""
    return pairing(dict(xi), identity_plus(kernel, +1).apply(dict(y2))) + pairing(
        dict(xi2), identity_plus(kernel, -1).apply(dict(y))
    )


def symbol_star(kernel: OperatorKernel, e1: ExpFunctional, e2: ExpFunctional, order: int) -> ExpFunctional:
    if order < 0:
        raise ValueError("order must be non-negative")
    out = []
    for (y, xi), c1 in e1.terms.items():
        for (y2, xi2), c2 in e2.terms.items():
            k = min(order, c1.order, c2.order)
            s = symbol_exponent(kernel, y, xi, y2, xi2)
            coeff = c1.truncate(k) * c2.truncate(k) * series_exp(s, k)
            out.append((coeff, dict(_vec_add(y, y2)), dict(_vec_add(xi, xi2))))
    return ExpFunctional(out)


def symbol_equiv_transform(
    a: OperatorKernel, b: OperatorKernel, e: ExpFunctional, order: int
) -> ExpFunctional:
    """Symbol of ``T = exp(hbar T1)``: ``Phi_{y,xi} -> exp(hbar <xi, (B-A) y>) Phi_{y,xi}``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    out = []
    for (y, xi), c in e.terms.items():
        k = min(order, c.order)
        s = pairing(dict(xi), b.apply(dict(y))) - pairing(dict(xi), a.apply(dict(y)))
        out.append((c.truncate(k) * series_exp(s, k), dict(y), dict(xi)))
    return ExpFunctional(out)


def _linear_form(y: SparseVec, xi: SparseVec) -> PolyFunctional:
    terms = {}
    for i, c in y:
        terms[make_monomial({eta(i): 1})] = c
    for i, c in xi:
        terms[make_monomial({x(i): 1})] = c
    return PolyFunctional(terms)


def taylor_exp(L: PolyFunctional, d: int) -> PolyFunctional:
    """``sum_{n<=d} L^n / n!``; exact Taylor polynomial of exp(L) for linear L."""
    out = PolyFunctional.constant(1)
    power = PolyFunctional.constant(1)
    for n in range(1, d + 1):
        power = power * L
        out = out + power * Fraction(1, factorial(n))
    return out


def exp_truncate_to_poly(e: ExpFunctional, d: int) -> HbarPoly:
    """Taylor-expand every exponential to total degree ``d`` in (x, eta)."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    if not e.terms:
        return HbarPoly([PolyFunctional()])
    order = min(c.order for c in e.terms.values())
    comps = [PolyFunctional() for _ in range(order + 1)]
    exact = True
    for (y, xi), c in e.terms.items():
        L = _linear_form(y, xi)
        exact = exact and L.is_zero()
        T = taylor_exp(L, d)
        for r in range(order + 1):
            if c[r]:
                comps[r] = comps[r] + T * c[r]
    return HbarPoly(comps, exact)


def contraction_residual(
    kernel: OperatorKernel, e1: ExpFunctional, e2: ExpFunctional, order: int, d: int
) -> HbarPoly:
    """Symbol engine minus contraction engine on degree-``d`` Taylor truncations.

    Cutting the factors at degree ``d`` leaves the ``hbar**r`` component of
    the product correct up to total degree ``d - r``; the residual is taken
    on exactly that range and vanishes when the two engines agree.
    """
    lhs = exp_truncate_to_poly(symbol_star(kernel, e1, e2, order), d)
    rhs = star(kernel, exp_truncate_to_poly(e1, d), exp_truncate_to_poly(e2, d), order, max_degree=d, graded=True)
    k = min(lhs.order, rhs.order)
    return HbarPoly([(lhs[r] - rhs[r]).truncate_degree(d - r) for r in range(k + 1)])
