"""Star-products on polynomial functionals.

The exponential family is ``F *A G = exp(hbar C1)(F, G)`` where ``C1`` is the
constant-coefficient bidifferential operator

    C1(F, G) = sum_ij (A + I)_ij d_i F d_j* G + (A - I)_ij d_j* F d_i G.

Write ``C1 = sum_e w_e d_{s_e} (x) d_{t_e}`` over weighted edges ``e`` joining
a slot of F to a slot of G.  The edges commute, so by the multinomial theorem

    C1^r / r! = sum over multisets k of size r of prod_e w_e^k_e / k_e!
                d^{alpha(k)} F * d^{beta(k)} G.

:func:`star` enumerates those multisets, merges the ones that land on the
same pair of derivative multi-indices and multiplies each derivative pair
once.  ``A = 0`` is the Moyal product and ``A = I`` the normal product.

:func:`moyal_cochain` and :func:`star_normal_direct` compute the same objects
by plain index sums over ordered tuples; they share nothing with the
multiset engine and serve as its oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .functional import (
    Leg,
    PolyFunctional,
    Slot,
    partial,
    poly_mul,
)
from .kernel import Identity, OperatorKernel, Zero, hs_classify, HSClass

# Canonical symplectic 2x2 matrix, Lambda^{12} = +1, indexed [alpha-1][beta-1].
LAMBDA = ((0, 1), (-1, 0))


class HbarPoly:
    """``sum_r hbar**r comps[r]`` through ``hbar**order``.

    ``exact`` is True when no nonzero contribution was dropped by the
    truncation, i.e. the series is the full (terminating) answer.
    """

    __slots__ = ("comps", "exact")

    def __init__(self, comps: Sequence[PolyFunctional], exact: bool = True):
        if not comps:
            raise ValueError("an hbar-polynomial needs at least one component")
        self.comps = tuple(c if isinstance(c, PolyFunctional) else PolyFunctional.constant(c) for c in comps)
        self.exact = exact

    @classmethod
    def from_poly(cls, F: PolyFunctional, order: int) -> "HbarPoly":
        return cls((F,) + (PolyFunctional(),) * order)

    @property
    def order(self) -> int:
        return len(self.comps) - 1

    def __getitem__(self, r: int) -> PolyFunctional:
        return self.comps[r]

    def __iter__(self):
        return iter(self.comps)

    def __eq__(self, other):
        if not isinstance(other, HbarPoly):
            return NotImplemented
        return self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def __repr__(self):
        return f"HbarPoly({self})"

    def __str__(self):
        parts = []
        for r, c in enumerate(self.comps):
            if c.is_zero():
                continue
            h = "" if r == 0 else ("hbar" if r == 1 else f"hbar^{r}")
            body = str(c)
            if not h:
                parts.append(body)
            elif c.is_constant():
                parts.append({"1": h, "-1": "-" + h}.get(body, f"{body}*{h}"))
            else:
                parts.append(f"({body})*{h}")
        text = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return text + ("" if self.exact else f" + O(hbar^{self.order + 1})")

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __add__(self, other: "HbarPoly") -> "HbarPoly":
        k = min(self.order, other.order)
        return HbarPoly(
            [self.comps[r] + other.comps[r] for r in range(k + 1)],
            self.exact and other.exact,
        )

    def __neg__(self):
        return HbarPoly([-c for c in self.comps], self.exact)

    def __sub__(self, other: "HbarPoly") -> "HbarPoly":
        return self + (-other)

    def scale(self, c) -> "HbarPoly":
        return HbarPoly([comp * c for comp in self.comps], self.exact)

    def truncate(self, order: int) -> "HbarPoly":
        dropped = any(not c.is_zero() for c in self.comps[order + 1 :])
        return HbarPoly(self.comps[: order + 1], self.exact and not dropped)

    def truncate_degree(self, d: int) -> "HbarPoly":
        return HbarPoly([c.truncate_degree(d) for c in self.comps], self.exact)

    def map(self, fn) -> "HbarPoly":
        return HbarPoly([fn(c) for c in self.comps], self.exact)


PolyLike = Union[PolyFunctional, HbarPoly]


@dataclass(frozen=True)
class StarFamily:
    """A member ``*A`` of the exponential family, labelled by its kernel."""

    kernel: OperatorKernel

    @property
    def name(self) -> str:
        if isinstance(self.kernel, Zero):
            return "moyal"
        if isinstance(self.kernel, Identity):
            return "normal"
        return "kernel"

    @property
    def flagged_unbounded(self) -> bool:
        return hs_classify(self.kernel).hs_class is HSClass.UNBOUNDED


MOYAL = StarFamily(Zero())
NORMAL = StarFamily(Identity())


# -- Poisson bracket -------------------------------------------------------------


def poisson(F: PolyFunctional, G: PolyFunctional) -> PolyFunctional:
    """``{F, G} = sum_i d_i F d_i* G - d_i G d_i* F``."""
    out = PolyFunctional()
    fs, gs = F.slots(), G.slots()
    for s in fs:
        if s.leg == Leg.H and s.swapped() in gs:
            out = out + partial(F, s) * partial(G, s.swapped())
    for s in gs:
        if s.leg == Leg.H and s.swapped() in fs:
            out = out - partial(G, s) * partial(F, s.swapped())
    out.n = max(out.n, F.n, G.n)
    return out


# -- contraction engine ---------------------------------------------------------


def _edges(kernel: OperatorKernel, F: PolyFunctional, G: PolyFunctional) -> List[Tuple[Slot, Slot, Fraction]]:
    """Weighted edges (slot of F, slot of G, weight) of C1 restricted to live slots."""
    fs, gs = sorted(F.slots()), sorted(G.slots())
    edges = []
    for s in fs:
        for t in gs:
            if s.leg == Leg.H and t.leg == Leg.HSTAR:
                w = kernel.entry(s.index, t.index) + (1 if s.index == t.index else 0)
            elif s.leg == Leg.HSTAR and t.leg == Leg.H:
                w = kernel.entry(t.index, s.index) - (1 if s.index == t.index else 0)
            else:
                continue
            if w:
                edges.append((s, t, w))
    return edges


def _divisors(F: PolyFunctional) -> set:
    """Every derivative multi-index (as a sorted slot tuple) that leaves F nonzero."""
    out = set()
    for m, _ in F:
        expanded = [s for s, e in m for _ in range(e)]
        for k in range(len(expanded) + 1):
            out.update(itertools.combinations(expanded, k))
    return out


def _contraction_patterns(edges, F: PolyFunctional, G: PolyFunctional, rmax: int):
    """Map (alpha, beta) -> (r, prod w^k / k!) over edge multisets of size <= rmax."""
    fdiv, gdiv = _divisors(F), _divisors(G)
    patterns: Dict[Tuple[tuple, tuple], List] = {}

    def walk(start, alpha, beta, coeff, last, run):
        for e in range(start, len(edges)):
            s, t, w = edges[e]
            a = tuple(sorted(alpha + (s,)))
            if a not in fdiv:
                continue
            b = tuple(sorted(beta + (t,)))
            if b not in gdiv:
                continue
            k = run + 1 if e == last else 1
            c = coeff * w / k
            key = (a, b)
            slot = patterns.get(key)
            if slot is None:
                patterns[key] = [len(a), c]
            else:
                slot[1] += c
            if len(a) < rmax:
                walk(e, a, b, c, e, k)

    walk(0, (), (), Fraction(1), -1, 0)
    return patterns


def _derivative(cache: Dict[tuple, PolyFunctional], index: tuple) -> PolyFunctional:
    """Derivative along a sorted slot tuple, reusing the cached derivative of its prefix."""
    out = cache.get(index)
    if out is None:
        out = cache[index] = partial(_derivative(cache, index[:-1]), index[-1])
    return out


def _exp_contraction(
    kernel: OperatorKernel,
    F: PolyFunctional,
    G: PolyFunctional,
    order: int,
    max_degree: Optional[int] = None,
    slope: int = 0,
) -> Tuple[List[PolyFunctional], bool]:
    """Components ``C_r/r!`` for r <= order, plus whether anything beyond was nonzero.

    With ``max_degree`` the r-th component keeps total degree <= max_degree - r * slope.
    """
    n = max(F.n, G.n)
    caps = [None if max_degree is None else max_degree - r * slope for r in range(order + 1)]
    comps = [poly_mul(F, G, caps[0])] + [PolyFunctional() for _ in range(order)]
    if F.is_zero() or G.is_zero():
        return comps, False
    rmax = min(F.degree(), G.degree())
    patterns = _contraction_patterns(_edges(kernel, F, G), F, G, rmax)
    fcache: Dict[tuple, PolyFunctional] = {(): F}
    gcache: Dict[tuple, PolyFunctional] = {(): G}
    # sum_beta c * d_beta G first, so each d_alpha F enters one product per order
    grouped: Dict[Tuple[int, tuple], Dict] = {}
    for (a, b), (r, c) in patterns.items():
        if not c:
            continue
        cap = caps[r] if r <= order else None
        if cap is not None and cap < 0:
            continue
        target = grouped.setdefault((r, a), {})
        for m, v in _derivative(gcache, b):
            target[m] = target.get(m, 0) + c * v
    beyond: Dict[int, Dict] = {}
    acc: List[Dict] = [dict() for _ in range(order + 1)]
    for (r, a), terms in grouped.items():
        cap = caps[r] if r <= order else None
        H = PolyFunctional._raw({m: v for m, v in terms.items() if v}, n)
        prod = poly_mul(_derivative(fcache, a), H, cap)
        target = acc[r] if r <= order else beyond.setdefault(r, {})
        for m, v in prod:
            target[m] = target.get(m, 0) + v
    for r in range(1, order + 1):
        comps[r] = PolyFunctional({m: v for m, v in acc[r].items() if v}, n)
    truncated = any(v for t in beyond.values() for v in t.values())
    for c in comps:
        c.n = max(c.n, n)
    return comps, truncated


def cochain(kernel: OperatorKernel, F: PolyFunctional, G: PolyFunctional, r: int) -> PolyFunctional:
    """``C^A_r(F, G) = (C^A_1)^r (F, G)`` as a bidifferential operator power."""
    if r < 0:
        raise ValueError("cochain order must be non-negative")
    comps, _ = _exp_contraction(kernel, F, G, r)
    return comps[r] * factorial(r)


def _as_hbar(F: PolyLike, order: int) -> HbarPoly:
    if isinstance(F, HbarPoly):
        return F
    if isinstance(F, PolyFunctional):
        return HbarPoly.from_poly(F, order)
    return HbarPoly.from_poly(PolyFunctional.constant(F), order)


def _bilinear(engine, F: PolyLike, G: PolyLike, order: int) -> HbarPoly:
    """Extend a poly x poly -> components engine hbar-bilinearly with truncation."""
    if order < 0:
        raise ValueError("order must be non-negative")
    F, G = _as_hbar(F, order), _as_hbar(G, order)
    order = min(order, F.order, G.order)
    total: List[PolyFunctional] = [PolyFunctional() for _ in range(order + 1)]
    exact = F.exact and G.exact
    for a, Fa in enumerate(F.comps):
        if Fa.is_zero():
            continue
        for b, Gb in enumerate(G.comps):
            if Gb.is_zero():
                continue
            room = order - a - b
            if room < 0:
                exact = False
                continue
            comps, truncated = engine(Fa, Gb, room, a + b)
            exact = exact and not truncated
            for r, c in enumerate(comps):
                if not c.is_zero():
                    total[a + b + r] = total[a + b + r] + c
    n = max(c.n for c in F.comps + G.comps)
    for c in total:
        c.n = max(c.n, n)
    return HbarPoly(total, exact)


def star(
    family: Union[StarFamily, OperatorKernel],
    F: PolyLike,
    G: PolyLike,
    order: int,
    max_degree: Optional[int] = None,
    graded: bool = False,
) -> HbarPoly:
    """``F *A G`` through ``hbar**order``.

    ``max_degree`` discards terms above that total degree in every
    component (the result is then flagged inexact if anything was lost).
    With ``graded`` the cap drops by one per power of hbar, so the
    ``hbar**r`` component keeps total degree <= max_degree - r.
    """
    kernel = family.kernel if isinstance(family, StarFamily) else family
    slope = 1 if graded else 0

    def engine(Fa, Gb, room, shift):
        cap = None if max_degree is None else max_degree - shift * slope
        if cap is not None and cap < 0:
            return [PolyFunctional()], True
        comps, truncated = _exp_contraction(kernel, Fa, Gb, room, cap, slope)
        if cap is not None and not truncated:
            truncated = Fa.degree() + Gb.degree() > cap
        return comps, truncated

    return _bilinear(engine, F, G, order)


# -- direct index-sum oracles ------------------------------------------------------


def _index_pairing(F: PolyFunctional, G: PolyFunctional, legs_f: Sequence[Leg], legs_g: Sequence[Leg]) -> PolyFunctional:
    """``sum_{i_1..i_r} d_{i_1^(a_1)..i_r^(a_r)} F * d_{i_1^(b_1)..i_r^(b_r)} G`` over ordered tuples."""
    if not legs_f:
        return F * G
    lf, lg = legs_f[0], legs_g[0]
    idx_f = {s.index for s in F.slots() if s.leg == lf}
    idx_g = {s.index for s in G.slots() if s.leg == lg}
    out = PolyFunctional()
    for i in sorted(idx_f & idx_g):
        dF = partial(F, Slot(lf, i))
        dG = partial(G, Slot(lg, i))
        if dF.is_zero() or dG.is_zero():
            continue
        out = out + _index_pairing(dF, dG, legs_f[1:], legs_g[1:])
    return out


def moyal_cochain(F: PolyFunctional, G: PolyFunctional, r: int) -> PolyFunctional:
    """``C_r(F, G)`` by the literal sum over all (alpha, beta) in {1,2}^r x {1,2}^r."""
    if r < 1:
        raise ValueError("r must be at least 1")
    out = PolyFunctional()
    legs = (Leg.H, Leg.HSTAR)
    for alpha in itertools.product((1, 2), repeat=r):
        for beta in itertools.product((1, 2), repeat=r):
            weight = 1
            for a, b in zip(alpha, beta):
                weight *= LAMBDA[a - 1][b - 1]
            if not weight:
                continue
            term = _index_pairing(F, G, [legs[a - 1] for a in alpha], [legs[b - 1] for b in beta])
            if not term.is_zero():
                out = out + term * weight
    out.n = max(out.n, F.n, G.n)
    return out


def _direct_engine(cochain_fn, weight):
    def engine(Fa, Gb, room, shift):
        rmax = min(Fa.degree(), Gb.degree())
        comps = [Fa * Gb]
        truncated = False
        for r in range(1, max(room, rmax) + 1):
            c = cochain_fn(Fa, Gb, r) * (Fraction(weight) ** r / factorial(r)) if r <= rmax else PolyFunctional()
            if r <= room:
                comps.append(c)
            elif not c.is_zero():
                truncated = True
        return comps, truncated

    return engine


def star_moyal_direct(F: PolyLike, G: PolyLike, order: int) -> HbarPoly:
    """Moyal product as ``FG + sum_r hbar^r/r! C_r(F, G)`` with the direct cochains."""
    return _bilinear(_direct_engine(moyal_cochain, 1), F, G, order)


def normal_cochain(F: PolyFunctional, G: PolyFunctional, r: int) -> PolyFunctional:
    """``<D^(r)_{1..1} F, D^(r)_{2..2} G>``."""
    return _index_pairing(F, G, [Leg.H] * r, [Leg.HSTAR] * r)


def star_normal_direct(F: PolyLike, G: PolyLike, order: int) -> HbarPoly:
    """Normal product ``FG + sum_r (2 hbar)^r / r! <D^r_1 F, D^r_2 G>``."""
    return _bilinear(_direct_engine(normal_cochain, 2), F, G, order)
