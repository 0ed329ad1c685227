"""Hochschild cochains as evaluators, the differential, and equivalences.

Cochains here are multidifferential operators known only through their
action on polynomials; every identity checked (cocycle, coboundary,
intertwining) is an identity of evaluations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence, Tuple

from .functional import Leg, PolyFunctional, Slot, partial
from .kernel import (
    HSClass,
    HSClassification,
    NonHSKernel,
    OperatorKernel,
    UndecidableClass,
    Zero,
    describe_kernel,
    hs_classify,
    kernel_sub,
)
from .star import HbarPoly, PolyLike, _as_hbar, cochain


class ArityError(ValueError):
    pass


def _indices(F: PolyFunctional, leg: Leg):
    return sorted({s.index for s in F.slots() if s.leg == leg})


def ea_eval(kernel: OperatorKernel, F: PolyFunctional, G: PolyFunctional) -> PolyFunctional:
    """``E_A(F, G) = <D1 F, A D2 G> + <D1 G, A D2 F>``."""
    out = PolyFunctional()
    for P, Q in ((F, G), (G, F)):
        for i in _indices(P, Leg.H):
            dP = partial(P, Slot(Leg.H, i))
            for j in _indices(Q, Leg.HSTAR):
                a = kernel.entry(i, j)
                if a:
                    out = out + dP * partial(Q, Slot(Leg.HSTAR, j)) * a
    out.n = max(out.n, F.n, G.n)
    return out


def require_hs(kernel: OperatorKernel) -> HSClassification:
    cls = hs_classify(kernel)
    if not cls.is_hs:
        raise NonHSKernel(
            f"{describe_kernel(kernel)} is not Hilbert-Schmidt ({cls.hs_class.value}): {cls.certificate}"
        )
    return cls


def _mixed_second(S: OperatorKernel, F: PolyFunctional) -> PolyFunctional:
    out = PolyFunctional()
    for i in _indices(F, Leg.H):
        dF = partial(F, Slot(Leg.H, i))
        for j in _indices(dF, Leg.HSTAR):
            a = S.entry(i, j)
            if a:
                out = out + partial(dF, Slot(Leg.HSTAR, j)) * a
    out.n = max(out.n, F.n)
    return out


def ta_eval(S: OperatorKernel, F: PolyFunctional) -> PolyFunctional:
    """``T_S(F) = -sum_ij S_ij d_i d_j* F``; S must be Hilbert-Schmidt."""
    require_hs(S)
    return -_mixed_second(S, F)


# -- cochain evaluators -----------------------------------------------------------


class Cochain:
    arity: int

    def __call__(self, *args: PolyFunctional) -> PolyFunctional:
        if len(args) != self.arity:
            raise ArityError(f"{type(self).__name__} takes {self.arity} arguments, got {len(args)}")
        return self.evaluate(*args)

    def evaluate(self, *args: PolyFunctional) -> PolyFunctional:
        raise NotImplementedError


@dataclass(frozen=True)
class EA(Cochain):
    kernel: OperatorKernel
    arity = 2

    def evaluate(self, F, G):
        return ea_eval(self.kernel, F, G)


@dataclass(frozen=True)
class TA(Cochain):
    kernel: OperatorKernel
    arity = 1

    def __post_init__(self):
        require_hs(self.kernel)

    def evaluate(self, F):
        return -_mixed_second(self.kernel, F)


@dataclass(frozen=True)
class CrA(Cochain):
    """The r-th cochain of the exponential star-product ``*A``."""

    kernel: OperatorKernel
    r: int
    arity = 2

    def evaluate(self, F, G):
        return cochain(self.kernel, F, G, self.r)


@dataclass(frozen=True)
class DeltaOf(Cochain):
    inner: Cochain

    @property
    def arity(self):
        return self.inner.arity + 1

    def evaluate(self, *args):
        return hochschild_delta(self.inner, args)


@dataclass(frozen=True)
class ScaledSum(Cochain):
    parts: Tuple[Tuple[Fraction, Cochain], ...]

    def __post_init__(self):
        arities = {c.arity for _, c in self.parts}
        if len(arities) != 1:
            raise ArityError("all summands of a cochain sum need the same arity")

    @property
    def arity(self):
        return self.parts[0][1].arity

    def evaluate(self, *args):
        out = PolyFunctional()
        for c, C in self.parts:
            out = out + C.evaluate(*args) * c
        return out


def hochschild_delta(C: Cochain, args: Sequence[PolyFunctional]) -> PolyFunctional:
    """``(delta C)(F_0, ..., F_k)`` for a k-cochain C."""
    k = C.arity
    if len(args) != k + 1:
        raise ArityError(f"delta of a {k}-cochain takes {k + 1} arguments, got {len(args)}")
    args = list(args)
    out = args[0] * C.evaluate(*args[1:])
    for i in range(1, k + 1):
        merged = args[: i - 1] + [args[i - 1] * args[i]] + args[i + 1 :]
        term = C.evaluate(*merged)
        out = out - term if i % 2 else out + term
    last = C.evaluate(*args[:k]) * args[k]
    out = out + last if (k + 1) % 2 == 0 else out - last
    return out


# -- equivalence ------------------------------------------------------------------


def equiv_transform_poly(a: OperatorKernel, b: OperatorKernel, F: PolyLike, order: int) -> HbarPoly:
    """Apply ``T = exp(hbar T1)``, ``T1 = T_{A-B}``, intertwining ``*A`` with ``*B``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    S = kernel_sub(a, b)
    require_hs(S)
    F = _as_hbar(F, order)
    order = min(order, F.order)
    comps = [PolyFunctional() for _ in range(order + 1)]
    exact = F.exact
    for r0, Fr in enumerate(F.comps):
        term = Fr
        m = 0
        while not term.is_zero():
            if r0 + m > order:
                exact = False
                break
            comps[r0 + m] = comps[r0 + m] + term * Fraction(1, factorial(m))
            term = -_mixed_second(S, term)
            m += 1
    return HbarPoly(comps, exact)


class Verdict(enum.Enum):
    EQUIVALENT = "equivalent"
    NOT_EQUIVALENT = "not_equivalent"
    UNDECIDABLE = "undecidable"


@dataclass(frozen=True)
class EquivalenceVerdict:
    verdict: Verdict
    hs_class_of_difference: Optional[HSClass]
    witness: str

    @property
    def equivalent(self) -> bool:
        return self.verdict is Verdict.EQUIVALENT


def equiv_certify(a: OperatorKernel, b: OperatorKernel) -> EquivalenceVerdict:
    """``*A`` and ``*B`` are equivalent iff ``A - B`` is Hilbert-Schmidt."""
    S = kernel_sub(a, b)
    try:
        cls = hs_classify(S)
    except UndecidableClass as exc:
        return EquivalenceVerdict(Verdict.UNDECIDABLE, None, str(exc))
    if cls.is_hs:
        if isinstance(S, Zero):
            how = "identical kernels: T is the identity transform"
        else:
            how = (
                f"T = exp(hbar T1) with T1(F) = -sum_ij S_ij d_i d_j* F, S = A - B = {describe_kernel(S)}; "
                f"{cls.certificate}"
            )
        return EquivalenceVerdict(Verdict.EQUIVALENT, cls.hs_class, how)
    return EquivalenceVerdict(
        Verdict.NOT_EQUIVALENT,
        cls.hs_class,
        f"A - B = {describe_kernel(S)}: {cls.certificate}; the family "
        "{d_i d_j* <eta, (A-B) x>} is not square-summable, so E_{A-B} is not a coboundary",
    )
