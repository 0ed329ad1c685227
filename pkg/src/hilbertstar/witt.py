"""Poisson realization of the non-negative Witt algebra on coordinate functions.

``phi_i`` (``i >= 0``) is stored as the H-leg variable with index ``i + 1``;
the shift never leaves this module.  The bracket

    {F, G} = sum_{m,n >= 0} (m - n) phi_{m+n} d_m F d_n G

gives ``{phi_i, phi_j} = (i - j) phi_{i+j}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional

from .algebra import format_scalar
from .functional import Leg, PolyFunctional, Slot, partial


def phi(i: int) -> PolyFunctional:
    if i < 0:
        raise ValueError("Witt modes are indexed by i >= 0")
    return PolyFunctional.var(Slot(Leg.H, i + 1))


def _modes(F: PolyFunctional) -> List[int]:
    modes = set()
    for s in F.slots():
        if s.leg != Leg.H:
            raise ValueError("Witt polynomials only involve the coordinates phi_i")
        modes.add(s.index - 1)
    return sorted(modes)


def witt_bracket(F: PolyFunctional, G: PolyFunctional) -> PolyFunctional:
    out = PolyFunctional()
    gmodes = _modes(G)
    for m in _modes(F):
        dF = partial(F, Slot(Leg.H, m + 1))
        for n in gmodes:
            if m == n:
                continue
            out = out + phi(m + n) * dF * partial(G, Slot(Leg.H, n + 1)) * (m - n)
    return out


def witt_str(F: PolyFunctional) -> str:
    if F.is_zero():
        return "0"
    parts = []
    for mono, c in F.sorted_terms():
        factors = " ".join(f"phi{s.index - 1}" + (f"^{e}" if e > 1 else "") for s, e in mono)
        if not factors:
            parts.append(format_scalar(c))
        elif c == 1:
            parts.append(factors)
        elif c == -1:
            parts.append("-" + factors)
        else:
            parts.append(f"{format_scalar(c)} {factors}")
    return " + ".join(parts).replace("+ -", "- ")


def structure_table(max_index: int) -> List[Dict]:
    """``{phi_m, phi_n}`` for all ``0 <= m, n <= max_index``."""
    rows = []
    for m in range(max_index + 1):
        for n in range(max_index + 1):
            value = witt_bracket(phi(m), phi(n))
            rows.append(
                {
                    "m": m,
                    "n": n,
                    "bracket": witt_str(value),
                    "matches": value == phi(m + n) * (m - n),
                }
            )
    return rows


def jacobi_residual(a: int, b: int, c: int) -> PolyFunctional:
    pa, pb, pc = phi(a), phi(b), phi(c)
    return (
        witt_bracket(pa, witt_bracket(pb, pc))
        + witt_bracket(pb, witt_bracket(pc, pa))
        + witt_bracket(pc, witt_bracket(pa, pb))
    )


@dataclass(frozen=True)
class WitnessReport:
    """``i * phi_i(w) = i^(1/4)`` at ``w = sum_{k<=N} k^(-3/4) e_k``.

    ``exact`` is the value when ``i`` is a fourth power; otherwise the value
    lies strictly inside ``(lower, upper)``.
    """

    i: int
    truncation: int
    expression: str
    exact: Optional[Fraction]
    lower: Fraction
    upper: Fraction


def _fourth_root_floor(n: int) -> int:
    # floor(sqrt(floor(sqrt(n)))) == floor(n ** (1/4)) for integers n >= 0
    return isqrt(isqrt(n))


def witt_unbounded_witness(i: int, truncation: Optional[int] = None, digits: int = 6) -> WitnessReport:
    if i < 1:
        raise ValueError("the witness uses modes i >= 1")
    n = i if truncation is None else truncation
    if i > n:
        raise ValueError(f"mode {i} lies outside the truncation N = {n}")
    root = _fourth_root_floor(i)
    if root**4 == i:
        value = Fraction(root)
        return WitnessReport(i, n, f"{i}^(1/4)", value, value, value)
    scale = 10**digits
    q = _fourth_root_floor(i * scale**4)
    return WitnessReport(i, n, f"{i}^(1/4)", None, Fraction(q, scale), Fraction(q + 1, scale))
