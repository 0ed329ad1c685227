"""JSON and text formats for functionals, kernels, points and reports.

Serialization is canonical: keys appear in a fixed order and terms are
sorted by (total degree, monomial), so identical values give identical bytes.

Text grammar for polynomials::

    expr   := term (("+" | "-") term)*
    term   := coeff? factor*
    factor := ("x" | "eta") int ("^" int)?
    coeff  := int ("/" int)?
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .algebra import HbarSeries, format_scalar, scalar
from .functional import Leg, PolyFunctional, Point, Slot, make_monomial, mono_degree
from .hochschild import EquivalenceVerdict
from .kernel import (
    Constant,
    Diagonal,
    Difference,
    FiniteMatrix,
    Geometric,
    HSClassification,
    Identity,
    OperatorKernel,
    PowerLaw,
    Zero,
)
from .star import HbarPoly
from .symbol import ExpFunctional

SCHEMA_VERSION = "1"


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: Optional[int] = None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}\n    {text}\n    {' ' * pos}^"
        super().__init__(message)


# -- scalars and vectors ------------------------------------------------------------


def parse_scalar(value: Any) -> Fraction:
    if isinstance(value, float):
        raise ParseError(f"floating-point scalar {value!r}; write it as a string \"p/q\"")
    try:
        return scalar(value)
    except ZeroDivisionError as exc:
        raise ParseError(str(exc)) from None
    except (TypeError, ValueError):
        raise ParseError(f"not an exact rational: {value!r}") from None


def vector_to_json(v) -> Dict[str, str]:
    return {str(i): format_scalar(c) for i, c in sorted(dict(v).items()) if c}


def vector_from_json(obj: Dict[str, Any]) -> Dict[int, Fraction]:
    out = {}
    for key, value in obj.items():
        if not re.fullmatch(r"[1-9]\d*", str(key)):
            raise ParseError(f"vector index {key!r} must be a positive integer")
        out[int(key)] = parse_scalar(value)
    return out


# -- polynomials ----------------------------------------------------------------------

_VAR = re.compile(r"(x|eta)(\d+)$")


def _slot_from_name(name: str) -> Slot:
    m = _VAR.match(name)
    if not m:
        raise ParseError(f"unknown variable {name!r}")
    index = int(m.group(2))
    if index < 1:
        raise ParseError(f"variable {name!r}: indices start at 1")
    return Slot(Leg.H if m.group(1) == "x" else Leg.HSTAR, index)


def poly_to_json(F: PolyFunctional) -> Dict[str, Any]:
    return {
        "terms": [
            {"coeff": format_scalar(c), "mono": {s.name: e for s, e in m}}
            for m, c in F.sorted_terms()
        ]
    }


def poly_from_json(obj: Dict[str, Any]) -> PolyFunctional:
    if not isinstance(obj, dict) or "terms" not in obj:
        raise ParseError("polynomial JSON needs a \"terms\" list")
    terms: Dict = {}
    for t in obj["terms"]:
        powers = {}
        for name, e in t.get("mono", {}).items():
            if not isinstance(e, int) or e < 0:
                raise ParseError(f"exponent of {name} must be a non-negative integer")
            powers[_slot_from_name(name)] = e
        m = make_monomial(powers)
        terms[m] = terms.get(m, 0) + parse_scalar(t["coeff"])
    return PolyFunctional(terms)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[A-Za-z_]+\d*)|(?P<op>[-+*^−]))")


def parse_poly_text(text: str) -> PolyFunctional:
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character", text, pos + len(stripped[pos:]) - len(stripped[pos:].lstrip()))
        kind = m.lastgroup
        tokens.append((kind, m.group(kind).replace("−", "-"), m.start(kind)))
        pos = m.end()
    if not tokens:
        raise ParseError("empty expression", text, 0)

    terms: Dict = {}
    k = 0

    def peek():
        return tokens[k] if k < len(tokens) else (None, None, len(text))

    sign = 1
    expect_term = True
    while True:
        kind, val, at = peek()
        if expect_term:
            if kind == "op" and val in "+-":
                sign = -sign if val == "-" else sign
                k += 1
                continue
            coeff = Fraction(sign)
            seen = False
            if kind == "num":
                if "/" in val and int(val.split("/")[1]) == 0:
                    raise ParseError("zero denominator", text, at)
                coeff *= Fraction(val)
                k += 1
                seen = True
            powers: Dict[Slot, int] = {}
            while True:
                kind, val, at = peek()
                if kind == "op" and val == "*":
                    k += 1
                    kind, val, at = peek()
                    if kind not in ("var", "num"):
                        raise ParseError("expected a factor after '*'", text, at)
                if kind == "num" and not powers and not seen:
                    coeff *= Fraction(val)
                    k += 1
                    seen = True
                    continue
                if kind != "var":
                    break
                try:
                    slot = _slot_from_name(val)
                except ParseError as exc:
                    raise ParseError(str(exc).split(" at position")[0], text, at) from None
                k += 1
                e = 1
                kind2, val2, at2 = peek()
                if kind2 == "op" and val2 == "^":
                    k += 1
                    kind3, val3, at3 = peek()
                    if kind3 != "num" or "/" in val3:
                        raise ParseError("expected an integer exponent", text, at3)
                    e = int(val3)
                    k += 1
                powers[slot] = powers.get(slot, 0) + e
                seen = True
            if not seen:
                raise ParseError("expected a term", text, at)
            mono = make_monomial(powers)
            terms[mono] = terms.get(mono, 0) + coeff
            expect_term = False
            sign = 1
        else:
            if kind is None:
                break
            if kind == "op" and val in "+-":
                expect_term = True
                continue
            raise ParseError(f"unexpected {val!r}", text, at)
    return PolyFunctional(terms)


def format_poly_text(F: PolyFunctional) -> str:
    """Text form accepted by :func:`parse_poly_text`."""
    return str(F)


# -- series, hbar-polynomials, exponentials ----------------------------------------------


def series_to_json(s: HbarSeries) -> Dict[str, Any]:
    return {"order": s.order, "coeffs": [format_scalar(c) for c in s.coeffs]}


def series_from_json(obj: Dict[str, Any]) -> HbarSeries:
    coeffs = [parse_scalar(c) for c in obj["coeffs"]]
    if "order" in obj and obj["order"] != len(coeffs) - 1:
        raise ParseError("series order does not match the number of coefficients")
    return HbarSeries(tuple(coeffs))


def hbarpoly_to_json(P: HbarPoly) -> Dict[str, Any]:
    return {"order": P.order, "exact": P.exact, "coeffs": [poly_to_json(c) for c in P.comps]}


def hbarpoly_from_json(obj: Dict[str, Any]) -> HbarPoly:
    return HbarPoly([poly_from_json(c) for c in obj["coeffs"]], bool(obj.get("exact", True)))


def exp_to_json(e: ExpFunctional) -> Dict[str, Any]:
    return {
        "terms": [
            {"coeff": series_to_json(c), "y": vector_to_json(y), "xi": vector_to_json(xi)}
            for (y, xi), c in sorted(e.terms.items())
        ]
    }


def exp_from_json(obj: Dict[str, Any]) -> ExpFunctional:
    return ExpFunctional(
        [
            (series_from_json(t["coeff"]), vector_from_json(t.get("y", {})), vector_from_json(t.get("xi", {})))
            for t in obj["terms"]
        ]
    )


def point_to_json(p: Point) -> Dict[str, Any]:
    return {"x": vector_to_json(p.x), "eta": vector_to_json(p.eta)}


def point_from_json(obj: Dict[str, Any]) -> Point:
    return Point(vector_from_json(obj.get("x", {})), vector_from_json(obj.get("eta", {})))


def parse_functional(text: str):
    """Parse a polynomial (JSON or text grammar) or an exponential functional (JSON)."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", text, exc.pos) from None
        terms = obj.get("terms") if isinstance(obj, dict) else None
        if terms is None:
            raise ParseError("functional JSON needs a \"terms\" list")
        if any("y" in t or "xi" in t for t in terms):
            return exp_from_json(obj)
        return poly_from_json(obj)
    return parse_poly_text(text)


def parse_poly(text: str) -> PolyFunctional:
    F = parse_functional(text)
    if not isinstance(F, PolyFunctional):
        raise ParseError("expected a polynomial, got an exponential functional")
    return F


# -- kernels ---------------------------------------------------------------------------


def kernel_to_json(A: OperatorKernel) -> Dict[str, Any]:
    if isinstance(A, Identity):
        return {"kind": "identity"}
    if isinstance(A, Zero):
        return {"kind": "zero"}
    if isinstance(A, FiniteMatrix):
        return {"kind": "finite", "rows": [[format_scalar(a) for a in row] for row in A.rows]}
    if isinstance(A, Diagonal):
        g = A.generator
        if isinstance(g, PowerLaw):
            return {"kind": "diag", "family": "power", "p": format_scalar(g.p)}
        if isinstance(g, Geometric):
            return {"kind": "diag", "family": "geom", "r": format_scalar(g.r)}
        return {"kind": "diag", "family": "const", "c": format_scalar(g.c)}
    if isinstance(A, Difference):
        return {"kind": "diff", "a": kernel_to_json(A.a), "b": kernel_to_json(A.b)}
    raise TypeError(f"cannot serialize {A!r}")


def kernel_from_json(obj: Any) -> OperatorKernel:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError(f"kernel spec needs a \"kind\": {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "identity":
            return Identity()
        if kind == "zero":
            return Zero()
        if kind == "finite":
            return FiniteMatrix(tuple(tuple(parse_scalar(a) for a in row) for row in obj["rows"]))
        if kind == "diag":
            family = obj.get("family")
            if family == "power":
                return Diagonal(PowerLaw(parse_scalar(obj["p"])))
            if family == "geom":
                return Diagonal(Geometric(parse_scalar(obj["r"])))
            if family == "const":
                return Diagonal(Constant(parse_scalar(obj["c"])))
            raise ParseError(f"unknown diagonal family {family!r}")
        if kind == "diff":
            return Difference(kernel_from_json(obj["a"]), kernel_from_json(obj["b"]))
    except KeyError as exc:
        raise ParseError(f"kernel spec of kind {kind!r} is missing {exc}") from None
    raise ParseError(f"unknown kernel kind {kind!r}")


def parse_kernel(text: str) -> OperatorKernel:
    """Kernel spec as JSON, or the bare words ``identity`` / ``zero``."""
    stripped = text.strip()
    if stripped in ("identity", "zero"):
        return kernel_from_json({"kind": stripped})
    try:
        obj = json.loads(stripped)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid kernel JSON: {exc.msg}", text, exc.pos) from None
    return kernel_from_json(obj)


def classification_to_json(c: HSClassification) -> Dict[str, Any]:
    out = {"class": c.hs_class.value, "certificate": c.certificate}
    if c.hs_norm_sq is not None:
        out["hs_norm_sq"] = format_scalar(c.hs_norm_sq)
    return out


def verdict_to_json(v: EquivalenceVerdict) -> Dict[str, Any]:
    return {
        "verdict": v.verdict.value,
        "hs_class_of_difference": v.hs_class_of_difference.value if v.hs_class_of_difference else None,
        "witness": v.witness,
    }


# -- reports ---------------------------------------------------------------------------


@dataclass
class Report:
    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    outputs: Dict[str, Any] = field(default_factory=dict)
    verdicts: Dict[str, Any] = field(default_factory=dict)
    exact: Optional[bool] = None
    timing: Optional[float] = None

    def to_json(self) -> Dict[str, Any]:
        out = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "verdicts": self.verdicts,
            "exact": self.exact,
        }
        # Wall-clock time breaks byte-identical reruns, so it is opt-in.
        if self.timing is not None:
            out["timing_s"] = round(self.timing, 6)
        return out


def emit_report(report: Report) -> str:
    return json.dumps(report.to_json(), indent=2, ensure_ascii=False) + "\n"


def dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)
