"""Exact star-products on a symplectic Hilbert space, over rational arithmetic."""

from .algebra import HbarSeries, series_exp
from .functional import PolyFunctional, Point, eta, evaluate, hs_check_fn, partial, x
from .hochschild import EA, TA, CrA, equiv_certify, equiv_transform_poly, hochschild_delta
from .kernel import (
    Constant,
    Diagonal,
    FiniteMatrix,
    Geometric,
    HSClass,
    Identity,
    NonHSKernel,
    PowerLaw,
    Zero,
    hs_classify,
    kernel_sub,
)
from .star import MOYAL, NORMAL, HbarPoly, StarFamily, cochain, poisson, star
from .symbol import ExpFunctional, exp_truncate_to_poly, symbol_equiv_transform, symbol_star
from .witt import witt_bracket, witt_unbounded_witness

__all__ = [
    "Constant",
    "CrA",
    "Diagonal",
    "EA",
    "ExpFunctional",
    "FiniteMatrix",
    "Geometric",
    "HSClass",
    "HbarPoly",
    "HbarSeries",
    "Identity",
    "MOYAL",
    "NORMAL",
    "NonHSKernel",
    "Point",
    "PolyFunctional",
    "PowerLaw",
    "StarFamily",
    "TA",
    "Zero",
    "cochain",
    "equiv_certify",
    "equiv_transform_poly",
    "eta",
    "evaluate",
    "exp_truncate_to_poly",
    "hochschild_delta",
    "hs_check_fn",
    "hs_classify",
    "kernel_sub",
    "partial",
    "poisson",
    "series_exp",
    "star",
    "symbol_equiv_transform",
    "symbol_star",
    "witt_bracket",
    "witt_unbounded_witness",
    "x",
]
