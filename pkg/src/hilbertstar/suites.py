"""Seeded randomized identity checks shared by the CLI and the test-suite.

Each suite returns a plain dict (JSON-ready) with a ``passed`` flag and the
number of failing trials.  Trials run in index order, so a given seed
always yields the same report.
"""

from __future__ import annotations

import random
from typing import Dict, List

from .algebra import HbarSeries
from .functional import PolyFunctional
from .hochschild import (
    CrA,
    DeltaOf,
    EA,
    TA,
    ea_eval,
    equiv_certify,
    equiv_transform_poly,
    hochschild_delta,
)
from .io import hbarpoly_to_json, poly_to_json, exp_to_json
from .kernel import OperatorKernel, hs_classify
from .sampling import polynomial, rational, sparse_vector
from .star import HbarPoly, cochain, poisson, star
from .symbol import ExpFunctional, symbol_equiv_transform, symbol_star


def _worst(residuals: List) -> Dict:
    """The residual with the most terms (zero polynomial when all vanish)."""
    def size(r):
        return sum(len(c) for c in r.comps) if isinstance(r, HbarPoly) else len(r)

    worst = max(residuals, key=size, default=PolyFunctional())
    if isinstance(worst, HbarPoly):
        return hbarpoly_to_json(worst)
    return poly_to_json(worst)


def assoc_suite(kernel: OperatorKernel, seed: int, trials: int, order: int) -> Dict:
    rng = random.Random(seed)
    residuals, failures, all_exact = [], 0, True
    for _ in range(trials):
        F, G, H = polynomial(rng), polynomial(rng), polynomial(rng)
        left = star(kernel, F, star(kernel, G, H, order), order)
        right = star(kernel, star(kernel, F, G, order), H, order)
        res = left - right
        all_exact = all_exact and left.exact and right.exact
        if not res.is_zero():
            failures += 1
        residuals.append(res)
    return {
        "trials": trials,
        "order": order,
        "failures": failures,
        "max_residual": _worst(residuals),
        "all_exact": all_exact,
        "passed": failures == 0,
    }


def normalization_suite(kernel: OperatorKernel, seed: int, trials: int) -> Dict:
    """``C1(F, G) - C1(G, F) - 2 {F, G}`` on random pairs."""
    rng = random.Random(seed)
    failures, residuals = 0, []
    for _ in range(trials):
        F, G = polynomial(rng), polynomial(rng)
        res = cochain(kernel, F, G, 1) - cochain(kernel, G, F, 1) - poisson(F, G) * 2
        failures += not res.is_zero()
        residuals.append(res)
    return {"trials": trials, "failures": failures, "max_residual": _worst(residuals), "passed": failures == 0}


def cocycle_suite(kernel: OperatorKernel, seed: int, trials: int) -> Dict:
    rng = random.Random(seed)
    C = EA(kernel)
    failures, residuals = 0, []
    for _ in range(trials):
        args = [polynomial(rng) for _ in range(3)]
        res = hochschild_delta(C, args)
        failures += not res.is_zero()
        residuals.append(res)
    return {"trials": trials, "failures": failures, "max_residual": _worst(residuals), "passed": failures == 0}


def coboundary_suite(kernel: OperatorKernel, seed: int, trials: int) -> Dict:
    """``delta T_S - E_S`` on random pairs; raises NonHSKernel for non-HS ``S``."""
    T = TA(kernel)
    rng = random.Random(seed)
    failures, residuals = 0, []
    for _ in range(trials):
        F, G = polynomial(rng), polynomial(rng)
        res = hochschild_delta(T, [F, G]) - ea_eval(kernel, F, G)
        failures += not res.is_zero()
        residuals.append(res)
    return {"trials": trials, "failures": failures, "max_residual": _worst(residuals), "passed": failures == 0}


def delta_squared_suite(kernel: OperatorKernel, seed: int, trials: int) -> Dict:
    rng = random.Random(seed)
    cochains = [EA(kernel), CrA(kernel, 1), CrA(kernel, 2)]
    if hs_classify(kernel).is_hs:
        cochains.append(TA(kernel))
    failures, residuals = 0, []
    for _ in range(trials):
        for C in cochains:
            args = [polynomial(rng, max_degree=2, max_terms=3) for _ in range(C.arity + 2)]
            res = DeltaOf(DeltaOf(C)).evaluate(*args[: C.arity + 2])
            failures += not res.is_zero()
            residuals.append(res)
    return {
        "trials": trials,
        "cochains": [type(C).__name__ + (f"(r={C.r})" if isinstance(C, CrA) else "") for C in cochains],
        "failures": failures,
        "max_residual": _worst(residuals),
        "passed": failures == 0,
    }


def random_series(rng: random.Random, order: int) -> HbarSeries:
    return HbarSeries(tuple(rational(rng) if rng.random() < 0.7 else 0 for _ in range(order + 1)))


def random_exp(rng: random.Random, order: int, max_support: int = 4, max_terms: int = 2) -> ExpFunctional:
    return ExpFunctional(
        [
            (random_series(rng, order), sparse_vector(rng, max_support), sparse_vector(rng, max_support))
            for _ in range(rng.randint(1, max_terms))
        ]
    )


def poly_intertwining_suite(a: OperatorKernel, b: OperatorKernel, seed: int, trials: int, order: int) -> Dict:
    """``T(F *A G) = T F *B T G`` through ``hbar**order`` on random polynomial pairs."""
    rng = random.Random(seed)
    failures, residuals = 0, []
    for _ in range(trials):
        F, G = polynomial(rng), polynomial(rng)
        left = equiv_transform_poly(a, b, star(a, F, G, order), order)
        right = star(b, equiv_transform_poly(a, b, F, order), equiv_transform_poly(a, b, G, order), order)
        res = left - right
        failures += not res.is_zero()
        residuals.append(res)
    return {"trials": trials, "order": order, "failures": failures, "max_residual": _worst(residuals), "passed": failures == 0}


def symbol_intertwining_suite(a: OperatorKernel, b: OperatorKernel, seed: int, trials: int, order: int) -> Dict:
    rng = random.Random(seed)
    failures = 0
    worst = ExpFunctional()
    for _ in range(trials):
        e1, e2 = random_exp(rng, order), random_exp(rng, order)
        left = symbol_equiv_transform(a, b, symbol_star(a, e1, e2, order), order)
        right = symbol_star(
            b, symbol_equiv_transform(a, b, e1, order), symbol_equiv_transform(a, b, e2, order), order
        )
        res = left - right
        if len(res):
            failures += 1
            worst = res
    return {"trials": trials, "order": order, "failures": failures, "max_residual": exp_to_json(worst), "passed": failures == 0}


def equiv_suite(a: OperatorKernel, b: OperatorKernel, seed: int, trials: int, order: int) -> Dict:
    """Certificate, plus both intertwining checks when the verdict is positive."""
    verdict = equiv_certify(a, b)
    out: Dict = {"verdict": verdict}
    if verdict.equivalent:
        out["polynomial_intertwining"] = poly_intertwining_suite(a, b, seed, trials, order)
        out["symbol_intertwining"] = symbol_intertwining_suite(a, b, seed + 1, trials, order)
    return out
