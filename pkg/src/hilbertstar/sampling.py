"""Seeded random inputs for the verification suites.

Every generator takes a :class:`random.Random` so that suites are
reproducible from a single integer seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict

from .functional import PolyFunctional, eta, make_monomial, x
from .kernel import Diagonal, FiniteMatrix, Identity, PowerLaw, Zero


def rational(rng: random.Random, bound: int = 5, den: int = 4) -> Fraction:
    """A nonzero rational p/q with |p| <= bound and 1 <= q <= den."""
    while True:
        p = rng.randint(-bound, bound)
        if p:
            return Fraction(p, rng.randint(1, den))


def polynomial(
    rng: random.Random,
    max_vars_per_leg: int = 3,
    max_degree: int = 3,
    max_index: int = 4,
    max_terms: int = 4,
) -> PolyFunctional:
    """Sparse polynomial in at most ``max_vars_per_leg`` x's and eta's.

    Constant terms are allowed; the result may be constant but never zero.
    """
    xs = rng.sample(range(1, max_index + 1), rng.randint(0, max_vars_per_leg))
    es = rng.sample(range(1, max_index + 1), rng.randint(0, max_vars_per_leg))
    slots = [x(i) for i in xs] + [eta(i) for i in es]
    terms: Dict = {}
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(0 if not terms else 1, max_degree) if slots else 0
        powers: Dict = {}
        for _ in range(deg):
            s = rng.choice(slots)
            powers[s] = powers.get(s, 0) + 1
        m = make_monomial(powers)
        terms[m] = terms.get(m, 0) + rational(rng)
    F = PolyFunctional(terms, max_index)
    return F if not F.is_zero() else PolyFunctional.constant(1)


def sparse_vector(rng: random.Random, max_support: int = 4, max_index: int = 6) -> Dict[int, Fraction]:
    k = rng.randint(0, max_support)
    return {i: rational(rng) for i in sorted(rng.sample(range(1, max_index + 1), k))}


def finite_matrix(rng: random.Random, n: int = 3) -> FiniteMatrix:
    return FiniteMatrix(tuple(tuple(rational(rng, 3, 3) if rng.random() < 0.8 else Fraction(0) for _ in range(n)) for _ in range(n)))


def suite_kernels(rng: random.Random):
    """The kernels exercised by the suites: identity, a random 3x3 matrix, diag(1/i)."""
    return {
        "identity": Identity(),
        "finite": finite_matrix(rng),
        "diag_power_-1": Diagonal(PowerLaw(-1)),
    }


def all_suite_kernels(rng: random.Random):
    return {"zero": Zero(), **suite_kernels(rng)}
