import random
from fractions import Fraction
from math import factorial

import pytest

from hilbertstar.algebra import HbarSeries, series_exp
from hilbertstar.functional import PolyFunctional, eta
from hilbertstar.kernel import Diagonal, FiniteMatrix, Identity, PowerLaw, Zero
from hilbertstar.sampling import finite_matrix, sparse_vector
from hilbertstar.star import HbarPoly
from hilbertstar.suites import random_exp
from hilbertstar.symbol import (
    ExpFunctional,
    contraction_residual,
    exp_truncate_to_poly,
    symbol_equiv_transform,
    symbol_star,
)

phi = ExpFunctional.phi
KERNELS = {
    "zero": Zero(),
    "identity": Identity(),
    "finite": FiniteMatrix(((1, "-1/2", 0), (2, 0, 1), (0, "1/3", -1))),
    "diag": Diagonal(PowerLaw(-1)),
}


def test_unit_factor():
    e = phi({1: 2, 3: -1}, {2: "1/2"}, order=3)
    assert symbol_star(Identity(), e, ExpFunctional.unit(3), 3) == e
    assert symbol_star(Zero(), ExpFunctional.unit(3), e, 3) == e


def test_moyal_reordering_prefactor():
    out = symbol_star(Zero(), phi({}, {1: 1}, order=3), phi({1: 1}, {}, order=3), 3)
    assert out == phi({1: 1}, {1: 1}, series_exp(1, 3))


def test_normal_ordered_exponentials_multiply_freely():
    out = symbol_star(Identity(), phi({1: 1}, {}, order=3), phi({}, {1: 1}, order=3), 3)
    assert out == phi({1: 1}, {1: 1}, order=3)


def test_equiv_transform_examples():
    e = phi({1: 1}, {1: 1}, order=3)
    assert symbol_equiv_transform(Identity(), Identity(), e, 3) == e
    assert symbol_equiv_transform(Identity(), Zero(), e, 3) == phi({1: 1}, {1: 1}, series_exp(-1, 3))
    f = phi({}, {2: 5}, order=3)
    assert symbol_equiv_transform(Identity(), Zero(), f, 3) == f


def test_truncate_to_poly():
    assert exp_truncate_to_poly(ExpFunctional.unit(0), 3) == HbarPoly([PolyFunctional.constant(1)])
    E1 = PolyFunctional.var(eta(1))
    P = exp_truncate_to_poly(phi({1: 1}, {}, order=0), 2)
    assert P == HbarPoly([1 + E1 + E1**2 * Fraction(1, 2)])
    assert not P.exact


def test_equal_keys_merge_and_cancel():
    a = phi({1: 1}, {}, order=1)
    assert len(a + a) == 1
    assert len(a - a) == 0


def _prefactor(A, y, xi, y2, xi2, order):
    # entrywise double sums, then the Taylor series written out directly
    idx = range(1, 8)
    s = Fraction(0)
    for i in idx:
        for j in idx:
            s += xi.get(i, 0) * (A.entry(i, j) + (i == j)) * y2.get(j, 0)
            s += xi2.get(i, 0) * (A.entry(i, j) - (i == j)) * y.get(j, 0)
    return HbarSeries(tuple(s**r / factorial(r) for r in range(order + 1)))


@pytest.mark.parametrize("name", KERNELS)
def test_symbol_law_against_direct_prefactor(name):
    A, rng = KERNELS[name], random.Random(17)
    for _ in range(50):
        y, xi, y2, xi2 = (sparse_vector(rng) for _ in range(4))
        out = symbol_star(A, phi(y, xi, order=4), phi(y2, xi2, order=4), 4)
        expected = _prefactor(A, y, xi, y2, xi2, 4)
        total = {k: v for k, v in ((i, y.get(i, 0) + y2.get(i, 0)) for i in range(1, 8)) if v}
        total_xi = {k: v for k, v in ((i, xi.get(i, 0) + xi2.get(i, 0)) for i in range(1, 8)) if v}
        assert out == phi(total, total_xi, expected)


@pytest.mark.parametrize("name", KERNELS)
def test_symbol_associativity(name):
    A, rng = KERNELS[name], random.Random(23)
    for _ in range(30):
        e1, e2, e3 = (random_exp(rng, 4) for _ in range(3))
        assert symbol_star(A, e1, symbol_star(A, e2, e3, 4), 4) == symbol_star(A, symbol_star(A, e1, e2, 4), e3, 4)


def test_symbol_intertwining_diag_to_zero():
    rng = random.Random(29)
    A, B = Diagonal(PowerLaw(-1)), Zero()
    for _ in range(30):
        e1, e2 = random_exp(rng, 4), random_exp(rng, 4)
        T = lambda e: symbol_equiv_transform(A, B, e, 4)
        assert T(symbol_star(A, e1, e2, 4)) == symbol_star(B, T(e1), T(e2), 4)


def test_moyal_antisymmetry_at_first_order():
    rng = random.Random(31)
    for _ in range(30):
        y, xi, y2, xi2 = (sparse_vector(rng) for _ in range(4))
        a, b = phi(y, xi, order=1), phi(y2, xi2, order=1)
        diff = symbol_star(Zero(), a, b, 1) - symbol_star(Zero(), b, a, 1)
        pair = sum(xi.get(i, 0) * y2.get(i, 0) - xi2.get(i, 0) * y.get(i, 0) for i in range(1, 8))
        coeff = next(iter(diff.terms.values()), HbarSeries.zero(1))
        assert coeff[0] == 0
        assert coeff[1] == 2 * pair


@pytest.mark.parametrize("name", KERNELS)
def test_symbol_engine_matches_contraction_engine(name):
    A, rng = KERNELS[name], random.Random(37)
    for _ in range(15):
        e1 = random_exp(rng, 4, max_support=2, max_terms=1)
        e2 = random_exp(rng, 4, max_support=2, max_terms=1)
        assert contraction_residual(A, e1, e2, 4, 4).is_zero()


def test_random_finite_kernel_cross_check():
    rng = random.Random(41)
    A = finite_matrix(rng)
    for _ in range(10):
        e1 = random_exp(rng, 3, max_support=2, max_terms=1)
        e2 = random_exp(rng, 3, max_support=2, max_terms=1)
        assert contraction_residual(A, e1, e2, 3, 4).is_zero()
