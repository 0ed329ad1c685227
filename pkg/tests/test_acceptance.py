"""Acceptance criteria, each checked exactly over rational arithmetic.

``pytest tests/test_acceptance.py`` lists one PASS/FAIL line per criterion in
the terminal summary; ``python3 tests/test_acceptance.py`` prints the same lines.
"""

import contextlib
import io
import random
import sys
from fractions import Fraction
from math import factorial

import pytest

from hilbertstar.algebra import HbarSeries
from hilbertstar.cli import main as cli_main
from hilbertstar.functional import HSVerdict, KernelQuadratic, hs_check_fn
from hilbertstar.hochschild import TA, Verdict, equiv_certify
from hilbertstar.kernel import (
    Constant,
    Diagonal,
    Geometric,
    HSClass,
    Identity,
    NonHSKernel,
    PowerLaw,
    Zero,
    hs_classify,
)
from hilbertstar.sampling import finite_matrix, sparse_vector
from hilbertstar.suites import (
    assoc_suite,
    coboundary_suite,
    cocycle_suite,
    normalization_suite,
    poly_intertwining_suite,
    random_exp,
    symbol_intertwining_suite,
)
from hilbertstar.symbol import ExpFunctional, contraction_residual, symbol_star
from hilbertstar.witt import jacobi_residual, structure_table, witt_unbounded_witness

SEED = 20240601


def kernels():
    rng = random.Random(SEED)
    return {"identity": Identity(), "finite": finite_matrix(rng), "diag_power_-1": Diagonal(PowerLaw(-1))}


# filled as criteria run; the conftest prints it in the terminal summary
RESULT_LINES = []


def _report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    RESULT_LINES.append(line)
    return ok


def crit_1():
    out = assoc_suite(Zero(), SEED, 200, 9)
    ok = out["passed"] and out["all_exact"]
    return ok, f"moyal, 200 triples, K=9, failures={out['failures']}, exact={out['all_exact']}"


def crit_2():
    parts = []
    ok = True
    for name, A in kernels().items():
        out = assoc_suite(A, SEED + 1, 200, 9)
        ok = ok and out["passed"] and out["all_exact"]
        parts.append(f"{name}: {out['failures']} failures")
    return ok, "; ".join(parts)


def crit_3():
    parts = []
    ok = True
    for name, A in {"zero": Zero(), **kernels()}.items():
        out = normalization_suite(A, SEED + 2, 100)
        ok = ok and out["passed"]
        parts.append(f"{name}: {out['failures']}")
    return ok, "failures per kernel " + ", ".join(parts)


def _direct_prefactor(A, y, xi, y2, xi2, order):
    s = Fraction(0)
    idx = range(1, 8)
    for i in idx:
        for j in idx:
            s += xi.get(i, 0) * (A.entry(i, j) + (i == j)) * y2.get(j, 0)
            s += xi2.get(i, 0) * (A.entry(i, j) - (i == j)) * y.get(j, 0)
    return HbarSeries(tuple(s**r / factorial(r) for r in range(order + 1)))


def crit_4():
    order = 4
    law_failures, cross_failures = 0, 0
    for n, (name, A) in enumerate({"zero": Zero(), **kernels()}.items()):
        rng = random.Random(SEED + 10 + n)
        for _ in range(100):
            y, xi, y2, xi2 = (sparse_vector(rng, max_support=4) for _ in range(4))
            got = symbol_star(A, ExpFunctional.phi(y, xi, order=order), ExpFunctional.phi(y2, xi2, order=order), order)
            ys = {i: y.get(i, 0) + y2.get(i, 0) for i in range(1, 8)}
            xs = {i: xi.get(i, 0) + xi2.get(i, 0) for i in range(1, 8)}
            want = ExpFunctional.phi(ys, xs, _direct_prefactor(A, y, xi, y2, xi2, order))
            law_failures += got != want
        rng = random.Random(SEED + 20 + n)
        for _ in range(100):
            e1 = random_exp(rng, order, max_support=3, max_terms=1)
            e2 = random_exp(rng, order, max_support=3, max_terms=1)
            cross_failures += not contraction_residual(A, e1, e2, order, 4).is_zero()
    ok = law_failures == 0 and cross_failures == 0
    return ok, f"symbol law failures={law_failures}/400, cross-check (K,d)=(4,4) failures={cross_failures}/400"


def crit_5():
    ok, parts = True, []
    for name, A in kernels().items():
        out = cocycle_suite(A, SEED + 3, 100)
        ok = ok and out["passed"]
        parts.append(f"delta E[{name}]: {out['failures']}")
    S = finite_matrix(random.Random(SEED + 4))
    out = coboundary_suite(S, SEED + 5, 100)
    ok = ok and out["passed"]
    parts.append(f"delta T_S - E_S: {out['failures']}")
    try:
        TA(Identity())
        rejected = False
    except NonHSKernel:
        rejected = True
    parts.append(f"T_I rejected: {rejected}")
    return ok and rejected, "; ".join(parts)


def crit_6():
    v1 = equiv_certify(Zero(), Identity())
    A, B = Diagonal(PowerLaw(-1)), Zero()
    v2 = equiv_certify(A, B)
    poly = poly_intertwining_suite(A, B, SEED + 6, 100, 4)
    sym = symbol_intertwining_suite(A, B, SEED + 7, 100, 4)
    ok = v1.verdict is Verdict.NOT_EQUIVALENT and v2.verdict is Verdict.EQUIVALENT and poly["passed"] and sym["passed"]
    return ok, (
        f"(0, I): {v1.verdict.value}; (diag(1/i), 0): {v2.verdict.value}; "
        f"polynomial failures={poly['failures']}/100, symbol failures={sym['failures']}/100"
    )


def _expected_class(gen):
    # stated criteria: p-series 2p < -1, geometric |r| < 1, constant c = 0
    if isinstance(gen, PowerLaw):
        return HSClass.HILBERT_SCHMIDT if 2 * gen.p < -1 else HSClass.UNBOUNDED if gen.p > 0 else HSClass.BOUNDED_NOT_HS
    if isinstance(gen, Geometric):
        r = abs(gen.r)
        return HSClass.HILBERT_SCHMIDT if r < 1 else HSClass.BOUNDED_NOT_HS if r == 1 else HSClass.UNBOUNDED
    return HSClass.HILBERT_SCHMIDT if gen.c == 0 else HSClass.BOUNDED_NOT_HS


def _samples(rng):
    out = [PowerLaw(Fraction(-1, 2)), Geometric(1), Geometric(-1), Constant(0)]
    while len(out) < 20:
        kind = rng.choice(["power", "geom", "const"])
        q = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
        out.append(PowerLaw(q) if kind == "power" else Geometric(q) if kind == "geom" else Constant(q))
    return out


def crit_7():
    q_id = hs_check_fn(KernelQuadratic(Identity())).verdict
    q_diag = hs_check_fn(KernelQuadratic(Diagonal(PowerLaw(-1)))).verdict
    samples = _samples(random.Random(SEED + 8))
    mismatches = sum(hs_classify(Diagonal(g)).hs_class is not _expected_class(g) for g in samples)
    ok = q_id is HSVerdict.NOT_IN_FHS and q_diag is HSVerdict.IN_FHS and mismatches == 0
    return ok, f"Q_I: {q_id.value}, Q_diag(1/i): {q_diag.value}, table mismatches={mismatches}/{len(samples)}"


def crit_8():
    table_ok = all(r["matches"] for r in structure_table(12))
    jacobi_bad = sum(
        not jacobi_residual(a, b, c).is_zero() for a in range(9) for b in range(9) for c in range(9)
    )
    wit = [witt_unbounded_witness(i, 256).exact for i in (1, 16, 81, 256)]
    increasing = all(p < q for p, q in zip(wit, wit[1:]))
    ok = table_ok and jacobi_bad == 0 and wit == [1, 2, 3, 4] and increasing
    return ok, f"table m,n<=12: {table_ok}; Jacobi residuals nonzero: {jacobi_bad}/729; witness {[str(w) for w in wit]}"


FULL_RUN = [
    ["star", "--family", "normal", "--lhs", "x1^2", "--rhs", "eta1^2", "--order", "4"],
    ["assoc", "--family", "moyal", "--seed", "1", "--trials", "20"],
    ["assoc", "--family", "kernel", "--kernel", '{"kind":"finite","rows":[["1","-2"],["1/3","0"]]}', "--seed", "2", "--trials", "20"],
    ["equiv", "--a", '{"kind":"diag","family":"power","p":"-1"}', "--b", "zero", "--seed", "3", "--trials", "10"],
    ["equiv", "--a", "identity", "--b", "zero"],
    ["hs", "--kernel", '{"kind":"diag","family":"geom","r":"1/2"}', "--quadratic", "identity"],
    ["hochschild", "--check", "cocycle", "--kernel", "identity", "--seed", "4"],
    ["hochschild", "--check", "coboundary", "--kernel", '{"kind":"finite","rows":[["1","2"],["0","1"]]}', "--seed", "5"],
    ["hochschild", "--check", "delta-squared", "--kernel", '{"kind":"diag","family":"power","p":"-1"}', "--seed", "6", "--trials", "5"],
    ["witt", "--table", "4", "--jacobi", "4", "--witness", "1,16,81,256"],
]


def _full_run():
    buf = io.StringIO()
    codes = []
    with contextlib.redirect_stdout(buf):
        for argv in FULL_RUN:
            codes.append(cli_main(argv))
    return buf.getvalue().encode(), codes


def crit_9():
    first, codes = _full_run()
    second, _ = _full_run()
    ok = first == second and all(c == 0 for c in codes)
    return ok, f"{len(FULL_RUN)} reports, {len(first)} bytes, identical={first == second}, exit codes={sorted(set(codes))}"


CRITERIA = [
    (1, "Moyal associativity", crit_1),
    (2, "exponential-family associativity", crit_2),
    (3, "C1 normalization", crit_3),
    (4, "symbol law and engine cross-check", crit_4),
    (5, "cocycle and coboundary", crit_5),
    (6, "equivalence theorem", crit_6),
    (7, "Hilbert-Schmidt function class", crit_7),
    (8, "Witt example", crit_8),
    (9, "determinism", crit_9),
]


@pytest.mark.parametrize("number, title, check", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check):
    ok, detail = check()
    assert _report(number, title, ok, detail), detail


if __name__ == "__main__":
    results = [_report(n, t, *c()) for n, t, c in CRITERIA]
    print("\n".join(RESULT_LINES))
    sys.exit(0 if all(results) else 1)
