import json
import subprocess
import sys

import pytest

from hilbertstar.cli import main

DIAG = '{"kind":"diag","family":"power","p":"-1"}'
FINITE = '{"kind":"finite","rows":[["1","2"],["-1/2","3"]]}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def test_star_moyal(capsys):
    code, rep, _ = run(capsys, "star", "--family", "moyal", "--lhs", "x1", "--rhs", "eta1", "--order", "2")
    assert code == 0
    assert rep["outputs"]["text"] == "x1 eta1 + hbar"
    assert rep["exact"] is True


def test_star_normal(capsys):
    _, rep, _ = run(capsys, "star", "--family", "normal", "--lhs", "x1", "--rhs", "eta1", "--order", "2")
    assert rep["outputs"]["text"] == "x1 eta1 + 2*hbar"


def test_star_unit(capsys):
    _, rep, _ = run(capsys, "star", "--lhs", "1", "--rhs", "3/2 x1^2 eta3", "--order", "3")
    assert rep["outputs"]["text"] == "3/2 x1^2 eta3"


def test_star_kernel_family(capsys):
    code, rep, _ = run(capsys, "star", "--family", "kernel", "--kernel", DIAG, "--lhs", "x2", "--rhs", "eta2", "--order", "1")
    assert code == 0
    assert rep["outputs"]["text"] == "x2 eta2 + 3/2*hbar"


def test_star_parse_error(capsys):
    code, rep, err = run(capsys, "star", "--lhs", "x0", "--rhs", "x1")
    assert code == 2 and rep is None and "indices start at 1" in err


@pytest.mark.parametrize("family", ["moyal", "normal"])
def test_assoc(capsys, family):
    code, rep, _ = run(capsys, "assoc", "--family", family, "--seed", "1", "--trials", "50")
    assert code == 0
    assert rep["outputs"]["failures"] == 0
    assert all(not c["terms"] for c in rep["outputs"]["max_residual"]["coeffs"])


def test_assoc_zero_trials_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["assoc", "--trials", "0"])
    assert info.value.code == 2


def test_equiv_not_equivalent(capsys):
    code, rep, _ = run(capsys, "equiv", "--a", "identity", "--b", "zero")
    assert code == 0
    assert rep["verdicts"]["verdict"] == "not_equivalent"


def test_equiv_equivalent_and_verified(capsys):
    code, rep, _ = run(capsys, "equiv", "--a", DIAG, "--b", "zero", "--verify-order", "4", "--seed", "3")
    assert code == 0
    assert rep["verdicts"]["verdict"] == "equivalent"
    assert rep["outputs"]["polynomial_intertwining"]["passed"]
    assert rep["outputs"]["symbol_intertwining"]["passed"]


def test_equiv_identical(capsys):
    _, rep, _ = run(capsys, "equiv", "--a", FINITE, "--b", FINITE)
    assert rep["verdicts"]["verdict"] == "equivalent"
    assert "identity transform" in rep["verdicts"]["witness"]


def test_hochschild_checks(capsys):
    code, rep, _ = run(capsys, "hochschild", "--check", "cocycle", "--kernel", "identity")
    assert code == 0 and rep["verdicts"]["holds"]
    code, rep, _ = run(capsys, "hochschild", "--check", "coboundary", "--kernel", FINITE)
    assert code == 0 and rep["verdicts"]["holds"]
    code, _, _ = run(capsys, "hochschild", "--check", "delta-squared", "--kernel", DIAG, "--trials", "5")
    assert code == 0


def test_hochschild_coboundary_rejects_identity(capsys):
    code, rep, err = run(capsys, "hochschild", "--check", "coboundary", "--kernel", "identity")
    assert code == 2 and rep is None and "not Hilbert-Schmidt" in err


def test_hs(capsys):
    _, rep, _ = run(capsys, "hs", "--kernel", '{"kind":"diag","family":"geom","r":"1/2"}', "--quadratic", "identity")
    assert rep["outputs"]["classification"]["class"] == "hilbert_schmidt"
    assert rep["outputs"]["classification"]["hs_norm_sq"] == "1/3"
    assert rep["outputs"]["quadratic"]["verdict"] == "not_in_fhs"
    code, _, _ = run(capsys, "hs")
    assert code == 2


def test_witt(capsys):
    code, rep, _ = run(capsys, "witt", "--table", "3")
    assert code == 0
    row = next(r for r in rep["outputs"]["table"] if (r["m"], r["n"]) == (2, 3))
    assert row["bracket"] == "-phi5"
    _, rep, _ = run(capsys, "witt", "--jacobi", "5")
    assert rep["outputs"]["jacobi"]["nonzero_residuals"] == []
    _, rep, _ = run(capsys, "witt", "--witness", "1,16,81")
    assert [w["exact"] for w in rep["outputs"]["witness"]] == ["1", "2", "3"]
    assert rep["outputs"]["strictly_increasing"]


def test_symbol_star(capsys):
    lhs = '{"terms":[{"coeff":{"order":2,"coeffs":["1","0","0"]},"y":{},"xi":{"1":"1"}}]}'
    rhs = '{"terms":[{"coeff":{"order":2,"coeffs":["1","0","0"]},"y":{"1":"1"},"xi":{}}]}'
    _, rep, _ = run(capsys, "symbol-star", "--kernel", "zero", "--lhs", lhs, "--rhs", rhs, "--order", "2")
    (term,) = rep["outputs"]["result"]["terms"]
    assert term["coeff"]["coeffs"] == ["1", "1", "1/2"]
    code, _, _ = run(capsys, "symbol-star", "--lhs", "x1", "--rhs", rhs)
    assert code == 2


def test_reruns_are_byte_identical(capsys):
    argv = ["assoc", "--family", "kernel", "--kernel", FINITE, "--seed", "4", "--trials", "10"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_timing_is_opt_in(capsys):
    _, rep, _ = run(capsys, "--timing", "witt", "--table", "1")
    assert "timing_s" in rep


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hilbertstar", "star", "--lhs", "eta1", "--rhs", "x1", "--order", "1"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(proc.stdout)["outputs"]["text"] == "x1 eta1 - hbar"
