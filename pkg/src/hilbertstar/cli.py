"""Command-line driver.

Every subcommand prints one canonical JSON report on stdout.  Exit codes:
0 when all checks pass, 1 when an identity fails (an engine bug), 2 for
undecidable or inadmissible input (parse errors, non-HS kernels).
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import List, Optional

from .functional import KernelQuadratic, hs_check_fn
from .hochschild import Verdict
from .io import (
    ParseError,
    Report,
    classification_to_json,
    emit_report,
    exp_to_json,
    hbarpoly_to_json,
    kernel_to_json,
    parse_functional,
    parse_kernel,
    parse_poly,
    verdict_to_json,
)
from .kernel import Identity, NonHSKernel, UndecidableClass, Zero, hs_classify
from .star import star
from . import suites
from .symbol import ExpFunctional, symbol_star
from .witt import jacobi_residual, structure_table, witt_str, witt_unbounded_witness

EXIT_OK, EXIT_VIOLATION, EXIT_INADMISSIBLE = 0, 1, 2


def _family_kernel(args):
    if args.family == "moyal":
        return Zero()
    if args.family == "normal":
        return Identity()
    if args.kernel is None:
        raise ParseError("--family kernel needs --kernel <spec>")
    return parse_kernel(args.kernel)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def cmd_star(args) -> tuple:
    kernel = _family_kernel(args)
    F, G = parse_poly(args.lhs), parse_poly(args.rhs)
    result = star(kernel, F, G, args.order)
    report = Report(
        "star",
        inputs={"family": args.family, "kernel": kernel_to_json(kernel), "order": args.order, "lhs": str(F), "rhs": str(G)},
        outputs={"result": hbarpoly_to_json(result), "text": str(result)},
        verdicts={"kernel_class": hs_classify(kernel).hs_class.value},
        exact=result.exact,
    )
    return report, EXIT_OK


def cmd_symbol_star(args) -> tuple:
    kernel = parse_kernel(args.kernel)
    e1, e2 = parse_functional(args.lhs), parse_functional(args.rhs)
    if not isinstance(e1, ExpFunctional) or not isinstance(e2, ExpFunctional):
        raise ParseError("symbol-star takes exponential functionals (JSON with y/xi)")
    result = symbol_star(kernel, e1, e2, args.order)
    report = Report(
        "symbol-star",
        inputs={"kernel": kernel_to_json(kernel), "order": args.order, "lhs": exp_to_json(e1), "rhs": exp_to_json(e2)},
        outputs={"result": exp_to_json(result)},
    )
    return report, EXIT_OK


def cmd_assoc(args) -> tuple:
    kernel = _family_kernel(args)
    out = suites.assoc_suite(kernel, args.seed, args.trials, args.order)
    report = Report(
        "assoc",
        inputs={"family": args.family, "kernel": kernel_to_json(kernel), "seed": args.seed, "trials": args.trials, "order": args.order},
        outputs={k: v for k, v in out.items() if k != "passed"},
        verdicts={"associative": out["passed"], "kernel_class": hs_classify(kernel).hs_class.value},
        exact=out["all_exact"],
    )
    return report, EXIT_OK if out["passed"] else EXIT_VIOLATION


def cmd_equiv(args) -> tuple:
    a, b = parse_kernel(args.a), parse_kernel(args.b)
    out = suites.equiv_suite(a, b, args.seed, args.trials, args.verify_order)
    verdict = out.pop("verdict")
    report = Report(
        "equiv",
        inputs={"a": kernel_to_json(a), "b": kernel_to_json(b), "verify_order": args.verify_order, "seed": args.seed, "trials": args.trials},
        outputs=out,
        verdicts=verdict_to_json(verdict),
    )
    if verdict.verdict is Verdict.UNDECIDABLE:
        return report, EXIT_INADMISSIBLE
    ok = all(v["passed"] for v in out.values())
    return report, EXIT_OK if ok else EXIT_VIOLATION


def cmd_hs(args) -> tuple:
    inputs, outputs = {}, {}
    if args.kernel:
        kernel = parse_kernel(args.kernel)
        inputs["kernel"] = kernel_to_json(kernel)
        outputs["classification"] = classification_to_json(hs_classify(kernel))
    if args.quadratic:
        kernel = parse_kernel(args.quadratic)
        inputs["quadratic"] = kernel_to_json(kernel)
        check = hs_check_fn(KernelQuadratic(kernel))
        outputs["quadratic"] = {"verdict": check.verdict.value, "reason": check.reason}
    if args.function:
        F = parse_poly(args.function)
        inputs["function"] = str(F)
        check = hs_check_fn(F)
        outputs["function"] = {"verdict": check.verdict.value, "reason": check.reason}
    if not inputs:
        raise ParseError("hs needs at least one of --kernel, --quadratic, --function")
    return Report("hs", inputs=inputs, outputs=outputs), EXIT_OK


def cmd_hochschild(args) -> tuple:
    kernel = parse_kernel(args.kernel)
    run = {
        "cocycle": suites.cocycle_suite,
        "coboundary": suites.coboundary_suite,
        "delta-squared": suites.delta_squared_suite,
    }[args.check]
    out = run(kernel, args.seed, args.trials)
    report = Report(
        "hochschild",
        inputs={"check": args.check, "kernel": kernel_to_json(kernel), "seed": args.seed, "trials": args.trials},
        outputs={k: v for k, v in out.items() if k != "passed"},
        verdicts={"holds": out["passed"], "kernel_class": hs_classify(kernel).hs_class.value},
    )
    return report, EXIT_OK if out["passed"] else EXIT_VIOLATION


def cmd_witt(args) -> tuple:
    inputs, outputs, ok = {}, {}, True
    if args.table is not None:
        rows = structure_table(args.table)
        inputs["table"] = args.table
        outputs["table"] = rows
        ok = ok and all(r["matches"] for r in rows)
    if args.jacobi is not None:
        residuals = []
        n = args.jacobi
        for a in range(n + 1):
            for b in range(n + 1):
                for c in range(n + 1):
                    res = jacobi_residual(a, b, c)
                    if not res.is_zero():
                        residuals.append({"a": a, "b": b, "c": c, "residual": witt_str(res)})
        inputs["jacobi"] = n
        outputs["jacobi"] = {"triples": (n + 1) ** 3, "nonzero_residuals": residuals}
        ok = ok and not residuals
    if args.witness is not None:
        indices = [int(t) for t in args.witness.split(",") if t.strip()]
        reports = [witt_unbounded_witness(i, max(indices)) for i in indices]
        inputs["witness"] = indices
        outputs["witness"] = [
            {
                "i": w.i,
                "expression": w.expression,
                "exact": None if w.exact is None else str(w.exact),
                "lower": str(w.lower),
                "upper": str(w.upper),
            }
            for w in reports
        ]
        increasing = all(p.upper <= q.lower or (p.exact is not None and q.exact is not None and p.exact < q.exact)
                         for p, q in zip(reports, reports[1:]))
        outputs["strictly_increasing"] = increasing
    if not inputs:
        raise ParseError("witt needs --table, --jacobi or --witness")
    return Report("witt", inputs=inputs, outputs=outputs, verdicts={"holds": ok}), EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hilbertstar", description=__doc__.splitlines()[0])
    parser.add_argument("--timing", action="store_true", help="add wall-clock time to the report")
    sub = parser.add_subparsers(dest="command", required=True)

    def family_args(p):
        p.add_argument("--family", choices=["moyal", "normal", "kernel"], default="moyal")
        p.add_argument("--kernel", help="kernel spec JSON (with --family kernel)")

    p = sub.add_parser("star", help="star-product of two polynomials")
    family_args(p)
    p.add_argument("--order", type=_non_negative, default=4)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(run=cmd_star)

    p = sub.add_parser("symbol-star", help="star-product of exponential functionals")
    p.add_argument("--kernel", default="zero")
    p.add_argument("--order", type=_non_negative, default=4)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(run=cmd_symbol_star)

    p = sub.add_parser("assoc", help="associativity on random triples")
    family_args(p)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=_positive, default=50)
    p.add_argument("--order", type=_non_negative, default=9)
    p.set_defaults(run=cmd_assoc)

    p = sub.add_parser("equiv", help="decide equivalence of *A and *B")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--verify-order", type=_non_negative, default=4)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=_positive, default=20)
    p.set_defaults(run=cmd_equiv)

    p = sub.add_parser("hs", help="Hilbert-Schmidt classification")
    p.add_argument("--kernel")
    p.add_argument("--quadratic", help="kernel A of the quadratic <eta, A x>")
    p.add_argument("--function", help="polynomial functional")
    p.set_defaults(run=cmd_hs)

    p = sub.add_parser("hochschild", help="cocycle / coboundary / delta^2 checks")
    p.add_argument("--check", choices=["cocycle", "coboundary", "delta-squared"], required=True)
    p.add_argument("--kernel", required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=_positive, default=20)
    p.set_defaults(run=cmd_hochschild)

    p = sub.add_parser("witt", help="Witt-algebra Poisson example")
    p.add_argument("--table", type=_non_negative, metavar="MAX")
    p.add_argument("--jacobi", type=_non_negative, metavar="MAX")
    p.add_argument("--witness", metavar="I,J,...")
    p.set_defaults(run=cmd_witt)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report, code = args.run(args)
    except (ParseError, NonHSKernel, UndecidableClass, ValueError) as exc:
        print(f"hilbertstar {args.command}: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    if args.timing:
        report.timing = time.perf_counter() - start
    sys.stdout.write(emit_report(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
