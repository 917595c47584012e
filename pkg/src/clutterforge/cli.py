from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from importlib.metadata import PackageNotFoundError, version
from typing import Any

from rich.console import Console
from rich.logging import RichHandler

from clutterforge import formats, gf, render
from clutterforge.clutter import localization
from clutterforge.config import Budget, current_budget
from clutterforge.errors import (
    BudgetExceeded,
    ClutterForgeError,
    ParseError,
    VerificationFailed,
)
from clutterforge.matroid import TARGETS, CircuitMatroid, classify, has_minor, matroid_of
from clutterforge.verify import (
    ConditionResult,
    Theorem,
    TheoremReport,
    Verdict,
    ideal_condition,
    mfmc_condition,
    minor_condition,
    structure_condition,
    sweep,
    verify_theorem,
)
from clutterforge.vspace import Subspace
from clutterforge.witnesses import (
    MinorWitness,
    c5sq_witness,
    delta3_witness_k4e,
    delta3_witness_u24,
    localization_profile,
    non_disjoint_witness,
    structural_delta3_witness,
)

logger = logging.getLogger("clutterforge")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNKNOWN = 2

WITNESS_KINDS = ("overlap", "u24", "k4e", "c5sq", "structural")


def package_version() -> str:
    try:
        return version("clutterforge")
    except PackageNotFoundError:
        return "0+unknown"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clutterforge",
        description="Idealness, max-flow min-cut and excluded minors of mult(S) "
        "for subspaces S of GF(q)^n.",
    )
    parser.add_argument("--version", action="version", version=package_version())
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for search details (on stderr)")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--budget", type=float, default=1.0, metavar="N",
                        help="multiply every search budget by N")
    parser.add_argument("--check-cert", metavar="FILE",
                        help="re-validate a JSON certificate and exit")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("field", help="print the addition and multiplication tables of GF(q)")
    p.add_argument("--q", type=int, required=True)

    p = sub.add_parser("analyze", help="evaluate the conditions of an equivalence on S")
    p.add_argument("input", help="subspace file, text or JSON")
    p.add_argument("--theorem", help="odd, gf4, even or mfmc (1.1 to 1.4); default by q")
    p.add_argument("--ideal", action="store_true", help="idealness of mult(S) only")
    p.add_argument("--mfmc", action="store_true", help="max-flow min-cut property only")
    p.add_argument("--minors", action="store_true", help="excluded minors only")
    p.add_argument("--structure", action="store_true", help="structural condition only")

    p = sub.add_parser("witness", help="build a verified minor chain by construction")
    p.add_argument("kind", choices=WITNESS_KINDS)
    p.add_argument("input")
    p.add_argument("--alpha", help="comma-separated point outside S (c5sq)")
    p.add_argument("--seed", type=int, help="randomize the free choices (c5sq)")

    p = sub.add_parser("sweep", help="verify an equivalence on every subspace of GF(q)^n")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theorem", required=True)
    p.add_argument("--out", help="write the CSV report here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")

    p = sub.add_parser("localize", help="print local(S, alpha)")
    p.add_argument("input")
    p.add_argument("--alpha", required=True, help="comma-separated point")
    p.add_argument("--profile", action="store_true",
                   help="check and print the small members of an A_n localization")

    p = sub.add_parser("matroid", help="circuits, components and target minors of a matroid")
    p.add_argument("input")
    p.add_argument("--circuits", action="store_true", help="input is a circuit list")
    return parser


def configure_logging(verbosity: int, console: Console) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    handler = RichHandler(console=console, show_time=False, show_path=verbosity > 1)
    root = logging.getLogger("clutterforge")
    root.handlers[:] = [handler]
    root.setLevel(level)
    root.propagate = False


def default_theorem(q: int) -> Theorem:
    for theorem in (Theorem.ODD, Theorem.GF4, Theorem.EVEN):
        if theorem.applies_to(q):
            return theorem
    return Theorem.MFMC


def parse_point(S: Subspace, text: str) -> tuple[int, ...]:
    tokens = [t for t in text.replace(",", " ").split() if t]
    if len(tokens) != S.n:
        raise ParseError(f"point needs {S.n} coordinates, got {len(tokens)}")
    return tuple(formats.parse_element(S.field, t, 1, i + 1) for i, t in enumerate(tokens))


def _emit_json(out: Console, data: Any) -> None:
    out.print(json.dumps(data, indent=2), markup=False, highlight=False)


def _exit_code(results: Sequence[ConditionResult]) -> int:
    if any(r.verdict is Verdict.UNKNOWN for r in results):
        return EXIT_UNKNOWN
    return EXIT_OK


def run_field(args: argparse.Namespace, out: Console) -> int:
    f = gf.build_field(args.q)
    if args.json:
        _emit_json(out, {
            "q": f.q,
            "p": f.p,
            "k": f.k,
            "modulus": list(f.modulus),
            "add": [list(r) for r in f.add_table],
            "mul": [list(r) for r in f.mul_table],
        })
        return EXIT_OK
    for table in render.field_tables(f):
        out.print(table)
    return EXIT_OK


def run_analyze(args: argparse.Namespace, out: Console, budget: Budget) -> int:
    S = formats.parse_subspace(formats.read_input(args.input))
    theorem = Theorem.parse(args.theorem) if args.theorem else default_theorem(S.q)
    selected = [args.ideal, args.mfmc, args.minors, args.structure]
    if not any(selected):
        report = verify_theorem(S, theorem, budget)
        return _show_report(report, S, out, budget, args.json)

    results: dict[str, ConditionResult] = {}
    if args.structure:
        results["structure"] = structure_condition(S, theorem, budget)
    if args.minors:
        results["minor_free"] = minor_condition(S, theorem, budget)
    if args.ideal:
        results["ideal"] = ideal_condition(S, budget, results.get("minor_free"))
    if args.mfmc:
        results["mfmc"] = mfmc_condition(S, budget, results.get("minor_free"))

    if args.json:
        _emit_json(out, {
            "instance": str(S),
            "theorem": theorem.value,
            "conditions": {k: render.condition_json(v, S, budget) for k, v in results.items()},
        })
        return _exit_code(list(results.values()))
    out.print(str(S))
    for name, result in results.items():
        if name == "ideal":
            out.print(render.ideal_line(result))
        else:
            out.print(f"{name}: ", render.verdict_text(result), f" ({result.method})", sep="")
        if isinstance(result.certificate, MinorWitness):
            _show_witness(result.certificate, out)
    if args.structure:
        M = matroid_of(S, budget)
        out.print(render.structure_table(M, classify(M)))
    return _exit_code(list(results.values()))


def _show_report(
    report: TheoremReport, S: Subspace, out: Console, budget: Budget, as_json: bool
) -> int:
    if as_json:
        _emit_json(out, render.report_json(report, S, budget))
    else:
        out.print(render.report_table(report))
        out.print(render.agreement_text(report))
        for result in report.conditions.values():
            if isinstance(result.certificate, MinorWitness):
                _show_witness(result.certificate, out)
    if report.agreement is None:
        return EXIT_UNKNOWN
    return EXIT_OK if report.agreement else EXIT_ERROR


def _show_witness(witness: MinorWitness, out: Console) -> None:
    out.print(f"{witness.target} minor:")
    steps = list(witness.chain)
    for i, spec in enumerate(steps, start=1):
        last = i == len(steps)
        out.print(f"  step {i}: " + formats.format_minor_certificate(
            spec, witness.bijection if last else None), markup=False, highlight=False)


def run_witness(args: argparse.Namespace, out: Console, budget: Budget) -> int:
    S = formats.parse_subspace(formats.read_input(args.input))
    witness: MinorWitness | None
    if args.kind == "overlap":
        witness = non_disjoint_witness(S, budget)
    elif args.kind == "u24":
        witness = delta3_witness_u24(S, budget)
    elif args.kind == "k4e":
        witness = delta3_witness_k4e(S, budget)
    elif args.kind == "c5sq":
        alpha = parse_point(S, args.alpha) if args.alpha else None
        witness = c5sq_witness(S, alpha=alpha, seed=args.seed, budget=budget)
    else:
        witness = structural_delta3_witness(S, budget)
    if witness is None:
        out.print("matroid has neither a U24 nor an M(K4/e) minor")
        return EXIT_OK
    if args.json:
        _emit_json(out, formats.certificate_json(witness, S, budget))
    else:
        _show_witness(witness, out)
    return EXIT_OK


def run_sweep(args: argparse.Namespace, out: Console, err: Console, budget: Budget) -> int:
    theorem = Theorem.parse(args.theorem)
    reports, summary = sweep(args.q, args.n, theorem, jobs=args.jobs, budget=budget)
    if args.json:
        _emit_json(out, {
            "q": args.q,
            "n": args.n,
            "theorem": theorem.value,
            "summary": render.summary_json(summary),
            "rows": [
                {"instance": r.instance, "agreement": r.agreement,
                 **{k: v.verdict.value for k, v in r.conditions.items()}}
                for r in reports
            ],
        })
    elif args.out:
        path = formats.validate_path(args.out, dir_okay=False, file_okay=True, must_exist=False)
        with path.open("w", newline="") as stream:
            render.write_csv(reports, stream)
        out.print(str(summary))
    else:
        render.write_csv(reports, sys.stdout)
        err.print(str(summary))
    return EXIT_OK if summary.disagreements == 0 else EXIT_ERROR


def run_localize(args: argparse.Namespace, out: Console, budget: Budget) -> int:
    S = formats.parse_subspace(formats.read_input(args.input))
    alpha = parse_point(S, args.alpha)
    if args.profile:
        profile = localization_profile(S, alpha, budget)
        if args.json:
            _emit_json(out, {
                "alpha": list(profile.alpha),
                "sigma": profile.sigma,
                "singletons": [str(x) for x in profile.singletons],
                "components": [
                    sorted(sorted(map(str, e)) for e in c) for c in profile.components
                ],
                "larger": [[str(x) for x in m] for m in profile.larger],
            })
        else:
            out.print(render.profile_table(profile))
        return EXIT_OK
    L = localization(S, alpha, budget)
    if args.json:
        _emit_json(out, {"clutter": formats.format_clutter(L)})
    else:
        out.print(formats.format_clutter(L), markup=False, highlight=False, end="")
    return EXIT_OK


def run_matroid(args: argparse.Namespace, out: Console, budget: Budget) -> int:
    text = formats.read_input(args.input)
    M: CircuitMatroid
    if args.circuits:
        M = formats.parse_circuits(text)
    else:
        M = matroid_of(formats.parse_subspace(text), budget)
    report = classify(M)
    minors: dict[str, str] = {}
    for name in TARGETS:
        try:
            found = has_minor(M, name, budget)
        except BudgetExceeded as e:
            logger.warning("%s", e)
            minors[name] = "unknown"
            continue
        minors[name] = "absent" if found is None else (
            f"I={sorted(found[0])} J={sorted(found[1])}"
        )
    if args.json:
        _emit_json(out, {
            "size": M.size,
            "circuits": [sorted(c) for c in M.circuits],
            "components": [
                {"elements": list(c.elements), "kind": c.kind, "t": c.t,
                 "series": [list(s) for s in c.series]}
                for c in report.components
            ],
            "minors": minors,
        })
    else:
        out.print(render.structure_table(M, report))
        for name, verdict in minors.items():
            out.print(f"{name} minor: {verdict}", markup=False, highlight=False)
    return EXIT_UNKNOWN if "unknown" in minors.values() else EXIT_OK


def run_check_cert(path: str, out: Console, budget: Budget) -> int:
    text = formats.read_input(path)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    try:
        message = formats.check_certificate(obj, budget)
    except VerificationFailed as e:
        out.print(f"INVALID: {e}", markup=False, highlight=False)
        return EXIT_ERROR
    out.print(f"VALID: {message}", markup=False, highlight=False)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Console(highlight=False, soft_wrap=True)
    err = Console(stderr=True)
    configure_logging(args.verbose, err)
    try:
        budget = current_budget().scaled(args.budget)
        if args.check_cert:
            return run_check_cert(args.check_cert, out, budget)
        if args.command is None:
            parser.print_help()
            return EXIT_ERROR
        if args.command == "field":
            return run_field(args, out)
        if args.command == "analyze":
            return run_analyze(args, out, budget)
        if args.command == "witness":
            return run_witness(args, out, budget)
        if args.command == "sweep":
            return run_sweep(args, out, err, budget)
        if args.command == "localize":
            return run_localize(args, out, budget)
        return run_matroid(args, out, budget)
    except (ClutterForgeError, ValueError) as e:
        err.print(f"error: {e}", markup=False, highlight=False)
        return EXIT_ERROR
