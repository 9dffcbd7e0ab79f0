"""
Command line front end. Every subcommand prints a human readable report, or one JSON
document with --json, and exits 0 when the checked statement holds, 1 when it is refuted
and 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from tracealg import identities, positivity, ps3, reynolds
from tracealg.config import Settings, currentSettings, loadSettings, saveSettings, useSettings
from tracealg.errors import TraceAlgError
from tracealg.exprParser import formatTrace, parseTrace
from tracealg.genericEval import (
    GenericContext,
    evalNumeric,
    evalSymbolic,
    isPd,
    isPsd,
    isTraceIdentity,
    matrixTupleFromJson,
    matrixTupleToJson,
)
from tracealg.logSetup import configureLogging
from tracealg.scalarPoly import ExactMatrix, MultiPoly, exactLdlt, formatRational, parseRational
from tracealg.verdictPublisher import Verdict, VerdictCollector, VerdictPublisher

EXIT_HOLDS = 0
EXIT_REFUTED = 1
EXIT_ERROR = 2


@dataclass
class Outcome:
    holds: bool
    lines: list[str] = field(default_factory=lambda: [])
    data: dict[str, Any] = field(default_factory=lambda: {})


def entryText(x: Any) -> str:
    if isinstance(x, (int, Fraction)):
        return formatRational(x)
    return str(x)


def matrixLines(M: ExactMatrix) -> list[str]:
    return ["[" + ", ".join(entryText(x) for x in M.row(i)) + "]" for i in range(M.rows)]


def matrixJson(M: ExactMatrix) -> list[list[Any]]:
    return [[x.toJson() if isinstance(x, MultiPoly) else entryText(x) for x in M.row(i)]
        for i in range(M.rows)]


def readJson(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise TraceAlgError(f"{path}: invalid JSON: {e}") from e


def verdictOutcome(verdicts: Sequence[Verdict]) -> Outcome:
    return Outcome(all(verdicts), [v.toText() for v in verdicts],
        {"verdicts": [v.toJson() for v in verdicts]})


# --------- handlers ---------
def cmdCanon(args: argparse.Namespace) -> Outcome:
    text = formatTrace(parseTrace(args.expr))
    return Outcome(True, [text], {"canonical": text})


def cmdEval(args: argparse.Namespace) -> Outcome:
    f = parseTrace(args.expr)
    X = matrixTupleFromJson(readJson(args.matrices))
    value = evalNumeric(f, X)
    return Outcome(True, matrixLines(value), {"value": matrixJson(value)})


def cmdIdentity(args: argparse.Namespace) -> Outcome:
    verdict = isTraceIdentity(parseTrace(args.expr), args.n, args.seed)
    data: dict[str, Any] = {"holds": verdict.holds, "mode": verdict.mode, "points": verdict.points}
    lines = [f"{'identity' if verdict.holds else 'not an identity'} at n={args.n} [{verdict.mode}]"]
    if verdict.witness is not None:
        data["witness"] = matrixTupleToJson(verdict.witness)
        lines.append("nonzero at the sampled tuple")
    return Outcome(verdict.holds, lines, data)


def cmdPsd(args: argparse.Namespace) -> Outcome:
    matrices = matrixTupleFromJson(readJson(args.matrix))
    if len(matrices) != 1:
        raise TraceAlgError(f"{args.matrix}: expected exactly one matrix, got {len(matrices)}")
    M = matrices[0]
    holds = isPd(M) if args.strict else isPsd(M)
    kind = "positive definite" if args.strict else "positive semidefinite"
    data: dict[str, Any] = {"holds": holds, "strict": args.strict}
    lines = [kind if holds else f"not {kind}"]
    result = exactLdlt(M)
    if not result.success and result.witness is not None:
        w = [formatRational(x) for x in result.witness]
        data["witness"] = w
        data["witnessValue"] = formatRational(result.witnessValue or 0)
        lines.append(f"w = ({', '.join(w)}), w^t M w = {data['witnessValue']}")
    return Outcome(holds, lines, data)


def cmdReynolds(args: argparse.Namespace) -> Outcome:
    f = parseTrace(args.expr)
    ctx = GenericContext(args.n, max(f.maxIndex(), 1))
    if args.matrix:
        value = reynolds.reynoldsMatrix(f, ctx)
        return Outcome(True, matrixLines(value), {"value": matrixJson(value)})
    F = evalSymbolic(f, ctx)
    lines, reports = [], []
    rows = []
    for i in range(F.rows):
        row = []
        for k in range(F.cols):
            entry = F[i, k]
            poly = entry if isinstance(entry, MultiPoly) else MultiPoly.const(entry)
            report = reynolds.soReport(poly, args.n, args.method)
            value = (report.output + reynolds.reflect(report.output)) * Fraction(1, 2)
            row.append(value)
            reports.append({"entry": [i + 1, k + 1], **report.toJson(), "value": value.toJson()})
            lines.append(f"({i + 1},{k + 1}) p = {[str(c) for c in report.minimalPolynomial]}, "
                f"{report.iterates} iterates")
        rows.append(row)
    value = ExactMatrix.fromRows(rows)
    return Outcome(True, matrixLines(value) + lines,
        {"value": matrixJson(value), "reports": reports})


def cmdFm(args: argparse.Namespace) -> Outcome:
    fm = identities.newtonFm(args.m, args.order_exponent)
    if args.witness:
        n, d = args.witness
        S, value = identities.fmSymplecticWitness(n, args.m, d)
        nonzero = not value.isZero()
        return Outcome(nonzero, [f"f_{args.m} at the symplectic pair, n={n} d={d}:"]
            + matrixLines(value), {"nonzero": nonzero, "value": matrixJson(value),
            "s": matrixJson(S)})
    if args.check:
        verdict = identities.verifyFmIdentity(args.m, args.n, args.order_exponent)
        return Outcome(verdict.holds, [f"f_{args.m} skew identity holds={verdict.holds} "
            f"[{verdict.mode}]"], {"holds": verdict.holds, "mode": verdict.mode})
    text = formatTrace(fm.value)
    return Outcome(True, [text], {"fm": text, "primes": [formatTrace(p) for p in fm.primes]})


def cmdCapelli(args: argparse.Namespace) -> Outcome:
    text = formatTrace(identities.capelli(args.m))
    return Outcome(True, [text], {"capelli": text})


def cmdCayleyHamilton(args: argparse.Namespace) -> Outcome:
    holds = identities.cayleyHamiltonCheck(args.n, args.perturb)
    return Outcome(holds, [f"Cayley-Hamilton at n={args.n} holds={holds}"], {"holds": holds})


def cmdCentralReduce(args: argparse.Namespace) -> Outcome:
    s = parseTrace(args.expr)
    if args.example61:
        result = positivity.centralReduceExample61(s, args.n)
        names = ("c1 = s1", "c2 = s1 s2 + 3 s3", "c3 = s2 s3", "c4 = s1 + 4 s2 + 3 s3 + s1 s2")
        verdicts = [Verdict(name, v.holds, v.mode) for name, v in zip(names, result.verdicts)]
        return verdictOutcome(verdicts)
    sigmas = [formatTrace(x) for x in positivity.centralReduceSigma(s, args.n)]
    lines = [f"sigma{i} = {x}" for i, x in enumerate(sigmas, start=1)]
    return Outcome(True, lines, {"sigma": sigmas})


def constraintSet(path: str, n: int | None) -> positivity.ConstraintSet:
    data = readJson(path)
    if n is not None:
        data = {**data, "n": n}
    return positivity.ConstraintSet.fromJson(data)


def cmdVerifyCert(args: argparse.Namespace) -> Outcome:
    S = constraintSet(args.constraints, args.n)
    cert = positivity.ksCertificateFromJson(readJson(args.cert))
    verdict = positivity.verifyKs(parseTrace(args.a), cert, S)
    return Outcome(verdict.holds, [f"{cert.mode} certificate holds={verdict.holds} "
        f"[{verdict.mode}]"], {"holds": verdict.holds, "mode": verdict.mode})


def cmdRefute(args: argparse.Namespace) -> Outcome:
    S = constraintSet(args.constraints, args.n)
    witness = positivity.sampleRefute(parseTrace(args.expr), S, args.trials, args.radius,
        args.seed, args.denominator, args.strategy)
    if witness is None:
        return Outcome(True, [f"no refutation in {args.trials} trials"], {"refuted": False})
    data = {"refuted": True, "trial": witness.trial,
        "matrices": matrixTupleToJson(witness.matrices), "value": matrixJson(witness.value)}
    if args.witness_out:
        with open(args.witness_out, "w", encoding="utf-8") as f:
            json.dump(data, f, sort_keys=True, indent=2)
    lines = [f"refuted at trial {witness.trial}, f(X) ="] + matrixLines(witness.value)
    return Outcome(False, lines, data)


def cmdNegativity(args: argparse.Namespace) -> Outcome:
    lambdas = [parseRational(x) for x in args.lambdas.split(",")]
    witness = positivity.negativityFunctional(lambdas)
    if witness is None:
        return Outcome(True, ["power-sum form is positive semidefinite"], {"witness": None})
    coefficients = [formatRational(c) for c in witness.coefficients]
    return Outcome(False, [f"f = {coefficients}, sum f(l)^2 l = {formatRational(witness.value)}"],
        {"witness": coefficients, "value": formatRational(witness.value)})


def cmdGram(args: argparse.Namespace) -> Outcome:
    if args.decomposition:
        verdicts = positivity.introDecompositionChecks()
        return verdictOutcome(verdicts)
    data = positivity.exampleGram(parseRational(args.alpha))
    check = positivity.gramVerify(data.f, data.basis, data.G, 2)
    return Outcome(bool(check), [f"Gram identity {check.identityHolds}, PSD {check.psd}"],
        {"identity": check.identityHolds, "psd": check.psd})


def cmdPsi(args: argparse.Namespace) -> Outcome:
    return verdictOutcome(identities.psiChecks(args.seed, args.trials))


def cmdPs3(args: argparse.Namespace) -> Outcome:
    publisher = VerdictPublisher("Cli", warnIfSlowMs=50)
    collector = VerdictCollector()
    publisher.sub(ps3.TOPIC, collector)
    if not args.json:
        publisher.sub(ps3.TOPIC, lambda v: print(v.toText(), flush=True))
    ps3.verifyAll(args.seed, args.only, args.model, publisher)
    return Outcome(collector.allHold, [], {"verdicts": collector.toJson()})


def cmdConfig(args: argparse.Namespace) -> Outcome:
    if args.init:
        saveSettings(args.init, Settings())
        return Outcome(True, [f"wrote default settings to {args.init}"], {"path": args.init})
    settings = currentSettings().model_dump()
    return Outcome(True, [f"{k}: {v}" for k, v in settings.items()], {"settings": settings})


# --------- parser ---------
def buildParser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tracealg",
        description="Exact trace polynomial computations on n x n matrices.")
    p.add_argument("--config", help="settings YAML file")
    p.add_argument("--log-level", dest="log_level", help="override the configured log level")
    p.add_argument("--log-json", dest="log_json", action="store_true", help="JSON-lines logs")
    p.add_argument("--json", action="store_true", help="machine readable output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("canon", help="print the canonical form")
    s.add_argument("expr")
    s.set_defaults(handler=cmdCanon)

    s = sub.add_parser("eval", help="evaluate at a matrix tuple file")
    s.add_argument("expr")
    s.add_argument("--matrices", required=True)
    s.set_defaults(handler=cmdEval)

    s = sub.add_parser("identity", help="decide a trace identity")
    s.add_argument("expr")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(handler=cmdIdentity)

    s = sub.add_parser("psd", help="exact positive semidefiniteness")
    s.add_argument("--matrix", required=True)
    s.add_argument("--strict", action="store_true", help="positive definite instead")
    s.set_defaults(handler=cmdPsd)

    s = sub.add_parser("reynolds", help="Reynolds operator for orthogonal conjugation")
    s.add_argument("expr")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--matrix", action="store_true", help="matrix lift instead of entrywise")
    s.add_argument("--method", choices=("casimir", "derivation"), default="derivation")
    s.set_defaults(handler=cmdReynolds)

    s = sub.add_parser("fm", help="the f_m family")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--check", action="store_true", help="verify the skew identity")
    s.add_argument("--n", type=int, help="matrix size for --check (default 2m)")
    s.add_argument("--witness", type=int, nargs=2, metavar=("N", "D"))
    s.add_argument("--order-exponent", dest="order_exponent", action="store_true",
        help="use Tr(z^k) in the recursion")
    s.set_defaults(handler=cmdFm)

    s = sub.add_parser("capelli", help="print the Capelli polynomial c_m")
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(handler=cmdCapelli)

    s = sub.add_parser("cayley-hamilton", help="Cayley-Hamilton for generic symmetric matrices")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--perturb", action="store_true")
    s.set_defaults(handler=cmdCayleyHamilton)

    s = sub.add_parser("central-reduce", help="elementary symmetric functions of s")
    s.add_argument("expr")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--example61", action="store_true", help="check the c1..c4 relations")
    s.set_defaults(handler=cmdCentralReduce)

    s = sub.add_parser("verify-cert", help="verify a Krivine-Stengle certificate")
    s.add_argument("--a", required=True)
    s.add_argument("--cert", required=True)
    s.add_argument("--constraints", required=True)
    s.add_argument("--n", type=int)
    s.set_defaults(handler=cmdVerifyCert)

    s = sub.add_parser("refute", help="sample the constraint set for a non-PSD value")
    s.add_argument("expr")
    s.add_argument("--constraints", required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--radius", type=int, default=2)
    s.add_argument("--denominator", type=int)
    s.add_argument("--strategy", choices=("uniform", "mixed"), default="uniform")
    s.add_argument("--witness-out", dest="witness_out", help="write the witness as JSON")
    s.set_defaults(handler=cmdRefute)

    s = sub.add_parser("negativity", help="power-sum negativity functional")
    s.add_argument("lambdas", help="comma separated rationals")
    s.set_defaults(handler=cmdNegativity)

    s = sub.add_parser("gram", help="Gram matrix of the intro example")
    s.add_argument("--alpha", default="-3")
    s.add_argument("--decomposition", action="store_true", help="check the H1, H2, H3 relations")
    s.set_defaults(handler=cmdGram)

    s = sub.add_parser("psi", help="embeddings of C and H into real matrices")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=5)
    s.set_defaults(handler=cmdPsi)

    s = sub.add_parser("ps3", help="3x3 counterexample verification")
    ps3Sub = s.add_subparsers(dest="action", required=True)
    v = ps3Sub.add_parser("verify")
    v.add_argument("--only", nargs="+", choices=ps3.PARTS)
    v.add_argument("--model", choices=ps3.MODELS, default="full")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(handler=cmdPs3)

    s = sub.add_parser("config", help="show or initialize settings")
    group = s.add_mutually_exclusive_group(required=True)
    group.add_argument("--show", action="store_true")
    group.add_argument("--init", metavar="PATH")
    s.set_defaults(handler=cmdConfig)
    return p


def emit(outcome: Outcome, asJson: bool) -> None:
    if asJson:
        print(json.dumps({"holds": outcome.holds, **outcome.data}, sort_keys=True, indent=2))
    else:
        for line in outcome.lines:
            print(line)


def main(argv: Sequence[str] | None = None) -> int:
    parser = buildParser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_HOLDS if e.code == 0 else EXIT_ERROR
    try:
        settings = loadSettings(args.config)
        useSettings(settings)
        level = (args.log_level or settings.logLevel).upper()
        configureLogging(level, args.log_json or settings.logJson)
        outcome = args.handler(args)
    except (ValueError, OSError, ArithmeticError) as e:
        logging.debug("Cli: %s failed", args.command, exc_info=True)
        print(f"tracealg: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    emit(outcome, args.json)
    return EXIT_HOLDS if outcome.holds else EXIT_REFUTED


if __name__ == "__main__":
    sys.exit(main())
