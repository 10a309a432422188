"""Command-line front end: ``nesscause {solve,cause,matrix,check,fmt}``.

Exit status: 0 success / true verdict, 1 false verdict or failed golden
check, 2 usage or parse error, 3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .causation import DEFINITIONS, decide, verify_certificate
from .errors import CausalError
from .lang import ModelDocument, ParseError, parse_document, print_document
from .model import CausalModel, Literal, solve, validate

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load(path: str) -> ModelDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_document(text)
    except ParseError as exc:
        raise UsageError("\n".join(f"{path}:{d}" for d in exc.diagnostics)) from None


def _resolve(doc: ModelDocument, model: Optional[str], context: Optional[str]) -> tuple[CausalModel, dict[str, str]]:
    if model is None:
        if len(doc.models) != 1:
            raise UsageError(f"--model is required; models: {', '.join(doc.models) or 'none'}")
        model = next(iter(doc.models))
    if model not in doc.models:
        raise UsageError(f"no model named {model!r}")
    own = [c.name for c in doc.contexts_of(model)]
    if context is None:
        if len(own) == 1:
            context = own[0]
        elif not own and not doc.models[model].exogenous:
            return doc.models[model], {}
        else:
            raise UsageError(f"--context is required; contexts of {model}: {', '.join(own) or 'none'}")
    if context not in doc.contexts:
        raise UsageError(f"no context named {context!r}")
    if doc.contexts[context].model != model:
        raise UsageError(f"context {context!r} belongs to model {doc.contexts[context].model!r}")
    return doc.models[model], doc.context(context)


def _literal(text: str) -> Literal:
    try:
        return Literal.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_solve(args: argparse.Namespace) -> int:
    model, u = _resolve(_load(args.file), args.model, args.context)
    sol = solve(model, u)
    for name in validate(model):
        print(f"{name} = {sol[name]}")
    return EXIT_OK


def cmd_cause(args: argparse.Namespace) -> int:
    model, u = _resolve(_load(args.file), args.model, args.context)
    cause, effect = _literal(args.cause), _literal(args.effect)
    verdict = decide(model, u, args.definition, cause, effect)
    if verdict.holds and verdict.certificate is not None:
        if not verify_certificate(model, u, args.definition, cause, effect, verdict.certificate):
            print(f"internal error: certificate {verdict.certificate} does not replay", file=sys.stderr)
            return EXIT_INVARIANT
    if args.json:
        out = {"definition": args.definition, "cause": str(cause), "effect": str(effect), "verdict": verdict.holds}
        if args.explain:
            out["certificate"] = str(verdict.certificate) if verdict.certificate is not None else None
        print(json.dumps(out, sort_keys=True))
    else:
        print("TRUE" if verdict.holds else "FALSE")
        if args.explain and verdict.certificate is not None:
            print(verdict.certificate)
    return EXIT_OK if verdict.holds else EXIT_FALSE


def cmd_matrix(args: argparse.Namespace) -> int:
    from .harness.checks import verdict_matrix

    model, u = _resolve(_load(args.file), args.model, args.context)
    defs = args.defs.split(",") if args.defs else list(DEFINITIONS)
    unknown = [d for d in defs if d not in DEFINITIONS]
    if unknown:
        raise UsageError(f"unknown definition(s): {', '.join(unknown)}")
    matrix = verdict_matrix(model, u, defs)
    if args.json:
        print(json.dumps(matrix.to_json(), indent=2))
    else:
        width = max((len(k) for k in matrix.rows), default=4)
        print(f"{'pair':<{width}}  " + "  ".join(f"{d:>5}" for d in defs))
        for key, row in matrix.rows.items():
            cells = "  ".join(f"{('T' if row[d] else '.'):>5}" for d in defs)
            print(f"{key:<{width}}  {cells}")
        print(f"invariants: {'ok' if not matrix.violations else f'{len(matrix.violations)} violation(s)'}")
    for v in matrix.violations:
        print(f"invariant violation: {v}", file=sys.stderr)
    return EXIT_INVARIANT if matrix.violations else EXIT_OK


def _seed_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        start = int(lo)
        stop = int(hi) if sep else start
    except ValueError:
        raise UsageError(f"--seeds expects A..B, got {text!r}") from None
    if stop < start or start < 0:
        raise UsageError(f"empty or negative seed range {text!r}")
    return range(start, stop + 1)


def cmd_check(args: argparse.Namespace) -> int:
    from .harness.checks import PROPERTIES, run_properties
    from .harness.corpus import run_corpus

    if not args.corpus and not args.properties:
        raise UsageError("choose --corpus and/or --properties")
    status = EXIT_OK
    payload: dict = {}
    if args.corpus:
        corpus_dir = None if args.corpus is True else args.corpus
        try:
            report = run_corpus(corpus_dir)
        except (CausalError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        failures = report.failures
        payload["corpus"] = {
            "checked": len(report.results),
            "failures": [
                {"scenario": r.scenario, "pair": r.pair, "definition": r.definition,
                 "expected": r.expected, "actual": r.actual, "error": r.error}
                for r in failures
            ],
        }
        if not args.json:
            for r in failures:
                got = r.error or r.actual
                print(f"FAIL {r.scenario}: {r.pair} [{r.definition}] expected {r.expected}, got {got}")
            print(f"corpus: {len(report.results) - len(failures)}/{len(report.results)} verdicts match")
        if failures:
            status = EXIT_FALSE
    if args.properties:
        seeds = _seed_range(args.seeds)
        props = run_properties(seeds)
        payload["properties"] = props.to_json()
        if not args.json:
            for p in PROPERTIES:
                print(f"{p}: {props.checked[p]} checked, {props.count(p)} violations")
            for v in props.violations:
                print(f"VIOLATION {v}")
        if props.violations:
            status = EXIT_INVARIANT
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    return status


def cmd_fmt(args: argparse.Namespace) -> int:
    doc = _load(args.file)
    sys.stdout.write(print_document(doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nesscause", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def where(p: argparse.ArgumentParser) -> None:
        p.add_argument("file", help="model file (.scm.txt)")
        p.add_argument("--model", help="model name (optional if the file has one model)")
        p.add_argument("--context", help="context name (optional if the model has one context)")

    p = sub.add_parser("solve", help="print the solution of a model in a context")
    where(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("cause", help="decide one causal query")
    where(p)
    p.add_argument("--def", dest="definition", required=True, choices=DEFINITIONS)
    p.add_argument("cause", help="cause literal NAME=value")
    p.add_argument("effect", help="effect literal NAME=value")
    p.add_argument("--explain", action="store_true", help="print the certificate")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cause)

    p = sub.add_parser("matrix", help="all definitions on all ordered pairs")
    where(p)
    p.add_argument("--defs", help="comma-separated subset of definitions")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("check", help="run the golden corpus and/or the randomized property suite")
    p.add_argument("--corpus", nargs="?", const=True, default=False, metavar="DIR",
                   help="check the golden corpus (default: the bundled one)")
    p.add_argument("--properties", action="store_true", help="run the property suite over a seed sweep")
    p.add_argument("--seeds", default="0..99", help="inclusive seed range A..B (default 0..99)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fmt", help="print a document in canonical form")
    p.add_argument("file")
    p.set_defaults(func=cmd_fmt)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CausalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
