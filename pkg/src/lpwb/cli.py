"""Command-line entry points over the library.

One subcommand per library operation; stdout carries data (JSON when
``--json`` is given), stderr carries diagnostics. Exit codes: 0 on
success, 1 on domain errors (unparseable input, invalid corpus), 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .canonical import CanonicalForm, canonicalize
from .dataset import load_corpus, stats
from .errors import LpwbError
from .evaluator import evaluate_corpus
from .ir import describe, parse_ir, print_ir
from .service import ServiceConfig, run
from .solver import solve
from .suggest import SuggestionFailure, suggest_declarations
from .tagging import Lexicons, tag_entities


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except LpwbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lpwb",
        description="Model word problems as linear programs and solve them.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("parse", help="parse a tagged formulation file")
    p.add_argument("--ir", required=True, help="tagged formulation file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_parse)

    p = sub.add_parser("canon", help="canonicalize a tagged formulation")
    p.add_argument("--ir", required=True)
    style = p.add_mutually_exclusive_group()
    style.add_argument("--json", action="store_true")
    style.add_argument("--table", action="store_true")
    p.set_defaults(handler=_cmd_canon)

    p = sub.add_parser("solve", help="solve a canonical-form JSON file")
    p.add_argument("--canon", required=True, help="canonical form JSON file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("eval", help="score predictions against gold")
    p.add_argument("--pred", required=True, help="JSON-lines: id + ir per line")
    p.add_argument("--gold", required=True, help="JSON-lines: id + ir per line")
    p.add_argument("--tolerance", type=float, default=1e-4)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("tag", help="tag the entities of a description")
    p.add_argument("--text", required=True, help="plain-text description file")
    p.add_argument("--lexicon-dir", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_tag)

    p = sub.add_parser("suggest", help="derive declarations from a description")
    p.add_argument("--text", required=True)
    p.add_argument("--lexicon-dir", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_suggest)

    p = sub.add_parser("stats", help="summarize a corpus")
    p.add_argument("--corpus", required=True, help="JSON-lines corpus file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser("validate", help="validate a corpus, report rejections")
    p.add_argument("--corpus", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("serve", help="run the session HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--persist-dir", default=None)
    p.add_argument("--cors-origin", default=None)
    p.add_argument("--lexicon-dir", default=None)
    p.set_defaults(handler=_cmd_serve)

    return parser


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _emit(payload: dict | list) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _lexicons(args) -> Lexicons:
    if getattr(args, "lexicon_dir", None):
        return Lexicons.from_dir(args.lexicon_dir)
    return Lexicons.bundled()


def _cmd_parse(args) -> int:
    doc = parse_ir(_read(args.ir))
    for err in doc.errors:
        print(f"warning: declaration {err.index}: {err.reason}", file=sys.stderr)
    if args.json:
        _emit({
            "declarations": [
                {"ir": print_ir(d), "rendered": describe(d)}
                for d in doc.declarations
            ],
            "errors": [
                {"index": e.index, "reason": e.reason} for e in doc.errors
            ],
        })
    else:
        for d in doc.declarations:
            print(describe(d))
    return 0


def _cmd_canon(args) -> int:
    form = canonicalize(parse_ir(_read(args.ir)))
    if args.json:
        _emit(form.to_json_dict())
    else:
        print(form.to_table())
    return 0


def _cmd_solve(args) -> int:
    form = CanonicalForm.from_json(_read(args.canon))
    solution = solve(form)
    payload = solution.to_json_dict(form)
    if args.json:
        _emit(payload)
    else:
        line = solution.status
        if solution.objective_value is not None:
            line += f" {payload['objective_value']}"
        print(line)
        for name, value in payload.get("assignment", {}).items():
            print(f"  {name} = {value}")
        for row in payload.get("infeasible_rows", []):
            print(f"  conflicting row: constraint_{row}")
    return 0


def _read_ir_corpus(path: str) -> dict[str, str]:
    """JSON-lines of objects with ``id`` and ``ir`` (or ``gold_ir``)."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(_read(path).splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise LpwbError(f"{path}:{lineno}: not valid JSON: {exc}") from exc
        if not isinstance(data, dict) or "id" not in data:
            raise LpwbError(f"{path}:{lineno}: each line needs an id")
        ir = data.get("ir", data.get("gold_ir"))
        if not isinstance(ir, str):
            raise LpwbError(f"{path}:{lineno}: each line needs an ir field")
        out[str(data["id"])] = ir
    if not out:
        raise LpwbError(f"{path}: no records")
    return out


def _cmd_eval(args) -> int:
    pred = _read_ir_corpus(args.pred)
    gold = _read_ir_corpus(args.gold)
    ids = sorted(gold)
    pairs = [(pred.get(i, ""), gold[i]) for i in ids]
    report = evaluate_corpus(pairs, ids, tol=args.tolerance)
    if args.json:
        _emit(report.to_json_dict())
    else:
        print(f"accuracy {report.accuracy:.4f}")
    return 0


def _cmd_tag(args) -> int:
    text = _read(args.text)
    spans = tag_entities(text, _lexicons(args))
    if args.json:
        _emit([s.to_json_dict() for s in spans])
    else:
        for s in spans:
            print(f"{s.start}\t{s.end}\t{s.label}\t{s.text}")
    return 0


def _cmd_suggest(args) -> int:
    text = _read(args.text)
    lexicons = _lexicons(args)
    spans = tag_entities(text, lexicons)
    results = suggest_declarations(text, spans, lexicons=lexicons)
    failures = 0
    if args.json:
        items = []
        for item in results:
            if isinstance(item, SuggestionFailure):
                failures += 1
                items.append({"index": item.index, "error": item.reason})
            else:
                items.append({"ir": print_ir(item), "rendered": describe(item)})
        _emit(items)
    else:
        blocks = []
        for item in results:
            if isinstance(item, SuggestionFailure):
                failures += 1
                print(
                    f"warning: declaration {item.index}: {item.reason}",
                    file=sys.stderr,
                )
            else:
                blocks.append(print_ir(item))
        print("\n".join(blocks))
    return 0 if failures == 0 else 1


def _cmd_stats(args) -> int:
    report = load_corpus(args.corpus)
    for rejection in report.rejections:
        print(
            f"warning: line {rejection.line}: {rejection.category}: "
            f"{rejection.detail}",
            file=sys.stderr,
        )
    summary = stats(report.records)
    if args.json:
        _emit(summary.to_json_dict())
    else:
        print(summary.to_table())
    return 0


def _cmd_validate(args) -> int:
    report = load_corpus(args.corpus)
    if args.json:
        _emit(report.to_json_dict())
    else:
        print(f"accepted {len(report.records)}")
        for rejection in report.rejections:
            print(
                f"rejected line {rejection.line} "
                f"[{rejection.category}] {rejection.detail}"
            )
    return 0 if not report.rejections else 1


def _cmd_serve(args) -> int:
    config = ServiceConfig.from_env()
    if args.persist_dir:
        config.persist_dir = args.persist_dir
    if args.cors_origin:
        config.cors_origin = args.cors_origin
    if args.lexicon_dir:
        config.lexicon_dir = args.lexicon_dir
    run(config, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    sys.exit(main())
