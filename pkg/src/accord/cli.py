"""Command-line front door.

    accord check   TREEBANK --lexicon F [--profile F] [--strategy S] [--format text|json]
    accord correct TREEBANK --lexicon F --auto [--profile F] [--output F]
    accord serve   --port N --lexicon F [--profile F] [--host H]
    accord profile show|reset [--file F]

``--lexicon`` falls back to the ACCORD_LEXICON environment variable.
Exit codes: 0 success, 1 unresolvable group or parse/file error, 2 usage.
Scores print with two decimals; internal comparisons keep full precision.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from .corrector import auto_answers, correct_tree, diagnose
from .deptree import parse_treebank, serialize_treebank
from .errors import AccordError
from .features import VALUE_LABELS
from .lexicon import Lexicon, load_lexicon
from .profile import STRATEGIES, default_profile, load_profile, save_profile
from .serialize import diagnosis_json, report_json

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

DEFAULT_PROFILE_FILE = "profile.cfg"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="accord", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="diagnose a treebank without modifying it")
    check.add_argument("treebank")
    check.add_argument("--lexicon")
    check.add_argument("--profile")
    check.add_argument("--strategy", choices=STRATEGIES)
    check.add_argument("--format", choices=("text", "json"), default="text")

    correct = sub.add_parser("correct", help="apply corrections in auto mode")
    correct.add_argument("treebank")
    correct.add_argument("--lexicon")
    correct.add_argument("--profile")
    correct.add_argument("--auto", action="store_true")
    correct.add_argument("--output")

    serve = sub.add_parser("serve", help="start the HTTP session service")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--lexicon")
    serve.add_argument("--profile")

    prof = sub.add_parser("profile", help="manage profile files")
    prof.add_argument("action", choices=("show", "reset"))
    prof.add_argument("--file", default=DEFAULT_PROFILE_FILE)

    return parser


def _load_lexicon(path: str | None) -> Lexicon:
    path = path or os.environ.get("ACCORD_LEXICON")
    if not path:
        raise _Usage("no lexicon: pass --lexicon or set ACCORD_LEXICON")
    with open(path, encoding="utf-8") as handle:
        return load_lexicon(handle)


def _load_profile(path: str | None):
    if not path:
        return default_profile()
    with open(path, encoding="utf-8") as handle:
        return load_profile(handle.read())


class _Usage(Exception):
    pass


def _fmt(x) -> str:
    return f"{float(x):.2f}"


def _print_check_text(diag, out) -> None:
    print(f"# {diag.tree.sentence_id}: {diag.tree.render_text()}", file=out)
    for analysis in diag.analyses:
        group = analysis.group
        surfaces = " ".join(diag.tree.node(m).surface for m in group.members)
        label = {"num": "number", "gen": "gender", "per": "person"}[group.variable]
        governor = diag.tree.node(group.governor).surface
        if analysis.check.consistent:
            values = "/".join(
                VALUE_LABELS.get(v, v) for v in sorted(analysis.check.values)
            )
            print(f"  {label} [{surfaces}] (governor {governor}): ok ({values})", file=out)
            continue
        print(f"  {label} [{surfaces}] (governor {governor}): INCONSISTENT", file=out)
        for sub, vectors in zip(
            analysis.decision.subgroups, analysis.decision.subgroup_vectors
        ):
            sub_surfaces = " ".join(diag.tree.node(m).surface for m in sub.members)
            print(f"    sub-group [{sub_surfaces}]", file=out)
            for v in vectors:
                scores = "  ".join(f"{k} {_fmt(s)}" for k, s in v.scores.items())
                print(
                    f"      {VALUE_LABELS.get(v.value, v.value):<12}{scores}"
                    f"  | total {_fmt(v.total)} ({_fmt(v.percentage)}%)",
                    file=out,
                )
        agg = analysis.aggregate
        if agg is not None:
            totals = ", ".join(f"{k} {_fmt(v)}" for k, v in agg.totals.items())
            winner = agg.winner or "tie"
            print(
                f"    aggregate ({agg.strategy}): {totals} -> {winner}"
                f" (margin {_fmt(agg.margin)})",
                file=out,
            )
        decision = analysis.decision
        if decision.kind == "auto_correct":
            print(f"    decision: auto-correct to {decision.value}", file=out)
        elif decision.kind == "ask_user":
            print(f"    decision: ask  {decision.question.prompt}", file=out)
        else:
            print(f"    decision: {decision.kind}", file=out)


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    try:
        if args.command == "check":
            lexicon = _load_lexicon(args.lexicon)
            profile = _load_profile(args.profile)
            if args.strategy:
                profile = replace(profile, strategy=args.strategy)
            with open(args.treebank, encoding="utf-8") as handle:
                trees = parse_treebank(handle)
            diagnoses = [diagnose(tree, lexicon, profile) for tree in trees]
            if args.format == "json":
                payload = {"sentences": [diagnosis_json(d) for d in diagnoses]}
                print(json.dumps(payload, ensure_ascii=False, indent=2))
            else:
                for diag in diagnoses:
                    _print_check_text(diag, sys.stdout)
            unresolvable = any(
                a.decision.kind == "unresolvable"
                for d in diagnoses
                for a in d.analyses
            )
            return EXIT_ERROR if unresolvable else EXIT_OK

        if args.command == "correct":
            if not args.auto:
                print("correct requires --auto (interactive use goes through the web UI)", file=sys.stderr)
                return EXIT_USAGE
            lexicon = _load_lexicon(args.lexicon)
            profile = _load_profile(args.profile)
            with open(args.treebank, encoding="utf-8") as handle:
                trees = parse_treebank(handle)
            reports = [
                correct_tree(tree, lexicon, profile, auto_answers) for tree in trees
            ]
            corrected = serialize_treebank([r.final for r in reports])
            if args.output:
                with open(args.output, "w", encoding="utf-8") as handle:
                    handle.write(corrected)
            else:
                sys.stdout.write(corrected)
            for report in reports:
                status = "converged" if report.converged else "NOT CONVERGED"
                changed = sum(
                    1 for a, b in zip(report.original.nodes, report.final.nodes)
                    if a.surface != b.surface
                )
                print(
                    f"# {report.original.sentence_id}: {status},"
                    f" {changed} word(s) changed, {len(report.steps)} step(s)",
                    file=sys.stderr,
                )
            return EXIT_OK if all(r.converged for r in reports) else EXIT_ERROR

        if args.command == "serve":
            import uvicorn

            from .service import create_app

            lexicon = _load_lexicon(args.lexicon)
            profiles = {}
            if args.profile:
                profiles["default"] = _load_profile(args.profile)
            app = create_app(lexicon, profiles)
            uvicorn.run(app, host=args.host, port=args.port)
            return EXIT_OK

        if args.command == "profile":
            if args.action == "show":
                if os.path.exists(args.file):
                    with open(args.file, encoding="utf-8") as handle:
                        profile = load_profile(handle.read())
                else:
                    profile = default_profile()
                sys.stdout.write(save_profile(profile))
            else:  # reset
                with open(args.file, "w", encoding="utf-8") as handle:
                    handle.write(save_profile(default_profile()))
                print(f"wrote defaults to {args.file}", file=sys.stderr)
            return EXIT_OK

    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AccordError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    return EXIT_USAGE


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
