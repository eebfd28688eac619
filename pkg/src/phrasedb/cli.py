"""Command-line front end.

Exit status is 0 on success, 1 when ``lint`` finds errors and 2 on any I/O
or format failure.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, TextIO

from .annotate import AnnotationError, Lexicon, LexiconError, load_lexicon, parse_sentences
from .dbformat import (
    Diagnostic,
    GrammCategory,
    Parameter,
    PhraseDB,
    Slot,
    format_diagnostic,
    lint_db,
    parse_db,
)
from .matchengine import MatchMode, MatchResult, build_index, find_matches, select_matches
from .synth import translate_sentence

EXIT_OK = 0
EXIT_LINT = 1
EXIT_FAILURE = 2


class InputFailure(Exception):
    pass


@dataclass
class RunConfig:
    db_paths: list[Path]
    lexicon_path: Optional[Path] = None
    mode: MatchMode = MatchMode.EXTENDED
    input_path: Optional[Path] = None  # None reads standard input
    output_format: str = "text"
    stdout: TextIO = field(default_factory=lambda: sys.stdout)
    stderr: TextIO = field(default_factory=lambda: sys.stderr)


def _read_text(path: Optional[Path], stdin: Optional[TextIO] = None) -> str:
    try:
        if path is None:
            data = (stdin or sys.stdin).buffer.read()
        else:
            data = path.read_bytes()
    except OSError as exc:
        raise InputFailure(f"cannot read {path or '<stdin>'}: {exc.strerror}") from None
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InputFailure(f"{path or '<stdin>'}: invalid UTF-8 at byte {exc.start}") from None


def _load_dbs(config: RunConfig) -> list[tuple[Path, PhraseDB, list[Diagnostic]]]:
    loaded = []
    for path in config.db_paths:
        db, diags = parse_db(_read_text(path), str(path))
        loaded.append((path, db, diags))
    return loaded


def _merged_db(config: RunConfig) -> PhraseDB:
    merged = PhraseDB()
    for path, db, diags in _load_dbs(config):
        for d in diags:
            if d.severity == "error":
                print(_located(d, path), file=config.stderr)
        merged = merged.merged(db)
    return merged


def _located(diag: Diagnostic, path: Path) -> str:
    return format_diagnostic(
        Diagnostic(diag.severity, diag.code, diag.line_number, f"{path}: {diag.message}")
    )


def _lexicon(config: RunConfig) -> Lexicon:
    if config.lexicon_path is None:
        return Lexicon()
    try:
        return load_lexicon(_read_text(config.lexicon_path))
    except LexiconError as exc:
        raise InputFailure(f"{config.lexicon_path}: {exc}") from None


def _sentences(config: RunConfig, lexicon: Lexicon):
    try:
        return parse_sentences(_read_text(config.input_path), lexicon.lemma_table())
    except AnnotationError as exc:
        raise InputFailure(f"{config.input_path or '<stdin>'}: {exc}") from None


def cmd_lint(config: RunConfig) -> int:
    errors = 0
    for path, db, diags in _load_dbs(config):
        for d in sorted(diags + lint_db(db), key=lambda d: d.line_number):
            errors += d.severity == "error"
            print(_located(d, path), file=config.stdout)
    return EXIT_LINT if errors else EXIT_OK


def format_match(m: MatchResult) -> str:
    slots = ",".join(f"{b.name}={b.start}..{b.end}" for b in m.bindings) or "-"
    return (
        f"{m.headword}\t{m.unit_no}\t{m.category.value}\t{m.start}..{m.end}\t{slots}\t{m.mode.value}"
    )


def cmd_match(config: RunConfig) -> int:
    index = build_index(_merged_db(config))
    sentences = _sentences(config, Lexicon())
    for n, sentence in enumerate(sentences):
        if n:
            print(file=config.stdout)
        for m in select_matches(find_matches(sentence, index, config.mode)):
            print(format_match(m), file=config.stdout)
    return EXIT_OK


def cmd_translate(config: RunConfig) -> int:
    index = build_index(_merged_db(config))
    lexicon = _lexicon(config)
    for sentence in _sentences(config, lexicon):
        result = translate_sentence(sentence, index, lexicon, config.mode)
        print(result.output, file=config.stdout)
        if config.output_format == "trace":
            for line in result.trace:
                print(line, file=config.stdout)
    return EXIT_OK


def cmd_stats(config: RunConfig) -> int:
    db = _merged_db(config)
    units = [u for _, u in db.units]
    categories = Counter(u.category for u in units)
    params = Counter(i.kind for u in units for i in u.items if isinstance(i, Slot))
    out = config.stdout
    print(f"entries\t{len(db.entries)}", file=out)
    print(f"units\t{len(units)}", file=out)
    for c in GrammCategory:
        print(f"category\t{c.value}\t{categories[c]}", file=out)
    for p in Parameter:
        print(f"parameter\t{p.value}\t{params[p]}", file=out)
    return EXIT_OK


COMMANDS = {
    "lint": cmd_lint,
    "match": cmd_match,
    "translate": cmd_translate,
    "stats": cmd_stats,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--db", action="append", type=Path, required=True, metavar="PATH",
        help="phrase database file (repeatable; merged in order)",
    )
    common.add_argument("--lexicon", type=Path, metavar="PATH", help="gloss lexicon TSV")
    common.add_argument(
        "--mode", choices=[m.value for m in MatchMode], default=MatchMode.EXTENDED.value
    )
    common.add_argument("--format", choices=["text", "trace"], default="text")
    common.add_argument(
        "--input", type=Path, metavar="PATH", help="annotated sentences (default: stdin)"
    )
    parser = argparse.ArgumentParser(
        prog="phrasedb", description="Phrase-unit database tools for English-Korean translation."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("lint", "check database files"),
        ("match", "show phrase matches for annotated sentences"),
        ("translate", "translate annotated sentences"),
        ("stats", "count entries, units, categories and parameters"),
    ]:
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help
        return EXIT_OK if exc.code == 0 else EXIT_FAILURE
    config = RunConfig(
        db_paths=args.db,
        lexicon_path=args.lexicon,
        mode=MatchMode(args.mode),
        input_path=args.input,
        output_format=args.format,
    )
    try:
        return COMMANDS[args.command](config)
    except InputFailure as exc:
        print(f"phrasedb: {exc}", file=config.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
