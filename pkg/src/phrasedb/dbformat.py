"""Reader, writer and linter for the bilingual phrase-database text format.

A database is a sequence of entries::

    "take"
    [verb]
    # take it as read THAT_CLAUSE (VERB) : THAT_CLAUSE 하다고 생각하다
    # have ONE_S [picture/photo] @taken (VERB) : ONE 의 사진을 찍다
    #align 2=2

Each ``#`` line is one phrase unit: English pattern items, the grammatical
category in parentheses, a colon, and the Korean equivalent.  Pattern items
are literal words (optionally prefixed by ``^`` ``@`` ``*`` or written as a
bracketed ``[a/b]`` alternation) or parameter slots such as ``NUM1``,
``TO_INF`` or the noun-phrase letters ``A``, ``B``, ``C``.  A standalone
``|`` or ``$`` forbids modification in front of or after the phrase.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Literal as TypingLiteral, Optional, Union

__all__ = [
    "EntryPos",
    "GrammCategory",
    "Parameter",
    "Literal",
    "Slot",
    "PatternElement",
    "LiteralText",
    "SlotRef",
    "KoreanTemplate",
    "PhraseUnit",
    "Entry",
    "PhraseDB",
    "Diagnostic",
    "parse_db",
    "parse_phrase_line",
    "parse_item",
    "serialize_db",
    "serialize_unit",
    "lint_db",
    "format_diagnostic",
]


class EntryPos(str, Enum):
    NOUN = "NOUN"
    VERB = "VERB"
    ADJ = "ADJ"
    ADV = "ADV"
    PREP = "PREP"
    CONJ = "CONJ"


class GrammCategory(str, Enum):
    PP = "PP"
    VERB = "VERB"
    ADV = "ADV"
    ADJ = "ADJ"
    NOUN = "NOUN"
    SENT = "SENT"


class Parameter(str, Enum):
    """Parameter kinds usable as pattern slots.

    ``NP`` is never written directly; it is the kind of the lettered
    noun-phrase slots ``A``, ``B``, ``C`` ...
    """

    NOUN = "NOUN"
    PRON = "PRON"
    PRPN = "PRPN"
    NUM = "NUM"
    ONE_S = "ONE_S"
    ONESELF = "ONESELF"
    NP = "NP"
    ADJ = "ADJ"
    ADV = "ADV"
    VP = "VP"
    PP = "PP"
    SENT = "SENT"
    THAT_CLAUSE = "THAT_CLAUSE"
    WHAT_CLAUSE = "WHAT_CLAUSE"
    WHETHER_CLAUSE = "WHETHER_CLAUSE"
    IF_CLAUSE = "IF_CLAUSE"
    HOW_CLAUSE = "HOW_CLAUSE"
    WHERE_CLAUSE = "WHERE_CLAUSE"
    WH_CLAUSE = "WH_CLAUSE"
    TO_INF = "TO_INF"
    BARE_INF = "BARE_INF"
    PASTP = "PASTP"
    PRESP = "PRESP"


# "I" stays a literal (the pronoun); every other capital letter names a noun phrase.
NP_LETTERS = frozenset("ABCDEFGHJKLMNOPQRSTUVWXYZ")
_WRITABLE_PARAMS = {p.value: p for p in Parameter if p is not Parameter.NP}
# Templates may refer to an ONE_S slot by this shorter name.
ONE_S_ALIAS = "ONE"

_ALLCAPS = re.compile(r"^[A-Z][A-Z0-9_]*$")
_PARAM = re.compile(r"^(?P<name>[A-Z]+(?:_[A-Z]+)*)(?P<ordinal>[0-9]+)?$")


@dataclass(frozen=True)
class Literal:
    word: str
    morph_variable: bool = False
    is_head: bool = False
    alternatives: Optional[tuple[str, ...]] = None
    detail_marked: bool = False

    @property
    def words(self) -> tuple[str, ...]:
        return self.alternatives if self.alternatives else (self.word,)


@dataclass(frozen=True)
class Slot:
    kind: Parameter
    ordinal: Optional[int] = None
    np_letter: Optional[str] = None
    detail_marked: bool = False

    @property
    def source(self) -> str:
        """The slot as written in the English pattern."""
        if self.np_letter:
            return self.np_letter
        return self.kind.value + (str(self.ordinal) if self.ordinal is not None else "")

    @property
    def name(self) -> str:
        """Name used by templates and slot bindings (``ONE_S`` becomes ``ONE``)."""
        if self.kind is Parameter.ONE_S:
            return ONE_S_ALIAS + (str(self.ordinal) if self.ordinal is not None else "")
        return self.source

    @property
    def ref_names(self) -> tuple[str, ...]:
        if self.kind is Parameter.ONE_S:
            return (self.name, self.source)
        return (self.source,)


PatternElement = Union[Literal, Slot]


@dataclass(frozen=True)
class LiteralText:
    text: str


@dataclass(frozen=True)
class SlotRef:
    text: str  # as written in the template
    slot: str  # canonical Slot.name it resolves to


TemplateToken = Union[LiteralText, SlotRef]


@dataclass(frozen=True)
class KoreanTemplate:
    tokens: tuple[TemplateToken, ...]
    alignment: tuple[tuple[int, int], ...] = ()

    @property
    def alignment_map(self) -> dict[int, int]:
        return dict(self.alignment)

    def render(self) -> str:
        return " ".join(t.text for t in self.tokens)

    @property
    def slot_names(self) -> tuple[str, ...]:
        return tuple(t.slot for t in self.tokens if isinstance(t, SlotRef))


@dataclass(frozen=True)
class PhraseUnit:
    items: tuple[PatternElement, ...]
    category: GrammCategory
    template: KoreanTemplate
    no_pre_modify: bool = False
    no_post_modify: bool = False
    raw_line: str = field(default="", compare=False)
    line_number: int = field(default=0, compare=False)

    @property
    def head_index(self) -> Optional[int]:
        for i, item in enumerate(self.items):
            if isinstance(item, Literal) and item.is_head:
                return i
        return None

    @property
    def slots(self) -> tuple[Slot, ...]:
        return tuple(i for i in self.items if isinstance(i, Slot))


@dataclass(frozen=True)
class Entry:
    headword: str
    entry_pos: EntryPos
    units: tuple[PhraseUnit, ...] = ()
    line_number: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PhraseDB:
    entries: tuple[Entry, ...] = ()
    source_name: str = field(default="", compare=False)

    @property
    def units(self) -> Iterable[tuple[Entry, PhraseUnit]]:
        for entry in self.entries:
            for unit in entry.units:
                yield entry, unit

    def merged(self, other: "PhraseDB") -> "PhraseDB":
        name = ",".join(n for n in (self.source_name, other.source_name) if n)
        return PhraseDB(self.entries + other.entries, name)


@dataclass(frozen=True)
class Diagnostic:
    severity: TypingLiteral["error", "warning"]
    code: str
    line_number: int
    message: str


def format_diagnostic(diag: Diagnostic) -> str:
    return f"{diag.severity}\t{diag.code}\t{diag.line_number}\t{diag.message}"


class _LineError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


# ---------------------------------------------------------------- parsing

_HEADER = re.compile(r'^["“](?P<word>.*)["”]$')
_POS_LINE = re.compile(r"^\[\s*(?P<pos>[^\]]*?)\s*\]$")
_ALIGN_LINE = re.compile(r"^#align(?:\s|$)")
_ALIGN_PAIR = re.compile(r"^(\d+)=(\d+)$")
_CATEGORY = re.compile(r"\(\s*(?P<cat>[^()]*?)\s*\)\s*$")
_ITEM_TOKEN = re.compile(r"[\^@*]*\[[^\]]*\]|\S+")


def parse_item(token: str) -> Union[Literal, Slot]:
    """Parse one pattern item such as ``^take``, ``[step/walk]`` or ``NUM1``."""
    flags = re.match(r"^[\^@*]*", token).group(0)
    body = token[len(flags):]
    if len(set(flags)) != len(flags):
        raise _LineError("MalformedItem", f"repeated prefix flag in {token!r}")
    morph, head, detail = "^" in flags, "@" in flags, "*" in flags
    if not body:
        raise _LineError("MalformedItem", f"item {token!r} has no word")

    if body.startswith("["):
        if not body.endswith("]"):
            raise _LineError("MalformedItem", f"unterminated alternation {token!r}")
        parts = [p.strip() for p in body[1:-1].split("/")]
        if not parts or any(not p for p in parts):
            raise _LineError("EmptyAlternation", f"empty alternative in {token!r}")
        if any(re.search(r"[\s\[\]]", p) for p in parts):
            raise _LineError("MalformedItem", f"bad alternative word in {token!r}")
        return Literal(parts[0], morph, head, tuple(parts), detail)
    if "[" in body or "]" in body:
        raise _LineError("MalformedItem", f"stray bracket in {token!r}")

    if body in NP_LETTERS:
        if morph or head:
            raise _LineError("MalformedItem", f"slot {body} cannot take ^ or @")
        return Slot(Parameter.NP, np_letter=body, detail_marked=detail)
    if _ALLCAPS.match(body) and sum(c.isalpha() for c in body) >= 2:
        m = _PARAM.match(body)
        if not m or m.group("name") not in _WRITABLE_PARAMS:
            raise _LineError("UnknownParameter", f"unknown parameter {body!r}")
        if morph or head:
            raise _LineError("MalformedItem", f"slot {body} cannot take ^ or @")
        ordinal = m.group("ordinal")
        return Slot(
            _WRITABLE_PARAMS[m.group("name")],
            ordinal=int(ordinal) if ordinal is not None else None,
            detail_marked=detail,
        )
    return Literal(body, morph, head, None, detail)


def _looks_like_slot(token: str) -> bool:
    if token in NP_LETTERS:
        return True
    m = _PARAM.match(token)
    return bool(m) and (m.group("name") in _WRITABLE_PARAMS or m.group("name") == ONE_S_ALIAS)


def _parse_template(text: str, slots: tuple[Slot, ...]) -> KoreanTemplate:
    refs: dict[str, str] = {}
    for slot in slots:
        for ref in slot.ref_names:
            refs[ref] = slot.name
    tokens: list[TemplateToken] = []
    for tok in text.split():
        if tok in refs:
            tokens.append(SlotRef(tok, refs[tok]))
        elif _looks_like_slot(tok):
            raise _LineError(
                "UnboundTemplateSlot", f"template slot {tok!r} does not occur in the pattern"
            )
        else:
            tokens.append(LiteralText(tok))
    return KoreanTemplate(tuple(tokens))


def parse_phrase_line(
    line: str, entry: Optional[Entry] = None, line_number: int = 0
) -> Union[PhraseUnit, Diagnostic]:
    """Parse one ``#`` phrase line into a :class:`PhraseUnit`.

    Returns a :class:`Diagnostic` (severity ``error``) instead when the line
    is malformed.  ``entry`` only supplies context for messages.
    """
    where = f" (entry {entry.headword!r})" if entry is not None else ""
    try:
        return _parse_phrase_line(line.strip(), line_number)
    except _LineError as exc:
        return Diagnostic("error", exc.code, line_number, exc.message + where)


def _parse_phrase_line(line: str, line_number: int) -> PhraseUnit:
    if not line.startswith("#"):
        raise _LineError("UnexpectedLine", "phrase line must begin with '#'")
    english, sep, korean = line[1:].partition(":")
    if not sep:
        raise _LineError("MissingColon", "no ':' between English phrase and Korean equivalent")
    m = _CATEGORY.search(english)
    if not m:
        raise _LineError("MissingCategory", "no '(CATEGORY)' before ':'")
    cat = m.group("cat")
    try:
        category = GrammCategory(cat)
    except ValueError:
        raise _LineError("UnknownCategory", f"unknown grammatical category {cat!r}") from None

    items: list[PatternElement] = []
    no_pre = no_post = False
    for tok in _ITEM_TOKEN.findall(english[: m.start()]):
        if tok == "|":
            no_pre = True
        elif tok == "$":
            no_post = True
        else:
            items.append(parse_item(tok))
    if not any(isinstance(i, Literal) for i in items):
        raise _LineError("EmptyPattern", "pattern has no literal word")
    if sum(1 for i in items if isinstance(i, Literal) and i.is_head) > 1:
        raise _LineError("MalformedItem", "more than one '@' main word")
    names = [s.name for s in items if isinstance(s, Slot)]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise _LineError(
            "DuplicateSlot", f"slot {dupes[0]} occurs twice; number repeated parameters"
        )
    slots = tuple(i for i in items if isinstance(i, Slot))
    template = _parse_template(korean, slots)
    if not template.tokens:
        raise _LineError("EmptyTemplate", "Korean equivalent is empty")
    return PhraseUnit(
        items=tuple(items),
        category=category,
        template=template,
        no_pre_modify=no_pre,
        no_post_modify=no_post,
        raw_line=line,
        line_number=line_number,
    )


def _parse_align(line: str) -> tuple[tuple[int, int], ...]:
    pairs = line[len("#align"):].split()
    if not pairs:
        raise _LineError("BadAlignLine", "#align needs at least one item=token pair")
    out = []
    for p in pairs:
        m = _ALIGN_PAIR.match(p)
        if not m:
            raise _LineError("BadAlignLine", f"bad alignment pair {p!r}")
        out.append((int(m.group(1)), int(m.group(2))))
    return tuple(out)


class _EntryBuilder:
    def __init__(self, headword: str, line_number: int):
        self.headword = headword
        self.line_number = line_number
        self.pos: Optional[EntryPos] = None
        self.units: list[PhraseUnit] = []

    def build(self) -> Entry:
        assert self.pos is not None
        return Entry(self.headword, self.pos, tuple(self.units), self.line_number)


def parse_db(text: str, source_name: str = "") -> tuple[PhraseDB, list[Diagnostic]]:
    """Parse a whole database document.

    Parsing never raises: malformed constructs are dropped and reported.
    A header or part-of-speech error drops the whole entry, including its
    phrase lines.
    """
    entries: list[Entry] = []
    diags: list[Diagnostic] = []
    current: Optional[_EntryBuilder] = None
    skipping = False
    align_target = False  # previous line was an accepted phrase line

    def close() -> None:
        nonlocal current
        if current is not None:
            if current.pos is None:
                diags.append(
                    Diagnostic(
                        "error",
                        "UnknownEntryPos",
                        current.line_number,
                        f"entry {current.headword!r} has no [part of speech] line",
                    )
                )
            else:
                entries.append(current.build())
        current = None

    def error(code: str, lineno: int, message: str) -> None:
        diags.append(Diagnostic("error", code, lineno, message))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        follows_phrase, align_target = align_target, False
        if not line:
            continue

        header = _HEADER.match(line)
        if header:
            close()
            word = header.group("word")
            skipping = True
            if not word:
                error("UnexpectedLine", lineno, "empty entry headword")
            elif re.search(r"\s", word):
                error("EntryHasSpace", lineno, f"entry {word!r} must be a single word")
            else:
                current = _EntryBuilder(word, lineno)
                skipping = False
            continue

        pos_line = _POS_LINE.match(line)
        if pos_line:
            if skipping:
                continue
            if current is None:
                error("UnexpectedLine", lineno, "part-of-speech line outside an entry")
                continue
            try:
                pos = EntryPos(pos_line.group("pos").upper())
            except ValueError:
                error("UnknownEntryPos", lineno, f"unknown part of speech {pos_line.group('pos')!r}")
                current = None
                skipping = True
                continue
            if current.pos is not None:
                # a second [pos] block opens a separate entry with the same headword
                headword = current.headword
                close()
                current = _EntryBuilder(headword, lineno)
            current.pos = pos
            continue

        if _ALIGN_LINE.match(line) and ":" not in line:
            if skipping:
                continue
            if not follows_phrase or current is None or not current.units:
                error("UnexpectedLine", lineno, "#align must follow a phrase line")
                continue
            try:
                pairs = _parse_align(line)
            except _LineError as exc:
                error(exc.code, lineno, exc.message)
                continue
            unit = current.units[-1]
            merged = dict(unit.template.alignment)
            merged.update(pairs)
            template = replace(unit.template, alignment=tuple(sorted(merged.items())))
            current.units[-1] = replace(unit, template=template)
            align_target = True  # allow several #align lines in a row
            continue

        if line.startswith("#"):
            if skipping:
                continue
            if current is None or current.pos is None:
                error("UnexpectedLine", lineno, "phrase line outside an entry")
                continue
            result = parse_phrase_line(line, None, lineno)
            if isinstance(result, Diagnostic):
                diags.append(result)
            else:
                current.units.append(result)
                align_target = True
            continue

        error("UnexpectedLine", lineno, f"unrecognized line {line[:40]!r}")

    close()
    return PhraseDB(tuple(entries), source_name), diags


# ---------------------------------------------------------------- writing


def _serialize_item(item: PatternElement) -> str:
    if isinstance(item, Slot):
        return ("*" if item.detail_marked else "") + item.source
    prefix = ("^" if item.morph_variable else "") + ("@" if item.is_head else "")
    prefix += "*" if item.detail_marked else ""
    if item.alternatives:
        return prefix + "[" + "/".join(item.alternatives) + "]"
    return prefix + item.word


def serialize_unit(unit: PhraseUnit) -> str:
    parts = ["|"] if unit.no_pre_modify else []
    parts += [_serialize_item(i) for i in unit.items]
    if unit.no_post_modify:
        parts.append("$")
    line = f"# {' '.join(parts)} ({unit.category.value}) : {unit.template.render()}"
    if unit.template.alignment:
        pairs = " ".join(f"{i}={j}" for i, j in unit.template.alignment)
        line += f"\n#align {pairs}"
    return line


def serialize_db(db: PhraseDB) -> str:
    """Write ``db`` in canonical form: one phrase per line, blank line between entries."""
    blocks = []
    for entry in db.entries:
        lines = [f'"{entry.headword}"', f"[{entry.entry_pos.value.lower()}]"]
        lines += [serialize_unit(u) for u in entry.units]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


# ---------------------------------------------------------------- linting


def _literal_lemmas(item: Literal, pos: EntryPos) -> set[str]:
    from .annotate import TokenPos, default_exceptions, lemmatize

    tpos = TokenPos(pos.value)
    exc = default_exceptions()
    return {lemmatize(w, tpos, exc) for w in item.words} | {w.lower() for w in item.words}


def lint_db(db: PhraseDB) -> list[Diagnostic]:
    """Advisory warnings for a parsed database; never modifies it."""
    out: list[Diagnostic] = []
    for entry in db.entries:
        seen: dict[tuple, int] = {}
        head = entry.headword.lower()
        for unit in entry.units:
            ln = unit.line_number
            if not any(
                isinstance(i, Literal) and head in _literal_lemmas(i, entry.entry_pos)
                for i in unit.items
            ):
                out.append(
                    Diagnostic(
                        "warning",
                        "HeadwordNotInItems",
                        ln,
                        f"no item of this phrase is a form of {entry.headword!r}",
                    )
                )
            key = (unit.items, unit.category)
            if key in seen:
                out.append(
                    Diagnostic(
                        "warning",
                        "DuplicateUnit",
                        ln,
                        f"same pattern and category as line {seen[key]}",
                    )
                )
            else:
                seen[key] = ln
            for item in unit.items:
                if isinstance(item, Literal) and item.alternatives:
                    lowered = [w.lower() for w in item.alternatives]
                    if len(set(lowered)) != len(lowered):
                        out.append(
                            Diagnostic(
                                "warning",
                                "UnreachableAlternative",
                                ln,
                                f"repeated word in [{'/'.join(item.alternatives)}]",
                            )
                        )
            tokens = unit.template.tokens
            for i, j in unit.template.alignment:
                if (
                    i >= len(unit.items)
                    or j >= len(tokens)
                    or not isinstance(tokens[j], LiteralText)
                ):
                    out.append(
                        Diagnostic(
                            "warning",
                            "AlignmentOutOfRange",
                            ln,
                            f"alignment {i}={j} does not point from an item to Korean text",
                        )
                    )
    return out
