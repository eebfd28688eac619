"""Annotated input sentences, the suffix-rule lemmatizer and the gloss lexicon.

Sentences arrive already tagged and chunked, one token per line::

    TEXT	The bank can call in the loan .
    The	the	DET
    bank	bank	NOUN
    ...
    SPAN	NP	0	2

A blank line ends a sentence.  A lemma column of ``_`` asks the loader to
compute the lemma with :func:`lemmatize`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from types import MappingProxyType
from typing import Mapping, Optional

__all__ = [
    "TokenPos",
    "SpanLabel",
    "Token",
    "ConstituentSpan",
    "AnnotatedSentence",
    "Lexicon",
    "AnnotationError",
    "LexiconError",
    "POSSESSIVE_DETERMINERS",
    "REFLEXIVE_PRONOUNS",
    "POSSESSIVE_MARKERS",
    "parse_annotated",
    "parse_sentences",
    "render_annotated",
    "lemmatize",
    "default_exceptions",
    "load_lexicon",
    "simple_tokenize",
]


class TokenPos(str, Enum):
    NOUN = "NOUN"
    VERB = "VERB"
    ADJ = "ADJ"
    ADV = "ADV"
    PREP = "PREP"
    CONJ = "CONJ"
    DET = "DET"
    PRON = "PRON"
    PRPN = "PRPN"
    NUM = "NUM"
    PART = "PART"
    PUNC = "PUNC"


class SpanLabel(str, Enum):
    NP = "NP"
    VP = "VP"
    PP = "PP"
    SENT = "SENT"
    TO_INF = "TO_INF"
    BARE_INF = "BARE_INF"
    THAT_CLAUSE = "THAT_CLAUSE"
    WHAT_CLAUSE = "WHAT_CLAUSE"
    WHETHER_CLAUSE = "WHETHER_CLAUSE"
    IF_CLAUSE = "IF_CLAUSE"
    HOW_CLAUSE = "HOW_CLAUSE"
    WHERE_CLAUSE = "WHERE_CLAUSE"
    WH_CLAUSE = "WH_CLAUSE"
    PASTP = "PASTP"
    PRESP = "PRESP"


POSSESSIVE_DETERMINERS = frozenset({"my", "your", "his", "her", "its", "our", "their"})
REFLEXIVE_PRONOUNS = frozenset(
    {
        "myself",
        "yourself",
        "himself",
        "herself",
        "itself",
        "oneself",
        "ourselves",
        "yourselves",
        "themselves",
    }
)
POSSESSIVE_MARKERS = frozenset({"'s", "'", "’s", "’"})


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: TokenPos


@dataclass(frozen=True)
class ConstituentSpan:
    label: SpanLabel
    start: int
    end: int

    def __len__(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class AnnotatedSentence:
    tokens: tuple[Token, ...]
    spans: tuple[ConstituentSpan, ...] = ()
    source_text: str = ""

    def __len__(self) -> int:
        return len(self.tokens)

    def spans_at(self, start: int, label: SpanLabel) -> list[ConstituentSpan]:
        """Spans with ``label`` starting at ``start``, longest first."""
        found = [s for s in self.spans if s.start == start and s.label is label]
        return sorted(found, key=lambda s: -s.end)

    def sub(self, start: int, end: int) -> "AnnotatedSentence":
        """Tokens ``start:end`` with the spans lying inside, re-indexed from 0."""
        toks = self.tokens[start:end]
        spans = tuple(
            ConstituentSpan(s.label, s.start - start, s.end - start)
            for s in self.spans
            if start <= s.start and s.end <= end
        )
        return AnnotatedSentence(toks, spans, " ".join(t.surface for t in toks))


class AnnotationError(ValueError):
    def __init__(self, code: str, line_number: int, message: str):
        super().__init__(f"line {line_number}: {code}: {message}")
        self.code = code
        self.line_number = line_number


class LexiconError(ValueError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: BadLexiconLine: {message}")
        self.code = "BadLexiconLine"
        self.line_number = line_number


# ---------------------------------------------------------------- lemmatizer


@lru_cache(maxsize=None)
def default_exceptions() -> Mapping[str, str]:
    """Built-in irregular forms (surface -> lemma)."""
    text = resources.files("phrasedb").joinpath("data/irregular.tsv").read_text("utf-8")
    table = {}
    for line in text.splitlines():
        if line.strip():
            surface, lemma = line.split("\t")
            table[surface] = lemma
    return MappingProxyType(table)


_VOWEL = set("aeiou")


def _has_vowel(s: str) -> bool:
    return any(c in _VOWEL or (c == "y" and i > 0) for i, c in enumerate(s))


def _vowel_groups(s: str) -> int:
    return len(re.findall(r"[aeiou]+|(?<=[^aeiou])y", s))


def _undouble(stem: str) -> Optional[str]:
    # stopp -> stop, plann -> plan; add/call/pass are left alone
    if (
        len(stem) >= 4
        and stem[-1] == stem[-2]
        and stem[-1] in "bdgkmnprt"
        and stem[-3] in _VOWEL
        and stem[-4] not in _VOWEL
    ):
        return stem[:-1]
    return None


def _restore_e(stem: str) -> str:
    if re.search(r"([^aeiou]at|iz|[^aeiouwl]l|dg|rg|[^s]c|[vu]|[^z]z)$", stem):
        return stem + "e"
    if re.search(r"[aeio]s$", stem):
        return stem + "e"
    # short consonant-vowel-consonant stem: tak -> take, hop -> hope
    if re.search(r"[^aeiou][aeiou][^aeiouwxy]$", stem) and _vowel_groups(stem) == 1:
        return stem + "e"
    return stem


def _strip_plural(w: str) -> str:
    if w.endswith(("ss", "us", "is")) or not w.endswith("s"):
        return w
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith(("sses", "xes", "zes", "ches", "shes")):
        return w[:-2]
    if len(w) > 2:
        return w[:-1]
    return w


def _strip_verb_suffix(w: str) -> str:
    if w.endswith("eed"):
        return w
    if w.endswith("ied") and len(w) > 4:
        return w[:-3] + "y"
    for suffix in ("ed", "ing"):
        if w.endswith(suffix):
            stem = w[: -len(suffix)]
            if len(stem) < 2 or not _has_vowel(stem):
                return w
            if suffix == "ing" and stem.endswith("y"):
                return stem
            undoubled = _undouble(stem)
            if undoubled:
                return undoubled
            return _restore_e(stem)
    return _strip_plural(w)


def _strip_degree(w: str) -> str:
    for suffix in ("est", "er"):
        if w.endswith(suffix):
            stem = w[: -len(suffix)]
            if len(stem) < 2 or not _has_vowel(stem):
                return w
            if stem.endswith("i"):
                return stem[:-1] + "y"
            undoubled = _undouble(stem)
            if undoubled:
                return undoubled
            return _restore_e(stem)
    return w


def lemmatize(surface: str, pos: TokenPos, exceptions: Optional[Mapping[str, str]] = None) -> str:
    """Reduce ``surface`` to its dictionary form.

    The exception table wins; otherwise plural/-s, -ed/-ing and -er/-est
    suffixes are stripped according to ``pos``.  Unknown shapes come back
    lowercased and otherwise unchanged.
    """
    w = surface.lower()
    if exceptions is None:
        exceptions = default_exceptions()
    if w in exceptions:
        return exceptions[w]
    if not w.isalpha():
        return w
    if pos is TokenPos.NOUN:
        return _strip_plural(w)
    if pos is TokenPos.VERB:
        return _strip_verb_suffix(w)
    if pos is TokenPos.ADJ:
        return _strip_degree(w)
    return w


# ---------------------------------------------------------------- sentences


def _parse_block(
    block: list[tuple[int, str]], exceptions: Optional[Mapping[str, str]]
) -> AnnotatedSentence:
    tokens: list[Token] = []
    span_lines: list[tuple[int, list[str]]] = []
    source_text: Optional[str] = None
    for lineno, line in block:
        fields = line.split("\t")
        if fields[0] == "TEXT" and not tokens and source_text is None and len(fields) >= 2:
            source_text = line[len("TEXT\t"):]
            continue
        if fields[0] == "SPAN" and len(fields) == 4:
            span_lines.append((lineno, fields))
            continue
        if len(fields) != 3 or not fields[0].strip() or not fields[1].strip():
            raise AnnotationError(
                "BadTokenLine", lineno, "expected surface<TAB>lemma<TAB>POS"
            )
        surface, lemma, pos_name = (f.strip() for f in fields)
        try:
            pos = TokenPos(pos_name.upper())
        except ValueError:
            raise AnnotationError("UnknownPos", lineno, f"unknown POS {pos_name!r}") from None
        lemma = lemmatize(surface, pos, exceptions) if lemma == "_" else lemma.lower()
        tokens.append(Token(surface, lemma, pos))

    if not tokens:
        raise AnnotationError("BadTokenLine", block[0][0], "sentence has no tokens")

    spans: list[ConstituentSpan] = []
    for lineno, (_, label_name, start_s, end_s) in span_lines:
        try:
            label = SpanLabel(label_name.strip())
        except ValueError:
            raise AnnotationError(
                "UnknownSpanLabel", lineno, f"unknown span label {label_name!r}"
            ) from None
        try:
            start, end = int(start_s), int(end_s)
        except ValueError:
            raise AnnotationError("SpanOutOfRange", lineno, "span bounds must be integers") from None
        if not 0 <= start < end <= len(tokens):
            raise AnnotationError(
                "SpanOutOfRange",
                lineno,
                f"span {start}..{end} outside 0..{len(tokens)}",
            )
        for other in spans:
            if other.label is label and (
                other.start < start < other.end < end or start < other.start < end < other.end
            ):
                raise AnnotationError(
                    "SpanOutOfRange",
                    lineno,
                    f"{label.value} span {start}..{end} crosses {other.start}..{other.end}",
                )
        spans.append(ConstituentSpan(label, start, end))

    if source_text is None:
        source_text = " ".join(t.surface for t in tokens)
    return AnnotatedSentence(tuple(tokens), tuple(spans), source_text)


def parse_sentences(
    text: str, exceptions: Optional[Mapping[str, str]] = None
) -> list[AnnotatedSentence]:
    """Parse every blank-line separated sentence in ``text``."""
    sentences = []
    block: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            if block:
                sentences.append(_parse_block(block, exceptions))
                block = []
            continue
        block.append((lineno, line))
    if block:
        sentences.append(_parse_block(block, exceptions))
    return sentences


def parse_annotated(
    text: str, exceptions: Optional[Mapping[str, str]] = None
) -> AnnotatedSentence:
    """Parse a document holding a single sentence.

    An empty document gives an empty sentence; extra sentences are an error.
    """
    sentences = parse_sentences(text, exceptions)
    if not sentences:
        return AnnotatedSentence((), (), "")
    if len(sentences) > 1:
        raise AnnotationError("BadTokenLine", 0, f"expected one sentence, found {len(sentences)}")
    return sentences[0]


def render_annotated(sentence: AnnotatedSentence) -> str:
    lines = [f"TEXT\t{sentence.source_text}"]
    lines += [f"{t.surface}\t{t.lemma}\t{t.pos.value}" for t in sentence.tokens]
    lines += [f"SPAN\t{s.label.value}\t{s.start}\t{s.end}" for s in sentence.spans]
    return "\n".join(lines) + "\n"


_WORD = re.compile(r"\w+(?:-\w+)*|'\w+|[^\w\s]")


def simple_tokenize(text: str) -> list[str]:
    """Whitespace and punctuation splitting; no tagging."""
    return _WORD.findall(text)


# ---------------------------------------------------------------- lexicon


@dataclass(frozen=True)
class Lexicon:
    glosses: Mapping[tuple[str, TokenPos], str] = field(default_factory=dict)
    exceptions: Mapping[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.glosses)

    def lookup(self, lemma: str, pos: TokenPos) -> Optional[str]:
        return self.glosses.get((lemma.lower(), pos))

    def lemma_table(self) -> dict[str, str]:
        """Built-in irregular forms overlaid with this lexicon's exceptions."""
        table = dict(default_exceptions())
        table.update(self.exceptions)
        return table

    def lemmatize(self, surface: str, pos: TokenPos) -> str:
        return lemmatize(surface, pos, self.lemma_table())


def load_lexicon(text: str) -> Lexicon:
    """Read ``lemma<TAB>pos<TAB>gloss`` and ``!surface<TAB>lemma`` lines.

    Later lines override earlier ones with the same key.
    """
    glosses: dict[tuple[str, TokenPos], str] = {}
    exceptions: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split("\t")]
        if line.startswith("!"):
            if len(fields) != 2 or not fields[0][1:] or not fields[1]:
                raise LexiconError(lineno, "expected !surface<TAB>lemma")
            exceptions[fields[0][1:].lower()] = fields[1].lower()
            continue
        if len(fields) != 3 or not all(fields):
            raise LexiconError(lineno, "expected lemma<TAB>pos<TAB>gloss")
        lemma, pos_name, gloss = fields
        try:
            pos = TokenPos(pos_name.upper())
        except ValueError:
            raise LexiconError(lineno, f"unknown POS {pos_name!r}") from None
        glosses[(lemma.lower(), pos)] = gloss
    return Lexicon(MappingProxyType(glosses), MappingProxyType(exceptions))
