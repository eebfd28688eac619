"""Phrase-unit matching over annotated sentences.

Units are compiled into element matchers and grouped by headword.  Two
matching modes exist: one-to-one, where every sentence token of the match is
a pattern literal or slot content, and extended, which may additionally
absorb a few adjective/noun modifiers in front of noun items and adverbs
around verb items.  Overlapping candidates are then resolved by preferring
the longest span.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Literal as TypingLiteral, Optional, Union

from .annotate import (
    POSSESSIVE_DETERMINERS,
    POSSESSIVE_MARKERS,
    REFLEXIVE_PRONOUNS,
    AnnotatedSentence,
    ConstituentSpan,
    SpanLabel,
    Token,
    TokenPos,
    default_exceptions,
    lemmatize,
)
from .dbformat import Entry, GrammCategory, Literal, Parameter, PhraseDB, PhraseUnit, Slot

__all__ = [
    "MatchMode",
    "LiteralMatcher",
    "SlotMatcher",
    "CompiledPattern",
    "PhraseIndex",
    "SlotBinding",
    "MatchResult",
    "compile_unit",
    "build_index",
    "bind_parameter",
    "match_at",
    "find_matches",
    "select_matches",
    "overlaps",
    "DETERMINERS",
]

DETERMINERS = frozenset({"a", "an", "the"})
MAX_NOUN_MODIFIERS = 3
MAX_ADVERBS = 2

_NOUN_LIKE = frozenset({TokenPos.NOUN, TokenPos.PRPN})
_NOUN_MODIFIER = frozenset({TokenPos.ADJ, TokenPos.NOUN})
_ABSORBABLE = _NOUN_MODIFIER | {TokenPos.ADV}
_NOMINAL = frozenset({TokenPos.NOUN, TokenPos.PRON, TokenPos.PRPN})


class MatchMode(str, Enum):
    ONE_TO_ONE = "one-to-one"
    EXTENDED = "extended"


# ---------------------------------------------------------------- compiling


@dataclass(frozen=True)
class LiteralMatcher:
    item_index: int
    words: frozenset[str]
    by: TypingLiteral["lemma", "surface", "det"]
    forbid_verb: bool = False

    def matches(self, token: Token) -> bool:
        if self.forbid_verb and token.pos is TokenPos.VERB:
            return False
        if self.by == "det":
            return token.surface.lower() in DETERMINERS
        if self.by == "lemma":
            return token.lemma in self.words
        return token.surface.lower() in self.words


@dataclass(frozen=True)
class SlotMatcher:
    item_index: int
    slot: Slot


ElementMatcher = Union[LiteralMatcher, SlotMatcher]


@dataclass(frozen=True)
class CompiledPattern:
    headword: str
    unit_no: int  # 1-based position among the units sharing this headword
    db_order: int
    unit: PhraseUnit = field(repr=False)
    elements: tuple[ElementMatcher, ...]
    anchor: Optional[int]
    category: GrammCategory
    no_pre_modify: bool = False
    no_post_modify: bool = False

    @property
    def unit_ref(self) -> tuple[str, int]:
        return (self.headword, self.unit_no)


def _is_anchor(item: Literal, headword: str, pos: TokenPos) -> bool:
    if item.alternatives and set(w.lower() for w in item.alternatives) != {item.word.lower()}:
        return False
    word = item.word.lower()
    return word == headword or lemmatize(word, pos, default_exceptions()) == headword


def compile_unit(
    unit: PhraseUnit, entry: Entry, unit_no: int = 1, db_order: int = 0
) -> CompiledPattern:
    """Turn a parsed unit into element matchers.

    Literals equal to the headword, ``^`` literals and the literal right
    after a ``NUM`` slot compare lemmas; articles match any article; other
    literals compare lowercased surfaces.  In NOUN units no literal may
    match a verb-tagged token.
    """
    headword = entry.headword.lower()
    pos = TokenPos(entry.entry_pos.value)
    forbid_verb = unit.category is GrammCategory.NOUN
    elements: list[ElementMatcher] = []
    anchor = None
    prev: Optional[Union[Literal, Slot]] = None
    for i, item in enumerate(unit.items):
        if isinstance(item, Slot):
            elements.append(SlotMatcher(i, item))
        else:
            words = frozenset(w.lower() for w in item.words)
            after_num = isinstance(prev, Slot) and prev.kind is Parameter.NUM
            if words <= DETERMINERS:
                by = "det"
            elif item.morph_variable or headword in words or after_num:
                by = "lemma"
            else:
                by = "surface"
            elements.append(LiteralMatcher(i, words, by, forbid_verb))
            if anchor is None and _is_anchor(item, headword, pos):
                anchor = i
        prev = item
    return CompiledPattern(
        headword=headword,
        unit_no=unit_no,
        db_order=db_order,
        unit=unit,
        elements=tuple(elements),
        anchor=anchor,
        category=unit.category,
        no_pre_modify=unit.no_pre_modify,
        no_post_modify=unit.no_post_modify,
    )


@dataclass(frozen=True)
class PhraseIndex:
    groups: dict[str, tuple[CompiledPattern, ...]]
    unanchored: tuple[CompiledPattern, ...] = ()

    def __len__(self) -> int:
        return sum(len(g) for g in self.groups.values())

    @property
    def patterns(self) -> list[CompiledPattern]:
        """All patterns in database order."""
        return sorted((p for g in self.groups.values() for p in g), key=lambda p: p.db_order)


def build_index(db: PhraseDB) -> PhraseIndex:
    """Group compiled units under their headword, keeping database order.

    Entries repeating a headword are appended to the same group.  Units
    without an anchor literal also go to ``unanchored`` and are matched by
    scanning every sentence position.
    """
    groups: dict[str, list[CompiledPattern]] = {}
    unanchored = []
    order = 0
    for entry in db.entries:
        key = entry.headword.lower()
        group = groups.setdefault(key, [])
        for unit in entry.units:
            pattern = compile_unit(unit, entry, len(group) + 1, order)
            order += 1
            group.append(pattern)
            if pattern.anchor is None:
                unanchored.append(pattern)
    return PhraseIndex({k: tuple(v) for k, v in groups.items()}, tuple(unanchored))


# ---------------------------------------------------------------- matching


@dataclass(frozen=True)
class SlotBinding:
    name: str
    start: int
    end: int
    kind: TypingLiteral["token", "constituent"]
    constituent: Optional[ConstituentSpan] = None

    @property
    def span(self) -> range:
        return range(self.start, self.end)


@dataclass(frozen=True)
class MatchResult:
    headword: str
    unit_no: int
    db_order: int
    start: int
    end: int
    category: GrammCategory
    bindings: tuple[SlotBinding, ...]
    modifiers: tuple[tuple[int, tuple[int, ...]], ...]
    mode: MatchMode
    literals: tuple[tuple[int, int], ...]  # (item index, token index)
    anchor_token: Optional[int] = None
    unit: Optional[PhraseUnit] = field(default=None, compare=False, repr=False)

    @property
    def unit_ref(self) -> tuple[str, int]:
        return (self.headword, self.unit_no)

    @property
    def span(self) -> range:
        return range(self.start, self.end)

    def __len__(self) -> int:
        return self.end - self.start

    @property
    def modifier_map(self) -> dict[int, tuple[int, ...]]:
        return dict(self.modifiers)

    def sort_key(self) -> tuple:
        return (
            self.start,
            -len(self),
            self.db_order,
            self.mode is MatchMode.EXTENDED,
            tuple((b.name, b.start, b.end) for b in self.bindings),
            self.modifiers,
            # the rest only matters for hand-built candidates; keeps the order total
            self.headword,
            self.unit_no,
            self.category.value,
            self.literals,
            -1 if self.anchor_token is None else self.anchor_token,
        )


_SPAN_PARAMS = {
    p: SpanLabel(p.value)
    for p in Parameter
    if p.value in SpanLabel.__members__ and p is not Parameter.NP
}


def _np_binding(name: str, sentence: AnnotatedSentence, cursor: int) -> Optional[SlotBinding]:
    spans = sentence.spans_at(cursor, SpanLabel.NP)
    if spans:
        return SlotBinding(name, spans[0].start, spans[0].end, "constituent", spans[0])
    if sentence.tokens[cursor].pos in _NOMINAL:
        return SlotBinding(name, cursor, cursor + 1, "token")
    return None


def bind_parameter(slot: Slot, sentence: AnnotatedSentence, cursor: int) -> Optional[SlotBinding]:
    """Bind ``slot`` to the material starting at ``cursor``, or return None.

    Token parameters take one token of the right class; phrase and clause
    parameters take the longest constituent span with the matching label.
    """
    toks = sentence.tokens
    tok = toks[cursor]
    name, kind = slot.name, slot.kind

    if kind in (Parameter.NP, Parameter.NOUN):
        return _np_binding(name, sentence, cursor)
    if kind is Parameter.ONE_S:
        if tok.pos in (TokenPos.DET, TokenPos.PRON) and tok.surface.lower() in POSSESSIVE_DETERMINERS:
            return SlotBinding(name, cursor, cursor + 1, "token")
        for span in sentence.spans_at(cursor, SpanLabel.NP):
            if span.end < len(toks) and toks[span.end].surface in POSSESSIVE_MARKERS:
                return SlotBinding(name, cursor, span.end + 1, "constituent", span)
        if (
            tok.pos in _NOMINAL
            and cursor + 1 < len(toks)
            and toks[cursor + 1].surface in POSSESSIVE_MARKERS
        ):
            return SlotBinding(name, cursor, cursor + 2, "token")
        return None
    if kind is Parameter.ONESELF:
        if tok.surface.lower() in REFLEXIVE_PRONOUNS:
            return SlotBinding(name, cursor, cursor + 1, "token")
        return None
    if kind.value in TokenPos.__members__:
        # PRON, PRPN, NUM, ADJ, ADV: a single token with that tag
        if tok.pos is TokenPos(kind.value):
            return SlotBinding(name, cursor, cursor + 1, "token")
        return None
    label = _SPAN_PARAMS[kind]
    spans = sentence.spans_at(cursor, label)
    if spans:
        return SlotBinding(name, spans[0].start, spans[0].end, "constituent", spans[0])
    return None


def match_at(
    pattern: CompiledPattern, sentence: AnnotatedSentence, start: int, mode: MatchMode
) -> Optional[MatchResult]:
    """Walk ``pattern`` left to right from token ``start``.

    Literals consume one token and slots the longest qualifying span, with
    no backtracking.  In extended mode, tokens that keep a literal from
    matching may be absorbed as its modifiers: up to three adjectives or
    nouns before a noun-tagged literal, up to two adverbs before or after a
    verb-tagged literal.  Trailing adverbs are absorbed after a verb item or
    a VERB unit.  ``|`` and ``$`` block absorption at the front and back
    edge.  The result's mode is extended only if something was absorbed.
    """
    toks = sentence.tokens
    n = len(toks)
    if not 0 <= start < n:
        return None
    extended = mode is MatchMode.EXTENDED
    cursor = start
    bindings: list[SlotBinding] = []
    literals: list[tuple[int, int]] = []
    mods: dict[int, list[int]] = {}
    prev_verb: Optional[int] = None
    last_verb: Optional[int] = None

    for k, el in enumerate(pattern.elements):
        if isinstance(el, SlotMatcher):
            if cursor >= n:
                return None
            binding = bind_parameter(el.slot, sentence, cursor)
            if binding is None:
                return None
            bindings.append(binding)
            cursor = binding.end
            prev_verb = None
            continue

        j = cursor
        if extended and not (k == 0 and pattern.no_pre_modify):
            while (
                j < n
                and j - cursor < MAX_NOUN_MODIFIERS
                and not el.matches(toks[j])
                and toks[j].pos in _ABSORBABLE
            ):
                j += 1
        if j >= n or not el.matches(toks[j]):
            return None
        if j > cursor:
            absorbed = list(range(cursor, j))
            tags = {toks[i].pos for i in absorbed}
            if tags <= _NOUN_MODIFIER and toks[j].pos in _NOUN_LIKE:
                mods[el.item_index] = absorbed
            elif tags == {TokenPos.ADV} and len(absorbed) <= MAX_ADVERBS:
                if toks[j].pos is TokenPos.VERB:
                    mods[el.item_index] = absorbed
                elif prev_verb is not None:
                    mods.setdefault(prev_verb, []).extend(absorbed)
                else:
                    return None
            else:
                return None
        literals.append((el.item_index, j))
        is_verb = toks[j].pos is TokenPos.VERB
        prev_verb = el.item_index if is_verb else None
        if is_verb:
            last_verb = el.item_index
        cursor = j + 1

    if (
        extended
        and not pattern.no_post_modify
        and (prev_verb is not None or pattern.category is GrammCategory.VERB)
    ):
        j = cursor
        while j < n and j - cursor < MAX_ADVERBS and toks[j].pos is TokenPos.ADV:
            j += 1
        if j > cursor:
            target = prev_verb if prev_verb is not None else last_verb
            if target is None:
                target = literals[-1][0]
            mods.setdefault(target, []).extend(range(cursor, j))
            cursor = j

    anchor_token = None
    if pattern.anchor is not None:
        anchor_token = dict(literals)[pattern.anchor]
    return MatchResult(
        headword=pattern.headword,
        unit_no=pattern.unit_no,
        db_order=pattern.db_order,
        start=start,
        end=cursor,
        category=pattern.category,
        bindings=tuple(bindings),
        modifiers=tuple(sorted((i, tuple(sorted(v))) for i, v in mods.items())),
        mode=MatchMode.EXTENDED if mods else MatchMode.ONE_TO_ONE,
        literals=tuple(literals),
        anchor_token=anchor_token,
        unit=pattern.unit,
    )


def _modes(mode: MatchMode) -> tuple[MatchMode, ...]:
    # extended matching keeps every one-to-one result alongside the extended ones
    if mode is MatchMode.ONE_TO_ONE:
        return (MatchMode.ONE_TO_ONE,)
    return (MatchMode.ONE_TO_ONE, MatchMode.EXTENDED)


def _anchored(
    pattern: CompiledPattern, sentence: AnnotatedSentence, token: int, mode: MatchMode
) -> Optional[MatchResult]:
    # leftmost start whose walk puts the anchor literal on ``token``
    for start in range(token + 1):
        result = match_at(pattern, sentence, start, mode)
        if result is not None and result.anchor_token == token:
            return result
    return None


def find_matches(
    sentence: AnnotatedSentence, index: PhraseIndex, mode: MatchMode
) -> list[MatchResult]:
    """All candidate matches, ordered by (start, longest first, database order)."""
    found: set[MatchResult] = set()
    for t, tok in enumerate(sentence.tokens):
        for pattern in index.groups.get(tok.lemma, ()):
            if pattern.anchor is None:
                continue
            for m in _modes(mode):
                result = _anchored(pattern, sentence, t, m)
                if result is not None:
                    found.add(result)
    for pattern in index.unanchored:
        for start in range(len(sentence.tokens)):
            for m in _modes(mode):
                result = match_at(pattern, sentence, start, m)
                if result is not None:
                    found.add(result)
    return sorted(found, key=MatchResult.sort_key)


def overlaps(a: MatchResult, b: MatchResult) -> bool:
    return a.start < b.end and b.start < a.end


def select_matches(candidates: Iterable[MatchResult]) -> list[MatchResult]:
    """Greedy non-overlapping subset: longest span first, then leftmost, then database order."""
    ranked = sorted(
        set(candidates),
        key=lambda r: (-len(r), r.start, r.db_order) + r.sort_key()[3:],
    )
    chosen: list[MatchResult] = []
    for cand in ranked:
        if not any(overlaps(cand, c) for c in chosen):
            chosen.append(cand)
    return sorted(chosen, key=lambda r: r.start)
