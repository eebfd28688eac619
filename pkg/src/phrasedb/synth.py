"""Korean output synthesis by template filling.

Selected phrase matches are replaced by their Korean templates, with slot
contents translated recursively; everything else is glossed word by word in
English order.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .annotate import AnnotatedSentence, Lexicon, Token, TokenPos
from .dbformat import KoreanTemplate, LiteralText, SlotRef
from .matchengine import MatchMode, MatchResult, PhraseIndex, find_matches, select_matches

__all__ = [
    "SlotTranslation",
    "PhraseSegment",
    "GlossSegment",
    "Segment",
    "TranslationResult",
    "UnboundSlotError",
    "gloss_token",
    "fill_template",
    "translate_sentence",
]


class UnboundSlotError(KeyError):
    """A template placeholder had no translation to substitute."""


@dataclass(frozen=True)
class SlotTranslation:
    slot: str
    text: str
    start: int
    end: int


@dataclass(frozen=True)
class PhraseSegment:
    match: MatchResult
    filled: str
    slots: tuple[SlotTranslation, ...] = ()

    @property
    def text(self) -> str:
        return self.filled

    @property
    def indices(self) -> range:
        return self.match.span


@dataclass(frozen=True)
class GlossSegment:
    token_index: int
    surface: str
    text: str
    fallback: bool

    @property
    def indices(self) -> range:
        return range(self.token_index, self.token_index + 1)


Segment = Union[PhraseSegment, GlossSegment]


@dataclass(frozen=True)
class TranslationResult:
    output: str
    segments: tuple[Segment, ...]
    trace: tuple[str, ...]


def gloss_token(token: Token, lexicon: Lexicon) -> tuple[str, bool]:
    """Dictionary gloss for one token and whether it fell back to the surface."""
    if token.pos is TokenPos.PUNC:
        return "", True
    gloss = lexicon.lookup(token.lemma, token.pos)
    if gloss:
        return gloss, False
    return token.surface, True


def fill_template(
    template: KoreanTemplate,
    slot_texts: Mapping[str, str],
    modifier_texts: Optional[Mapping[int, str]] = None,
    alignment: Optional[Mapping[int, int]] = None,
) -> str:
    """Substitute slot texts and place modifier translations.

    A modifier of pattern item ``i`` goes right before template token
    ``alignment[i]``; without an alignment entry it is put in front of the
    whole template.
    """
    if alignment is None:
        alignment = template.alignment_map
    tokens = template.tokens
    front: list[str] = []
    before: dict[int, list[str]] = defaultdict(list)
    for item, text in sorted((modifier_texts or {}).items()):
        if not text:
            continue
        target = alignment.get(item)
        if target is not None and 0 <= target < len(tokens) and isinstance(tokens[target], LiteralText):
            before[target].append(text)
        else:
            front.append(text)

    pieces = front
    for i, tok in enumerate(tokens):
        pieces.extend(before.get(i, ()))
        if isinstance(tok, SlotRef):
            if tok.slot not in slot_texts:
                raise UnboundSlotError(tok.slot)
            pieces.append(slot_texts[tok.slot])
        else:
            pieces.append(tok.text)
    return " ".join(p for p in pieces if p)


def _gloss_span(sentence: AnnotatedSentence, indices, lexicon: Lexicon) -> str:
    return " ".join(t for t in (gloss_token(sentence.tokens[i], lexicon)[0] for i in indices) if t)


def translate_sentence(
    sentence: AnnotatedSentence,
    index: PhraseIndex,
    lexicon: Lexicon,
    mode: MatchMode = MatchMode.EXTENDED,
) -> TranslationResult:
    """Translate one sentence.

    Slot contents are translated by running the same pipeline on the slot's
    sub-sentence, so phrase units nested inside a slot are applied too.
    Tokens outside any selected match keep their English order.
    """
    selected = {m.start: m for m in select_matches(find_matches(sentence, index, mode))}
    segments: list[Segment] = []
    trace: list[str] = []
    i = 0
    while i < len(sentence.tokens):
        match = selected.get(i)
        if match is None:
            tok = sentence.tokens[i]
            text, fallback = gloss_token(tok, lexicon)
            segments.append(GlossSegment(i, tok.surface, text, fallback))
            trace.append(
                f"GLOSS\t{i}\t{tok.surface}\t{text}\t{'true' if fallback else 'false'}"
            )
            i += 1
            continue

        slots = []
        for b in match.bindings:
            sub = sentence.sub(b.start, b.end)
            text = translate_sentence(sub, index, lexicon, mode).output
            if not text:
                text = " ".join(t.surface for t in sub.tokens)
            slots.append(SlotTranslation(b.name, text, b.start, b.end))
        mod_texts = {
            item: _gloss_span(sentence, toks, lexicon) for item, toks in match.modifiers
        }
        filled = fill_template(
            match.unit.template, {s.slot: s.text for s in slots}, mod_texts
        )
        segments.append(PhraseSegment(match, filled, tuple(slots)))
        trace.append(
            f"PHRASE\t{match.headword}\t{match.unit_no}\t{match.start}..{match.end}\t{filled}"
        )
        i = match.end

    output = " ".join(s.text for s in segments if s.text)
    return TranslationResult(output, tuple(segments), tuple(trace))
