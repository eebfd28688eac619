"""Bilingual phrase-unit database engine for English-to-Korean transfer translation."""

from .annotate import (
    AnnotatedSentence,
    ConstituentSpan,
    Lexicon,
    SpanLabel,
    Token,
    TokenPos,
    lemmatize,
    load_lexicon,
    parse_annotated,
    parse_sentences,
)
from .dbformat import (
    Diagnostic,
    Entry,
    GrammCategory,
    PhraseDB,
    PhraseUnit,
    lint_db,
    parse_db,
    parse_phrase_line,
    serialize_db,
)
from .matchengine import MatchMode, MatchResult, build_index, find_matches, select_matches
from .synth import TranslationResult, fill_template, translate_sentence

__version__ = "0.1.0"
