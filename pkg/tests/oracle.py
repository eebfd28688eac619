"""Index-free reference matcher and match-set checks used by the property tests.

Works straight from parsed units (no compiled patterns, no headword index):
every unit is tried at every sentence position.
"""

from phrasedb.annotate import TokenPos, default_exceptions, lemmatize
from phrasedb.dbformat import GrammCategory, Literal, Parameter

ARTICLES = {"a", "an", "the"}
POSSESSIVES = {"my", "your", "his", "her", "its", "our", "their"}
REFLEXIVES = {"myself", "yourself", "himself", "herself", "itself", "oneself",
              "ourselves", "yourselves", "themselves"}
MARKERS = {"'s", "'", "’s", "’"}
TOKEN_KINDS = {"PRON", "PRPN", "NUM", "ADJ", "ADV"}


def _literal_ok(item, prev, headword, category, tok):
    if category is GrammCategory.NOUN and tok.pos is TokenPos.VERB:
        return False
    words = {w.lower() for w in item.words}
    if words <= ARTICLES:
        return tok.surface.lower() in ARTICLES
    lemma_mode = (
        item.morph_variable
        or headword in words
        or (prev is not None and not isinstance(prev, Literal) and prev.kind is Parameter.NUM)
    )
    return (tok.lemma if lemma_mode else tok.surface.lower()) in words


def _longest_span(sentence, cursor, label):
    ends = [s.end for s in sentence.spans if s.start == cursor and s.label.value == label]
    return max(ends) if ends else None


def _bind(slot, sentence, cursor):
    toks = sentence.tokens
    tok = toks[cursor]
    kind = slot.kind.value
    if kind in ("NP", "NOUN"):
        end = _longest_span(sentence, cursor, "NP")
        if end is not None:
            return end
        return cursor + 1 if tok.pos.value in ("NOUN", "PRON", "PRPN") else None
    if kind == "ONE_S":
        if tok.pos.value in ("DET", "PRON") and tok.surface.lower() in POSSESSIVES:
            return cursor + 1
        np_ends = sorted(
            (s.end for s in sentence.spans if s.start == cursor and s.label.value == "NP"),
            reverse=True,
        )
        for end in np_ends:
            if end < len(toks) and toks[end].surface in MARKERS:
                return end + 1
        if tok.pos.value in ("NOUN", "PRON", "PRPN") and cursor + 1 < len(toks) \
                and toks[cursor + 1].surface in MARKERS:
            return cursor + 2
        return None
    if kind == "ONESELF":
        return cursor + 1 if tok.surface.lower() in REFLEXIVES else None
    if kind in TOKEN_KINDS:
        return cursor + 1 if tok.pos.value == kind else None
    return _longest_span(sentence, cursor, kind)


def walk_one_to_one(unit, headword, sentence, start):
    """Return (end, bindings, literals) or None."""
    cursor = start
    bindings, literals = [], []
    prev = None
    for k, item in enumerate(unit.items):
        if cursor >= len(sentence.tokens):
            return None
        if isinstance(item, Literal):
            if not _literal_ok(item, prev, headword, unit.category, sentence.tokens[cursor]):
                return None
            literals.append((k, cursor))
            cursor += 1
        else:
            end = _bind(item, sentence, cursor)
            if end is None:
                return None
            bindings.append((item.name, cursor, end))
            cursor = end
        prev = item
    return cursor, tuple(bindings), tuple(literals)


def anchor_item(unit, headword, entry_pos):
    pos = TokenPos(entry_pos.value)
    for k, item in enumerate(unit.items):
        if not isinstance(item, Literal):
            continue
        if item.alternatives and {w.lower() for w in item.alternatives} != {item.word.lower()}:
            continue
        w = item.word.lower()
        if w == headword or lemmatize(w, pos, default_exceptions()) == headword:
            return k
    return None


def brute_force_one_to_one(sentence, db):
    """Set of (db_order, start, end, bindings, literals) tuples."""
    found = set()
    order = 0
    for entry in db.entries:
        headword = entry.headword.lower()
        for unit in entry.units:
            anchor = anchor_item(unit, headword, entry.entry_pos)
            per_anchor = {}
            for start in range(len(sentence.tokens)):
                r = walk_one_to_one(unit, headword, sentence, start)
                if r is None:
                    continue
                key = (order, start) + r
                if anchor is None:
                    found.add(key)
                    continue
                t = dict(r[2])[anchor]
                if sentence.tokens[t].lemma == headword and t not in per_anchor:
                    per_anchor[t] = key
            found.update(per_anchor.values())
            order += 1
    return found


def as_tuples(matches):
    return {
        (m.db_order, m.start, m.end, tuple((b.name, b.start, b.end) for b in m.bindings), m.literals)
        for m in matches
    }


def pairwise_disjoint(matches):
    for i, a in enumerate(matches):
        for b in matches[i + 1:]:
            if set(range(a.start, a.end)) & set(range(b.start, b.end)):
                return False
    return True
