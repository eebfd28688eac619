"""Acceptance criteria, one test per criterion (C7 has one per property suite).

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints a
PASS/FAIL line for each criterion.
"""

import random
import time

import pytest

from phrasedb.annotate import load_lexicon
from phrasedb.cli import main
from phrasedb.dbformat import (
    Entry,
    EntryPos,
    GrammCategory,
    KoreanTemplate,
    Literal,
    LiteralText,
    Parameter,
    PhraseDB,
    PhraseUnit,
    Slot,
    SlotRef,
    lint_db,
    parse_db,
    serialize_db,
)
from phrasedb.matchengine import MatchMode, build_index, find_matches, select_matches
from phrasedb.synth import PhraseSegment, fill_template, translate_sentence

from conftest import FIXTURES, fixture_text, load_db, load_sentence
from oracle import as_tuples, brute_force_one_to_one, pairwise_disjoint
from randgen import korean_word, random_candidates, random_case, random_db, random_unit

CASES = 1000
ONE, EXT = MatchMode.ONE_TO_ONE, MatchMode.EXTENDED
NP = Parameter.NP
V = GrammCategory.VERB


def L(word, **kw):
    return Literal(word, **kw)


def T(*texts, slots=()):
    return KoreanTemplate(
        tuple(SlotRef(t, t) if t in slots else LiteralText(t) for t in texts)
    )


GOLDEN_TEXT = fixture_text("examples.db")

GOLDEN = PhraseDB((
    Entry("call", EntryPos.VERB, (
        PhraseUnit((L("call"), L("in"), L("a"), L("loan")), V, T("상환을", "요구하다")),
    )),
    Entry("take", EntryPos.VERB, (
        PhraseUnit(
            (L("it"), L("take"), Slot(NP, np_letter="A"), L("for"), Slot(NP, np_letter="B"),
             Slot(Parameter.TO_INF)),
            GrammCategory.SENT,
            T("B", "가", "TO_INF", "하는데", "A", "가", "걸리다", slots={"A", "B", "TO_INF"}),
        ),
        PhraseUnit(
            (L("have"), Slot(Parameter.ONE_S),
             L("picture", alternatives=("picture", "photo")), L("taken", is_head=True)),
            V,
            KoreanTemplate((SlotRef("ONE", "ONE"), LiteralText("의"), LiteralText("사진을"),
                            LiteralText("찍다"))),
        ),
        PhraseUnit((L("take"), L("a"), L("step", alternatives=("step", "walk", "stroll"))), V,
                   T("산보하다")),
        PhraseUnit(
            (L("take", morph_variable=True), Slot(NP, np_letter="A"), Slot(Parameter.NUM, ordinal=1),
             L("minute"), Slot(Parameter.TO_INF)),
            V,
            T("A", "가", "TO_INF", "하는데", "NUM1", "분", "걸리다", slots={"A", "TO_INF", "NUM1"}),
        ),
        PhraseUnit((L("take"), Slot(NP, np_letter="A"), L("apart")), V, T("A", "를", "분해하다", slots={"A"}),
                   no_post_modify=True),
        PhraseUnit((L("take"), L("it"), L("for"), L("granted"), Slot(Parameter.THAT_CLAUSE)), V,
                   T("응당", "THAT_CLAUSE", "할것으로", "생각하다", slots={"THAT_CLAUSE"})),
        PhraseUnit((L("take"), L("it"), L("as"), L("read"), Slot(Parameter.THAT_CLAUSE)), V,
                   T("THAT_CLAUSE", "하다고", "생각하다", slots={"THAT_CLAUSE"})),
    )),
))


def test_c1_dsl_golden_suite():
    t0 = time.perf_counter()
    db, diags = parse_db(GOLDEN_TEXT, "examples.db")
    elapsed = time.perf_counter() - t0
    assert diags == []
    assert len(db.entries) == 2 and sum(1 for _ in db.units) == 8
    for got, want in zip(db.entries, GOLDEN.entries):
        assert (got.headword, got.entry_pos) == (want.headword, want.entry_pos)
        for gu, wu in zip(got.units, want.units, strict=True):
            assert gu.items == wu.items
            assert gu.category is wu.category
            assert gu.template == wu.template
            assert (gu.no_pre_modify, gu.no_post_modify) == (wu.no_pre_modify, wu.no_post_modify)
    assert db == GOLDEN
    assert db.entries[1].units[1].head_index == 3
    assert elapsed < 1.0


def test_c2_take_it_as_read():
    sentence = load_sentence("as_read.ann")
    matches = find_matches(sentence, build_index(load_db("read.db")), EXT)
    assert len(matches) == 1
    (m,) = matches
    assert m.category is GrammCategory.VERB
    (b,) = m.bindings
    assert (b.name, b.start, b.end) == ("THAT_CLAUSE", 6, 11)
    assert (m.start, m.end) == (2, 11)
    lexicon = load_lexicon(fixture_text("lexicon.tsv"))
    out = translate_sentence(sentence, build_index(load_db("examples.db")), lexicon).output
    assert out.endswith("하다고 생각하다")


def test_c3_determiner_class():
    sentence = load_sentence("loan.ann")
    index = build_index(load_db("examples.db"))
    (m,) = select_matches(find_matches(sentence, index, ONE))
    assert (m.headword, m.unit_no, m.start, m.end) == ("call", 1, 3, 7)
    out = translate_sentence(sentence, index, load_lexicon(fixture_text("lexicon.tsv"))).output
    assert "상환을 요구하다" in out


def test_c4_extending_match_with_alignment():
    sentence = load_sentence("interest_free.ann")
    index = build_index(load_db("loan_aligned.db"))
    assert find_matches(sentence, index, ONE) == []
    ext = [m for m in find_matches(sentence, index, EXT) if m.mode is EXT]
    assert len(ext) == 1
    assert ext[0].modifier_map == {3: (6,)}
    assert (ext[0].start, ext[0].end) == (3, 8)
    lexicon = load_lexicon(fixture_text("lexicon.tsv"))
    out = translate_sentence(sentence, index, lexicon, EXT).output.split(" ")
    k = out.index("상환을")
    assert out[k - 1] == lexicon.lookup("interest-free", sentence.tokens[6].pos) == "무이자"


def test_c5_post_edge_flag():
    sentence = load_sentence("apart.ann")
    matches = find_matches(sentence, build_index(load_db("examples.db")), EXT)
    assert matches
    for m in matches:
        assert 3 not in m.span
        assert all(3 not in toks for _, toks in m.modifiers)
    (m,) = select_matches(matches)
    assert (m.start, m.end) == (0, 3)


def test_c6_base_noun_phrase_pos():
    index = build_index(load_db("command.db"))
    panel = load_sentence("command_panel.ann")
    trap = load_sentence("trap.ann")
    for mode in (ONE, EXT):
        hits = find_matches(panel, index, mode)
        assert [(m.start, m.end, m.category) for m in hits] == [(1, 3, GrammCategory.NOUN)]
        assert find_matches(trap, index, mode) == []


# ---- C7 property suites; each runs CASES seeded cases


def test_c7a_round_trip_fixed_point():
    rng = random.Random(7001)
    for _ in range(CASES):
        db = random_db(rng)
        text = serialize_db(db)
        back, diags = parse_db(text)
        assert diags == []
        assert back == db
        assert serialize_db(back) == text


def test_c7b_extended_superset():
    rng = random.Random(7002)
    nonempty = 0
    for _ in range(CASES):
        db, s = random_case(rng)
        index = build_index(db)
        one = find_matches(s, index, ONE)
        ext = set(find_matches(s, index, EXT))
        for m in one:
            assert m in ext
            assert m.modifiers == ()
        nonempty += bool(one)
    assert nonempty > CASES // 4


def _priority(m):
    return (-len(m), m.start, m.db_order)


def test_c7c_select_greedy_maximal_deterministic():
    rng = random.Random(7003)
    for _ in range(CASES):
        cands = random_candidates(rng)
        picked = select_matches(cands)
        assert pairwise_disjoint(picked)
        assert [m.start for m in picked] == sorted(m.start for m in picked)
        for c in cands:
            if c in picked:
                continue
            # rejected only because a chosen match of no lower priority overlaps it
            assert any(
                p.start < c.end and c.start < p.end and _priority(p) <= _priority(c) for p in picked
            )
        shuffled = cands[:]
        rng.shuffle(shuffled)
        assert select_matches(shuffled) == picked


def test_c7d_oracle_equivalence():
    rng = random.Random(7004)
    seen = 0
    for _ in range(CASES):
        db, s = random_case(rng, max_units=5, max_len=12)
        assert sum(1 for _ in db.units) <= 5 and len(s) <= 12
        got = as_tuples(find_matches(s, build_index(db), ONE))
        assert got == brute_force_one_to_one(s, db)
        seen += len(got)
    assert seen > CASES // 4


def test_c7e_fill_template_placeholder_free():
    rng = random.Random(7005)
    for _ in range(CASES):
        unit = random_unit(rng, "take")
        texts = {s.name: korean_word(rng) for s in unit.slots}
        mods = {k: korean_word(rng) for k in range(len(unit.items)) if rng.random() < 0.3}
        words = fill_template(unit.template, texts, mods).split(" ")
        names = {s.name for s in unit.slots} | {s.source for s in unit.slots}
        assert not names & set(words)


def test_c7f_segments_partition_tokens():
    rng = random.Random(7006)
    lexicon = load_lexicon(fixture_text("lexicon.tsv"))
    phrases = 0
    for _ in range(CASES):
        db, s = random_case(rng)
        r = translate_sentence(s, build_index(db), lexicon)
        indices = [i for seg in r.segments for i in seg.indices]
        assert indices == list(range(len(s)))
        assert r.output == " ".join(seg.text for seg in r.segments if seg.text)
        phrases += sum(isinstance(seg, PhraseSegment) for seg in r.segments)
    assert phrases > CASES // 4


def test_c8_lint_exit_codes(capsys):
    assert main(["lint", "--db", str(FIXTURES / "bad_entry.db")]) == 1
    assert "EntryHasSpace" in capsys.readouterr().out
    assert main(["lint", "--db", str(FIXTURES / "examples.db")]) == 0
    assert capsys.readouterr().out == ""
    assert lint_db(load_db("examples.db")) == []
