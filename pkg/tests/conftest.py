import time
from pathlib import Path

import pytest

from phrasedb.annotate import load_lexicon, parse_annotated
from phrasedb.dbformat import parse_db
from phrasedb.matchengine import build_index

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text("utf-8")


def load_db(name: str):
    db, diags = parse_db(fixture_text(name), name)
    assert diags == []
    return db


def load_sentence(name: str):
    return parse_annotated(fixture_text(name))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def example_db():
    return load_db("examples.db")


@pytest.fixture(scope="session")
def example_index(example_db):
    return build_index(example_db)


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon(fixture_text("lexicon.tsv"))


# ---- one summary line per acceptance criterion

_acceptance: dict[str, str] = {}
_clock = {}
SUITE_BUDGET_S = 60.0


def pytest_sessionstart(session):
    _clock["start"] = time.monotonic()


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[name] = "PASS" if report.passed else "FAIL"


def pytest_sessionfinish(session, exitstatus):
    if not _acceptance:
        return
    elapsed = time.monotonic() - _clock["start"]
    ok = elapsed < SUITE_BUDGET_S
    _acceptance[f"suite runtime {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)"] = "PASS" if ok else "FAIL"
    if not ok:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        terminalreporter.write_line(f"{outcome}  {name}")
