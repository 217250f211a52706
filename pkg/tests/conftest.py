from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mellinrec.cli import parse_ics_text, parse_recurrence_file  # noqa: E402
from mellinrec.cli.main import expression_text, fixtures_dir  # noqa: E402
from mellinrec.harmonic import ZetaValue, parse_hexpr  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = fixtures_dir()


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


def as_zeta(d: dict) -> ZetaValue:
    """Oracle dict {zeta key: Fraction} to a ZetaValue."""
    return ZetaValue(dict(d))


@pytest.fixture(scope="session")
def no22_file():
    return parse_recurrence_file(fixture_text("no22.rec"))


@pytest.fixture(scope="session")
def no22_rec(no22_file):
    return no22_file.recurrence()


@pytest.fixture(scope="session")
def no22_solution():
    return parse_hexpr(expression_text(fixture_text("no22_solution.expr")))


@pytest.fixture(scope="session")
def no22_ics():
    return parse_ics_text(expression_text(fixture_text("no22_ics.expr")))


# -- acceptance summary: one line per criterion -------------------------------

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    number, title = mark.args
    ok = rep.passed if rep.when == "call" else False
    prev = _CRITERIA.get(number, (title, True))
    _CRITERIA[number] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {title}")
