import pytest

from helpers import DATA
from lambeklearn.frames import parse_examples
from lambeklearn.syntax import parse_grammar


@pytest.fixture(scope="session")
def worked():
    return parse_examples((DATA / "worked.frames").read_text())


@pytest.fixture(scope="session")
def g_r():
    return parse_grammar((DATA / "gr.grammar").read_text())


def pytest_terminal_summary(terminalreporter):
    from helpers import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, title, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  ({detail})")
