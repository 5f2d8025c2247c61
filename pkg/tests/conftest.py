import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mediation.fixtures import load_corpus  # noqa: E402

ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def corpus():
    return {c.id: c for c in load_corpus()}


@pytest.fixture(scope="session")
def messenger(corpus):
    from mediation.synthesis import synthesize

    case = corpus["messenger"]
    return case, synthesize(case.left, case.right, case.map)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
