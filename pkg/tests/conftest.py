import functools

import pytest

from wordlab import conjugacy_classes, enumerate_group


@functools.lru_cache(maxsize=None)
def group_and_classes(kind, p):
    G = enumerate_group(kind, p)
    return G, conjugacy_classes(G)


@pytest.fixture
def sl2():
    return lambda p: group_and_classes("SL2", p)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(k.rstrip("abcdefgh")), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
