from __future__ import annotations

import pytest
from hypothesis import settings

from gsemicircle.corpus import corpus
from gsemicircle.graphs import all_labeled_graphs

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def corpus_graphs():
    return [ng.graph for ng in corpus()]


@pytest.fixture(scope="session")
def small_graphs():
    """Every labeled graph on 1..4 vertices."""
    return [G for n in range(1, 5) for G in all_labeled_graphs(n)]


# one line per acceptance criterion, shown in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
