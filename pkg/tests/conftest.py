from __future__ import annotations

import pytest
from hypothesis import strategies as st

from minmax_consensus import Digraph, Schedule

ACCEPTANCE_LINES: list[str] = []


@st.composite
def digraphs(draw, min_n: int = 1, max_n: int = 6, n: int | None = None) -> Digraph:
    n = draw(st.integers(min_n, max_n)) if n is None else n
    bits = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
    return Digraph(n, [(i // n, i % n) for i, b in enumerate(bits) if b])


@st.composite
def schedules(draw, max_n: int = 5, max_prefix: int = 3, max_cycle: int = 4) -> Schedule:
    n = draw(st.integers(1, max_n))
    prefix = draw(st.lists(digraphs(n=n), max_size=max_prefix))
    cycle = draw(st.lists(digraphs(n=n), min_size=1, max_size=max_cycle))
    return Schedule(prefix, cycle)


@pytest.fixture
def record_acceptance():
    return ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(set(ACCEPTANCE_LINES), key=lambda s: int(s.split("criterion")[1].split()[0])):
            terminalreporter.write_line(line)
