import os
import sys
from fractions import Fraction

import pytest
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from patrol.core import Instance, PrioritySet  # noqa: E402

ACCEPTANCE: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)


@st.composite
def priority_sets(draw, max_segments=4, max_den=40, allow_empty=True):
    n = draw(st.integers(0 if allow_empty else 1, max_segments))
    d = draw(st.integers(2, max_den))
    k = min(2 * n, d + 1)
    pts = sorted(draw(st.lists(st.integers(0, d), min_size=k, max_size=k, unique=True)))
    pairs = [(Fraction(pts[i], d), Fraction(pts[i + 1], d)) for i in range(0, len(pts) - 1, 2)]
    # occasionally turn a segment into a single protected point
    if pairs and draw(st.booleans()) and draw(st.booleans()):
        a, _ = pairs[0]
        pairs[0] = (a, a)
    return PrioritySet.from_pairs(pairs)


@st.composite
def instances(draw, robots=st.integers(1, 4), **kw):
    return Instance(draw(priority_sets(**kw)), draw(robots))


@pytest.fixture
def inst_builder():
    return Instance.build
