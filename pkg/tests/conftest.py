import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def spaces():
    """Full state spaces reused across modules, built lazily."""
    from cvflab import CommGraph, ColoringProgram, MatchingProgram, TokenRingProgram, enumerate_space

    cache = {}
    builders = {
        "tr3": lambda: TokenRingProgram(3),
        "tr4": lambda: TokenRingProgram(4),
        "tr5": lambda: TokenRingProgram(5),
        "col3": lambda: ColoringProgram(CommGraph.ring(3)),
        "col4": lambda: ColoringProgram(CommGraph.ring(4)),
        "col2": lambda: ColoringProgram(CommGraph.path(2)),
        "match2": lambda: MatchingProgram(CommGraph.path(2)),
        "match4": lambda: MatchingProgram(CommGraph.ring(4)),
    }

    def get(name):
        if name not in cache:
            cache[name] = enumerate_space(builders[name]())
        return cache[name]

    return get


_CRITERIA: list[str] = []


@pytest.fixture
def criterion(capsys):
    """``criterion(cid, ok, detail)`` prints one PASS/FAIL line, records it, then asserts."""

    def record(cid: str, ok: bool, detail: str):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {cid}: {detail}"
        _CRITERIA.append(line)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
