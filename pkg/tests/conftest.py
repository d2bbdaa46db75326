import functools

import pytest

from morsematch import build_matching_complex


@functools.lru_cache(maxsize=None)
def complex_of(n):
    return build_matching_complex(n)


@pytest.fixture(scope="session")
def m5():
    return complex_of(5)


@pytest.fixture(scope="session")
def m7():
    return complex_of(7)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py::test_criterion_" in rep.nodeid and rep.when == "call":
                name = rep.nodeid.split("::")[-1]
                num = int(name.split("_")[2])
                lines.append((num, f"criterion {num}: {'PASS' if outcome == 'passed' else 'FAIL'}  {name}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
