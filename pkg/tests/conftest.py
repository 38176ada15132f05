import pytest
from hypothesis import settings

from isocert.elimination import run_certification

settings.register_profile("isocert", max_examples=60, deadline=None)
settings.load_profile("isocert")


@pytest.fixture(scope="session")
def traces():
    """Certified elimination traces for both signs, computed once per session."""
    return {eps: run_certification(eps) for eps in (1, -1)}


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number, title, ok, detail=""):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
