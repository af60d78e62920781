import pytest

from dlvpy.corpus import PROGRAMS, program
from dlvpy.core import format_key


def as_strings(models):
    """Answer sets (iterables of literal keys) as a set of printed frozensets."""
    return {frozenset(format_key(k) for k in m) for m in models}


def fam(*sets):
    return {frozenset(s) for s in sets}


@pytest.fixture
def textbook():
    return {name: program(name) for name in PROGRAMS}


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def record(request):
    """Log one PASS/FAIL line for an acceptance criterion, then assert it."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def _record(number, ok, detail, seconds=None, limit=None):
        timed = ok and (limit is None or seconds <= limit)
        took = "" if seconds is None else f" [{seconds:.2f}s" + (f" / {limit}s]" if limit else "]")
        line = f"criterion {number:>2}: {'PASS' if timed else 'FAIL'}  {detail}{took}"
        lines.append(line)
        print(line)
        assert ok, line
        if limit is not None:
            assert seconds <= limit, line
    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
