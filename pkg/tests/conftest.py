import itertools

import pytest

from xintersect.core import SizeVector


def brute_points(p):
    """Independent enumeration of S_p (itertools, not the rank machinery)."""
    return list(itertools.product(*[range(1, v + 1) for v in p]))


def brute_agree(x, y):
    return sum(a == b for a, b in zip(x, y))


@pytest.fixture
def cube3():
    return SizeVector((2, 2, 2))


_CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test body calls it with (number, ok, detail)."""

    def record(number: int, ok: bool, detail: str) -> None:
        _CRITERIA[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(_CRITERIA[number])

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])
