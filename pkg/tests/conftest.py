import pytest

from sldcodes.code import Code
from sldcodes.verifier import max_size_search


@pytest.fixture
def id3():
    return Code.identity(3)


@pytest.fixture(scope="session")
def found_codes():
    """Search results keyed by (n, s, L, mode); computed once per session."""
    cache = {}

    def get(n, s, L, mode="sld"):
        key = (n, s, L, mode)
        if key not in cache:
            cache[key] = max_size_search(n, s, L, mode)
        return cache[key]

    return get


_CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; call as ``criterion(k, name, ok, detail)``."""

    def record(k, name, ok, detail=""):
        line = f"criterion {k:>2} {'PASS' if ok else 'FAIL'}: {name}" + (f" ({detail})" if detail else "")
        _CRITERIA[k] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])
