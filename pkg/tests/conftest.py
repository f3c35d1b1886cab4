import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from reference_example import TEXT  # noqa: E402

_CRITERIA = {}


@pytest.fixture
def bottles() -> bytes:
    return TEXT


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(n, ok, detail)``."""
    def record(num: int, ok: bool, detail: str) -> bool:
        line = f"CRITERION {num}: {'PASS' if ok else 'FAIL'} - {detail}"
        _CRITERIA[num] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for num in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[num])
