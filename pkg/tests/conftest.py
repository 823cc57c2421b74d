import os
from pathlib import Path

import pytest

from lzeta.characters import parse_character


@pytest.fixture(scope="session")
def chi3():
    return parse_character("3.1")


@pytest.fixture(scope="session")
def chi4():
    return parse_character("4.1")


@pytest.fixture(scope="session")
def cache_root() -> Path:
    """Persistent cache for zeros and L-values (honours LZETA_CACHE)."""
    d = Path(os.environ.get("LZETA_CACHE", Path.home() / ".cache" / "lzeta"))
    d.mkdir(parents=True, exist_ok=True)
    return d


#: "PASS/FAIL criterion N: ..." lines collected by the acceptance suite
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
