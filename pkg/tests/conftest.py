import json
import re
import sys
from pathlib import Path

import pytest

VECTORS = Path(__file__).parent / "vectors"
FIXTURES = Path(__file__).parent / "fixtures"


def read_kv_blocks(path: Path, start_key: str) -> list[dict]:
    """Parse ``KEY = value`` vector files; a new record begins at each ``start_key``."""
    blocks = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith(("#", "[")) or "=" not in line:
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        if key == start_key:
            blocks.append({})
        if blocks:
            blocks[-1][key] = value.strip()
    return blocks


@pytest.fixture(scope="session")
def vectors_dir() -> Path:
    return VECTORS


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def load_json(path: Path):
    return json.loads(path.read_text())


def hexb(s: str) -> bytes:
    return bytes.fromhex(re.sub(r"\s", "", s))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
