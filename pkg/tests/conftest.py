from __future__ import annotations

import sys
from pathlib import Path

import pytest

# Make the sibling cases module importable regardless of invocation directory.
sys.path.insert(0, str(Path(__file__).parent))


def pytest_configure(config):
    config._criterion_lines = []


@pytest.fixture(scope="session")
def criterion_log(pytestconfig):
    """Collector for one PASS/FAIL line per acceptance criterion."""
    return pytestconfig._criterion_lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_criterion_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
