from __future__ import annotations

import shutil
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture()
def workdir_fixtures(tmp_path: Path) -> Path:
    """A throwaway copy of the fixture tree, safe to save/overwrite into."""
    target = tmp_path / "fixtures"
    shutil.copytree(FIXTURES, target)
    return target


def load_fixture_map(name: str):
    from mindforge.mindmap import load_mindmap

    return load_mindmap(str(FIXTURES / "mindmaps" / f"{name}.mm"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for status, label in (("passed", "PASS"), ("failed", "FAIL"), ("error", "ERROR")):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" in nodeid and getattr(report, "when", "call") == "call":
                lines.append((nodeid.split("::")[-1], label))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, label in sorted(lines):
            terminalreporter.write_line(f"{label:5s} {name}")
