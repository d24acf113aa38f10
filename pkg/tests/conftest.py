import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pie_lifter.cli import default_corpus  # noqa: E402
from pie_lifter.dsl import corpus_files, load_files  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return Path(default_corpus())


@pytest.fixture(scope="session")
def ws(corpus_dir):
    return load_files(corpus_files(corpus_dir))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
