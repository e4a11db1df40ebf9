import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from simp2lctrs import corpus_dir, corpus_programs
from simp2lctrs.syntax import parse_program

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.register_profile("thorough", deadline=None, max_examples=2000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GOLDEN = Path(__file__).parent / "golden"


def load(name: str):
    return parse_program((corpus_dir() / f"{name}.simp").read_text(encoding="utf-8"))


@pytest.fixture
def fig2():
    return load("fig2_sum")


@pytest.fixture(params=[p.stem for p in corpus_programs()])
def corpus_program(request):
    return request.param, load(request.param)


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
