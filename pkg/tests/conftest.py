from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def corpus():
    from grpstab.corpus import default_corpus

    return default_corpus()


@pytest.fixture(scope="session")
def small_corpus(corpus):
    return [G for G in corpus if G.order <= 16]


@pytest.fixture(scope="session")
def corpus_maps(corpus):
    from grpstab.corpus import enumerate_maps

    return enumerate_maps(corpus)


@pytest.fixture
def acceptance_line():
    return _acceptance_lines.append


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
