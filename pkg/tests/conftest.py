from __future__ import annotations

import json
from pathlib import Path

import pytest

from lyricmetrics import pronouncing
from lyricmetrics.corpus import song_from_dict

FIXTURES = Path(__file__).parent / "fixtures"
SAMPLE_CORPUS = Path(__file__).parent.parent / "src" / "lyricmetrics" / "data" / "sample_corpus.json"
SUBSET_DICT = FIXTURES / "cmudict_subset.dict"


@pytest.fixture(scope="session")
def cmu():
    return pronouncing.PronouncingDictionary.from_file(SUBSET_DICT)


@pytest.fixture(autouse=True)
def _subset_dictionary(cmu):
    """All tests run against the pinned dictionary subset."""
    pronouncing.set_default(cmu)
    yield
    pronouncing.set_default(cmu)


@pytest.fixture
def excerpt_song():
    return song_from_dict(json.loads((FIXTURES / "excerpt.json").read_text(encoding="utf-8")))


@pytest.fixture
def sample_corpus_path():
    return SAMPLE_CORPUS


# -- acceptance reporting ------------------------------------------------------

_acceptance_lines: list[str] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    failed_setup = report.when == "setup" and not report.passed
    if report.when == "call" or failed_setup:
        number, title = marker.args
        status = "PASS" if report.passed else "FAIL"
        _acceptance_lines.append(f"criterion {number:>2}: {status}  {title}")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
