import os
from pathlib import Path

import pytest

from alonzo.corpus import load_corpus

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def ws():
    """The bundled corpus, loaded and certified once per run."""
    return load_corpus()


@pytest.fixture(scope="session")
def data():
    return DATA


@pytest.fixture
def pure(monkeypatch):
    monkeypatch.setenv("ALONZO_PURE", "1")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import REPORT
    if not REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(REPORT):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
