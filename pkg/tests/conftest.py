from pathlib import Path

import pytest

from buchi_effects import lattice
from buchi_effects.automaton import parse_automaton
from buchi_effects.lang import parse_program
from buchi_effects.lattice import BuchiDomain

import verdicts

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


@pytest.fixture(autouse=True)
def _closedness_checks(monkeypatch):
    monkeypatch.setattr(lattice, "DEBUG_CHECKS", True)


@pytest.fixture(scope="session")
def programs_dir() -> Path:
    return PROGRAMS


def load_aut(name: str):
    return parse_automaton((PROGRAMS / name).read_text())


def load_program(name: str):
    return parse_program((PROGRAMS / name).read_text())


@pytest.fixture(scope="session")
def a1() -> BuchiDomain:
    return BuchiDomain(load_aut("ex1.aut"))


@pytest.fixture(scope="session")
def a2() -> BuchiDomain:
    return BuchiDomain(load_aut("ex2.aut"))


def pytest_terminal_summary(terminalreporter):
    if verdicts.LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(verdicts.LINES):
            terminalreporter.write_line(verdicts.LINES[key])
