import json
from pathlib import Path

import pytest

from detsing.cli import data_path
from detsing.formats import parse_presentation_file
from detsing.polycore import VarSet, parse_poly

CRITERIA = []

ORACLE = json.loads((Path(__file__).parent / "oracle" / "frozen.json").read_text())


def P(text, names):
    """Parse with sympy-style ``**`` allowed."""
    return parse_poly(text.replace("**", "^"), VarSet(names) if not isinstance(names, VarSet) else names)


@pytest.fixture
def oracle():
    return ORACLE


@pytest.fixture
def ex41():
    return parse_presentation_file(data_path("ex41.dsp"))


@pytest.fixture
def ex42():
    return parse_presentation_file(data_path("ex42.dsp"))


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
