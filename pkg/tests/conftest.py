import pytest

from khcob.movie import FIXTURES
from khcob.diagram import OrientedDiagram

ACCEPTANCE_LINES: list[str] = []

DIAGRAMS = ("empty", "unknot", "unlink2", "unlink3", "hopf", "hopf_negative", "trefoil_right",
            "trefoil_left", "figure_eight", "unknot_kinks", "triangles", "8_18")


def load(name: str) -> OrientedDiagram:
    return OrientedDiagram.load(FIXTURES / f"{name}.json")


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
