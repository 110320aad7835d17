from pathlib import Path

import pytest

from packedmm import MatrixNat

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def paper_pair():
    return MatrixNat.from_rows([[1, 2], [3, 4]]), MatrixNat.from_rows([[5, 6], [7, 8]])


@pytest.fixture
def fixture_path():
    return lambda name: str(FIXTURES / name)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
