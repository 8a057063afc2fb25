from pathlib import Path

import pytest

from rhlab.li_coefficients import load_zeros

DATA = Path(__file__).resolve().parent.parent / "data"
ZEROS_FILE = DATA / "zeros_100k.txt"


@pytest.fixture(scope="session")
def zero_table():
    return load_zeros(ZEROS_FILE)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
