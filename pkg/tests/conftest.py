from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings

from gdenom.corpus import APERY_L, apery_a, apery_ahat

settings.register_profile("default", deadline=None)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def apery_L():
    return APERY_L


@pytest.fixture(scope="session")
def apery_seq() -> list[int]:
    return [apery_a(n) for n in range(201)]


@pytest.fixture(scope="session")
def apery_hat_seq() -> list[Fraction]:
    return [apery_ahat(n) for n in range(201)]


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
