from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

import hurwitzkit

DATA = Path(hurwitzkit.__file__).parent / "data"

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def psp62_type():
    from hurwitzkit.nielsen import read_type_file
    return read_type_file(DATA / "psp62_deg28.type")


@pytest.fixture(scope="session")
def psp62_nielsen(psp62_type):
    from hurwitzkit.nielsen import enumerate_straight_nielsen
    return enumerate_straight_nielsen(psp62_type)


@pytest.fixture(scope="session")
def wreath_xy():
    from hurwitzkit.permgroup import read_group_file
    return read_group_file(DATA / "psp62_wreath56.grp").generators


def family_polys(name: str, alpha=None):
    from hurwitzkit.exactpoly.family import read_family
    fam = read_family(DATA / name)
    return fam.instantiate(None if alpha is None else Fraction(alpha))


@pytest.fixture(scope="session")
def deg27_polys():
    return family_polys("psp43_2_deg27.fam")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
