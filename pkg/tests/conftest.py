from __future__ import annotations

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from eozip.algebra.field import FiniteField, field_create  # noqa: E402


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "slow: exhaustive runs over the larger groups")


@pytest.fixture(scope="session")
def f2() -> FiniteField:
    return field_create(2)


@pytest.fixture(scope="session")
def f3() -> FiniteField:
    return field_create(3)


@pytest.fixture(scope="session")
def f4() -> FiniteField:
    return field_create(2, 2)


@pytest.fixture(scope="session")
def f9() -> FiniteField:
    return field_create(3, 2)
