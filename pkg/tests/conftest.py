from pathlib import Path

import pytest

from flagtuner.evaluator import load_synthetic_model
from flagtuner.flagspace import load_flag_space

DEMO_DIR = Path(__file__).resolve().parent.parent / "demo"


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        print(f"\n{name}: {'PASS' if report.passed else 'FAIL'}")


@pytest.fixture(scope="session")
def demo_dir() -> Path:
    return DEMO_DIR


@pytest.fixture(scope="session")
def pair_space():
    return load_flag_space(DEMO_DIR / "pair_space.json")


@pytest.fixture(scope="session")
def pair_model():
    return load_synthetic_model(DEMO_DIR / "pair_model.json")


@pytest.fixture(scope="session")
def tradeoff_space():
    return load_flag_space(DEMO_DIR / "tradeoff_space.json")


@pytest.fixture(scope="session")
def tradeoff_model():
    return load_synthetic_model(DEMO_DIR / "tradeoff_model.json")
