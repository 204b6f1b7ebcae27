import pytest

from starnambu.catalog import run_suite


@pytest.fixture(scope="session")
def full_report():
    """One full catalog run shared by the acceptance criteria."""
    return run_suite(suite="all", seed=0)
