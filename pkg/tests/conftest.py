import pytest

from vdw_resonance import GasParameters, compute_coefficients


@pytest.fixture(scope="session")
def air():
    """Coefficients for delta=0.4, b=0."""
    return compute_coefficients(GasParameters(0.4, 0.0))


@pytest.fixture(scope="session")
def dense():
    return compute_coefficients(GasParameters(0.4, 0.04))
