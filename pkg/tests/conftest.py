import pytest

from qlienard import build_model


@pytest.fixture(scope="session")
def m_cubic():
    """Harmonic-image test model: h = x + x^3/3, omega = 1, A = 0."""
    return build_model("x + x^3/3", 1.0, 0.0, (-4.0, 4.0))


@pytest.fixture(scope="session")
def m_exp():
    """Isotonic-image test model: h = e^x, omega = 1, A = -2 (k = 3)."""
    return build_model("exp(x)", 1.0, -2.0, (-9.0, 2.5))


@pytest.fixture(scope="session")
def m_harm():
    """The trivial profile h = x (pure harmonic oscillator)."""
    return build_model("x", 1.0, 0.0, (-12.0, 12.0))


@pytest.fixture(scope="session")
def m_iso():
    """h = x with the inverse-square coupling (pure isotonic oscillator)."""
    return build_model("x", 1.0, -2.0, (0.05, 9.0))
