import math
import random

import pytest

from qlienard import build_model, expr
from qlienard.model import (LienardModel, ModelError, OutsideDomainError, energy,
                            jacobi_last_multiplier, lagrangian, ode_rhs, potential, to_isotonic)


def test_build_model_accepts_valid_profiles():
    m = build_model("x", 1.0, 0.0, (-8.0, 8.0))
    assert m.k == 1.0
    assert (m.xi_min, m.xi_max) == (-8.0, 8.0)
    m2 = build_model("x + x^3/3", 1.0, 0.0, (-4.0, 4.0))
    assert m2.hp_fn(2.0) == 5.0
    m3 = build_model("x", 1.0, -2.0, (0.1, 8.0))
    assert m3.k == 3.0


def test_build_model_rejections():
    with pytest.raises(ModelError):
        build_model("x", 1.0, 0.5, (0.1, 8.0))  # k imaginary
    with pytest.raises(ModelError):
        build_model("x", 1.0, 0.25, (0.1, 8.0))  # boundary value also rejected
    with pytest.raises(ModelError):
        build_model("0 - x", 1.0, 0.0, (-1.0, 1.0))  # decreasing
    with pytest.raises(ModelError):
        build_model("x^3", 1.0, 0.0, (-1.0, 1.0))  # h' = 0 at the origin
    with pytest.raises(ModelError):
        build_model("x", 1.0, -2.0, (-1.0, 8.0))  # h <= 0 with A != 0
    with pytest.raises(ModelError):
        build_model("x", 0.0, 0.0, (-1.0, 1.0))  # omega
    with pytest.raises(ModelError):
        build_model("x", 1.0, 0.0, (2.0, 2.0))  # degenerate domain
    with pytest.raises(expr.ParseError):
        build_model("x +* 3", 1.0, 0.0, (-1.0, 1.0))


def test_ode_rhs_values(m_harm):
    assert ode_rhs(m_harm, 0.3, 7.0) == pytest.approx(-0.3, abs=1e-15)
    m_iso = build_model("x", 1.0, -2.0, (0.05, 9.0))
    # -omega^2 h/h' - A/(h' h^3) = -1 + 2 at x = 1
    assert ode_rhs(m_iso, 1.0, 0.0) == pytest.approx(1.0, abs=1e-14)
    m_sinh = build_model("sinh(x)", 1.0, 0.0, (-5.0, 5.0))
    assert ode_rhs(m_sinh, 0.0, 5.0) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(OutsideDomainError):
        ode_rhs(m_harm, 99.0, 0.0)


def test_lagrangian_values(m_harm, m_cubic):
    assert lagrangian(m_harm, 1.0, 0.0) == pytest.approx(-0.5, abs=1e-15)
    m_iso = build_model("x", 1.0, -2.0, (0.05, 9.0))
    # (h')^2 v^2/2 + A/(2h^2) - omega^2 h^2 / 2 = 2 - 1 - 1/2
    assert lagrangian(m_iso, 1.0, 2.0) == pytest.approx(0.5, abs=1e-14)
    # hand substitution: h'(1)^2/2 - h(1)^2/2 = 2 - 8/9
    assert lagrangian(m_cubic, 1.0, 1.0) == pytest.approx(10.0 / 9.0, rel=1e-14)


def test_potential_values(m_harm):
    assert potential(m_harm, 2.0) == pytest.approx(2.0, abs=1e-15)
    m_iso = build_model("x", 1.0, -2.0, (0.05, 9.0))
    assert potential(m_iso, 1.0) == pytest.approx(1.5, abs=1e-15)
    m_exp = build_model("exp(x)", 1.0, -2.0, (-9.0, 2.5))
    assert potential(m_exp, 0.0) == pytest.approx(1.5, abs=1e-14)


def test_energy_values(m_harm):
    assert energy(m_harm, 1.0, 0.0) == pytest.approx(0.5, abs=1e-15)
    m_iso = build_model("x", 1.0, -2.0, (0.05, 9.0))
    assert energy(m_iso, 1.0, 0.0) == pytest.approx(1.5, abs=1e-15)


def test_jacobi_last_multiplier(m_harm, m_cubic):
    for x in (-3.0, 0.2, 5.0):
        assert jacobi_last_multiplier(m_harm, x) == 1.0
    assert jacobi_last_multiplier(m_cubic, 1.0) == pytest.approx(4.0, rel=1e-15)


def test_to_isotonic(m_harm, m_cubic):
    assert to_isotonic(m_harm, 0.7) == 0.7
    m_exp = build_model("exp(x)", 1.0, -2.0, (-9.0, 2.5))
    assert to_isotonic(m_exp, 0.0) == 1.0
    assert to_isotonic(m_cubic, 1.0) == pytest.approx(4.0 / 3.0, rel=1e-15)


def test_inverse_h(m_cubic):
    for xi in (-20.0, -1.0, 0.0, 0.37, 4.0 / 3.0, 19.0):
        x = m_cubic.inverse_h(xi)
        assert m_cubic.h_fn(x) == pytest.approx(xi, abs=1e-10)
    with pytest.raises(OutsideDomainError):
        m_cubic.inverse_h(1e6)


def _euler_lagrange_residual(m: LienardModel, x: float, v: float) -> tuple[float, float]:
    """d/dt(dL/dv) - dL/dx with x'' = ode_rhs, via exact derivatives."""
    hp, hpp = m.hp_fn(x), m.hpp_fn(x)
    a = ode_rhs(m, x, v)
    ddt_dldv = 2.0 * hp * hpp * v * v + hp * hp * a
    dldx = hp * hpp * v * v - m.vp_fn(x)
    return ddt_dldv - dldx, dldx


@pytest.mark.parametrize("spec", [
    ("x + x^3/3", 1.0, 0.0, (-4.0, 4.0)),
    ("sinh(x)", 2.0, 0.0, (-5.0, 5.0)),
    ("x", 1.0, -2.0, (0.2, 8.0)),
    ("exp(x)", 0.5, -2.0, (-2.0, 2.5)),
])
def test_euler_lagrange_consistency(spec):
    m = build_model(*spec)
    rng = random.Random(0x5EED)
    for _ in range(100):
        x = rng.uniform(m.xmin + 0.02 * (m.xmax - m.xmin), m.xmax - 0.02 * (m.xmax - m.xmin))
        v = rng.uniform(-2.0, 2.0)
        residual, dldx = _euler_lagrange_residual(m, x, v)
        assert abs(residual) <= 1e-9 * (1.0 + abs(dldx))


@pytest.mark.parametrize("spec", [
    ("x + x^3/3", 1.0, 0.0, (-4.0, 4.0)),
    ("x", 1.0, -2.0, (0.2, 8.0)),
    ("exp(x)", 1.0, -2.0, (-2.0, 2.5)),
])
def test_transformation_identity(spec):
    """xi = h(x) turns the equation into xi'' + omega^2 xi + A/xi^3 = 0."""
    m = build_model(*spec)
    rng = random.Random(77)
    for _ in range(100):
        x = rng.uniform(m.xmin + 0.02 * (m.xmax - m.xmin), m.xmax - 0.02 * (m.xmax - m.xmin))
        v = rng.uniform(-2.0, 2.0)
        a = ode_rhs(m, x, v)
        xi = m.h_fn(x)
        xi_dd = m.hpp_fn(x) * v * v + m.hp_fn(x) * a
        target = xi_dd + m.omega**2 * xi + (m.A / xi**3 if m.A != 0.0 else 0.0)
        assert abs(target) <= 1e-9


def test_validation_records_image_and_scale(m_exp=None):
    m = build_model("exp(x)", 1.0, -2.0, (-9.0, 2.5))
    assert m.xi_min == pytest.approx(math.exp(-9.0), rel=1e-14)
    assert m.xi_max == pytest.approx(math.exp(2.5), rel=1e-14)
    assert m.h_abs_max == pytest.approx(math.exp(2.5), rel=1e-14)
