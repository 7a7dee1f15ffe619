import math

import numpy as np
import pytest

from qlienard import build_model, energy, estimate_period, hidden_linearity_residual, integrate_orbit
from qlienard.classical import (DegenerateFitError, IntegrationError, SectionError,
                                trajectory_csv_rows)

TWO_PI = 2.0 * math.pi


def analytic_u(m, x0, v0, t):
    """Closed-form u(t) = h(x(t))^2/2 from u'' + 4 w^2 u = 2E.

    Independent oracle: u is a 2*omega harmonic around E/(2 w^2) for every
    member of the family, so x(t) = h^{-1}(sqrt(2 u(t))) when h > 0.
    """
    w = m.omega
    e0 = energy(m, x0, v0)
    xi0 = m.h_fn(x0)
    u0 = 0.5 * xi0 * xi0
    du0 = xi0 * m.hp_fn(x0) * v0
    c0 = 0.5 * e0 / (w * w)
    c1 = u0 - c0
    c2 = du0 / (2.0 * w)
    return c0 + c1 * np.cos(2.0 * w * t) + c2 * np.sin(2.0 * w * t)


def test_harmonic_orbit_returns(m_harm):
    tr = integrate_orbit(m_harm, 1.0, 0.0, TWO_PI)
    assert abs(tr.x[-1] - 1.0) <= 1e-8
    assert abs(tr.v[-1]) <= 1e-8


def test_isotonic_orbit_confined_and_matches_oracle(m_iso):
    tr = integrate_orbit(m_iso, 1.0, 0.0, 3.0 * TWO_PI)
    assert np.all(tr.x > 0.0)
    # turning points of the xi = x motion: V(xi) = E gives xi in [1, sqrt(2)]
    assert tr.x.min() == pytest.approx(1.0, abs=1e-9)
    assert tr.x.max() == pytest.approx(math.sqrt(2.0), abs=1e-9)
    u_ref = analytic_u(m_iso, 1.0, 0.0, tr.t)
    x_ref = np.sqrt(2.0 * u_ref)
    assert np.max(np.abs(tr.x - x_ref)) <= 1e-9


def test_cubic_profile_image_is_sinusoidal(m_cubic):
    tr = integrate_orbit(m_cubic, 1.0, 0.0, 3.0 * TWO_PI)
    xi = np.asarray(m_cubic.h_arr(tr.x))
    ref = (4.0 / 3.0) * np.cos(tr.t)
    assert np.max(np.abs(xi - ref)) <= 1e-8


def test_estimate_period_values(m_harm, m_iso, m_cubic):
    tr = integrate_orbit(m_harm, 1.0, 0.0, 4.0 * TWO_PI)
    assert estimate_period(tr) == pytest.approx(TWO_PI, rel=1e-9)
    for xi0 in (1.0, 1.3, 2.0):
        x0 = m_iso.inverse_h(xi0)
        tr = integrate_orbit(m_iso, x0, 0.0, 4.0 * TWO_PI)
        assert estimate_period(tr) == pytest.approx(math.pi, rel=1e-6)
    m2 = build_model("x + x^3/3", 2.0, 0.0, (-4.0, 4.0))
    tr = integrate_orbit(m2, 1.0, 0.0, 4.0 * TWO_PI / 2.0)
    assert estimate_period(tr) == pytest.approx(math.pi, rel=1e-6)


def test_estimate_period_transversal_section(m_harm):
    # nonzero initial velocity exercises the x = x0 section
    tr = integrate_orbit(m_harm, 1.0, 0.7, 4.5 * TWO_PI)
    assert estimate_period(tr) == pytest.approx(TWO_PI, rel=1e-8)


def test_estimate_period_needs_three_returns(m_harm):
    tr = integrate_orbit(m_harm, 1.0, 0.0, 0.6 * TWO_PI)
    with pytest.raises(SectionError):
        estimate_period(tr)


def test_rk4_is_fourth_order(m_harm):
    t_end = 5.0
    errs = []
    for dt in (0.01, 0.005):
        tr = integrate_orbit(m_harm, 1.0, 0.0, t_end, dt=dt)
        errs.append(abs(tr.x[-1] - math.cos(t_end)))
    ratio = errs[0] / errs[1]
    assert 12.0 <= ratio <= 20.0


def test_energy_drift_over_fifty_periods(m_cubic, m_exp):
    for m, xi0 in ((m_cubic, 1.0), (m_exp, 1.5)):
        x0 = m.inverse_h(xi0)
        tr = integrate_orbit(m, x0, 0.0, 50.0 * TWO_PI / m.omega)
        assert tr.energy_drift() <= 1e-8


def test_hidden_linearity_residuals(m_harm, m_iso, m_cubic):
    tr = integrate_orbit(m_harm, 1.0, 0.0, 3.0 * TWO_PI)
    assert hidden_linearity_residual(m_harm, tr) <= 1e-7  # u = (1+cos 2t)/4 exactly
    tr = integrate_orbit(m_iso, 1.0, 0.0, 3.0 * TWO_PI)
    assert hidden_linearity_residual(m_iso, tr) <= 1e-6
    tr = integrate_orbit(m_cubic, 1.0, 0.0, 3.0 * TWO_PI)
    assert hidden_linearity_residual(m_cubic, tr) <= 1e-6


def test_hidden_linearity_degenerate_fit(m_iso):
    # equilibrium of the isotonic potential: xi = (-A)^(1/4), no oscillation
    x0 = m_iso.inverse_h((-m_iso.A) ** 0.25)
    tr = integrate_orbit(m_iso, x0, 0.0, 2.5 * TWO_PI)
    with pytest.raises(DegenerateFitError):
        hidden_linearity_residual(m_iso, tr)


def test_domain_exit_aborts_cleanly():
    m = build_model("x", 1.0, 0.0, (-1.5, 1.5))
    with pytest.raises(IntegrationError) as err:
        integrate_orbit(m, 1.4, 1.0, TWO_PI)
    assert err.value.time > 0.0


def test_singularity_guard_aborts():
    # nearly vanishing coupling: the orbit dives below the h ~ 0 guard
    m = build_model("x", 1.0, -1e-12, (1e-8, 20.0))
    with pytest.raises(IntegrationError):
        integrate_orbit(m, 1.0, 0.0, TWO_PI)


def test_trajectory_csv_rows(m_cubic):
    tr = integrate_orbit(m_cubic, 1.0, 0.0, 0.1, dt=0.01)
    rows = trajectory_csv_rows(tr)
    assert rows[0] == "t,x,v,energy,u"
    assert len(rows) == len(tr.t) + 1
    first = rows[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == 1.0
    # 17 significant digits round-trip the doubles exactly
    last = rows[-1].split(",")
    assert float(last[1]) == tr.x[-1]
    assert float(last[4]) == 0.5 * m_cubic.h_fn(tr.x[-1]) ** 2
