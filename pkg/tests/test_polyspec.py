import math

import numpy as np
import pytest

from qlienard.polyspec import (QuadratureError, QuasiPolynomial, assoc_laguerre,
                               assoc_laguerre_coeffs, gamma_fn, hermite, hermite_coeffs,
                               quasi_inner)


def _hermite_oracle(n, x):
    """Independent recurrence evaluation used to freeze expected values."""
    vals = [1.0, 2.0 * x]
    for k in range(1, n):
        vals.append(2.0 * x * vals[-1] - 2.0 * k * vals[-2])
    return vals[n]


def test_hermite_values():
    assert hermite(0, 3.7) == 1.0
    assert hermite(1, 0.5) == 1.0
    assert hermite(3, 2.0) == 40.0  # 8*8 - 12*2, matches the oracle
    assert _hermite_oracle(3, 2.0) == 40.0
    for n in (2, 5, 9):
        for x in (-1.3, 0.0, 2.4):
            assert hermite(n, x) == pytest.approx(_hermite_oracle(n, x), rel=1e-13)


def test_hermite_recurrence_identity():
    xs = np.linspace(-5.0, 5.0, 41)
    for n in range(1, 30):
        lhs = hermite(n + 1, xs)
        rhs = 2.0 * xs * hermite(n, xs) - 2.0 * n * hermite(n - 1, xs)
        scale = np.maximum(np.abs(lhs), 1.0)
        assert np.max(np.abs(lhs - rhs) / scale) <= 1e-12


def test_hermite_coeffs_match_values():
    for n in (0, 1, 4, 8):
        c = hermite_coeffs(n)
        for x in (-0.7, 1.1):
            assert np.polynomial.polynomial.polyval(x, c) == pytest.approx(
                hermite(n, x), rel=1e-12)


def test_assoc_laguerre_values():
    assert assoc_laguerre(0, 0.5, 9.0) == 1.0
    assert assoc_laguerre(1, 0.5, 1.0) == 0.5
    # L2^(1/2)(1) = (a+1)(a+2)/2 - (a+2) + 1/2 with a = 1/2
    assert assoc_laguerre(2, 0.5, 1.0) == pytest.approx(-0.125, abs=1e-15)


def test_assoc_laguerre_coeffs_match_values():
    for n, alpha in ((1, 0.5), (3, 1.5), (6, 3.0)):
        c = assoc_laguerre_coeffs(n, alpha)
        for x in (0.3, 2.7):
            assert np.polynomial.polynomial.polyval(x, c) == pytest.approx(
                assoc_laguerre(n, alpha, x), rel=1e-12)


def test_gamma_values():
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma_fn(5.0) == pytest.approx(24.0, rel=1e-14)
    assert gamma_fn(2.5) == pytest.approx(1.5 * 0.5 * math.sqrt(math.pi), rel=1e-14)
    with pytest.raises(ValueError):
        gamma_fn(0.0)
    with pytest.raises(ValueError):
        gamma_fn(-1.3)


def test_gamma_functional_equation():
    x = 0.07
    while x <= 40.0:
        assert gamma_fn(x + 1.0) == pytest.approx(x * gamma_fn(x), rel=1e-12)
        x += 0.61


def test_gaussian_integral():
    g = QuasiPolynomial(1.0, 0.0, [1.0])
    assert quasi_inner(g, g, -math.inf, math.inf) == pytest.approx(
        math.sqrt(math.pi), rel=1e-10)


def test_odd_integrand_vanishes():
    g = QuasiPolynomial(1.0, 0.0, [1.0])
    xg = QuasiPolynomial(1.0, 0.0, [0.0, 1.0])
    assert abs(quasi_inner(g, xg, -math.inf, math.inf)) <= 1e-11


def test_half_line_fractional_power():
    # int_0^inf xi^(3/2) e^(-xi^2/2) dxi = 2^(1/4) Gamma(5/4)  (u = xi^2/2)
    f = QuasiPolynomial(0.5, 0.75, [1.0])
    expected = 2.0**0.25 * math.gamma(1.25)
    assert quasi_inner(f, f, 0.0, math.inf) == pytest.approx(expected, rel=1e-10)


def test_hermite_orthogonality():
    # weight e^{-x^2} = two omega = 1 Gaussian halves
    states = [QuasiPolynomial(1.0, 0.0, hermite_coeffs(n)) for n in range(11)]
    for mdx in range(11):
        for ndx in range(mdx, 11):
            val = quasi_inner(states[mdx], states[ndx], -math.inf, math.inf)
            if mdx == ndx:
                expected = 2.0**ndx * math.factorial(ndx) * math.sqrt(math.pi)
                assert val == pytest.approx(expected, rel=1e-8)
            else:
                norm = math.sqrt(2.0**(mdx + ndx) * math.factorial(mdx) * math.factorial(ndx)) * math.sqrt(math.pi)
                assert abs(val) <= 1e-8 * norm


@pytest.mark.parametrize("alpha", [0.5, 1.5, 3.0])
def test_laguerre_orthogonality(alpha):
    # int_0^inf L_m^a L_n^a x^a e^-x dx via x = xi^2: quasi-polynomials in xi
    def state(n):
        lc = assoc_laguerre_coeffs(n, alpha)
        coeffs = np.zeros(2 * len(lc) - 1)
        coeffs[::2] = lc
        return QuasiPolynomial(1.0, alpha + 0.5, coeffs)

    states = [state(n) for n in range(9)]
    for mdx in range(9):
        for ndx in range(mdx, 9):
            val = 2.0 * quasi_inner(states[mdx], states[ndx], 0.0, math.inf)
            if mdx == ndx:
                expected = math.gamma(ndx + alpha + 1.0) / math.factorial(ndx)
                assert val == pytest.approx(expected, rel=1e-8)
            else:
                norm = math.sqrt(math.gamma(mdx + alpha + 1.0) / math.factorial(mdx)
                                 * math.gamma(ndx + alpha + 1.0) / math.factorial(ndx))
                assert abs(val) <= 1e-8 * norm


def test_quasi_polynomial_derivative_matches_finite_differences():
    cases = [
        QuasiPolynomial(1.0, 0.0, [1.0, -0.3, 0.7]),
        QuasiPolynomial(0.8, 2.5, [0.4, 0.0, 1.1]),
    ]
    step = 1e-6
    for qp in cases:
        d = qp.derivative()
        for xi in (0.5, 1.2, 2.8):
            fd = (qp(xi + step) - qp(xi - step)) / (2.0 * step)
            assert d(xi) == pytest.approx(fd, rel=1e-7)


def test_quasi_polynomial_closure_and_sign():
    qp = QuasiPolynomial(1.0, 1.5, [2.0, 0.0, -3.0])
    d = qp.derivative()
    assert d.s == 0.5
    assert qp.times_poly([0.0, 1.0]).degree == qp.degree + 1
    flipped = qp.sign_fixed()
    assert flipped.coeffs[-1] > 0.0
    assert QuasiPolynomial(1.0, 0.0, [1.0]).sign_fixed().coeffs[-1] == 1.0


def test_non_integrable_singularity_rejected():
    f = QuasiPolynomial(1.0, -0.6, [1.0])
    with pytest.raises(QuadratureError):
        quasi_inner(f, f, 0.0, math.inf)


def test_evaluation_domain():
    qp = QuasiPolynomial(1.0, 0.5, [1.0])
    with pytest.raises(ValueError):
        qp(-1.0)
    full = QuasiPolynomial(1.0, 0.0, [1.0])
    assert full(-1.0) == pytest.approx(math.exp(-0.5), rel=1e-15)
