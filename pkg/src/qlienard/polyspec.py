"""Orthogonal-polynomial recurrences, Gamma, and Gaussian-weighted quadrature.

The central data type is the quasi-polynomial ``p(xi) * xi^s *
exp(-omega xi^2 / 2)``: every bound state of the quantized family has a
spatial part of this shape, and the family is closed under differentiation
and multiplication by polynomials, which is what makes the ladder
construction exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P


class QuadratureError(ValueError):
    """Non-integrable or non-evaluable inner product."""


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x) by the three-term recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    xa = np.asarray(x, dtype=float)
    hk = np.ones_like(xa)
    if n >= 1:
        hkm1, hk = hk, 2.0 * xa
        for k in range(1, n):
            hkm1, hk = hk, 2.0 * xa * hk - 2.0 * k * hkm1
    return float(hk) if hk.ndim == 0 else hk


def assoc_laguerre(n: int, alpha: float, x):
    """Associated Laguerre polynomial L_n^alpha(x) by recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    xa = np.asarray(x, dtype=float)
    lk = np.ones_like(xa)
    if n >= 1:
        lkm1, lk = lk, 1.0 + alpha - xa
        for k in range(1, n):
            lkm1, lk = lk, ((2 * k + 1 + alpha - xa) * lk - (k + alpha) * lkm1) / (k + 1.0)
    return float(lk) if lk.ndim == 0 else lk


def hermite_coeffs(n: int) -> np.ndarray:
    """Coefficients of H_n in ascending powers."""
    if n < 0:
        raise ValueError("n must be >= 0")
    prev = np.array([1.0])
    if n == 0:
        return prev
    cur = np.array([0.0, 2.0])
    for k in range(1, n):
        nxt = np.zeros(k + 2)
        nxt[1:] = 2.0 * cur
        nxt[:k] -= 2.0 * k * prev
        prev, cur = cur, nxt
    return cur


def assoc_laguerre_coeffs(n: int, alpha: float) -> np.ndarray:
    """Coefficients of L_n^alpha in ascending powers."""
    if n < 0:
        raise ValueError("n must be >= 0")
    prev = np.array([1.0])
    if n == 0:
        return prev
    cur = np.array([1.0 + alpha, -1.0])
    for k in range(1, n):
        nxt = np.zeros(k + 2)
        nxt[: k + 1] = (2 * k + 1 + alpha) * cur
        nxt[1:] -= cur
        nxt[:k] -= (k + alpha) * prev
        nxt /= k + 1.0
        prev, cur = cur, nxt
    return cur


def gamma_fn(x: float) -> float:
    """Gamma function on the positive half line."""
    if not (x > 0.0):
        raise ValueError("gamma_fn requires a positive argument")
    return math.gamma(x)


@dataclass
class QuasiPolynomial:
    """p(xi) * xi^s * exp(-omega xi^2 / 2) with real coefficients (ascending)."""

    omega: float
    s: float
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = _trim(np.atleast_1d(np.asarray(self.coeffs, dtype=float)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, xi):
        xa = np.asarray(xi, dtype=float)
        p = P.polyval(xa, self.coeffs)
        gauss = np.exp(-0.5 * self.omega * xa * xa)
        if self.s == 0.0:
            out = p * gauss
        else:
            if np.any(xa <= 0.0):
                raise ValueError("xi^s with s != 0 requires xi > 0")
            out = p * np.exp(self.s * np.log(xa)) * gauss
        return float(out) if out.ndim == 0 else out

    def derivative(self) -> "QuasiPolynomial":
        """d/dxi; lowers s by one (p -> xi p' + s p - omega xi^2 p)."""
        pprime = P.polyder(self.coeffs)
        if self.s == 0.0:
            new = P.polysub(pprime, self.omega * _shift(self.coeffs, 1))
            return QuasiPolynomial(self.omega, 0.0, new)
        new = P.polyadd(_shift(pprime, 1), self.s * self.coeffs)
        new = P.polysub(new, self.omega * _shift(self.coeffs, 2))
        return QuasiPolynomial(self.omega, self.s - 1.0, new)

    def times_poly(self, q) -> "QuasiPolynomial":
        return QuasiPolynomial(self.omega, self.s, P.polymul(np.atleast_1d(q), self.coeffs))

    def scaled(self, c: float) -> "QuasiPolynomial":
        return QuasiPolynomial(self.omega, self.s, c * self.coeffs)

    def sign_fixed(self) -> "QuasiPolynomial":
        """Make the value at the rightmost interior extremum positive.

        Beyond the largest real root of p the function keeps one sign and
        decays to zero, so that extremum has the sign of the leading
        coefficient.
        """
        return self.scaled(-1.0) if self.coeffs[-1] < 0.0 else self

    def gaussian_spread(self) -> float:
        """xi beyond which |self| is far below 1e-18 of its maximum."""
        return math.sqrt(2.0 * (80.0 + 4.0 * (self.degree + abs(self.s) + 2.0)) / self.omega)

    def support(self, rel: float = 1e-16, lo: float = -math.inf,
                hi: float = math.inf) -> tuple[float, float]:
        """Sub-interval of [lo, hi] where |self| exceeds rel * max|self|."""
        spread = self.gaussian_spread()
        hi_eff = min(hi, spread)
        if self.s == 0.0:
            grid = np.linspace(max(lo, -spread), hi_eff, 20001)
        else:
            lo_pos = max(lo, spread * 1e-40)
            grid = np.unique(np.concatenate((
                np.geomspace(lo_pos, hi_eff, 10001),
                np.linspace(lo_pos, hi_eff, 10001),
            )))
        vals = np.abs(self(grid))
        vmax = vals.max()
        if vmax == 0.0:
            raise ValueError("quasi-polynomial is numerically zero on the window")
        keep = np.nonzero(vals > rel * vmax)[0]
        return float(grid[keep[0]]), float(grid[keep[-1]])


def _trim(c: np.ndarray) -> np.ndarray:
    nz = np.nonzero(c)[0]
    return c[: nz[-1] + 1] if len(nz) else np.array([0.0])


def _shift(c: np.ndarray, by: int) -> np.ndarray:
    return np.concatenate((np.zeros(by), c))


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def _panel_integral(f, edges: np.ndarray) -> float:
    """64-node Gauss-Legendre on each panel; pairwise summation over panels."""
    a = edges[:-1]
    half = 0.5 * (edges[1:] - a)
    pts = a[:, None] + half[:, None] * (_GL_NODES[None, :] + 1.0)
    vals = np.asarray(f(pts.ravel())).reshape(pts.shape)
    total = (vals * _GL_WEIGHTS[None, :]).sum(axis=1) * half
    while len(total) > 1:
        if len(total) % 2:
            total = np.concatenate((total, [0.0]))
        total = total[0::2] + total[1::2]
    return float(total[0])


def quasi_inner(F: QuasiPolynomial, G: QuasiPolynomial, lo: float, hi: float,
                rel_tol: float = 1e-11) -> float:
    """integral of F(xi) G(xi) dxi over [lo, hi] (bounds may be infinite).

    Composite 64-node Gauss-Legendre panels, refined by doubling until two
    successive refinements agree to ``rel_tol``; the interval is truncated
    where the integrand drops below 1e-18 of its maximum.
    """
    s = F.s + G.s
    omega = F.omega + G.omega
    prod = QuasiPolynomial(omega, s, P.polymul(F.coeffs, G.coeffs))
    if s != 0.0 and lo < 0.0 and math.isfinite(lo):
        raise QuadratureError("integrand with xi^s factor needs xi >= 0")
    if s <= -1.0 and lo <= 0.0:
        raise QuadratureError(f"non-integrable singularity at xi = 0 (combined exponent {s})")
    lo_eff = max(lo, 0.0) if s != 0.0 else lo
    a, b = prod.support(rel=1e-18, lo=lo_eff, hi=hi)
    if not b > a:
        return 0.0
    npanels = max(8, int(math.ceil((b - a) * math.sqrt(omega) / 0.5)))
    prev = None
    abs_scale = None
    for _ in range(14):
        edges = np.linspace(a, b, npanels + 1)
        val = _panel_integral(prod, edges)
        if abs_scale is None:
            abs_scale = _panel_integral(lambda t: np.abs(prod(t)), edges)
        if prev is not None:
            # cancelling integrals (orthogonal pairs) converge relative to
            # the L1 magnitude, not to their own near-zero value
            denom = max(abs(val), abs_scale, 5e-324)
            if abs(val - prev) <= rel_tol * denom:
                return val
        prev = val
        npanels *= 2
    raise QuadratureError("quadrature failed to converge")


def inner_product(m, F: QuasiPolynomial, G: QuasiPolynomial) -> float:
    """Weighted inner product over the model domain.

    Computed by the substitution xi = h(x): the weight h'(x) dx becomes
    d xi over the image interval, so the integral lives entirely in the
    transformed picture.
    """
    return quasi_inner(F, G, m.xi_min, m.xi_max)
