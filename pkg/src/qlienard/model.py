"""Validated model of the isochronous quadratic-damping oscillator family.

A model bundles a strictly increasing profile ``h(x)``, a frequency
``omega > 0``, an inverse-square coupling ``A < 1/4`` and an open spatial
domain.  The equation of motion is::

    x'' = -(h''/h') x'^2 - omega^2 h/h' - A/(h' h^3)

which the substitution ``xi = h(x)`` maps onto ``xi'' + omega^2 xi +
A/xi^3 = 0`` (a harmonic oscillator when ``A = 0``).  All derived classical
quantities (Lagrangian, potential, energy, Jacobi last multiplier) are
exposed as plain functions of the model.
"""

from __future__ import annotations

import math

import numpy as np

from . import expr
from .expr import Add, Div, Mul, Num, Pow, Sub

VAR_NAME = "x"

# A = 0 spectra are compared on a grid whose image must cover [-XI_COVER,
# XI_COVER] scaled by 1/sqrt(omega): exp(-40) < 1e-17 keeps the Gaussian
# tail below the quadrature floor.
XI_COVER_HALF_SQ = 40.0

_VALIDATION_POINTS = 1001


class ModelError(ValueError):
    """Invalid model parameters or profile."""


class OutsideDomainError(ModelError):
    """A point left the model's spatial domain."""


class LienardModel:
    """Immutable-by-convention bundle of the profile and its derivatives.

    Expression attributes: ``h``, ``hp``, ``hpp``, ``hppp``.  Compiled
    scalar callables carry a ``_fn`` suffix, vectorized numpy callables an
    ``_arr`` suffix.
    """

    def __init__(self, h: expr.Expression, omega: float, A: float, xmin: float, xmax: float):
        self.h = h
        self.hp = expr.differentiate(h, 1)
        self.hpp = expr.differentiate(h, 2)
        self.hppp = expr.differentiate(h, 3)
        self.omega = float(omega)
        self.A = float(A)
        self.xmin = float(xmin)
        self.xmax = float(xmax)
        self.k = math.sqrt(1.0 - 4.0 * self.A)
        self.h_text = expr.to_text(h)

        for name in ("h", "hp", "hpp", "hppp"):
            tree = getattr(self, name)
            setattr(self, name + "_fn", expr.compile_fn(tree, VAR_NAME))
            setattr(self, name + "_arr", expr.compile_fn(tree, VAR_NAME, numpy_backend=True))

        # potential V(x) = (omega^2 h^2 - A/h^2)/2 and its exact gradient
        w2 = Num(self.omega * self.omega)
        v_expr = Mul(Num(0.5), Mul(w2, Pow(self.h, Num(2.0))))
        if self.A != 0.0:
            v_expr = Sub(v_expr, Mul(Num(0.5), Div(Num(self.A), Pow(self.h, Num(2.0)))))
        self.v_expr = expr.simplify(v_expr)
        self.vp_expr = expr.differentiate(self.v_expr, 1)
        self.v_fn = expr.compile_fn(self.v_expr, VAR_NAME)
        self.v_arr = expr.compile_fn(self.v_expr, VAR_NAME, numpy_backend=True)
        self.vp_fn = expr.compile_fn(self.vp_expr, VAR_NAME)

        # ODE right-hand side split as  x'' = -q1(x) v^2 - q2(x)
        q1 = expr.simplify(Div(self.hpp, self.hp))
        q2 = Mul(w2, Div(self.h, self.hp))
        if self.A != 0.0:
            q2 = Add(q2, Div(Num(self.A), Mul(self.hp, Pow(self.h, Num(3.0)))))
        self.q1_expr, self.q2_expr = q1, expr.simplify(q2)
        self.q1p_expr = expr.differentiate(q1, 1)
        self.q2p_expr = expr.differentiate(self.q2_expr, 1)
        self.q1_fn = expr.compile_fn(self.q1_expr, VAR_NAME)
        self.q2_fn = expr.compile_fn(self.q2_expr, VAR_NAME)
        self.q1p_fn = expr.compile_fn(self.q1p_expr, VAR_NAME)
        self.q2p_fn = expr.compile_fn(self.q2p_expr, VAR_NAME)
        rhs_src = f"-({expr.to_source(self.q1_expr)})*v*v - ({expr.to_source(self.q2_expr)})"
        ns = {name: getattr(math, name) for name in expr.FUNCTION_NAMES}
        ns["__builtins__"] = {}
        self.rhs_fn = eval(f"lambda {VAR_NAME}, v: {rhs_src}", ns)  # noqa: S307 - own AST only

        self._validate()

    def _validate(self) -> None:
        grid = np.linspace(self.xmin, self.xmax, _VALIDATION_POINTS)
        try:
            hvals = np.asarray(self.h_arr(grid), dtype=float) + np.zeros_like(grid)
            hpvals = np.asarray(self.hp_arr(grid), dtype=float) + np.zeros_like(grid)
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise ModelError(f"h is not evaluable on the whole domain: {exc}") from exc
        if not (np.all(np.isfinite(hvals)) and np.all(np.isfinite(hpvals))):
            raise ModelError("h or h' is not finite on the whole domain")
        if not np.all(hpvals > 0.0):
            worst = grid[int(np.argmin(hpvals))]
            raise ModelError(f"h'(x) must be positive on the domain; h'({worst:g}) <= 0")
        if self.A != 0.0 and not np.all(hvals > 0.0):
            worst = grid[int(np.argmin(hvals))]
            raise ModelError(f"A != 0 requires h > 0 on the domain; h({worst:g}) <= 0")
        self.xi_min = float(hvals[0])
        self.xi_max = float(hvals[-1])
        self.h_abs_max = float(np.max(np.abs(hvals)))

    # -- helpers ---------------------------------------------------------

    def check_domain(self, x: float) -> None:
        if not (self.xmin <= x <= self.xmax):
            raise OutsideDomainError(f"x = {x!r} outside domain [{self.xmin}, {self.xmax}]")

    def inverse_h(self, xi: float) -> float:
        """Preimage of xi under the (strictly increasing) profile."""
        if not (self.xi_min <= xi <= self.xi_max):
            raise OutsideDomainError(f"xi = {xi!r} outside image [{self.xi_min}, {self.xi_max}]")
        lo, hi = self.xmin, self.xmax
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.h_fn(mid) < xi:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 4.0 * abs(mid) * np.finfo(float).eps + 5e-324:
                break
        return 0.5 * (lo + hi)

    def __repr__(self) -> str:
        return (f"LienardModel(h={expr.to_text(self.h)}, omega={self.omega}, "
                f"A={self.A}, domain=({self.xmin}, {self.xmax}))")


def build_model(h_text: str, omega: float, A: float, domain: tuple[float, float]) -> LienardModel:
    """Parse and validate a model; see module docstring for the conventions.

    Raises ModelError for omega <= 0, A >= 1/4, a degenerate domain, a
    non-increasing profile, or (when A != 0) a profile that is not positive;
    parse errors propagate from the expression module.
    """
    xmin, xmax = float(domain[0]), float(domain[1])
    if not (omega > 0.0):
        raise ModelError("omega must be positive")
    if not (A < 0.25):
        raise ModelError("A must be < 1/4 so that k = sqrt(1-4A) is real")
    if not (xmax > xmin) or not (math.isfinite(xmin) and math.isfinite(xmax)):
        raise ModelError("domain must be a finite non-degenerate interval")
    h = expr.simplify(expr.parse(h_text, VAR_NAME))
    m = LienardModel(h, omega, A, xmin, xmax)
    m.h_text = h_text
    return m


# -- derived classical quantities ---------------------------------------


def ode_rhs(m: LienardModel, x: float, v: float) -> float:
    """Acceleration x'' at phase point (x, v)."""
    m.check_domain(x)
    if m.A != 0.0 and m.h_fn(x) <= 0.0:
        raise OutsideDomainError(f"h({x!r}) <= 0 with A != 0")
    return m.rhs_fn(x, v)


def lagrangian(m: LienardModel, x: float, v: float) -> float:
    """L = (h')^2 v^2/2 + A/(2 h^2) - omega^2 h^2/2."""
    m.check_domain(x)
    h, hp = m.h_fn(x), m.hp_fn(x)
    value = 0.5 * hp * hp * v * v - 0.5 * (m.omega * h) ** 2
    if m.A != 0.0:
        if h == 0.0:
            raise OutsideDomainError(f"h({x!r}) = 0 with A != 0")
        value += 0.5 * m.A / (h * h)
    return value


def potential(m: LienardModel, x: float) -> float:
    """V = (omega^2 h^2 - A/h^2)/2, the potential of the transformed picture."""
    m.check_domain(x)
    return m.v_fn(x)


def energy(m: LienardModel, x: float, v: float) -> float:
    """E = (h')^2 v^2/2 + V(x); conserved along solutions of ode_rhs."""
    m.check_domain(x)
    hp = m.hp_fn(x)
    return 0.5 * hp * hp * v * v + m.v_fn(x)


def jacobi_last_multiplier(m: LienardModel, x: float) -> float:
    """M(x) = (h'(x))^2, the last multiplier of the equation of motion."""
    m.check_domain(x)
    hp = m.hp_fn(x)
    return hp * hp


def to_isotonic(m: LienardModel, x: float) -> float:
    """The point transformation xi = h(x)."""
    m.check_domain(x)
    return m.h_fn(x)
