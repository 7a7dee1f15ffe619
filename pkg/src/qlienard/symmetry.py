"""Point symmetries of the oscillator family, checked by prolongation.

Generators are vector fields tau(t,x) d/dt + eta(t,x) d/dx whose
coefficients are sums of separable products f(t)*g(x); the single-variable
factors are symbolic expressions, so all partial derivatives entering the
prolongation formulas are exact.  Only the gauge-compatibility test inside
the Noether classification uses finite differences.

The classical catalogue is Gamma_1..Gamma_8: time translation, the two
2*omega rotations (valid for every A), and five further generators that
survive only in the A = 0 (linearizable) case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import expr
from .expr import Div, Expression, Mul, Num, Pow
from .model import LienardModel, lagrangian
from .rng import DEFAULT_SEED, Lcg64

LIE_RESIDUAL_TOL = 1e-8
NOETHER_AFFINE_TOL = 1e-9
COMPAT_FD_STEP = 1e-5
COMPAT_TOL = 1e-6


@dataclass(frozen=True)
class SepTerm:
    """const * f(t) * g(x); a missing factor means the constant 1."""

    const: complex
    tpart: Expression | None = None
    xpart: Expression | None = None

    def ev(self, t: float, x: float) -> complex:
        value = self.const
        if self.tpart is not None:
            value *= expr.evaluate(self.tpart, t)
        if self.xpart is not None:
            value *= expr.evaluate(self.xpart, x)
        return value


class Coefficient:
    """Sum of separable terms, closed under +, *, d/dt and d/dx."""

    def __init__(self, terms=()):
        self.terms = tuple(t for t in terms if t.const != 0)

    @staticmethod
    def constant(c: complex) -> "Coefficient":
        return Coefficient([SepTerm(c)])

    @staticmethod
    def zero() -> "Coefficient":
        return Coefficient([])

    def ev(self, t: float, x: float) -> complex:
        return sum((term.ev(t, x) for term in self.terms), 0j)

    def dt(self) -> "Coefficient":
        out = []
        for term in self.terms:
            if term.tpart is None:
                continue
            out.append(SepTerm(term.const, expr.differentiate(term.tpart, 1), term.xpart))
        return Coefficient(out)

    def dx(self) -> "Coefficient":
        out = []
        for term in self.terms:
            if term.xpart is None:
                continue
            out.append(SepTerm(term.const, term.tpart, expr.differentiate(term.xpart, 1)))
        return Coefficient(out)

    def __add__(self, other: "Coefficient") -> "Coefficient":
        return Coefficient(self.terms + other.terms)

    def __sub__(self, other: "Coefficient") -> "Coefficient":
        return self + other.scaled(-1)

    def scaled(self, c: complex) -> "Coefficient":
        return Coefficient([SepTerm(c * t.const, t.tpart, t.xpart) for t in self.terms])

    def __mul__(self, other: "Coefficient") -> "Coefficient":
        out = []
        for a in self.terms:
            for b in other.terms:
                out.append(SepTerm(a.const * b.const, _mul_opt(a.tpart, b.tpart),
                                   _mul_opt(a.xpart, b.xpart)))
        return Coefficient(out)

    @property
    def is_zero(self) -> bool:
        return not self.terms


def _mul_opt(a: Expression | None, b: Expression | None) -> Expression | None:
    if a is None:
        return b
    if b is None:
        return a
    return Mul(a, b)


@dataclass
class Generator:
    """tau d/dt + eta d/dx, optionally extended by psi_coeff * psi d/dpsi."""

    label: str
    tau: Coefficient
    eta: Coefficient
    psi: Coefficient | None = None
    expected_valid: bool = True
    modes: tuple = None  # stationary-mode decomposition, set by the quantum module
    _partials: dict = field(default_factory=dict, repr=False)

    def partial(self, which: str) -> Coefficient:
        """Cached partial derivative, e.g. partial('eta_tx')."""
        got = self._partials.get(which)
        if got is None:
            name, _, ops = which.partition("_")
            got = getattr(self, name)
            for op in ops:
                got = got.dt() if op == "t" else got.dx()
            self._partials[which] = got
        return got

    def scaled(self, c: complex, label: str | None = None) -> "Generator":
        return Generator(label or f"{c}*{self.label}", self.tau.scaled(c), self.eta.scaled(c),
                         None if self.psi is None else self.psi.scaled(c), self.expected_valid)


def _tfun(text: str) -> Expression:
    return expr.parse(text, "t")


def standard_generators(m: LienardModel) -> list[Generator]:
    """The eight classical generators, tagged with their expected validity
    (all eight for A = 0, only the first three otherwise)."""
    gens = getattr(m, "_std_gens", None)
    if gens is not None:
        return gens
    w = m.omega
    cos_wt = _tfun(f"cos({w!r} * t)")
    sin_wt = _tfun(f"sin({w!r} * t)")
    cos_2wt = _tfun(f"cos({2 * w!r} * t)")
    sin_2wt = _tfun(f"sin({2 * w!r} * t)")
    h_over_hp = expr.simplify(Div(m.h, m.hp))
    h2_over_hp = expr.simplify(Div(Pow(m.h, Num(2.0)), m.hp))
    inv_hp = expr.simplify(Div(Num(1.0), m.hp))
    a0 = m.A == 0.0

    def C(*terms) -> Coefficient:
        return Coefficient([SepTerm(*t) for t in terms])

    gens = [
        Generator("Gamma1", Coefficient.constant(1.0), Coefficient.zero()),
        Generator("Gamma2", C((1.0, cos_2wt, None)), C((-w, sin_2wt, h_over_hp))),
        Generator("Gamma3", C((1.0, sin_2wt, None)), C((w, cos_2wt, h_over_hp))),
        Generator("Gamma4", C((1.0 / w**2, cos_wt, m.h)), C((-1.0 / w, sin_wt, h2_over_hp)),
                  expected_valid=a0),
        Generator("Gamma5", C((1.0 / w**2, sin_wt, m.h)), C((1.0 / w, cos_wt, h2_over_hp)),
                  expected_valid=a0),
        Generator("Gamma6", Coefficient.zero(), C((1.0, None, h_over_hp)), expected_valid=a0),
        Generator("Gamma7", Coefficient.zero(), C((w**2, sin_wt, inv_hp)), expected_valid=a0),
        Generator("Gamma8", Coefficient.zero(), C((w**2, cos_wt, inv_hp)), expected_valid=a0),
    ]
    m._std_gens = gens
    return gens


# ---------------------------------------------------------------------------
# prolongation residual
# ---------------------------------------------------------------------------

def lie_symmetry_residual(m: LienardModel, g: Generator, t: float, x: float, v: float) -> float:
    """Residual of the second-prolongation symmetry condition at one point.

    With F the right-hand side of x'' = F(x, x') and eta1, eta2 the
    prolonged coefficients, returns |eta2 - tau F_t - eta F_x - eta1 F_v|
    normalized by 1 + |F_x| + |F_v|.
    """
    m.check_domain(x)
    F = m.rhs_fn(x, v)
    F_x = -m.q1p_fn(x) * v * v - m.q2p_fn(x)
    F_v = -2.0 * m.q1_fn(x) * v
    tau = g.tau.ev(t, x)
    eta = g.eta.ev(t, x)
    tau_t, tau_x = g.partial("tau_t").ev(t, x), g.partial("tau_x").ev(t, x)
    eta_t, eta_x = g.partial("eta_t").ev(t, x), g.partial("eta_x").ev(t, x)
    eta1 = eta_t + v * (eta_x - tau_t) - v * v * tau_x
    eta2 = (g.partial("eta_tt").ev(t, x)
            + v * (2.0 * g.partial("eta_tx").ev(t, x) - g.partial("tau_tt").ev(t, x))
            + v * v * (g.partial("eta_xx").ev(t, x) - 2.0 * g.partial("tau_tx").ev(t, x))
            - v**3 * g.partial("tau_xx").ev(t, x)
            + (eta_x - 2.0 * tau_t - 3.0 * v * tau_x) * F)
    lhs = eta2 - eta * F_x - eta1 * F_v  # F_t = 0: the family is autonomous
    return abs(lhs) / (1.0 + abs(F_x) + abs(F_v))


def sample_points(m: LienardModel, n: int, seed: int = DEFAULT_SEED,
                  with_v: bool = False, margin: float = 0.02):
    """Seeded (t, x[, v]) samples: t over one period, x inside the domain."""
    rng = Lcg64(seed)
    width = m.xmax - m.xmin
    lo, hi = m.xmin + margin * width, m.xmax - margin * width
    pts = []
    for _ in range(n):
        t = rng.uniform(0.0, 2.0 * math.pi / m.omega)
        x = rng.uniform(lo, hi)
        if with_v:
            pts.append((t, x, rng.uniform(-2.0, 2.0)))
        else:
            pts.append((t, x))
    return pts


def max_symmetry_residual(m: LienardModel, g: Generator, n_points: int = 100,
                          seed: int = DEFAULT_SEED) -> float:
    return max(lie_symmetry_residual(m, g, t, x, v)
               for (t, x, v) in sample_points(m, n_points, seed, with_v=True))


# ---------------------------------------------------------------------------
# Noether classification
# ---------------------------------------------------------------------------

_V_STENCIL = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
_VANDER = np.vander(_V_STENCIL, 4, increasing=True)
_VANDER_PINV = np.linalg.pinv(_VANDER)


def _w_cubic_coeffs(m: LienardModel, g: Generator, t: float, x: float):
    """Cubic-in-v fit (c0..c3) of the Noether combination W = eta L_x +
    eta1 L_v + L Dt(tau) on the five-point stencil.

    Also returns the cancellation scale max_v sum|summands|: the three
    summands of W may cancel almost exactly (they do near a steep-h tail),
    and eps times this scale is the absolute accuracy of the fit data.
    """
    hp, hpp = m.hp_fn(x), m.hpp_fn(x)
    vp = m.vp_fn(x)
    tau_t, tau_x = g.partial("tau_t").ev(t, x), g.partial("tau_x").ev(t, x)
    eta = g.eta.ev(t, x)
    eta_t, eta_x = g.partial("eta_t").ev(t, x), g.partial("eta_x").ev(t, x)
    w_vals = np.empty(len(_V_STENCIL))
    cancel_scale = 0.0
    for i, v in enumerate(_V_STENCIL):
        L = lagrangian(m, x, v)
        L_x = hp * hpp * v * v - vp
        L_v = hp * hp * v
        eta1 = eta_t + v * (eta_x - tau_t) - v * v * tau_x
        dtau = tau_t + v * tau_x
        parts = (eta * L_x, eta1 * L_v, L * dtau)
        w_vals[i] = sum(parts).real
        cancel_scale = max(cancel_scale, sum(abs(p) for p in parts))
    return _VANDER_PINV @ w_vals, cancel_scale


def noether_classify(m: LienardModel, g: Generator, n_points: int = 50,
                     seed: int = DEFAULT_SEED) -> str:
    """Classify a generator as 'noether', 'lie_only' or 'not_symmetry'.

    Noether requires the combination W to be affine in v (vanishing v^2 and
    v^3 fit coefficients, relative to the stencil data magnitude) with the
    affine pieces satisfying the gauge compatibility a_x = b_t by central
    finite differences.  The compatibility tolerance carries a roundoff
    floor eps*|data|/step, which is the attainable accuracy of a finite
    difference of values that cancel to machine precision.  A generator
    that passes the prolongation residual but fails the affine/gauge test
    is 'lie_only'.
    """
    pts = sample_points(m, n_points, seed)
    affine = True
    compatible = True
    eps = float(np.finfo(float).eps)
    for (t, x) in pts:
        c, wmax = _w_cubic_coeffs(m, g, t, x)
        scale = max(1.0, wmax)
        if abs(c[2]) > NOETHER_AFFINE_TOL * scale or abs(c[3]) > NOETHER_AFFINE_TOL * scale:
            affine = False
            break
    if affine:
        step = COMPAT_FD_STEP
        for (t, x) in pts:
            if not (m.xmin <= x - step and x + step <= m.xmax):
                continue
            cxp, wxp = _w_cubic_coeffs(m, g, t, x + step)
            cxm, wxm = _w_cubic_coeffs(m, g, t, x - step)
            ctp, wtp = _w_cubic_coeffs(m, g, t + step, x)
            ctm, wtm = _w_cubic_coeffs(m, g, t - step, x)
            a_x = (cxp[0] - cxm[0]) / (2.0 * step)
            b_t = (ctp[1] - ctm[1]) / (2.0 * step)
            floor = 64.0 * eps * max(wxp, wxm, wtp, wtm, 1.0) / step
            if abs(a_x - b_t) > COMPAT_TOL * (1.0 + abs(a_x) + abs(b_t)) + floor:
                compatible = False
                break
        if compatible:
            return "noether"
    rng = Lcg64(seed ^ 0xA5A5)
    residual = max(lie_symmetry_residual(m, g, t, x, rng.uniform(-2.0, 2.0))
                   for (t, x) in pts)
    return "lie_only" if residual <= LIE_RESIDUAL_TOL else "not_symmetry"


# ---------------------------------------------------------------------------
# the two-generator determinant
# ---------------------------------------------------------------------------

def delta78(m: LienardModel, t: float, x: float, v: float) -> float:
    """Determinant of [[1, v, F], [0, eta7, eta7'], [0, eta8, eta8']] built
    from the first prolongations of Gamma_7, Gamma_8; equals -omega^5/h'^2,
    the reciprocal of the last multiplier up to the constant -omega^5."""
    m.check_domain(x)
    gens = standard_generators(m)
    g7, g8 = gens[6], gens[7]
    eta7 = g7.eta.ev(t, x)
    eta8 = g8.eta.ev(t, x)
    # first prolongation with tau = 0: eta' = eta_t + v eta_x
    eta7p = g7.partial("eta_t").ev(t, x) + v * g7.partial("eta_x").ev(t, x)
    eta8p = g8.partial("eta_t").ev(t, x) + v * g8.partial("eta_x").ev(t, x)
    return (eta7 * eta8p - eta8 * eta7p).real


# ---------------------------------------------------------------------------
# commutator closure
# ---------------------------------------------------------------------------

@dataclass
class ClosureReport:
    labels: list[str]
    structure_constants: np.ndarray  # [i, j, k]: [X_i, X_j] = sum_k c_ijk X_k
    pair_residuals: np.ndarray
    closed: bool


def commutator(g1: Generator, g2: Generator) -> Generator:
    """[X1, X2] as a generator with exact separable coefficients."""
    tau = (g1.tau * g2.tau.dt() + g1.eta * g2.tau.dx()
           - g2.tau * g1.tau.dt() - g2.eta * g1.tau.dx())
    eta = (g1.tau * g2.eta.dt() + g1.eta * g2.eta.dx()
           - g2.tau * g1.eta.dt() - g2.eta * g1.eta.dx())
    return Generator(f"[{g1.label},{g2.label}]", tau, eta)


def algebra_closure_check(m: LienardModel, gens: list[Generator], n_points: int = 50,
                          seed: int = DEFAULT_SEED) -> ClosureReport:
    """Check that all pairwise commutators lie in the numerical span of the
    input generators; returns the fitted structure constants."""
    pts = sample_points(m, n_points, seed)
    basis = np.column_stack([
        np.array([g.tau.ev(t, x).real for (t, x) in pts]
                 + [g.eta.ev(t, x).real for (t, x) in pts])
        for g in gens
    ])
    bscale = max(float(np.max(np.abs(basis))), 1e-30)
    n = len(gens)
    consts = np.zeros((n, n, n))
    residuals = np.zeros((n, n))
    closed = True
    for i in range(n):
        for j in range(i + 1, n):
            comm = commutator(gens[i], gens[j])
            target = np.array([comm.tau.ev(t, x).real for (t, x) in pts]
                              + [comm.eta.ev(t, x).real for (t, x) in pts])
            tscale = float(np.linalg.norm(target))
            if tscale <= 1e-12 * bscale:
                continue  # commutator vanishes identically
            coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
            resid = float(np.linalg.norm(basis @ coef - target)) / tscale
            consts[i, j] = coef
            consts[j, i] = -coef
            residuals[i, j] = residuals[j, i] = resid
            if resid > 1e-8:
                closed = False
    return ClosureReport([g.label for g in gens], consts, residuals, closed)


def classification_csv_rows(m: LienardModel, n_points: int = 100,
                            seed: int = DEFAULT_SEED) -> list[str]:
    """CSV lines generator,max_residual,classification for Gamma_1..Gamma_8."""
    rows = ["generator,max_residual,classification"]
    for g in standard_generators(m):
        residual = max_symmetry_residual(m, g, n_points, seed)
        rows.append(f"{g.label},{'%.17g' % residual},{noether_classify(m, g, seed=seed)}")
    return rows
