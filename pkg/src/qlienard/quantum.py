"""Quantization of the family: spectra, eigenfunctions, ladder operators.

The stationary operator in the original coordinate is the position-
dependent-mass form

    H = -(1/(2 h')) d/dx ( (1/h') d/dx ) + V,   V = (omega^2 h^2 - A/h^2)/2,

self-adjoint with weight h'(x) dx.  Under xi = h(x) it becomes the harmonic
(A = 0) or the isotonic (A != 0) oscillator, with closed-form eigenvalues

    A  = 0:  E_n = omega (n + 1/2)
    A != 0:  E_n = 2 omega (n + 1/2 + k/4),   k = sqrt(1 - 4A)

and Hermite / associated-Laguerre eigenfunctions.  The same spectrum is
recomputed from a three-point flux discretization (Sturm bisection plus
inverse iteration) as an independent numerical check, and the first-order
PDE symmetries of the time-dependent equation supply creation/annihilation
characteristics that rebuild the eigenfunctions algebraically.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.linalg import solve_banded

from . import polyspec
from .expr import Div, Num, Pow, simplify
from .model import XI_COVER_HALF_SQ, LienardModel
from .polyspec import QuasiPolynomial, inner_product
from .symmetry import Coefficient, Generator, SepTerm, _tfun

DEFAULT_GRID_N = 4000
EIG_ABS_TOL = 1e-12  # bisection stops at EIG_ABS_TOL * (1 + |E|)
COMPLIANT_ORDERING = (-0.25, -0.5, -0.25)  # (alpha, beta, gamma)


class CoverageError(ValueError):
    """Model image too small for a faithful full-line spectrum comparison."""


class LadderError(ValueError):
    """Characteristic applied to an invalid generator or state."""


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

@dataclass
class StationaryState:
    """psi(t, x) = exp(-i E t) * spatial(h(x)) with a quasi-polynomial spatial part."""

    model: LienardModel
    n: int
    energy: float
    spatial: QuasiPolynomial

    def psi_value(self, t: float, x: float) -> complex:
        xi = self.model.h_fn(x)
        return complex(np.exp(-1j * self.energy * t)) * self.spatial(xi)


def closed_form_eigenvalue(m: LienardModel, n: int) -> float:
    """E_n = omega(n + 1/2) for A = 0, else 2 omega (n + 1/2 + k/4)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if m.A == 0.0:
        return m.omega * (n + 0.5)
    return 2.0 * m.omega * (n + 0.5 + m.k / 4.0)


def _spatial_quasi_poly(m: LienardModel, n: int) -> QuasiPolynomial:
    w = m.omega
    if m.A == 0.0:
        hc = polyspec.hermite_coeffs(n)
        coeffs = hc * w ** (0.5 * np.arange(len(hc)))  # H_n(sqrt(w) xi)
        return QuasiPolynomial(w, 0.0, coeffs)
    lc = polyspec.assoc_laguerre_coeffs(n, m.k / 2.0)
    coeffs = np.zeros(2 * len(lc) - 1)
    coeffs[::2] = lc * w ** np.arange(len(lc))  # L_n^{k/2}(w xi^2)
    return QuasiPolynomial(w, 0.5 * (m.k + 1.0), coeffs)


def closed_form_eigenfunction(m: LienardModel, n: int, normalized: bool = True) -> StationaryState:
    """Closed-form bound state; unit norm under the h' dx weight, sign fixed
    so the value at the rightmost interior extremum is positive."""
    qp = _spatial_quasi_poly(m, n)
    if normalized:
        qp = qp.scaled(1.0 / math.sqrt(inner_product(m, qp, qp)))
    return StationaryState(m, n, closed_form_eigenvalue(m, n), qp.sign_fixed())


def pde_residual(m: LienardModel, st: StationaryState, t: float, x: float) -> float:
    """Residual of 2i psi_t + psi_xx/h'^2 - h'' psi_x/h'^3 + (A/h^2 - w^2 h^2) psi
    at one point, normalized by 1 + |psi| (1 + E); all derivatives exact."""
    m.check_domain(x)
    xi = m.h_fn(x)
    hp, hpp = m.hp_fn(x), m.hpp_fn(x)
    u = st.spatial
    du = u.derivative()
    u0, u1, u2 = u(xi), du(xi), du.derivative()(xi)
    phase = complex(np.exp(-1j * st.energy * t))
    psi = phase * u0
    psi_x = phase * u1 * hp
    psi_xx = phase * (u2 * hp * hp + u1 * hpp)
    value = (2.0 * st.energy * psi + psi_xx / hp**2 - hpp * psi_x / hp**3
             - (m.omega * xi) ** 2 * psi)
    if m.A != 0.0:
        value += m.A / xi**2 * psi
    return abs(value) / (1.0 + abs(psi) * (1.0 + st.energy))


# ---------------------------------------------------------------------------
# PDE symmetries in stationary-mode form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mode:
    """One e^{i c w t} component of a first-order PDE symmetry.

    The characteristic Q = phi psi - tau psi_t - eta psi_x maps the
    stationary state e^{-iEt} u(xi) to e^{-i(E - c w)t} times

        phi(xi) u + i E tau u - eta_const * (xi-space action of eta d/dx),

    where the eta action is u' for eta = 1/h' d/dx and xi u' for
    eta = (h/h') d/dx; both stay inside the quasi-polynomial family.
    """

    freq: int                      # c in e^{i c omega t}
    tau: complex = 0.0
    eta_kind: str = ""             # "", "dxi" (1/h' d/dx), "xi_dxi" ((h/h') d/dx)
    eta: complex = 0.0
    phi: tuple = ()                # polynomial in xi, ascending complex coefficients

    def scaled(self, c: complex) -> "Mode":
        return Mode(self.freq, c * self.tau, self.eta_kind, c * self.eta,
                    tuple(c * p for p in self.phi))


def _mode_spatial_action(mode: Mode, st: StationaryState) -> np.ndarray:
    """Complex coefficient array (same s) of the mode's characteristic."""
    u = st.spatial
    p = u.coeffs.astype(complex)
    out = np.zeros(max(len(p) + 2, len(mode.phi) + len(p)), dtype=complex)

    def acc(c):
        nonlocal out
        c = np.asarray(c, dtype=complex)
        out[: len(c)] += c

    if mode.phi:
        acc(P.polymul(np.asarray(mode.phi, dtype=complex), p))
    if mode.tau != 0.0:
        acc(1j * st.energy * mode.tau * p)
    if mode.eta != 0.0:
        if mode.eta_kind == "dxi":
            if u.s != 0.0:
                raise LadderError("1/h' d/dx characteristic needs an s = 0 state")
            acc(-mode.eta * P.polysub(P.polyder(p), u.omega * np.concatenate(([0], p))))
        elif mode.eta_kind == "xi_dxi":
            term = np.concatenate(([0], P.polyder(p)))
            term = P.polyadd(term, u.s * p)
            term = P.polysub(term, u.omega * np.concatenate(([0, 0], p)))
            acc(-mode.eta * term)
        else:
            raise LadderError(f"unknown eta kind {mode.eta_kind!r}")
    return out


def _coefficient_views(m: LienardModel, modes: tuple) -> tuple[Coefficient, Coefficient, Coefficient]:
    """Render the mode decomposition as separable (t, x) coefficients."""
    w = m.omega
    h_over_hp = None
    inv_hp = None
    tau_terms, eta_terms, psi_terms = [], [], []
    for mode in modes:
        if mode.freq == 0:
            tparts = [(1.0, None)]
        else:
            cw = mode.freq * w
            tparts = [(1.0, _tfun(f"cos({cw!r} * t)")), (1j, _tfun(f"sin({cw!r} * t)"))]
        if mode.eta_kind == "xi_dxi" and h_over_hp is None:
            h_over_hp = simplify(Div(m.h, m.hp))
        if mode.eta_kind == "dxi" and inv_hp is None:
            inv_hp = simplify(Div(Num(1.0), m.hp))
        for (tc, tpart) in tparts:
            if mode.tau != 0.0:
                tau_terms.append(SepTerm(tc * mode.tau, tpart, None))
            if mode.eta != 0.0:
                xpart = h_over_hp if mode.eta_kind == "xi_dxi" else inv_hp
                eta_terms.append(SepTerm(tc * mode.eta, tpart, xpart))
            for j, phi_j in enumerate(mode.phi):
                if phi_j == 0.0:
                    continue
                xpart = None if j == 0 else (m.h if j == 1 else Pow(m.h, Num(float(j))))
                psi_terms.append(SepTerm(tc * phi_j, tpart, xpart))
    return Coefficient(tau_terms), Coefficient(eta_terms), Coefficient(psi_terms)


def _pde_generator(m: LienardModel, label: str, modes: tuple, expected_valid=True) -> Generator:
    tau, eta, psi = _coefficient_views(m, modes)
    return Generator(label, tau, eta, psi, expected_valid, modes=modes)


def pde_generators(m: LienardModel) -> dict[str, Generator]:
    """Catalogue of first-order symmetries of the time-dependent equation.

    Complex ladder pairs: Omega2+/- (energy shift -/+ 2 omega, any A) and
    Omega3+/- (shift -/+ omega, A = 0 only); the real forms Xi1..Xi5 are
    their linear combinations.  Every generator is validated on the lowest
    closed-form states (solutions must map to solutions) at construction.
    """
    cached = getattr(m, "_pde_gens", None)
    if cached is not None:
        return cached
    w = m.omega
    a0 = m.A == 0.0
    om1 = (Mode(0, tau=1j),)
    om2p = (Mode(+2, tau=1.0, eta_kind="xi_dxi", eta=1j * w, phi=(-0.5j * w, 0.0, -1j * w * w)),)
    om2m = (Mode(-2, tau=1.0, eta_kind="xi_dxi", eta=-1j * w, phi=(0.5j * w, 0.0, -1j * w * w)),)
    gens = {
        "Omega1": _pde_generator(m, "Omega1", om1),
        "Omega2+": _pde_generator(m, "Omega2+", om2p),
        "Omega2-": _pde_generator(m, "Omega2-", om2m),
        "Xi1": _pde_generator(m, "Xi1", (Mode(0, tau=1.0),)),
        "Xi2": _pde_generator(m, "Xi2", (om2p[0].scaled(0.5), om2m[0].scaled(0.5))),
        "Xi3": _pde_generator(m, "Xi3", (om2p[0].scaled(-0.5j), om2m[0].scaled(0.5j))),
    }
    if a0:
        om3p = (Mode(+1, eta_kind="dxi", eta=1.0, phi=(0.0, -w)),)
        om3m = (Mode(-1, eta_kind="dxi", eta=1.0, phi=(0.0, +w)),)
        gens["Omega3+"] = _pde_generator(m, "Omega3+", om3p)
        gens["Omega3-"] = _pde_generator(m, "Omega3-", om3m)
        # Xi4 = w^2 (Omega3+ - Omega3-)/(2i),  Xi5 = w^2 (Omega3+ + Omega3-)/2
        gens["Xi4"] = _pde_generator(m, "Xi4", (om3p[0].scaled(w**2 / 2j), om3m[0].scaled(-w**2 / 2j)))
        gens["Xi5"] = _pde_generator(m, "Xi5", (om3p[0].scaled(0.5 * w**2), om3m[0].scaled(0.5 * w**2)))
    _validate_pde_generators(m, gens)
    m._pde_gens = gens
    return gens


def characteristic_components(m: LienardModel, g: Generator, st: StationaryState):
    """Stationary components of the characteristic of g on st.

    Returns one (possibly None-for-annihilated) StationaryState per mode,
    with energy E - c omega; states are unnormalized and sign-unfixed.
    """
    if g.modes is None:
        raise LadderError(f"{g.label} carries no stationary-mode decomposition")
    comps = []
    for mode in g.modes:
        coeffs = _mode_spatial_action(mode, st)
        scale = (abs(st.energy) + m.omega + 1.0) * float(np.max(np.abs(st.spatial.coeffs)))
        if float(np.max(np.abs(coeffs))) < 1e-13 * scale:
            comps.append(None)
            continue
        energy = st.energy - mode.freq * m.omega
        qp = _strip_phase(m, coeffs, st.spatial.s)
        comps.append(StationaryState(m, _energy_to_n(m, energy), energy, qp))
    return comps


def _strip_phase(m: LienardModel, coeffs: np.ndarray, s: float) -> QuasiPolynomial:
    idx = int(np.argmax(np.abs(coeffs)))
    phase = coeffs[idx] / abs(coeffs[idx])
    flat = coeffs / phase
    if float(np.max(np.abs(flat.imag))) > 1e-12 * float(np.max(np.abs(flat.real))):
        raise LadderError("characteristic output is not a pure-phase multiple of a real state")
    return QuasiPolynomial(m.omega, s, flat.real)


def _energy_to_n(m: LienardModel, energy: float) -> int:
    if m.A == 0.0:
        return int(round(energy / m.omega - 0.5))
    return int(round(energy / (2.0 * m.omega) - 0.5 - m.k / 4.0))


_LADDER_LABELS = {"Omega2+", "Omega2-", "Omega3+", "Omega3-"}


def apply_characteristic(m: LienardModel, g: Generator, st: StationaryState,
                         check_input: bool = True) -> StationaryState | None:
    """One ladder step: the characteristic of a single-mode generator.

    Returns None (the annihilation signal) when the output is numerically
    zero, otherwise the phase-stripped stationary state with energy shifted
    by -freq * omega.
    """
    if g.label not in _LADDER_LABELS:
        raise LadderError(f"{g.label} is not a ladder generator")
    if g.label.startswith("Omega3") and m.A != 0.0:
        raise LadderError("Omega3+/- exist only in the A = 0 case")
    if check_input:
        if pde_residual(m, st, 0.37, _probe_x(m, 0.62)) > 1e-6:
            raise LadderError("input state does not satisfy the wave equation")
    return characteristic_components(m, g, st)[0]


def ladder_generate(m: LienardModel, n: int) -> StationaryState:
    """Apply the creation characteristic n times to the ground state;
    the result is normalized and sign-fixed."""
    if not 0 <= n <= 30:
        raise ValueError("n must be between 0 and 30")
    state = closed_form_eigenfunction(m, 0)
    creation = pde_generators(m)["Omega3-" if m.A == 0.0 else "Omega2-"]
    for _ in range(n):
        state = apply_characteristic(m, creation, state, check_input=False)
        if state is None:
            raise LadderError("creation characteristic annihilated a state")
        # exact power-of-two rescale keeps coefficient ratios bit-exact
        top = float(np.max(np.abs(state.spatial.coeffs)))
        state = StationaryState(m, state.n, state.energy,
                                state.spatial.scaled(2.0 ** -round(math.log2(top))))
    qp = state.spatial.scaled(1.0 / math.sqrt(inner_product(m, state.spatial, state.spatial)))
    return StationaryState(m, state.n, state.energy, qp.sign_fixed())


def _probe_x(m: LienardModel, frac: float) -> float:
    """A generic interior point: frac of the way from max(xi_min, 0) to the
    Gaussian scale 1/sqrt(omega), pulled back through h."""
    lo = max(m.xi_min, 0.0) if m.A != 0.0 else max(m.xi_min, -1.0 / math.sqrt(m.omega))
    hi = min(m.xi_max, 2.0 / math.sqrt(m.omega))
    return m.inverse_h(lo + frac * (hi - lo))


def _validate_pde_generators(m: LienardModel, gens: dict[str, Generator]) -> None:
    """Solutions must map to solutions: every stationary component of every
    characteristic must satisfy the wave equation."""
    states = [closed_form_eigenfunction(m, 0, normalized=False),
              closed_form_eigenfunction(m, 1, normalized=False)]
    x_lo = _probe_x(m, 0.41)
    x_hi = _probe_x(m, 0.83)
    for g in gens.values():
        for st in states:
            for comp in characteristic_components(m, g, st):
                if comp is None:
                    continue
                for (t, x) in ((0.0, x_lo), (0.71, x_hi)):
                    resid = pde_residual(m, comp, t, x)
                    if resid > 1e-8:
                        raise LadderError(
                            f"{g.label} failed symmetry validation (residual {resid:.2e})")


# ---------------------------------------------------------------------------
# discrete operator
# ---------------------------------------------------------------------------

@dataclass
class DiscreteHamiltonian:
    """Symmetric tridiagonal form of the flux-discretized operator.

    Interior nodes x_1..x_{N-1} with Dirichlet ends; ``d``/``e`` are the
    diagonal and (negative) off-diagonal after the sqrt(h') similarity;
    ``w`` holds h' at the interior nodes.
    """

    model: LienardModel
    x: np.ndarray          # all N+1 nodes including the Dirichlet ends
    dx: float
    d: np.ndarray
    e: np.ndarray
    w: np.ndarray

    @property
    def x_interior(self) -> np.ndarray:
        return self.x[1:-1]


def default_x_range(m: LienardModel, n_max: int = 8) -> tuple[float, float]:
    """Preimage under h of the interval where the n_max-th closed-form state
    exceeds 1e-16 of its maximum, clipped to the model domain; for A = 0 the
    image must also cover the +-sqrt(80/omega) window (Gaussian tail below
    1e-17), which is enforced as a hard requirement."""
    st = closed_form_eigenfunction(m, n_max, normalized=False)
    xi_star = math.sqrt(2.0 * XI_COVER_HALF_SQ / m.omega)
    if m.A == 0.0:
        lo_cut, hi_cut = st.spatial.support(rel=1e-16)
        if m.xi_min > -xi_star or m.xi_max < xi_star:
            raise CoverageError(
                f"image [{m.xi_min:.3g}, {m.xi_max:.3g}] does not cover +-{xi_star:.3g}")
        xi_use = max(hi_cut, -lo_cut, xi_star)
        xi_use = min(xi_use, -m.xi_min, m.xi_max)
        return (m.inverse_h(-xi_use), m.inverse_h(xi_use))
    lo_cut, hi_cut = st.spatial.support(rel=1e-16, lo=m.xi_min * 1e-12)
    if m.xi_max < xi_star:
        raise CoverageError(
            f"image upper end {m.xi_max:.3g} below the required {xi_star:.3g}")
    xi_hi = min(max(hi_cut, xi_star), m.xi_max)
    xi_lo = max(lo_cut, m.xi_min)
    return (m.inverse_h(xi_lo), m.inverse_h(xi_hi))


def build_hamiltonian(m: LienardModel, n_grid: int = DEFAULT_GRID_N,
                      x_range: tuple[float, float] | None = None,
                      n_max: int = 8) -> DiscreteHamiltonian:
    """Assemble the three-point flux scheme on n_grid intervals.

    (H phi)_i = -[a_{i+1/2}(phi_{i+1}-phi_i) - a_{i-1/2}(phi_i-phi_{i-1})]
                / (2 h'_i dx^2) + V_i phi_i,   a = 1/h' at midpoints,
    symmetrized by the diagonal sqrt(h'_i) similarity.
    """
    if n_grid < 200:
        raise ValueError("n_grid must be at least 200")
    if x_range is None:
        x_range = default_x_range(m, n_max)
    xlo, xhi = float(x_range[0]), float(x_range[1])
    if not (m.xmin <= xlo < xhi <= m.xmax):
        raise ValueError(f"x_range {x_range} not inside the model domain")
    x = np.linspace(xlo, xhi, n_grid + 1)
    dx = x[1] - x[0]
    xin = x[1:-1]
    hp_in = np.asarray(m.hp_arr(xin)) + np.zeros_like(xin)
    xm = 0.5 * (x[:-1] + x[1:])
    a = 1.0 / (np.asarray(m.hp_arr(xm)) + np.zeros_like(xm))
    v_in = np.asarray(m.v_arr(xin)) + np.zeros_like(xin)
    d = (a[1:] + a[:-1]) / (2.0 * hp_in * dx * dx) + v_in
    e = -a[1:-1] / (2.0 * dx * dx * np.sqrt(hp_in[:-1] * hp_in[1:]))
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
        raise ValueError("non-finite coefficients in the discrete operator")
    return DiscreteHamiltonian(m, x, float(dx), d, e, hp_in)


def _sturm_counts(d: np.ndarray, e2: np.ndarray, lams: np.ndarray, pivmin: float) -> np.ndarray:
    """Number of eigenvalues below each shift (vectorized over shifts).

    Near-zero pivots are replaced by -pivmin *before* counting, so an exact
    leading-minor eigenvalue counts as crossed (the LAPACK convention).
    """
    q = d[0] - lams
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0.0).astype(np.int64)
    for i in range(1, d.size):
        q = (d[i] - lams) - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0.0
    return count


def lowest_eigenvalues(H: DiscreteHamiltonian, m_count: int) -> list[float]:
    """The m_count smallest eigenvalues by Sturm counting and bisection,
    each to absolute tolerance 1e-12 (1 + |E|), in ascending order."""
    if not 1 <= m_count <= 20:
        raise ValueError("m_count must be between 1 and 20")
    d, e = H.d, H.e
    if m_count > len(d):
        raise ValueError("matrix smaller than requested eigenvalue count")
    e2 = e * e
    pad = np.concatenate(([0.0], np.abs(e), [0.0]))
    lo = float(np.min(d - pad[:-1] - pad[1:]))
    hi = float(np.max(d + pad[:-1] + pad[1:]))
    pivmin = max(float(np.max(e2)), 1.0) * np.finfo(float).eps ** 2
    los = np.full(m_count, lo)
    his = np.full(m_count, hi)
    targets = np.arange(1, m_count + 1)
    for _ in range(300):
        mids = 0.5 * (los + his)
        tol = EIG_ABS_TOL * (1.0 + np.abs(mids))
        if np.all(his - los <= 2.0 * tol):
            break
        below = _sturm_counts(d, e2, mids, pivmin) >= targets
        his = np.where(below, mids, his)
        los = np.where(below, los, mids)
    return [float(v) for v in 0.5 * (los + his)]


def eigenvector(H: DiscreteHamiltonian, E: float, sweeps: int = 3,
                max_sweeps: int = 10) -> np.ndarray:
    """Inverse iteration at the (near-)eigenvalue E.

    Returns the eigenfunction in the original (unsymmetrized) variable,
    normalized to sum(psi_i^2 h'_i dx) = 1, sign fixed at the rightmost
    interior extremum.
    """
    n = len(H.d)
    shift = E + 1e-12 * (1.0 + abs(E))  # keep the shifted matrix invertible
    ab = np.zeros((3, n))
    ab[0, 1:] = H.e
    ab[1, :] = H.d - shift
    ab[2, :-1] = H.e
    y = np.ones(n) / math.sqrt(n)
    # the attainable residual floor scales with ||T||, not with |E|
    scale = float(np.max(np.abs(H.d))) + 2.0 * float(np.max(np.abs(H.e)))
    tol = 1e-8 * (1.0 + abs(E)) + 100.0 * np.finfo(float).eps * scale
    for sweep in range(max_sweeps):
        y = solve_banded((1, 1), ab, y)
        y /= np.linalg.norm(y)
        if sweep + 1 >= sweeps:
            resid = np.abs(_tridiag_apply(H.d, H.e, y) - E * y).max()
            if resid <= tol:
                break
    else:
        raise RuntimeError(f"inverse iteration did not converge in {max_sweeps} sweeps")
    psi = y / np.sqrt(H.w)
    psi /= math.sqrt(float(np.sum(psi * psi * H.w) * H.dx))
    return _sign_fix_grid(psi)


def _tridiag_apply(d: np.ndarray, e: np.ndarray, y: np.ndarray) -> np.ndarray:
    out = d * y
    out[:-1] += e * y[1:]
    out[1:] += e * y[:-1]
    return out


def _sign_fix_grid(psi: np.ndarray) -> np.ndarray:
    mag = np.abs(psi)
    floor = 1e-8 * mag.max()
    interior = (mag[1:-1] >= mag[:-2]) & (mag[1:-1] >= mag[2:]) & (mag[1:-1] > floor)
    idx = np.nonzero(interior)[0]
    if len(idx) and psi[idx[-1] + 1] < 0.0:
        return -psi
    return psi


# ---------------------------------------------------------------------------
# spectrum bundle
# ---------------------------------------------------------------------------

@dataclass
class Spectrum:
    model: LienardModel
    n_grid: int
    x_range: tuple[float, float]
    dx: float
    energies: np.ndarray
    closed: np.ndarray
    abs_err: np.ndarray
    eigenvectors: np.ndarray | None   # (levels, n_interior)
    x_interior: np.ndarray
    elapsed: float


def compute_spectrum(m: LienardModel, levels: int = 8, n_grid: int = DEFAULT_GRID_N,
                     x_range: tuple[float, float] | None = None,
                     with_vectors: bool = False) -> Spectrum:
    """Numerical spectrum of the discrete operator next to the closed form."""
    start = time.perf_counter()
    H = build_hamiltonian(m, n_grid, x_range, n_max=max(levels, 8))
    energies = np.array(lowest_eigenvalues(H, levels))
    closed = np.array([closed_form_eigenvalue(m, n) for n in range(levels)])
    vectors = None
    if with_vectors:
        vectors = np.array([eigenvector(H, E) for E in energies])
    elapsed = time.perf_counter() - start
    return Spectrum(m, n_grid, (float(H.x[0]), float(H.x[-1])), H.dx, energies,
                    closed, np.abs(energies - closed), vectors, H.x_interior, elapsed)


def spectrum_csv_rows(spec: Spectrum) -> list[str]:
    rows = ["n,E_numeric,E_closed,abs_err"]
    for n in range(len(spec.energies)):
        rows.append("%d,%s,%s,%s" % (
            n, "%.17g" % spec.energies[n], "%.17g" % spec.closed[n],
            "%.17g" % spec.abs_err[n]))
    return rows


def eigenfunction_csv_rows(m: LienardModel, x: np.ndarray, psi: np.ndarray) -> list[str]:
    xi = np.asarray(m.h_arr(x)) + np.zeros_like(x)
    rows = ["x,xi,psi"]
    for i in range(len(x)):
        rows.append(",".join("%.17g" % v for v in (x[i], xi[i], psi[i])))
    return rows


def grid_overlap(H: DiscreteHamiltonian, psi1: np.ndarray, psi2: np.ndarray) -> float:
    """Discrete weighted overlap sum(psi1 psi2 h' dx)."""
    return float(np.sum(psi1 * psi2 * H.w) * H.dx)


# ---------------------------------------------------------------------------
# von Roos ordering cross-check
# ---------------------------------------------------------------------------

def vonroos_residual(m: LienardModel, st: StationaryState, alpha: float, beta: float,
                     gamma: float, t: float, x: float) -> float:
    """Residual of the ordered position-dependent-mass wave equation on
    phi = sqrt(h') psi.

    The mass is the last multiplier (h')^2 (integration constants fixed so
    exp(int f) = h' and int h' = h, with f = h''/h'); the ordering enters
    through C(f) = (beta+1)(2 f^2 - f') + 4 alpha (alpha+beta+1) f^2 and the
    potential is h^2/2 (A = 0, requires omega = 1) or h^2/8 +
    (mu^2 - 1/4)/(2 h^2) with mu = k/2 (A != 0, requires omega = 1/2).
    """
    if abs(alpha + beta + gamma + 1.0) > 1e-12:
        raise ValueError("von Roos parameters must satisfy alpha + beta + gamma = -1")
    if m.A == 0.0:
        if abs(m.omega - 1.0) > 1e-12:
            raise ValueError("the A = 0 cross-check requires omega = 1")
    elif abs(m.omega - 0.5) > 1e-12:
        raise ValueError("the A != 0 cross-check requires omega = 1/2")
    m.check_domain(x)
    h, hp, hpp, hppp = m.h_fn(x), m.hp_fn(x), m.hpp_fn(x), m.hppp_fn(x)
    f = hpp / hp
    fprime = hppp / hp - f * f
    C = (beta + 1.0) * (2.0 * f * f - fprime) + 4.0 * alpha * (alpha + beta + 1.0) * f * f
    xi = m.h_fn(x)
    u = st.spatial
    du = u.derivative()
    u0, u1, u2 = u(xi), du(xi), du.derivative()(xi)
    phase = complex(np.exp(-1j * st.energy * t))
    sq = math.sqrt(hp)
    phi = phase * sq * u0
    phi_x = phase * (0.5 * hpp / sq * u0 + hp * sq * u1)
    phi_xx = phase * ((0.5 * hppp / sq - 0.25 * hpp * hpp / (hp * sq)) * u0
                      + 2.0 * sq * hpp * u1 + hp * hp * sq * u2)
    if m.A == 0.0:
        V = 0.5 * h * h
    else:
        mu = 0.5 * m.k
        V = h * h / 8.0 + 0.5 * (mu * mu - 0.25) / (h * h)
    value = (2.0 * st.energy * phi
             + (phi_xx - 2.0 * f * phi_x + C * phi) / (hp * hp)
             - 2.0 * V * phi)
    return abs(value) / (1.0 + abs(phi) * (1.0 + st.energy))
