"""Classical orbits: fixed-step RK4, period measurement, hidden linearity.

The integrator is deliberately a fixed-step classical Runge-Kutta so that
trajectories are bit-reproducible; the default step is (2 pi / omega)/2000.
Periods are measured from Poincare-section returns with cubic-Hermite
refinement of the crossing times, and the hidden-linearity check fits
u = h(x)^2/2 against a single 2*omega harmonic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import LienardModel

SINGULAR_GUARD = 1e-6  # abort when h(x) < guard * max|h| and A != 0


class IntegrationError(RuntimeError):
    """Orbit left the model domain (carries the exit time)."""

    def __init__(self, message: str, time: float):
        super().__init__(f"{message} at t = {time:.6g}")
        self.time = time


class SectionError(RuntimeError):
    """Trajectory never returns to the Poincare section."""


class DegenerateFitError(RuntimeError):
    """Harmonic fit has (numerically) zero oscillation amplitude."""


@dataclass
class Trajectory:
    model: LienardModel
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    energy: np.ndarray
    dt: float

    def energy_drift(self) -> float:
        e0 = self.energy[0]
        return float(np.max(np.abs(self.energy - e0)) / abs(e0))


def default_dt(m: LienardModel) -> float:
    return (2.0 * math.pi / m.omega) / 2000.0


def integrate_orbit(m: LienardModel, x0: float, v0: float, t_end: float,
                    dt: float | None = None) -> Trajectory:
    """Integrate from (x0, v0) to t_end with classical RK4.

    Aborts with IntegrationError if the orbit leaves the domain or, for
    A != 0, approaches the h = 0 singularity.
    """
    if dt is None:
        dt = default_dt(m)
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    m.check_domain(x0)
    nsteps = int(math.ceil(t_end / dt - 1e-12))
    xs = np.empty(nsteps + 1)
    vs = np.empty(nsteps + 1)
    xs[0], vs[0] = x0, v0
    rhs = m.rhs_fn
    xlo, xhi = m.xmin, m.xmax
    guard = SINGULAR_GUARD * m.h_abs_max if m.A != 0.0 else None
    hfn = m.h_fn
    x, v = float(x0), float(v0)
    half = 0.5 * dt
    sixth = dt / 6.0
    for i in range(1, nsteps + 1):
        try:
            a1 = rhs(x, v)
            x2, v2 = x + half * v, v + half * a1
            a2 = rhs(x2, v2)
            x3, v3 = x + half * v2, v + half * a2
            a3 = rhs(x3, v3)
            x4, v4 = x + dt * v3, v + dt * a3
            a4 = rhs(x4, v4)
            x += sixth * (v + 2.0 * v2 + 2.0 * v3 + v4)
            v += sixth * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise IntegrationError(f"integration step failed ({exc})", i * dt) from exc
        if not (xlo <= x <= xhi):
            raise IntegrationError("orbit left the domain", i * dt)
        if guard is not None and hfn(x) < guard:
            raise IntegrationError("orbit approached the h = 0 singularity", i * dt)
        xs[i], vs[i] = x, v
    ts = np.arange(nsteps + 1) * dt
    hp = np.asarray(m.hp_arr(xs)) + np.zeros_like(xs)
    en = 0.5 * hp * hp * vs * vs + m.v_arr(xs)
    return Trajectory(m, ts, xs, vs, en, dt)


def _hermite_root(f0: float, f1: float, d0: float, d1: float, dt: float) -> float:
    """Root (in [0, 1], units of dt) of the cubic Hermite interpolant."""

    def val(sigma: float) -> float:
        h00 = 2 * sigma**3 - 3 * sigma**2 + 1
        h10 = sigma**3 - 2 * sigma**2 + sigma
        h01 = -2 * sigma**3 + 3 * sigma**2
        h11 = sigma**3 - sigma**2
        return h00 * f0 + h10 * dt * d0 + h01 * f1 + h11 * dt * d1

    s0, s1 = 0.0, 1.0
    g0, g1 = f0, f1
    for _ in range(80):
        if g1 == g0:
            break
        sm = s1 - g1 * (s1 - s0) / (g1 - g0)
        if not 0.0 <= sm <= 1.0:
            sm = 0.5 * (s0 + s1)
        gm = val(sm)
        s0, g0, s1, g1 = s1, g1, sm, gm
        if abs(gm) <= 1e-16 * (abs(f0) + abs(f1)) or s0 == s1:
            break
    return s1


def _section_times(tr: Trajectory) -> list[float]:
    """Times of returns to the section anchored at the initial state.

    With v0 != 0 the section is {x = x0, sign(v) = sign(v0)} and crossings
    are transversal in x.  A start at a turning point (v0 = 0) makes that
    section tangential, so the equivalent section {v = 0, sign(a) =
    sign(a0)} is used instead; both are crossed exactly once per period.
    """
    m = tr.model
    x, v, t = tr.x, tr.v, tr.t
    dt = tr.dt
    vscale = float(np.max(np.abs(v)))
    times = []
    if abs(v[0]) > 1e-9 * (vscale + 1.0):
        sign = math.copysign(1.0, v[0])
        g = x - x[0]
        idx = np.nonzero((g[:-1] * g[1:] < 0.0) & (v[:-1] * sign > 0.0) & (v[1:] * sign > 0.0))[0]
        for i in idx:
            sigma = _hermite_root(g[i], g[i + 1], v[i], v[i + 1], dt)
            times.append(t[i] + sigma * dt)
    else:
        a0 = m.rhs_fn(x[0], v[0])
        sign = math.copysign(1.0, a0)
        idx = np.nonzero(v[:-1] * v[1:] < 0.0)[0]
        for i in idx:
            ai = m.rhs_fn(x[i], v[i])
            if math.copysign(1.0, ai) != sign:
                continue
            aj = m.rhs_fn(x[i + 1], v[i + 1])
            sigma = _hermite_root(v[i], v[i + 1], ai, aj, dt)
            times.append(t[i] + sigma * dt)
    return times


def estimate_period(tr: Trajectory) -> float:
    """Mean period from successive section returns (needs >= 3 returns)."""
    times = _section_times(tr)
    if len(times) < 3:
        raise SectionError(
            f"only {len(times)} section returns; integrate at least 3 periods")
    diffs = np.diff(times)
    return float(np.mean(diffs))


def hidden_linearity_residual(m: LienardModel, tr: Trajectory) -> float:
    """Max residual of fitting u = h(x)^2/2 to c0 + c1 cos(2 w t) + c2 sin(2 w t),
    divided by the fitted oscillation amplitude sqrt(c1^2 + c2^2)."""
    h = np.asarray(m.h_arr(tr.x)) + np.zeros_like(tr.x)
    u = 0.5 * h * h
    w2t = 2.0 * m.omega * tr.t
    design = np.column_stack((np.ones_like(tr.t), np.cos(w2t), np.sin(w2t)))
    gram = design.T @ design
    rhs = design.T @ u
    c = np.linalg.solve(gram, rhs)
    amplitude = math.hypot(c[1], c[2])
    if amplitude <= 1e-12 * max(1.0, float(np.max(np.abs(u)))):
        raise DegenerateFitError("oscillation amplitude of h^2/2 is numerically zero")
    residual = float(np.max(np.abs(design @ c - u)))
    return residual / amplitude


def trajectory_csv_rows(tr: Trajectory) -> "list[str]":
    """CSV lines (header + samples) with 17 significant digits."""
    m = tr.model
    h = np.asarray(m.h_arr(tr.x)) + np.zeros_like(tr.x)
    u = 0.5 * h * h
    rows = ["t,x,v,energy,u"]
    for i in range(len(tr.t)):
        rows.append(",".join("%.17g" % val for val in
                             (tr.t[i], tr.x[i], tr.v[i], tr.energy[i], u[i])))
    return rows
