"""Acceptance checks for a configured model, aggregated by the CLI report.

Each check returns a CheckResult with the measured quantity and its
tolerance so that failures are directly actionable.  The checks are
model-parametric: spectra and ladders switch between the harmonic-image
(A = 0) and isotonic-image (A != 0) closed forms automatically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import classical, quantum, symmetry
from .model import LienardModel, build_model
from .rng import DEFAULT_SEED
from .symmetry import noether_classify, sample_points, standard_generators

SPECTRUM_TOL_A0 = 1e-5
SPECTRUM_TOL_A = 1e-4
SPECTRUM_RUNTIME_LIMIT = 10.0
GAP_TOL = 2e-4
LADDER_COEFF_TOL = 1e-11
LADDER_OVERLAP_TOL = 1e-9
RESIDUAL_TOL = 1e-8
DELTA78_TOL = 1e-10
PERIOD_TOL = 1e-6
DRIFT_TOL = 1e-8
HIDDEN_TOL = 1e-6
ORTHO_TOL = 1e-8
VONROOS_TOL = 1e-8
VIOLATION_FLOOR = 1e-3
RATIO_WINDOW = (3.2, 4.8)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _sibling(m: LienardModel, omega: float) -> LienardModel:
    if abs(m.omega - omega) < 1e-12:
        return m
    return build_model(m.h_text, omega, m.A, (m.xmin, m.xmax))


def _canonical_xi0(m: LienardModel) -> float:
    if m.A == 0.0:
        return min(1.0 / math.sqrt(m.omega), 0.45 * min(-m.xi_min, m.xi_max))
    return 1.25 * (-m.A / m.omega**2) ** 0.25


def _amplitude_ladder(m: LienardModel, count: int = 5):
    """xi amplitudes whose energies span a factor 2^(count-1) (16 for 5)."""
    if m.A == 0.0:
        cap = 0.85 * min(-m.xi_min, m.xi_max)
        top = min(4.0 / math.sqrt(m.omega), cap)
        return [top * 2.0 ** (-0.5 * i) for i in range(count)][::-1]
    w2 = m.omega**2
    e_floor = m.omega * math.sqrt(-m.A)  # potential minimum
    e_base = 1.2 * e_floor
    amps = []
    for i in range(count):
        e = e_base * 2.0**i
        xi2 = (e + math.sqrt(e * e + w2 * m.A)) / w2
        amps.append(math.sqrt(xi2))
    if amps[-1] > 0.9 * m.xi_max:
        raise ValueError("domain too small for the amplitude ladder")
    return amps


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------

def check_spectrum(m: LienardModel, n_grid: int, seed: int = DEFAULT_SEED) -> CheckResult:
    levels = 8 if m.A == 0.0 else 6
    tol = SPECTRUM_TOL_A0 if m.A == 0.0 else SPECTRUM_TOL_A
    spec = quantum.compute_spectrum(m, levels, n_grid)
    worst = float(spec.abs_err.max())
    ok = worst <= tol
    detail = f"max |E_num - E_closed| = {worst:.3g} (tol {tol:g}, N={n_grid}, {spec.elapsed:.2f}s)"
    if m.A == 0.0:
        if spec.elapsed >= SPECTRUM_RUNTIME_LIMIT:
            ok = False
            detail += f"; runtime limit {SPECTRUM_RUNTIME_LIMIT:g}s exceeded"
    else:
        closed_gaps = np.diff(spec.closed)
        exact = 2.0 * m.omega
        if float(np.max(np.abs(closed_gaps - exact))) > 1e-12 * exact:
            ok = False
            detail += "; closed-form gap not exactly 2*omega"
        gap_err = float(np.max(np.abs(np.diff(spec.energies) - exact)))
        detail += f"; numerical gap err {gap_err:.3g} (tol {GAP_TOL:g})"
        if gap_err > GAP_TOL:
            ok = False
    return CheckResult("spectrum vs closed form", ok, detail)


def check_ladder(m: LienardModel, seed: int = DEFAULT_SEED) -> CheckResult:
    if m.A == 0.0:
        worst = 0.0
        for n in range(11):
            mine = quantum.ladder_generate(m, n).spatial.coeffs
            ref = quantum.closed_form_eigenfunction(m, n).spatial.coeffs
            top = int(np.argmax(np.abs(ref)))
            scale = ref[top] / mine[top]
            for j in range(len(ref)):
                target = ref[j]
                got = scale * mine[j]
                if target == 0.0:
                    err = abs(got) / float(np.max(np.abs(ref)))
                else:
                    err = abs(got - target) / abs(target)
                worst = max(worst, err)
        gens = quantum.pde_generators(m)
        ground = quantum.closed_form_eigenfunction(m, 0)
        annihilated = quantum.apply_characteristic(m, gens["Omega3+"], ground) is None
        ok = worst <= LADDER_COEFF_TOL and annihilated
        return CheckResult(
            "ladder reproduces closed form", ok,
            f"max coeff rel err (n<=10) = {worst:.3g} (tol {LADDER_COEFF_TOL:g}); "
            f"ground-state annihilation: {annihilated}")
    worst = 0.0
    for n in range(7):
        mine = quantum.ladder_generate(m, n)
        ref = quantum.closed_form_eigenfunction(m, n)
        overlap = quantum.inner_product(m, mine.spatial, ref.spatial)
        worst = max(worst, abs(overlap - 1.0))
    ok = worst <= LADDER_OVERLAP_TOL
    return CheckResult("ladder reproduces closed form", ok,
                       f"max |overlap - 1| (n<=6) = {worst:.3g} (tol {LADDER_OVERLAP_TOL:g})")


def check_classification(m: LienardModel, seed: int = DEFAULT_SEED) -> CheckResult:
    gens = standard_generators(m)
    expected_noether = {"Gamma1", "Gamma2", "Gamma3"}
    if m.A == 0.0:
        expected_noether |= {"Gamma7", "Gamma8"}
        expected_lie_only = {"Gamma4", "Gamma5", "Gamma6"}
        expected_invalid = set()
    else:
        expected_lie_only = set()
        expected_invalid = {"Gamma4", "Gamma5", "Gamma6", "Gamma7", "Gamma8"}
    problems = []
    for g in gens:
        residual = symmetry.max_symmetry_residual(m, g, 100, seed)
        cls = noether_classify(m, g, seed=seed)
        if g.label in expected_noether:
            if residual > RESIDUAL_TOL:
                problems.append(f"{g.label} residual {residual:.2g}")
            if cls != "noether":
                problems.append(f"{g.label} classified {cls}")
        elif g.label in expected_lie_only:
            if residual > RESIDUAL_TOL:
                problems.append(f"{g.label} residual {residual:.2g}")
            if cls != "lie_only":
                problems.append(f"{g.label} classified {cls}")
        else:
            if residual <= VIOLATION_FLOOR:
                problems.append(f"{g.label} residual only {residual:.2g}")
            if cls != "not_symmetry":
                problems.append(f"{g.label} classified {cls}")
    ok = not problems
    detail = "all generators matched expectations" if ok else "; ".join(problems)
    return CheckResult("symmetry classification", ok, detail)


def check_delta78(m: LienardModel, seed: int = DEFAULT_SEED) -> CheckResult:
    worst = 0.0
    for omega in (0.5, 1.0, 2.0):
        sib = _sibling(m, omega)
        target = -(omega**5)
        for (t, x, v) in sample_points(sib, 100, seed, with_v=True):
            hp = sib.hp_fn(x)
            value = symmetry.delta78(sib, t, x, v) * hp * hp
            worst = max(worst, abs(value - target) / abs(target))
    ok = worst <= DELTA78_TOL
    return CheckResult("last-multiplier determinant identity", ok,
                       f"max rel err of det*(h')^2 = -omega^5: {worst:.3g} (tol {DELTA78_TOL:g})")


def check_isochrony(m: LienardModel, seed: int = DEFAULT_SEED) -> CheckResult:
    nominal = 2.0 * math.pi / m.omega
    expected = nominal if m.A == 0.0 else math.pi / m.omega
    periods = []
    for xi0 in _amplitude_ladder(m):
        x0 = m.inverse_h(xi0)
        tr = classical.integrate_orbit(m, x0, 0.0, 5.5 * nominal)
        periods.append(classical.estimate_period(tr))
    periods = np.array(periods)
    spread = float((periods.max() - periods.min()) / periods.mean())
    value_err = float(np.max(np.abs(periods - expected)) / expected)
    x0 = m.inverse_h(_canonical_xi0(m))
    drift = classical.integrate_orbit(m, x0, 0.0, 50.0 * nominal).energy_drift()
    ok = spread <= PERIOD_TOL and value_err <= PERIOD_TOL and drift <= DRIFT_TOL
    return CheckResult(
        "isochrony and energy conservation", ok,
        f"period spread {spread:.3g}, err vs {expected:.6f}: {value_err:.3g} "
        f"(tol {PERIOD_TOL:g}); drift over 50 periods {drift:.3g} (tol {DRIFT_TOL:g})")


def check_hidden_linearity(m: LienardModel, seed: int = DEFAULT_SEED) -> CheckResult:
    x0 = m.inverse_h(_canonical_xi0(m))
    tr = classical.integrate_orbit(m, x0, 0.0, 3.0 * 2.0 * math.pi / m.omega)
    residual = classical.hidden_linearity_residual(m, tr)
    ok = residual <= HIDDEN_TOL
    return CheckResult("hidden linearity of h^2/2", ok,
                       f"normalized 2*omega fit residual {residual:.3g} (tol {HIDDEN_TOL:g})")


def check_closed_form_residuals(m: LienardModel, seed: int = DEFAULT_SEED) -> CheckResult:
    pts = sample_points(m, 50, seed)
    worst = 0.0
    states = [quantum.closed_form_eigenfunction(m, n) for n in range(9)]
    for st in states[:7]:
        for (t, x) in pts:
            worst = max(worst, quantum.pde_residual(m, st, t, x))
    gram_err = 0.0
    for i in range(9):
        for j in range(i, 9):
            val = quantum.inner_product(m, states[i].spatial, states[j].spatial)
            gram_err = max(gram_err, abs(val - (1.0 if i == j else 0.0)))
    ok = worst <= RESIDUAL_TOL and gram_err <= ORTHO_TOL
    return CheckResult(
        "closed-form wave-equation residuals", ok,
        f"max residual psi_0..psi_6 = {worst:.3g} (tol {RESIDUAL_TOL:g}); "
        f"orthonormality err (n<=8) {gram_err:.3g} (tol {ORTHO_TOL:g})")


def check_vonroos(m: LienardModel, seed: int = DEFAULT_SEED) -> CheckResult:
    vr = _sibling(m, 1.0 if m.A == 0.0 else 0.5)
    ground = quantum.closed_form_eigenfunction(vr, 0)
    alpha, beta, gamma = quantum.COMPLIANT_ORDERING
    worst = max(quantum.vonroos_residual(vr, ground, alpha, beta, gamma, t, x)
                for (t, x) in sample_points(vr, 50, seed))
    generic = quantum._probe_x(vr, 0.62)
    violated = quantum.vonroos_residual(vr, ground, 0.0, 0.0, -1.0, 0.3, generic)
    ok = worst <= VONROOS_TOL and violated > VIOLATION_FLOOR
    return CheckResult(
        "ordered position-dependent-mass form", ok,
        f"compliant residual {worst:.3g} (tol {VONROOS_TOL:g}); "
        f"violated ordering residual {violated:.3g} (must exceed {VIOLATION_FLOOR:g})")


def check_convergence_order(m: LienardModel, n_grid: int, seed: int = DEFAULT_SEED) -> CheckResult:
    exact = quantum.closed_form_eigenvalue(m, 0)
    errs = []
    for n in (n_grid, 2 * n_grid):
        H = quantum.build_hamiltonian(m, n)
        errs.append(abs(quantum.lowest_eigenvalues(H, 1)[0] - exact))
    ratio = errs[0] / errs[1]
    ok = RATIO_WINDOW[0] <= ratio <= RATIO_WINDOW[1]
    return CheckResult("second-order eigenvalue convergence", ok,
                       f"ground-state error ratio under doubling {ratio:.2f} "
                       f"(window [{RATIO_WINDOW[0]}, {RATIO_WINDOW[1]}])")


def run_report(m: LienardModel, n_grid: int = quantum.DEFAULT_GRID_N,
               seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Every acceptance check for the configured model, in a fixed order."""
    return [
        check_spectrum(m, n_grid, seed),
        check_ladder(m, seed),
        check_classification(m, seed),
        check_delta78(m, seed),
        check_isochrony(m, seed),
        check_hidden_linearity(m, seed),
        check_closed_form_residuals(m, seed),
        check_vonroos(m, seed),
        check_convergence_order(m, n_grid, seed),
    ]


def report_csv_rows(results: list[CheckResult]) -> list[str]:
    rows = ["check,passed,detail"]
    for r in results:
        detail = r.detail.replace(",", ";")
        rows.append(f"{r.name},{str(r.passed).lower()},{detail}")
    return rows
