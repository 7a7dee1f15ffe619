"""Command-line driver: config loading, subcommands, CSV and figure output.

Subcommands: spectrum, eigenfunction, classical, symmetries, ladder,
vonroos, report.  Every run is reproducible: all sampling derives from the
seed in the config file, CSV output uses 17 significant digits, and repeated
runs produce byte-identical files.  Exit codes: 0 success, 1 failed check
or runtime error, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import classical, quantum, report as report_mod, symmetry
from .expr import ExprError
from .model import LienardModel, ModelError, build_model
from .rng import DEFAULT_SEED


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    h: str
    omega: float
    A: float
    xmin: float
    xmax: float
    n: int
    levels: int = 8
    seed: int = DEFAULT_SEED


_REQUIRED = ("model.h", "model.omega", "model.A", "domain.xmin", "domain.xmax", "grid.n")
_OPTIONAL = ("levels", "seed")


def load_config(path: str) -> Config:
    """Parse `section.key = value` lines; '#' comments and blanks ignored."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: malformed line (expected key = value)")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _REQUIRED and key not in _OPTIONAL:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"{path}:{lineno}: empty value for {key!r}")
        values[key] = value
    for key in _REQUIRED:
        if key not in values:
            raise ConfigError(f"{path}: missing required key {key!r}")

    def as_float(key: str) -> float:
        try:
            return float(values[key])
        except ValueError as exc:
            raise ConfigError(f"{path}: {key} is not a number: {values[key]!r}") from exc

    def as_int(key: str, default: int | None = None) -> int:
        if key not in values:
            return default
        try:
            return int(values[key], 0)
        except ValueError as exc:
            raise ConfigError(f"{path}: {key} is not an integer: {values[key]!r}") from exc

    cfg = Config(
        h=values["model.h"],
        omega=as_float("model.omega"),
        A=as_float("model.A"),
        xmin=as_float("domain.xmin"),
        xmax=as_float("domain.xmax"),
        n=as_int("grid.n"),
        levels=as_int("levels", 8),
        seed=as_int("seed", DEFAULT_SEED),
    )
    if cfg.n < 200:
        raise ConfigError(f"{path}: grid.n must be >= 200 (got {cfg.n})")
    if not 1 <= cfg.levels <= 20:
        raise ConfigError(f"{path}: levels must be between 1 and 20 (got {cfg.levels})")
    return cfg


def _build(cfg: Config) -> LienardModel:
    return build_model(cfg.h, cfg.omega, cfg.A, (cfg.xmin, cfg.xmax))


def _write_rows(path: str, rows: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(rows) + "\n")


def _png_path(out: str) -> str:
    return str(Path(out).with_suffix(".png"))


def _fmt(v: float) -> str:
    return "%.17g" % v


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_spectrum(cfg: Config, args) -> int:
    m = _build(cfg)
    levels = args.levels or cfg.levels
    spec = quantum.compute_spectrum(m, levels, cfg.n)
    _write_rows(args.out, quantum.spectrum_csv_rows(spec))
    print(f"wrote {args.out}: {levels} levels, max |err| = {spec.abs_err.max():.3g} "
          f"({spec.elapsed:.2f}s)")
    if args.plot:
        from . import plots
        plots.save_spectrum(spec, _png_path(args.out))
        print(f"wrote {_png_path(args.out)}")
    return 0


def _cmd_eigenfunction(cfg: Config, args) -> int:
    m = _build(cfg)
    n = args.n
    H = quantum.build_hamiltonian(m, cfg.n, n_max=max(n + 2, 8))
    energy = quantum.lowest_eigenvalues(H, n + 1)[n]
    psi = quantum.eigenvector(H, energy)
    x = H.x_interior
    _write_rows(args.out, quantum.eigenfunction_csv_rows(m, x, psi))
    print(f"wrote {args.out}: level {n}, E = {energy!r}")
    if args.plot:
        from . import plots
        plots.save_eigenfunction(x, psi, n, _png_path(args.out))
        print(f"wrote {_png_path(args.out)}")
    return 0


def _cmd_classical(cfg: Config, args) -> int:
    m = _build(cfg)
    x0 = args.x0 if args.x0 is not None else m.inverse_h(report_mod._canonical_xi0(m))
    t_end = args.periods * 2.0 * math.pi / m.omega
    tr = classical.integrate_orbit(m, x0, args.v0, t_end)
    _write_rows(args.out, classical.trajectory_csv_rows(tr))
    try:
        period = classical.estimate_period(tr)
        period_info = f"period = {period!r}"
    except classical.SectionError as exc:
        period_info = f"period unavailable ({exc})"
    print(f"wrote {args.out}: {len(tr.t)} samples, {period_info}, "
          f"energy drift = {tr.energy_drift():.3g}")
    if args.plot:
        from . import plots
        h = np.asarray(m.h_arr(tr.x)) + np.zeros_like(tr.x)
        plots.save_trajectory(tr, 0.5 * h * h, _png_path(args.out))
        print(f"wrote {_png_path(args.out)}")
    return 0


def _cmd_symmetries(cfg: Config, args) -> int:
    m = _build(cfg)
    rows = symmetry.classification_csv_rows(m, seed=cfg.seed)
    _write_rows(args.out, rows)
    for row in rows:
        print(row)
    if args.plot:
        from . import plots
        parts = [row.split(",") for row in rows[1:]]
        plots.save_symmetries([p[0] for p in parts], [float(p[1]) for p in parts],
                              [p[2] for p in parts], _png_path(args.out))
        print(f"wrote {_png_path(args.out)}")
    return 0


def _cmd_ladder(cfg: Config, args) -> int:
    m = _build(cfg)
    levels = args.levels or cfg.levels
    rows = ["n,energy,overlap_with_closed_form"]
    ns, devs = [], []
    for n in range(levels):
        state = quantum.ladder_generate(m, n)
        ref = quantum.closed_form_eigenfunction(m, n)
        overlap = quantum.inner_product(m, state.spatial, ref.spatial)
        rows.append(f"{n},{_fmt(state.energy)},{_fmt(overlap)}")
        ns.append(n)
        devs.append(abs(overlap - 1.0))
    _write_rows(args.out, rows)
    print(f"wrote {args.out}: max |overlap - 1| = {max(devs):.3g}")
    if args.plot:
        from . import plots
        plots.save_ladder(ns, devs, _png_path(args.out))
        print(f"wrote {_png_path(args.out)}")
    return 0


def _cmd_vonroos(cfg: Config, args) -> int:
    m = _build(cfg)
    vr = report_mod._sibling(m, 1.0 if m.A == 0.0 else 0.5)
    ground = quantum.closed_form_eigenfunction(vr, 0)
    orderings = [quantum.COMPLIANT_ORDERING, (0.0, 0.0, -1.0), (-0.5, 0.0, -0.5)]
    pts = symmetry.sample_points(vr, 50, cfg.seed)
    rows = ["alpha,beta,gamma,max_residual"]
    labels, worsts = [], []
    for (alpha, beta, gamma) in orderings:
        worst = max(quantum.vonroos_residual(vr, ground, alpha, beta, gamma, t, x)
                    for (t, x) in pts)
        rows.append(f"{_fmt(alpha)},{_fmt(beta)},{_fmt(gamma)},{_fmt(worst)}")
        labels.append(f"({alpha:g},{beta:g},{gamma:g})")
        worsts.append(worst)
    _write_rows(args.out, rows)
    print(f"wrote {args.out}: compliant residual {worsts[0]:.3g}, "
          f"violated {max(worsts[1:]):.3g}")
    if args.plot:
        from . import plots
        plots.save_vonroos(labels, worsts, _png_path(args.out))
        print(f"wrote {_png_path(args.out)}")
    return 0


def _cmd_report(cfg: Config, args) -> int:
    m = _build(cfg)
    results = report_mod.run_report(m, cfg.n, cfg.seed)
    for r in results:
        print(r.line())
    if args.out:
        _write_rows(args.out, report_mod.report_csv_rows(results))
        print(f"wrote {args.out}")
    if args.plot and args.out:
        from . import plots
        plots.save_report(results, _png_path(args.out))
        print(f"wrote {_png_path(args.out)}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


_COMMANDS = {
    "spectrum": (_cmd_spectrum, "numerical vs closed-form eigenvalues"),
    "eigenfunction": (_cmd_eigenfunction, "grid eigenfunction of one level"),
    "classical": (_cmd_classical, "integrate an orbit and export it"),
    "symmetries": (_cmd_symmetries, "prolongation residuals and classification"),
    "ladder": (_cmd_ladder, "ladder-generated states vs closed forms"),
    "vonroos": (_cmd_vonroos, "ordered kinetic-term cross-check"),
    "report": (_cmd_report, "run every acceptance check"),
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qlienard",
                                     description="isochronous oscillator family toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in _COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to the model config file")
        p.add_argument("--out", default=None, help="output CSV path")
        p.add_argument("--levels", type=int, default=None, help="override levels")
        p.add_argument("--plot", action="store_true",
                       help="render a PNG figure beside the CSV")
        if name == "eigenfunction":
            p.add_argument("--n", type=int, default=0, help="level index (default 0)")
        if name == "classical":
            p.add_argument("--x0", type=float, default=None, help="initial position")
            p.add_argument("--v0", type=float, default=0.0, help="initial velocity")
            p.add_argument("--periods", type=float, default=3.0,
                           help="duration in units of 2 pi/omega")
    return parser


def run(argv: list[str]) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    if args.out is None:
        args.out = f"{args.command}.csv" if args.command != "report" else None
    try:
        cfg = load_config(args.config)
        handler = _COMMANDS[args.command][0]
    except (ConfigError, ExprError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return handler(cfg, args)
    except (ConfigError, ExprError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (classical.IntegrationError, classical.SectionError,
            quantum.CoverageError, quantum.LadderError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
