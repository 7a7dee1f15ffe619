"""Figure rendering for the CLI's --plot flag (headless matplotlib)."""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_spectrum(spec, path: str) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    n = np.arange(len(spec.energies))
    ax1.plot(n, spec.closed, "k_", markersize=18, label="closed form")
    ax1.plot(n, spec.energies, "C0.", label="grid eigensolver")
    ax1.set_xlabel("level n")
    ax1.set_ylabel("energy")
    ax1.legend()
    ax2.semilogy(n, np.maximum(spec.abs_err, 1e-18), "C3o-")
    ax2.set_xlabel("level n")
    ax2.set_ylabel("|E_num - E_closed|")
    fig.suptitle(f"spectrum, N={spec.n_grid}, x in [{spec.x_range[0]:.3g}, {spec.x_range[1]:.3g}]")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_eigenfunction(x, psi, n: int, path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(x, psi, "C0-")
    ax.set_xlabel("x")
    ax.set_ylabel(f"psi_{n}(x)")
    ax.axhline(0.0, color="0.7", lw=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_trajectory(tr, u, path: str) -> None:
    fig, axes = plt.subplots(3, 1, figsize=(8, 7), sharex=True)
    axes[0].plot(tr.t, tr.x, "C0-")
    axes[0].set_ylabel("x(t)")
    axes[1].plot(tr.t, u, "C2-")
    axes[1].set_ylabel("u = h^2/2")
    drift = tr.energy - tr.energy[0]
    axes[2].plot(tr.t, drift, "C3-")
    axes[2].set_ylabel("E(t) - E(0)")
    axes[2].set_xlabel("t")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_symmetries(labels, residuals, classes, path: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 4))
    colors = {"noether": "C2", "lie_only": "C0", "not_symmetry": "C3"}
    vals = np.maximum(np.asarray(residuals, dtype=float), 1e-18)
    ax.bar(labels, vals, color=[colors[c] for c in classes])
    ax.set_yscale("log")
    ax.axhline(1e-8, color="0.4", ls="--", lw=0.8)
    ax.set_ylabel("max prolongation residual")
    handles = [plt.Rectangle((0, 0), 1, 1, color=c) for c in colors.values()]
    ax.legend(handles, list(colors), fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_ladder(ns, overlap_err, path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.semilogy(ns, np.maximum(np.asarray(overlap_err, dtype=float), 1e-18), "C0o-")
    ax.set_xlabel("level n")
    ax.set_ylabel("deviation from closed form")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_vonroos(labels, residuals, path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(labels, np.maximum(np.asarray(residuals, dtype=float), 1e-18), color="C0")
    ax.set_yscale("log")
    ax.set_ylabel("max wave-equation residual")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_report(results, path: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 0.5 * len(results) + 1))
    ax.axis("off")
    for i, r in enumerate(results):
        color = "C2" if r.passed else "C3"
        ax.text(0.01, 1.0 - (i + 0.5) / len(results), "PASS" if r.passed else "FAIL",
                color=color, fontweight="bold", family="monospace", va="center")
        ax.text(0.12, 1.0 - (i + 0.5) / len(results), r.name, va="center")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
