"""The six reference figures, each a function from input directory to PNG.

Heatmaps show |.|^2 on a linear scale by default; pass log=True for the
amplifying runs whose norm spans decades.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import LogNorm

from .io import SchemaError, load_csv, pivot


def _heatmap(ax, path: Path, kind: str, ylabel: str, log: bool):
    key = {"trajectory": "n", "wavefunction": "phi"}[kind]
    data = load_csv(path, kind)
    taus, ys, grid = pivot(data["tau"], data[key], data["abs2"])
    if log:
        floor = max(grid.max() * 1e-8, 1e-300)
        norm = LogNorm(vmin=floor, vmax=max(grid.max(), 2 * floor))
        grid = np.maximum(grid, floor)
    else:
        norm = None
    mesh = ax.pcolormesh(taus, ys, grid.T, shading="nearest", cmap="inferno", norm=norm, rasterized=True)
    ax.set_xlabel(r"$\tau$")
    ax.set_ylabel(ylabel)
    plt.colorbar(mesh, ax=ax, pad=0.02)


def _panel_pair(indir: Path, names: tuple[str, str], out: Path, log: bool):
    """Two runs (downward/upward ramp), momentum left, real space right."""
    fig, axes = plt.subplots(2, 2, figsize=(9.5, 7), constrained_layout=True)
    for row, name in enumerate(names):
        run = indir / name
        _heatmap(axes[row, 0], run / "trajectory.csv", "trajectory", r"winding number $n$", log)
        _heatmap(axes[row, 1], run / "wavefunction.csv", "wavefunction", r"$\varphi$", log)
        axes[row, 0].set_title(f"({'ab'[row]}) {name}: $|c_n(\\tau)|^2$")
        axes[row, 1].set_title(f"({'ab'[row]}) {name}: $|\\psi(\\varphi,\\tau)|^2$")
    fig.savefig(out, dpi=150)
    plt.close(fig)


def fig1b(indir: Path, out: Path, log: bool = False):
    """Diabatic parabola family (solid) with the instantaneous levels (dotted)."""
    levels = load_csv(indir / "levels.csv", "levels")
    adiab = load_csv(indir / "adiabatic.csv", "adiabatic")
    fig, ax = plt.subplots(figsize=(7, 5), constrained_layout=True)
    taus, ns, grid = pivot(levels["tau"], levels["n"], levels["e_diabatic"])
    for j, n in enumerate(ns):
        ax.plot(taus, grid[:, j], "-", lw=1.2, color="tab:blue")
    t2, bands, e2 = pivot(adiab["tau"], adiab["band"], adiab["re_E"])
    for j in range(len(bands)):
        ax.plot(t2, e2[:, j], ":", lw=1.4, color="tab:red")
    ax.set_ylim(-0.05, min(grid.max(), 4.0))
    ax.set_xlabel(r"$\tau$")
    ax.set_ylabel(r"$E$")
    ax.set_title("diabatic (solid) vs instantaneous (dotted) levels")
    fig.savefig(out, dpi=150)
    plt.close(fig)


def fig2(indir: Path, out: Path, log: bool = False):
    """Hermitian drift for both ramp directions."""
    _panel_pair(indir, ("fig2a", "fig2b"), out, log)


def fig3(indir: Path, out: Path, log: bool = False):
    """Below the breaking point: drift with damping or amplification."""
    _panel_pair(indir, ("fig3a", "fig3b"), out, log)


def fig4(indir: Path, out: Path, log: bool = False):
    """Maximally non-Hermitian ring: frozen vs cascading occupation."""
    _panel_pair(indir, ("fig4a", "fig4b"), out, log)


def fig5(indir: Path, out: Path, log: bool = False):
    """Delayed transparency: full-potential run in momentum and real space."""
    fig, axes = plt.subplots(1, 2, figsize=(9.5, 4), constrained_layout=True)
    _heatmap(axes[0], indir / "trajectory_full.csv", "trajectory", r"winding number $n$", log)
    _heatmap(axes[1], indir / "wavefunction_full.csv", "wavefunction", r"$\varphi$", log)
    axes[0].set_title(r"(a) $|c_n(\tau)|^2$")
    axes[1].set_title(r"(b) $|\psi(\varphi,\tau)|^2$")
    fig.savefig(out, dpi=150)
    plt.close(fig)


def fig5c(indir: Path, out: Path, log: bool = False):
    """Overlap trace: Re psi(0, tau) with the potential kept on vs switched off."""
    data = load_csv(indir / "overlap.csv", "overlap")
    fig, ax = plt.subplots(figsize=(8, 4), constrained_layout=True)
    ax.plot(data["tau"], data["re_psi0_full"], "-", lw=1.2, color="tab:blue", label="potential on")
    ax.plot(data["tau"], data["re_psi0_off"], ":", lw=1.8, color="tab:orange", label="switched off past T")
    ax.set_xlabel(r"$\tau$")
    ax.set_ylabel(r"$\mathrm{Re}\,\psi(0,\tau)$")
    ax.legend(loc="upper right")
    fig.savefig(out, dpi=150)
    plt.close(fig)


FIGURES = {
    "fig1b": fig1b,
    "fig2": fig2,
    "fig3": fig3,
    "fig4": fig4,
    "fig5": fig5,
    "fig5c": fig5c,
}


def render(name: str, indir, out, log: bool = False) -> Path:
    """Render one named figure; the PNG is written only on success."""
    if name not in FIGURES:
        raise SchemaError(f"unknown figure {name!r}; choose from {sorted(FIGURES)}")
    indir, out = Path(indir), Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = out.with_name(out.stem + ".part" + out.suffix)
    try:
        FIGURES[name](indir, tmp, log=log)
    except Exception:
        tmp.unlink(missing_ok=True)
        raise
    tmp.replace(out)
    return out
