"""Deterministic CSV and manifest writers.

Numbers are written with Python's shortest round-trip representation, so an
identical run configuration reproduces identical bytes while losing no
precision.  Wall-clock data goes only into the manifest, never into CSVs.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .dynamics import Trajectory, reconstruct_wavefunction
from .lz import LZEvent
from .spectrum import BandStructure, EPReport


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def _write_rows(path: Path, header: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def write_band_csv(path, bs: BandStructure) -> None:
    """Columns: f, band, re_E, im_E."""

    def rows():
        for k, f in enumerate(bs.f_grid):
            for b in range(bs.bands.shape[0]):
                e = bs.bands[b, k]
                yield (f, b, e.real, e.imag)

    _write_rows(path, ["f", "band", "re_E", "im_E"], rows())


def write_ep_csv(path, reports: list[EPReport]) -> None:
    """Columns: f_star, band_i, band_j, gap, coalescence_metric."""
    _write_rows(
        path,
        ["f_star", "band_i", "band_j", "gap", "coalescence_metric"],
        ((r.f_star, r.pair[0], r.pair[1], r.gap, r.coalescence_metric) for r in reports),
    )


def write_trajectory_csv(path, traj: Trajectory) -> None:
    """Columns: tau, n, re_c, im_c, abs2."""

    def rows():
        ns = traj.window.ns
        for k, t in enumerate(traj.taus):
            for i, n in enumerate(ns):
                c = traj.amps[k, i]
                yield (t, n, c.real, c.imag, abs(c) ** 2)

    _write_rows(path, ["tau", "n", "re_c", "im_c", "abs2"], rows())


def write_wavefunction_csv(path, traj: Trajectory, phis: np.ndarray) -> None:
    """Columns: tau, phi, re_psi, im_psi, abs2."""
    basis = np.exp(1j * np.outer(phis, traj.window.ns)) / math.sqrt(2.0 * math.pi)

    def rows():
        for k, t in enumerate(traj.taus):
            psi = basis @ traj.amps[k]
            for j, phi in enumerate(phis):
                yield (t, phi, psi[j].real, psi[j].imag, abs(psi[j]) ** 2)

    _write_rows(path, ["tau", "phi", "re_psi", "im_psi", "abs2"], rows())


def write_levels_csv(path, taus: np.ndarray, ns, sigma: float) -> None:
    """Diabatic parabola family E_n(tau) = (n - sigma tau)^2; columns tau, n, e_diabatic."""

    def rows():
        for t in taus:
            for n in ns:
                yield (t, n, (n - sigma * t) ** 2)

    _write_rows(path, ["tau", "n", "e_diabatic"], rows())


def write_adiabatic_csv(path, taus: np.ndarray, levels: np.ndarray) -> None:
    """Instantaneous eigenvalues along a ramp; columns tau, band, re_E, im_E."""

    def rows():
        for k, t in enumerate(taus):
            for b in range(levels.shape[1]):
                e = levels[k, b]
                yield (t, b, e.real, e.imag)

    _write_rows(path, ["tau", "band", "re_E", "im_E"], rows())


def write_lz_events_csv(path, events: list[LZEvent]) -> None:
    """Columns: n, tau_n, p_zener."""
    _write_rows(path, ["n", "tau_n", "p_zener"], ((e.n, e.tau_n, e.p_zener) for e in events))


def write_lz_scan_csv(path, rows: list[dict]) -> None:
    """Columns: s1, s2, sigma, exponent, p_theory, p_numeric."""
    _write_rows(
        path,
        ["s1", "s2", "sigma", "exponent", "p_theory", "p_numeric"],
        ((r["s1"], r["s2"], r["sigma"], r["exponent"], r["p_theory"], r["p_numeric"]) for r in rows),
    )


def write_overlap_csv(path, taus: np.ndarray, re_full: np.ndarray, re_off: np.ndarray) -> None:
    """Real part of psi(0, tau) for the full vs switched-off runs."""
    _write_rows(
        path,
        ["tau", "re_psi0_full", "re_psi0_off", "abs_diff"],
        ((t, a, b, abs(a - b)) for t, a, b in zip(taus, re_full, re_off)),
    )


def write_manifest(path, config: dict, metrics: dict, wall_time_s: float, version: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {
        "config": config,
        "metrics": metrics,
        "version": version,
        "wall_time_s": wall_time_s,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, default=float)
        fh.write("\n")


def psi_at_phi0(traj: Trajectory) -> np.ndarray:
    """psi(phi=0, tau) along a trajectory."""
    return np.array([reconstruct_wavefunction(s, 0.0)[0] for s in traj.states])
