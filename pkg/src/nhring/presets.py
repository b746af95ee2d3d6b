"""Compiled-in run configurations reproducing the reference scenarios.

Every preset is a plain JSON-compatible tree; ``nhring preset dump <name>``
prints it verbatim so runs stay auditable.  The momentum-drift runs use the
shallow cosine/sine potential with a slowly ramped flux; the `a` variants
ramp downward (sigma < 0), the `b` variants upward.
"""

from __future__ import annotations

import copy

import numpy as np

from .errors import ConfigError

_SIGMA = 0.003

PRESETS: dict[str, dict] = {
    # Level diagram of the ramped chain: diabatic parabolas + instantaneous spectrum.
    "fig1b": {
        "command": "spectrum",
        "potential": {"v0": 0.08, "alpha": 0.3},
        "flux": {"kind": "ramp", "sigma": _SIGMA, "tau0": 0.0},
        "window": [-16, 16],
        "f_samples": 101,
        "ep_search": None,
        "levels": {"n_range": [-2, 6], "tau_span": [0.0, 1200.0], "samples": 241, "n_bands": 9},
    },
    # Spectrum of the maximally non-Hermitian ring: free-particle bands with
    # coalescences at half-integer and integer flux.
    "ep-alpha1": {
        "command": "spectrum",
        "potential": {"v0": 0.02, "alpha": 1.0},
        "flux": {"kind": "static", "f0": 0.0},
        "window": [-16, 16],
        "f_samples": 101,
        "ep_search": [0.0, 2.0],
    },
    # Hermitian drift: reversal of the ramp mirrors the motion.
    "fig2a": {
        "command": "evolve",
        "potential": {"v0": 0.08, "alpha": 0.0},
        "flux": {"kind": "ramp", "sigma": -_SIGMA, "tau0": 0.0},
        "window": "auto",
        "initial": {"kind": "delta", "n0": 0},
        "tau_span": [0.0, 2000.0],
        "samples": 400,
        "phi_points": 192,
        "propagator": {"rtol": 1e-9, "atol": 1e-12, "boundary_guard": 1e-8},
        "outputs": ["trajectory", "wavefunction"],
    },
    # Below the breaking point: drift plus damping or amplification.
    "fig3a": None,  # filled below
    "fig3b": None,
    "fig4a": None,
    "fig4b": None,
    "fig2b": None,
    # Delayed transparency protocol.
    "fig5": {
        "command": "transparency",
        "potential": {"v0": 0.02, "alpha": 1.0},
        "sigma": -_SIGMA,
        "M": -7,
        "T_target": 1200.0,
        "window": [-12, 6],
        "initial": {"kind": "gaussian", "center": -4.0, "width": 3.0, "truncate_below": -7},
        "tau_span": [0.0, 2000.0],
        "samples": 400,
        "phi_points": 192,
        "propagator": {"rtol": 1e-9, "atol": 1e-12, "boundary_guard": 1e-8},
        "outputs": ["trajectory", "wavefunction"],
    },
    # Tunneling probability: closed form against the numerical crossing.
    "lzscan": {
        "command": "lz-scan",
        "pairs": [
            {"s1": 0.08, "s2": 0.08},
            {"s1": 0.104, "s2": 0.056},
        ],
        "sigmas": [round(s, 10) for s in np.geomspace(0.001, 0.05, 9)],
        "events": {"s1": 0.08, "s2": 0.08, "sigma": _SIGMA, "n_range": [-8, 8]},
    },
}


def _evolve_preset(v0: float, alpha: float, sigma: float) -> dict:
    cfg = copy.deepcopy(PRESETS["fig2a"])
    cfg["potential"] = {"v0": v0, "alpha": alpha}
    cfg["flux"] = {"kind": "ramp", "sigma": sigma, "tau0": 0.0}
    return cfg


PRESETS["fig2b"] = _evolve_preset(0.08, 0.0, +_SIGMA)
PRESETS["fig3a"] = _evolve_preset(0.08, 0.3, -_SIGMA)
PRESETS["fig3b"] = _evolve_preset(0.08, 0.3, +_SIGMA)
PRESETS["fig4a"] = _evolve_preset(0.02, 1.0, -_SIGMA)
PRESETS["fig4b"] = _evolve_preset(0.02, 1.0, +_SIGMA)


def get_preset(name: str) -> dict:
    try:
        return copy.deepcopy(PRESETS[name])
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise ConfigError(f"unknown preset {name!r}; available: {known}") from None
