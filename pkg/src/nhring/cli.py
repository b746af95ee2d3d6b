"""Command-line front end.

Subcommands: ``spectrum``, ``evolve``, ``transparency``, ``lz-scan`` and
``preset dump <name>``.  A run is configured either by ``--preset <name>``
(compiled-in, dumpable) or ``--config <file.json>``; the ``--window``,
``--rtol``, ``--atol`` and ``--samples`` flags override the loaded values.
Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .csvio import (
    psi_at_phi0,
    write_adiabatic_csv,
    write_band_csv,
    write_ep_csv,
    write_levels_csv,
    write_lz_events_csv,
    write_lz_scan_csv,
    write_manifest,
    write_overlap_csv,
    write_trajectory_csv,
    write_wavefunction_csv,
)
from .dynamics import PropagatorConfig, Trajectory, auto_window, evolve
from .errors import ConfigError, InvalidParameterError, NhringError, NumericalError
from .lz import crossing_times, lz_probability, lz_transition_probability, plan_transparency
from .model import FluxProgram, ModeWindow, Picture, RingPotential, WaveState, make_reference_potential
from .presets import get_preset
from .spectrum import band_sweep, build_hamiltonian, eigensolve, locate_exceptional_points
from .presets import PRESETS


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------


def _parse_potential(cfg: dict) -> RingPotential:
    spec = cfg.get("potential")
    if not isinstance(spec, dict):
        raise ConfigError("config needs a 'potential' table")
    if "coeffs" in spec:
        coeffs = {}
        for key, val in spec["coeffs"].items():
            re, im = val
            coeffs[int(key)] = complex(re, im)
        return RingPotential(coeffs=coeffs)
    try:
        return make_reference_potential(float(spec["v0"]), float(spec["alpha"]))
    except KeyError as exc:
        raise ConfigError(f"potential table missing {exc}") from None


def _parse_flux(spec: dict) -> FluxProgram:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("flux table needs a 'kind'")
    if spec["kind"] == "static":
        return FluxProgram.static(float(spec["f0"]))
    if spec["kind"] == "ramp":
        return FluxProgram.ramp(float(spec["sigma"]), float(spec.get("tau0", 0.0)))
    raise ConfigError(f"unknown flux kind {spec['kind']!r}")


def _parse_initial_amps(spec: dict) -> dict[int, complex]:
    """Initial amplitudes as a window-independent mapping, normalized."""
    kind = spec.get("kind")
    if kind == "delta":
        return {int(spec["n0"]): 1.0 + 0j}
    if kind == "gaussian":
        center = float(spec["center"])
        width = float(spec["width"])
        if width <= 0:
            raise ConfigError("gaussian width must be positive")
        cutoff = spec.get("truncate_below")
        lo = int(math.floor(center - 8 * width))
        hi = int(math.ceil(center + 8 * width))
        amps = {}
        for n in range(lo, hi + 1):
            if cutoff is not None and n <= int(cutoff):
                continue
            a = math.exp(-((n - center) ** 2) / width**2)
            if a > 0:
                amps[n] = complex(a)
        nrm = math.sqrt(sum(abs(a) ** 2 for a in amps.values()))
        return {n: a / nrm for n, a in amps.items()}
    if kind == "explicit":
        amps = {int(k): complex(v[0], v[1]) for k, v in spec["amps"].items()}
        if not amps:
            raise ConfigError("explicit initial state is empty")
        return amps
    raise ConfigError(f"unknown initial state kind {kind!r}")


def _parse_window(cfg: dict, flux: FluxProgram, initial: dict[int, complex] | None, tau_span) -> ModeWindow:
    spec = cfg.get("window", "auto")
    if spec == "auto":
        if initial is None:
            raise ConfigError("window 'auto' needs an initial state")
        return auto_window(initial, flux, tau_span)
    try:
        lo, hi = spec
        return ModeWindow(int(lo), int(hi))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad window spec {spec!r}: {exc}") from None


def _initial_state(amps: dict[int, complex], window: ModeWindow, tau: float) -> WaveState:
    vec = np.zeros(window.size, complex)
    dropped = 0.0
    for n, a in amps.items():
        if not (window.n_min <= n <= window.n_max):
            dropped += abs(a) ** 2
            if abs(a) ** 2 > 1e-12:  # same mass budget the auto window uses
                raise ConfigError(
                    f"initial amplitude at n={n} (probability {abs(a)**2:.2e}) falls outside "
                    f"window [{window.n_min}, {window.n_max}]"
                )
            continue
        vec[window.index(n)] = a
    nrm = np.linalg.norm(vec)
    if nrm == 0:
        raise ConfigError("initial state has no support inside the window")
    return WaveState(tau=tau, window=window, amps=vec / nrm, picture=Picture.DIRECT)


def _propagator(cfg: dict) -> PropagatorConfig:
    table = dict(cfg.get("propagator", {}))
    try:
        return PropagatorConfig(**table)
    except TypeError as exc:
        raise ConfigError(f"bad propagator table: {exc}") from None


def _phi_grid(cfg: dict) -> np.ndarray:
    n = int(cfg.get("phi_points", 192))
    if n < 8:
        raise ConfigError("phi_points must be at least 8")
    return np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)


# ---------------------------------------------------------------------------
# Command runners (importable; the CLI is a thin shell around these)
# ---------------------------------------------------------------------------


def run_spectrum(cfg: dict, outdir: Path) -> dict:
    p = _parse_potential(cfg)
    window = _parse_window(cfg, None, None, None) if cfg.get("window", "auto") != "auto" else ModeWindow(-16, 16)
    n_f = int(cfg.get("f_samples", 101))
    bs = band_sweep(p, window, n_f)
    write_band_csv(outdir / "bands.csv", bs)

    metrics: dict = {"max_im": bs.max_im, "f_samples": n_f}
    ep_range = cfg.get("ep_search")
    reports = []
    if ep_range is not None:
        reports = locate_exceptional_points(
            p,
            window,
            (float(ep_range[0]), float(ep_range[1])),
            gap_tol=float(cfg.get("ep_gap_tol", 1e-6)),
            vec_tol=float(cfg.get("ep_vec_tol", 1e-4)),
        )
    write_ep_csv(outdir / "eps.csv", reports)
    metrics["exceptional_points"] = [r.f_star for r in reports]

    flux_spec = cfg.get("flux", {"kind": "static", "f0": 0.0})
    flux = _parse_flux(flux_spec)
    if flux.kind == "ramp":
        lv = cfg.get("levels", {})
        lo, hi = lv.get("n_range", [-2, 6])
        t0, t1 = lv.get("tau_span", [0.0, 1200.0])
        taus = np.linspace(float(t0), float(t1), int(lv.get("samples", 241)))
        ns = range(int(lo), int(hi) + 1)
        write_levels_csv(outdir / "levels.csv", taus, ns, flux.sigma)
        n_bands = int(lv.get("n_bands", 9))
        levels = np.empty((len(taus), n_bands), complex)
        for k, t in enumerate(taus):
            sol = eigensolve(build_hamiltonian(p, float(flux(t)), window))
            levels[k] = sol.eigenvalues[:n_bands]
        write_adiabatic_csv(outdir / "adiabatic.csv", taus, levels)
        metrics["levels_tau_span"] = [float(t0), float(t1)]
    return metrics


def run_evolve(cfg: dict, outdir: Path) -> dict:
    p = _parse_potential(cfg)
    flux = _parse_flux(cfg["flux"])
    tau_span = tuple(float(t) for t in cfg.get("tau_span", [0.0, 1000.0]))
    amps = _parse_initial_amps(cfg.get("initial", {"kind": "delta", "n0": 0}))
    window = _parse_window(cfg, flux, amps, tau_span)
    state = _initial_state(amps, window, tau_span[0])
    traj = evolve(p, flux, window, state, tau_span, _propagator(cfg), taus=int(cfg.get("samples", 400)))

    outputs = cfg.get("outputs", ["trajectory", "wavefunction"])
    if "trajectory" in outputs:
        write_trajectory_csv(outdir / "trajectory.csv", traj)
    if "wavefunction" in outputs:
        write_wavefunction_csv(outdir / "wavefunction.csv", traj, _phi_grid(cfg))
    return {
        "window": [window.n_min, window.n_max],
        "norm_initial": float(traj.norms[0]),
        "norm_final": float(traj.norms[-1]),
        "max_norm_drift": float(np.abs(traj.norms - traj.norms[0]).max()),
        "mean_winding_final": float(traj.mean_winding[-1]),
    }


def _switched_off_run(
    p: RingPotential,
    flux: FluxProgram,
    window: ModeWindow,
    state: WaveState,
    t_grid: np.ndarray,
    t_switch: float,
    cfg_prop: PropagatorConfig,
) -> Trajectory:
    """Potential on until t_switch, then exactly zero; sampled on t_grid."""
    pre = t_grid[t_grid <= t_switch]
    post = t_grid[t_grid > t_switch]
    traj1 = evolve(p, flux, window, state, (t_grid[0], t_switch), cfg_prop, taus=pre)
    final = WaveState(tau=t_switch, window=window, amps=traj1.amps[-1], picture=state.picture)
    # traj1's last sample is t_switch itself (pre includes it by construction)
    free = RingPotential(coeffs={})
    traj2 = evolve(free, flux, window, final, (t_switch, t_grid[-1]), cfg_prop, taus=np.concatenate(([t_switch], post)))
    taus = np.concatenate([traj1.taus, traj2.taus[1:]])
    amps = np.vstack([traj1.amps, traj2.amps[1:]])
    probs = np.abs(amps) ** 2
    norms = probs.sum(axis=1)
    mean_w = (probs @ window.ns) / norms
    return Trajectory(window=window, taus=taus, amps=amps, norms=norms, mean_winding=mean_w)


def run_transparency(cfg: dict, outdir: Path) -> dict:
    p = _parse_potential(cfg)
    sigma = float(cfg["sigma"])
    plan = plan_transparency(int(cfg["M"]), sigma, float(cfg["T_target"]))
    flux = FluxProgram.ramp(plan.sigma, plan.tau0)
    tau_span = tuple(float(t) for t in cfg.get("tau_span", [0.0, plan.T + 800.0]))
    if tau_span[1] <= plan.T:
        raise ConfigError(f"tau_span must extend past the transparency time T = {plan.T}")
    amps = _parse_initial_amps(cfg["initial"])
    window = _parse_window(cfg, flux, amps, tau_span)
    state = _initial_state(amps, window, tau_span[0])
    prop = _propagator(cfg)

    n_samples = int(cfg.get("samples", 400))
    t_grid = np.union1d(np.linspace(tau_span[0], tau_span[1], n_samples), [plan.T])

    traj_full = evolve(p, flux, window, state, tau_span, prop, taus=t_grid)
    traj_off = _switched_off_run(p, flux, window, state, t_grid, plan.T, prop)

    write_trajectory_csv(outdir / "trajectory_full.csv", traj_full)
    write_trajectory_csv(outdir / "trajectory_off.csv", traj_off)
    phis = _phi_grid(cfg)
    outputs = cfg.get("outputs", ["trajectory", "wavefunction"])
    if "wavefunction" in outputs:
        write_wavefunction_csv(outdir / "wavefunction_full.csv", traj_full, phis)
        write_wavefunction_csv(outdir / "wavefunction_off.csv", traj_off, phis)

    psi_full = psi_at_phi0(traj_full)
    psi_off = psi_at_phi0(traj_off)
    write_overlap_csv(outdir / "overlap.csv", t_grid, psi_full.real, psi_off.real)

    after = t_grid >= plan.T
    k_T = int(np.argmax(t_grid >= plan.T))
    occ_T = np.abs(traj_full.amps[k_T])
    occ_change = float(np.abs(np.abs(traj_full.amps[after]) - occ_T).max())
    peak = float(np.abs(psi_full.real[after]).max())
    overlap_dev = float(np.abs(psi_full.real[after] - psi_off.real[after]).max())
    return {
        "tau0": plan.tau0,
        "T": plan.T,
        "M": plan.M,
        "window": [window.n_min, window.n_max],
        "max_occupation_change_after_T": occ_change,
        "re_psi0_peak_after_T": peak,
        "max_overlap_deviation": overlap_dev,
        "overlap_deviation_fraction": overlap_dev / peak if peak > 0 else float("nan"),
    }


def run_lz_scan(cfg: dict, outdir: Path) -> dict:
    pairs = cfg.get("pairs")
    sigmas = cfg.get("sigmas")
    if not pairs or not sigmas:
        raise ConfigError("lz-scan config needs 'pairs' and 'sigmas'")
    rows = []
    worst = 0.0
    for pair in pairs:
        s1, s2 = float(pair["s1"]), float(pair["s2"])
        for sigma in sigmas:
            sigma = float(sigma)
            p_th = lz_probability(s1, s2, sigma)
            p_num = lz_transition_probability(s1, s2, sigma)
            rows.append(
                {
                    "s1": s1,
                    "s2": s2,
                    "sigma": sigma,
                    "exponent": math.pi * s1 * s2 / abs(sigma),
                    "p_theory": p_th,
                    "p_numeric": p_num,
                }
            )
            if p_th > 0:
                worst = max(worst, abs(p_num - p_th) / p_th)
    write_lz_scan_csv(outdir / "lz_scan.csv", rows)

    ev = cfg.get("events")
    if ev:
        lo, hi = ev.get("n_range", [-8, 8])
        events = crossing_times(float(ev["s1"]), float(ev["s2"]), float(ev["sigma"]), range(int(lo), int(hi) + 1))
        write_lz_events_csv(outdir / "lz_events.csv", events)
    return {"rows": len(rows), "max_rel_deviation": worst}


_RUNNERS = {
    "spectrum": run_spectrum,
    "evolve": run_evolve,
    "transparency": run_transparency,
    "lz-scan": run_lz_scan,
}


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------


def _load_config(args: argparse.Namespace, command: str) -> dict:
    if getattr(args, "config", None) and getattr(args, "preset", None):
        raise ConfigError("give either --config or --preset, not both")
    if getattr(args, "preset", None):
        cfg = get_preset(args.preset)
        declared = cfg.get("command")
        if declared and declared != command:
            raise ConfigError(f"preset {args.preset!r} belongs to the {declared!r} subcommand")
    elif getattr(args, "config", None):
        path = Path(args.config)
        try:
            cfg = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
        if not isinstance(cfg, dict):
            raise ConfigError("config root must be an object")
    else:
        raise ConfigError("a run needs --preset <name> or --config <file>")

    if getattr(args, "window", None):
        if args.window == "auto":
            cfg["window"] = "auto"
        else:
            try:
                lo, hi = (int(x) for x in args.window.split(","))
            except ValueError:
                raise ConfigError(f"--window expects 'auto' or 'lo,hi', got {args.window!r}") from None
            cfg["window"] = [lo, hi]
    if getattr(args, "rtol", None) is not None:
        cfg.setdefault("propagator", {})["rtol"] = args.rtol
    if getattr(args, "atol", None) is not None:
        cfg.setdefault("propagator", {})["atol"] = args.atol
    if getattr(args, "samples", None) is not None:
        cfg["samples"] = args.samples
    return cfg


def _add_run_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="JSON run configuration")
    sp.add_argument("--preset", help="compiled-in configuration name")
    sp.add_argument("--out", default="out", help="output directory (default: ./out)")
    sp.add_argument("--window", help="'auto' or 'lo,hi' mode window override")
    sp.add_argument("--rtol", type=float, help="propagator relative tolerance override")
    sp.add_argument("--atol", type=float, help="propagator absolute tolerance override")
    sp.add_argument("--samples", type=int, help="number of output samples override")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nhring", description=__doc__)
    ap.add_argument("--version", action="version", version=f"nhring {__version__}")
    sub = ap.add_subparsers(dest="subcommand", required=True)
    for name in ("spectrum", "evolve", "transparency", "lz-scan"):
        sp = sub.add_parser(name, help=f"run the {name} command")
        _add_run_flags(sp)
    pp = sub.add_parser("preset", help="inspect compiled-in configurations")
    pp.add_argument("action", choices=["dump", "list"])
    pp.add_argument("name", nargs="?", help="preset name (for dump)")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.subcommand == "preset":
            if args.action == "list":
                for name in sorted(PRESETS):
                    print(name)
                return 0
            if not args.name:
                raise ConfigError("preset dump needs a name")
            print(json.dumps(get_preset(args.name), indent=2, sort_keys=True))
            return 0

        command = args.subcommand
        cfg = _load_config(args, command)
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        started = time.perf_counter()
        metrics = _RUNNERS[command](cfg, outdir)
        wall = time.perf_counter() - started
        write_manifest(outdir / "manifest.json", cfg, metrics, wall, __version__)
        print(f"{command}: wrote {outdir} ({wall:.2f}s)")
        return 0
    except (ConfigError, InvalidParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except NhringError as exc:  # residual catch-all for package errors
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
