"""End-to-end: produce CSV artifacts through the producer CLI, then render.

The renderer only sees files; these tests drive the real `nhring` command
line with downsized scenarios so the suite stays fast.
"""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from figplots import SchemaError, load_csv, render

PRODUCER = [sys.executable, "-m", "nhring.cli"]


def produce(command: str, cfg: dict, outdir: Path):
    cfg_path = outdir.parent / f"{outdir.name}.json"
    cfg_path.write_text(json.dumps(cfg))
    proc = subprocess.run(
        PRODUCER + [command, "--config", str(cfg_path), "--out", str(outdir)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return outdir


def evolve_cfg(v0, alpha, sigma, window):
    return {
        "potential": {"v0": v0, "alpha": alpha},
        "flux": {"kind": "ramp", "sigma": sigma, "tau0": 0.0},
        "window": window,
        "initial": {"kind": "delta", "n0": 0},
        "tau_span": [0.0, 400.0],
        "samples": 50,
        "phi_points": 48,
    }


@pytest.fixture(scope="session")
def artifacts(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("artifacts")
    produce("evolve", evolve_cfg(0.08, 0.0, -0.003, [-8, 6]), root / "fig2a")
    produce("evolve", evolve_cfg(0.08, 0.0, +0.003, [-6, 8]), root / "fig2b")
    produce("evolve", evolve_cfg(0.08, 0.3, -0.003, [-8, 6]), root / "fig3a")
    produce("evolve", evolve_cfg(0.08, 0.3, +0.003, [-6, 8]), root / "fig3b")
    produce("evolve", evolve_cfg(0.02, 1.0, -0.003, [-8, 6]), root / "fig4a")
    produce("evolve", evolve_cfg(0.02, 1.0, +0.003, [-6, 8]), root / "fig4b")
    produce(
        "spectrum",
        {
            "potential": {"v0": 0.08, "alpha": 0.3},
            "flux": {"kind": "ramp", "sigma": 0.003, "tau0": 0.0},
            "window": [-6, 6],
            "f_samples": 15,
            "ep_search": None,
            "levels": {"n_range": [-2, 4], "tau_span": [0.0, 800.0], "samples": 41, "n_bands": 7},
        },
        root / "fig1b",
    )
    produce(
        "transparency",
        {
            "potential": {"v0": 0.02, "alpha": 1.0},
            "sigma": -0.05,
            "M": 0,
            "T_target": 50.0,
            "window": [-4, 8],
            "initial": {"kind": "delta", "n0": 1},
            "tau_span": [0.0, 100.0],
            "samples": 60,
            "phi_points": 24,
        },
        root / "fig5",
    )
    return root


@pytest.mark.parametrize(
    "name,subdir",
    [
        ("fig1b", "fig1b"),
        ("fig2", ""),
        ("fig3", ""),
        ("fig4", ""),
        ("fig5", "fig5"),
        ("fig5c", "fig5"),
    ],
)
def test_render_completes(artifacts, tmp_path, name, subdir):
    out = tmp_path / f"{name}.png"
    render(name, artifacts / subdir if subdir else artifacts, out, log=(name == "fig3"))
    assert out.exists()
    assert out.stat().st_size > 1000


def test_cli_entry_point(artifacts, tmp_path):
    out = tmp_path / "fig5c.png"
    proc = subprocess.run(
        [sys.executable, "-m", "figplots.cli", "fig5c", "--in", str(artifacts / "fig5"), "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()


def test_schema_mismatch_names_offending_column(tmp_path):
    bad = tmp_path / "trajectory.csv"
    bad.write_text("tau,m,re_c,im_c,abs2\n0.0,0,1.0,0.0,1.0\n")
    with pytest.raises(SchemaError, match="'n'"):
        load_csv(bad, "trajectory")


def test_empty_trajectory_is_error_and_writes_nothing(tmp_path):
    run = tmp_path / "run"
    run.mkdir()
    (run / "overlap.csv").write_text("tau,re_psi0_full,re_psi0_off,abs_diff\n")
    out = tmp_path / "fig5c.png"
    with pytest.raises(SchemaError, match="no data rows"):
        render("fig5c", run, out)
    assert not out.exists()


def test_renderer_is_read_only(artifacts):
    before = {p: p.stat().st_mtime_ns for p in (artifacts / "fig5").iterdir()}
    render("fig5c", artifacts / "fig5", artifacts / "check.png")
    after = {p: p.stat().st_mtime_ns for p in (artifacts / "fig5").iterdir() if p.suffix == ".csv"}
    for p, t in after.items():
        assert before[p] == t
