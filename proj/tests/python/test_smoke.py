import hashlib
import math
import os
import subprocess
from pathlib import Path

import pytest
import sympy as sp

import regulab

TOOL = os.environ.get("REGULAB_TOOL")
CONFIGS = Path(os.environ.get("REGULAB_CONFIGS", Path(__file__).resolve().parents[2] / "configs"))


def test_module_exposes_every_experiment():
    assert len(regulab.experiment_ids()) == 9
    assert "noise-heat" in regulab.experiment_ids()
    assert regulab.splitmix64(0) == 0xE220A8397B1DCDAF
    assert regulab.__version__


def test_kernel_masses():
    grid = regulab.Grid1D(-8.0, 8.0, 512, regulab.Boundary.Periodic)
    assert abs(regulab.exp_kernel(0.1, grid)["mass"] - 1) < 1e-6
    assert abs(regulab.spectral_kernel([0.1], grid)["mass"] - 1) < 1e-12
    wide = regulab.Grid1D(-20.0, 20.0, 1024, regulab.Boundary.Periodic)
    assert abs(regulab.asym_kernel(regulab.RDParams(), wide)["mass"] - 1) < 1e-6


def test_inhibitor_kernel_integrates_to_one_symbolically():
    x = sp.symbols("x", real=True)
    f, D, xi = sp.symbols("f D xi", positive=True)
    s = sp.sqrt(xi**2 + 4 * D * f)
    right = sp.integrate(f / s * sp.exp(-(s - xi) * x / (2 * D)), (x, 0, sp.oo), conds="none")
    left = sp.integrate(f / s * sp.exp((s + xi) * x / (2 * D)), (x, -sp.oo, 0), conds="none")
    assert sp.simplify(right + left - 1) == 0


def test_peridynamic_moments_and_tensor():
    mu = regulab.Micromodulus(regulab.Micromodulus.Kind.Constant, 1.0, 1.0)
    assert regulab.raw_moment(mu, 4) == pytest.approx(2 / 5, abs=1e-15)
    assert abs(regulab.raw_moment_quadrature(mu, 3)) <= 1e-14
    t = regulab.moment_tensor_3d(mu)
    assert t["xxxx"] / t["xxyy"] == pytest.approx(3, abs=1e-8)
    assert t["mu"] == pytest.approx(0.6 * t["bulk"], rel=1e-12)


def test_parse_config_reports_all_errors():
    ok, errors = regulab.parse_config("experiment = burgers-sweep\n[model]\nepsilons = -1\n[grid]\nbogus = 2\n")
    assert not ok
    assert len(errors) == 2
    assert any("model.epsilons" in e for e in errors)
    assert any("grid.bogus" in e for e in errors)
    assert regulab.parse_config("", "noise-heat") == (True, [])


def test_invalid_arguments_raise_value_error():
    grid = regulab.Grid1D(-8.0, 8.0, 512, regulab.Boundary.Periodic)
    with pytest.raises(ValueError):
        regulab.exp_kernel(-1.0, grid)


def test_run_experiment_returns_manifest(tmp_path):
    manifest = regulab.run_experiment("peridyn-moments", "", tmp_path, svg=False, seed=3)
    assert manifest["experiment"] == "peridyn-moments"
    assert manifest["seed"] == 3
    assert manifest["all_pass"]
    for entry in manifest["files"]:
        data = (tmp_path / entry["name"]).read_bytes()
        assert hashlib.sha256(data).hexdigest() == entry["sha256"]


def _cli(*args):
    if not TOOL:
        pytest.skip("REGULAB_TOOL not set")
    return subprocess.run([TOOL, *map(str, args)], capture_output=True, text=True, timeout=300)


def test_cli_exit_codes(tmp_path):
    good = _cli("burgers-sweep", "--config", CONFIGS / "burgers-sweep.ini", "--out", tmp_path / "good")
    assert good.returncode == 0, good.stdout + good.stderr
    assert "PASS" in good.stdout

    bad = tmp_path / "bad.ini"
    bad.write_text("experiment = burgers-sweep\n[model]\nepsilons = -1\nunknown = 3\n")
    r = _cli("burgers-sweep", "--config", bad, "--out", tmp_path / "bad")
    assert r.returncode == 2
    assert "model.epsilons" in r.stderr and "model.unknown" in r.stderr

    r = _cli("no-such-experiment", "--config", bad)
    assert r.returncode == 2


def test_cli_runs_are_byte_identical(tmp_path):
    outputs = []
    for name in ("a", "b"):
        r = _cli("noise-transport", "--config", CONFIGS / "noise-transport.ini", "--out", tmp_path / name, "--svg")
        assert r.returncode == 0, r.stdout + r.stderr
        outputs.append({p.name: p.read_bytes() for p in (tmp_path / name).iterdir() if p.suffix in (".csv", ".svg")})
    assert outputs[0] and outputs[0] == outputs[1]


def test_config_docs_match_the_tool():
    r = _cli("--grammar")
    assert r.returncode == 0
    docs = (CONFIGS.parent / "docs" / "config.md").read_text()
    assert r.stdout.strip() in docs
