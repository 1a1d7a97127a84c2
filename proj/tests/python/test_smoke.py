import json
import math

import numpy as np
import pytest

import filament as fl


def test_circle_profile_and_reconstruction():
    c = fl.circle(64, 2.0)
    assert c.length == pytest.approx(4 * math.pi, rel=1e-12)
    assert c.points.shape == (64, 3)
    p = fl.profile(c)
    assert np.allclose(p.curvature, 0.5, atol=1e-10)
    assert np.allclose(p.torsion, 0.0, atol=1e-10)
    back = fl.reconstruct(p)
    # Reconstruction integrates with finite steps, so this is a discretization error.
    assert fl.rigid_alignment_error(c.points, back.points) < 1e-4


def test_transform_round_trip():
    h = fl.helix(128, 1.0, 0.5)
    p = fl.profile(h)
    w = fl.forward_transform(p)
    assert w.mu == pytest.approx(0.4, abs=1e-10)
    q = fl.inverse_transform(w)
    assert np.max(np.abs(np.subtract(q.curvature, p.curvature))) < 1e-10
    assert np.max(np.abs(np.subtract(q.torsion, p.torsion))) < 1e-10


def test_flow_parsing_and_classification():
    fm = fl.Flow("k + W*k*tau", "W*d_s(k)", "(W/2)*k^2", {"W": 0.1})
    c = fm.classify()
    assert not c["is_binormal"]
    assert c["length_condition_residual"] < 1e-12
    assert fl.Flow("k + 0.5*k^3").classify()["power_series"] == [(1, 1.0), (3, 0.5)]
    with pytest.raises(fl.FlowSyntaxError):
        fl.Flow("k +")
    with pytest.raises(fl.UnboundConstant):
        fl.Flow("V*k")


def test_vfe_circle_translates():
    c = fl.circle(64)
    times, curves = fl.evolve_curve(c, fl.Flow("k"), 1e-3, 0.5, record_every=250)
    assert times[-1] == pytest.approx(0.5)
    shift = curves[-1].points - c.points
    assert np.allclose(shift, [0.0, 0.0, 0.5], atol=1e-6)


def test_soliton_and_errors():
    n, L = 512, 40.0
    s = np.arange(n) * L / n
    psi = 2 / np.cosh(s - L / 2)
    times, waves = fl.evolve_wave(fl.Wave(psi.astype(complex), L), "nls", 1e-3, 0.5, record_every=500)
    exact = psi * np.exp(0.5j)
    assert np.max(np.abs(np.array(waves[-1].psi) - exact)) < 1e-6
    with pytest.raises(fl.InvalidInput):
        fl.evolve_curve(fl.circle(256), fl.Flow("k"), 1e-3, 1.0)
    with pytest.raises(fl.NonGeometricFlow):
        fl.general_rhs(fl.Wave(psi.astype(complex), L), fl.Flow("k*t"))


def test_vfe_conserves_bending_energy():
    p = fl.profile(fl.perturbed_circle(128, 0.05, 3))
    assert abs(fl.bending_energy_rate(p, fl.Flow("k"))) < 1e-10
    assert fl.length_rate(p, fl.Flow("k")) == 0.0


def test_run_from_config(tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text(
        '[grid]\nN = 64\n[initial]\npreset = "perturbed_circle"\n'
        '[evolution]\ndt = 1e-3\nt_final = 0.02\nrecord_every = 10\n'
    )
    summary = fl.run(str(cfg), "evolve", str(tmp_path / "out"))
    assert (tmp_path / "out" / "manifest.json").exists()
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["format"] == "filament-manifest/1"
    assert isinstance(summary, dict)
