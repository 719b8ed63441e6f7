import json
import math

import numpy as np
import pytest

import spinflow as sf


def test_unit_torus_energy():
    chart = sf.GridChart.torus(16, 16)
    psi = sf.SpinorField(chart)
    vals = psi.values
    vals[..., 0, 0] = 1.0
    psi.values = vals
    assert sf.energy(psi) == pytest.approx(1.0, abs=1e-14)
    assert psi.values.shape == (16, 16, 1, 2)


def test_pointwise_norm_of_complex_pair():
    chart = sf.GridChart.torus(8, 8)
    vals = np.zeros((8, 8, 1, 2), dtype=complex)
    vals[..., 0, 0] = 3.0
    vals[..., 0, 1] = 4.0j
    psi = sf.SpinorField.from_array(chart, vals)
    assert np.allclose(sf.pointwise_norm(psi), 5.0)


def test_algebra_oracles():
    assert sf.oracles.algebra_error() <= 1e-12
    psi = sf.oracles.random_field(sf.GridChart.torus(16, 16), 1, 3)
    assert sf.oracles.null_identity_error(psi) <= 1e-12


def test_weitzenboeck_spectral_and_broken_stencil():
    chart = sf.GridChart.torus(64, 64, spin="AA")
    psi = sf.oracles.weitzenboeck_field(chart)
    assert sf.weitzenboeck_residual(psi, "spectral") <= 1e-10
    fine = sf.oracles.weitzenboeck_field(sf.GridChart.torus(128, 128, spin="AA"))
    factor = sf.weitzenboeck_residual(psi) / sf.weitzenboeck_residual(fine)
    assert 3.0 <= factor <= 5.0
    broken = sf.weitzenboeck_residual(psi, broken_stencil=True) / sf.weitzenboeck_residual(fine, broken_stencil=True)
    assert broken < 2.5


def test_manufactured_solve_and_newton():
    chart = sf.GridChart.torus(32, 32, spin="AA")
    spec = sf.ReactionSpec.chiral_uv("Nil")
    star = sf.oracles.manufactured_profile(chart, 1, 0.8)
    forcing = sf.manufactured_forcing(spec, star)
    psi, rep = sf.picard_solve(spec, sf.SpinorField(chart), forcing, tol=1e-6)
    assert rep["converged"]
    psi, nrep = sf.newton_refine(spec, psi, forcing)
    assert nrep["residuals"][-1] <= 1e-9
    assert np.max(np.abs(psi.values - star.values)) <= 1e-9


def test_periodic_torus_is_config_error():
    chart = sf.GridChart.torus(16, 16, spin="PP")
    with pytest.raises(sf.ConfigError):
        sf.picard_solve(sf.ReactionSpec.scalar_h(), sf.SpinorField(chart))


def test_green_direct_matches_accelerated():
    chart = sf.GridChart.torus(16, 16, 2, 2, "PP", -1, -1)
    vals = np.zeros((16, 16, 1, 2), dtype=complex)
    rng = np.random.default_rng(0)
    vals[1:-1, 1:-1] = rng.standard_normal((14, 14, 1, 2)) + 1j * rng.standard_normal((14, 14, 1, 2))
    f = sf.SpinorField.from_array(chart, vals)
    a = sf.green_convolve(f).values
    d = sf.green_convolve(f, direct=True).values
    assert np.linalg.norm(a - d) <= 1e-10 * np.linalg.norm(d)


def test_field_bytes_round_trip():
    psi = sf.oracles.random_field(sf.GridChart.disk(17, 0.5), 2, 9)
    blob = sf.encode_field(psi)
    assert blob[:5] == b"SPNF1"
    assert sf.encode_field(sf.decode_field(blob)) == blob
    with pytest.raises(sf.FormatError):
        sf.decode_field(b"XPNF1" + blob[5:])


def test_plane_surface():
    psi = sf.oracles.plane_field(sf.GridChart.torus(32, 32))
    surf = sf.integrate_surface(psi)
    assert surf["mesh_area"] == pytest.approx(1.0, abs=1e-12)
    assert surf["mean_curvature_max"] <= 1e-8
    assert np.ptp(surf["vertices"][:, 2]) == 0.0
    assert surf["obj"].startswith("v ")


def test_decay_profile_smooth():
    chart = sf.GridChart.torus(128, 128, 2, 2, "PP", -1, -1)
    prof = sf.decay_profile(sf.oracles.smooth_field(chart), 0.0, 0.0, [0.5, 0.25, 0.125])
    assert prof["exponent"] >= 0.1 and not prof["flagged"]


def test_estimate_ratio_is_deterministic():
    a = sf.estimate_ratio(4 / 3, 2, [32, 64], seed=5)
    b = sf.estimate_ratio(4 / 3, 2, [32, 64], seed=5)
    assert a == b and all(math.isfinite(r) for r in a["ratios"])


def test_run_command_validation_and_verify(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("chart.nx = 4\n")
    code, err = sf.run_command("solve", str(bad), str(tmp_path / "out"))
    assert code == 2 and "chart.nx" in err
    good = tmp_path / "solve.cfg"
    good.write_text("chart.nx = 16\nchart.ny = 16\nreaction.h = 0\n")
    code, _ = sf.run_command("solve", str(good), str(tmp_path / "solve"), 1)
    assert code == 0
    rep = json.loads((tmp_path / "solve" / "solve_report.json").read_text())
    assert rep["energy"] == 0.0 and rep["rng_seed"] == 1
