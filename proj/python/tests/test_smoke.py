import json
import math

import pytest

import spinbayes as sb


def test_coherent_state_has_unit_squeezing():
    assert sb.squeezing_parameter(200, 0.0, 0.0) == 1.0
    s = sb.coherent_state(200)
    assert s.xi == 1.0 and s.amplitude == 100.0


def test_closed_form_matches_state_vector():
    n = 12
    chi_t = sb.optimal_twist_time(n)
    alpha = sb.optimal_rotation_angle(n, chi_t)
    exact = sb.exact_moments(n, chi_t, alpha, 0.3)
    assert abs(sb.squeezing_parameter(n, chi_t, alpha) - exact["xi"]) < 1e-10
    assert abs(sb.mean_jz(n, chi_t, alpha, 0.3) - exact["mean_jz"]) < 1e-10


def test_xi_from_db():
    assert abs(sb.xi_from_db(-5.1) - 0.5559) < 1e-3


def test_noise_slopes():
    assert abs(sb.psd_slope(sb.noise("white", 1 << 14, 1.0, seed=3))) < 0.15
    assert abs(sb.psd_slope(sb.noise("random_walk", 1 << 14, 1.0, seed=3)) - 2.0) < 0.25


def test_allan_alternating_series():
    d = 0.25
    y = [d if i % 2 == 0 else -d for i in range(64)]
    tau, adev = sb.allan_deviation(y, 1.0, [1])[0]
    assert tau == 1.0
    assert abs(adev - d * math.sqrt(2.0)) < 1e-12


def test_phase_batch_reaches_expected_precision():
    state = sb.state_from_xi(200, 0.53, family="ansatz")
    b = sb.phase_batch(state, 0.5, steps=20, trials=20, seed=1, threads=1)
    target = 0.53 / math.sqrt(200 * 20)
    assert 0.5 * target < b["mean_sigma"][-1] < 1.5 * target


def test_fit_sine_recovers_noiseless_fringe():
    k, t, g0 = 1.61e7, 455e-6, 9.8
    kt2 = k * t * t
    period = 2 * math.pi / kt2
    g = [g0 - period / 2 + period * i / 40 for i in range(40)]
    p = [0.5 + 0.45 * math.sin(kt2 * (9.80001 - x)) for x in g]
    fit = sb.fit_sine(g, p, t, k, g0)
    assert abs(fit["g_est"] - 9.80001) < 1e-9 * 9.8


def test_config_errors():
    with pytest.raises(ValueError, match="true_g"):
        sb.resolve_config("gravimetry", "")
    with pytest.raises(ValueError, match="growth ratio"):
        sb.resolve_config("gravimetry", "[gravimetry]\ntrue_g = 9.8\na = 0.9\n")
    with pytest.raises(ValueError, match="unknown key"):
        sb.resolve_config("phase", "[phase]\ntrue_phi = 0.1\nbogus = 1\n")


def test_run_noise_check(tmp_path):
    files, log = sb.run("noise-check", "seed = 2\n[noise_check]\nn = 4096\n", str(tmp_path), False)
    assert "noise_psd.csv" in files and files[-1] == "manifest.json"
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["subcommand"] == "noise-check" and manifest["seed"] == 2
    assert "flicker PSD slope" in log
