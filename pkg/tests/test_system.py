"""Configuration handling and assembly of the full master equation."""

import json
from dataclasses import replace

import numpy as np
import pytest

from bixsim.dressed import dressed_eigenvalues, transition_catalog
from bixsim.errors import ConfigurationError
from bixsim.liouville import steady_state
from bixsim.system import (
    Rates,
    SystemConfig,
    assemble_liouvillian,
    build_reduced_hamiltonian,
    calibrate_drive,
    compute_spectrum_y,
    config_from_dict,
    config_hash,
    config_to_dict,
    default_config,
    dephasing_projector_rates,
    detunings,
    drive_params,
    load_config,
    save_config,
    two_photon_laser_detuning,
)


def fast_config(**kw):
    cfg = default_config()
    cfg = replace(
        cfg,
        drive=replace(cfg.drive, omega=252.83669951857598),
        phonon=replace(cfg.phonon, enable=False),
        numerics=replace(cfg.numerics, n_omega=401),
    )
    return replace(cfg, **kw) if kw else cfg


def test_detuning_mapping():
    cfg = replace(default_config(), laser_detuning=12.5)
    det = detunings(cfg)
    assert det.delta2 == 965.0 - 12.5
    assert det.delta3 == 990.0 - 12.5
    assert det.delta4 == -25.0  # biexciton offset counts the laser twice
    assert two_photon_laser_detuning(cfg) == 0.0
    cfg2 = replace(cfg, energies=replace(cfg.energies, omega_xx=30.0))
    assert two_photon_laser_detuning(cfg2) == 15.0


def test_drive_through_filter_and_override():
    cfg = fast_config()
    dp = drive_params(cfg)
    assert dp.alpha is not None
    assert abs(dp.alpha) ** 2 == pytest.approx(46.6957, rel=1e-4)
    over = replace(cfg, drive=replace(cfg.drive, omega=0.0, eta1=50.0, eta2=60.0))
    dpo = drive_params(over)
    assert dpo.eta1 == 50.0 and dpo.eta2 == 60.0 and dpo.alpha is None


def test_drive_overdetermined_rejected():
    cfg = default_config()
    with pytest.raises(ConfigurationError, match="overdetermined"):
        replace(cfg, drive=replace(cfg.drive, omega=10.0, eta1=1.0, eta2=1.0))
    with pytest.raises(ConfigurationError):
        replace(cfg, drive=replace(cfg.drive, omega=0.0, eta1=1.0, eta2=None))


def test_validation_rejects_bad_values():
    cfg = default_config()
    with pytest.raises(ConfigurationError):
        replace(cfg, rates=replace(cfg.rates, gamma_x_g=-0.1))
    with pytest.raises(ConfigurationError):
        replace(cfg, rates=replace(cfg.rates, kappa_x=0.0))
    with pytest.raises(ConfigurationError):
        replace(cfg, source="z-dipole")
    with pytest.raises(ConfigurationError):
        replace(cfg, numerics=replace(cfg.numerics, n_max_y=0))  # y mode coupled
    ok = replace(cfg, couplings=replace(cfg.couplings, g1y=0.0, g2y=0.0))
    replace(ok, numerics=replace(ok.numerics, n_max_y=0))  # now allowed


def test_dephasing_solver_symmetric_case():
    rates, residual = dephasing_projector_rates(default_config().rates)
    assert residual < 1e-12
    for level in ("G", "Y", "X", "XX"):
        assert rates[level] == pytest.approx(8.2, rel=1e-12)


def test_dephasing_solver_general_case():
    # consistent targets satisfy t_xg + t_xxy = t_yg + t_xxx
    r = Rates(dephasing_x_g=6.0, dephasing_y_g=7.0, dephasing_xx_x=9.0,
              dephasing_xx_y=10.0)
    rates, residual = dephasing_projector_rates(r)
    assert residual < 1e-12
    assert 0.5 * (rates["X"] + rates["G"]) == pytest.approx(6.0, rel=1e-12)
    assert 0.5 * (rates["Y"] + rates["G"]) == pytest.approx(7.0, rel=1e-12)
    assert 0.5 * (rates["XX"] + rates["X"]) == pytest.approx(9.0, rel=1e-12)
    assert 0.5 * (rates["XX"] + rates["Y"]) == pytest.approx(10.0, rel=1e-12)


def test_dephasing_solver_rejects_unrealizable_targets():
    r = Rates(dephasing_x_g=0.0, dephasing_y_g=0.0, dephasing_xx_x=0.0,
              dephasing_xx_y=20.0)
    with pytest.raises(ConfigurationError, match="dephasing"):
        dephasing_projector_rates(r)


def test_hamiltonian_is_hermitian_and_correctly_sized():
    cfg = fast_config()
    h = build_reduced_hamiltonian(cfg)
    assert h.shape == (12, 12)
    assert np.max(np.abs(h - h.conj().T)) < 1e-12


def test_undriven_system_settles_in_ground_state():
    cfg = fast_config(drive=replace(fast_config().drive, omega=0.0))
    rho = steady_state(assemble_liouvillian(cfg))
    assert rho[0, 0].real == pytest.approx(1.0, abs=1e-9)
    res = compute_spectrum_y(replace(cfg, normalize=False))
    assert np.max(res.intensity) == 0.0


def test_spectrum_peaks_match_dressed_catalog():
    cfg = fast_config(numerics=replace(fast_config().numerics, n_omega=1601))
    res = compute_spectrum_y(cfg)
    from bixsim.sweeps import extract_peaks

    rep = extract_peaks(res)
    lines = transition_catalog(dressed_eigenvalues(detunings(cfg), drive_params(cfg)))
    step = res.omega_offsets[1] - res.omega_offsets[0]
    for ln in lines:
        if ln.weight < 0.02:
            continue
        # cavity coupling shifts lines slightly; two grid steps is plenty
        assert np.min(np.abs(rep.positions - ln.offset)) < 2.0 * step


def test_normalized_spectrum_invariant_under_filter_rescaling():
    # doubling the bare drive while halving the x couplings keeps eta fixed
    c1 = fast_config()
    c2 = replace(
        c1,
        drive=replace(c1.drive, omega=2.0 * c1.drive.omega),
        couplings=replace(
            c1.couplings, g1x=c1.couplings.g1x / 2.0, g2x=c1.couplings.g2x / 2.0
        ),
    )
    s1 = compute_spectrum_y(c1)
    s2 = compute_spectrum_y(c2)
    assert np.allclose(s1.intensity, s2.intensity, atol=1e-12)


def test_biexciton_detuning_suppresses_emission():
    on_res = fast_config(normalize=False)
    detuned = replace(
        on_res, energies=replace(on_res.energies, omega_xx=200.0)
    )
    i_on = compute_spectrum_y(on_res).intensity.sum()
    i_off = compute_spectrum_y(detuned).intensity.sum()
    assert i_off < 0.9 * i_on


def test_calibrate_drive_hits_target_splitting():
    cfg = fast_config()
    for target in (30.0, 80.0, 150.0):
        cal = calibrate_drive(cfg, target)
        sol = dressed_eigenvalues(detunings(cal), drive_params(cal))
        assert -sol.eigenvalues[3] == pytest.approx(target, rel=1e-10)


def test_config_roundtrip_and_hash(tmp_path):
    cfg = fast_config(laser_detuning=3.25)
    path = tmp_path / "cfg.json"
    save_config(cfg, path)
    loaded = load_config(path)
    assert loaded == cfg
    assert config_hash(loaded) == config_hash(cfg)
    # any field change moves the hash
    assert config_hash(replace(cfg, laser_detuning=3.26)) != config_hash(cfg)
    assert config_hash(
        replace(cfg, numerics=replace(cfg.numerics, n_max_y=3))
    ) != config_hash(cfg)


def test_config_rejects_unknown_keys():
    data = config_to_dict(default_config())
    data["typo_field"] = 1.0
    with pytest.raises(ConfigurationError, match="typo_field"):
        config_from_dict(data)
    data = config_to_dict(default_config())
    data["rates"]["gamma_zz"] = 1.0
    with pytest.raises(ConfigurationError, match="gamma_zz"):
        config_from_dict(data)


def test_config_parses_complex_amplitudes(tmp_path):
    data = config_to_dict(default_config())
    data["drive"] = {"omega": 0.0, "eta1": [30.0, 4.0], "eta2": [50.0, 0.0]}
    cfg = config_from_dict(data)
    assert drive_params(cfg).eta1 == 30.0 + 4.0j
    path = tmp_path / "c.json"
    save_config(cfg, path)
    assert load_config(path) == cfg


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigurationError, match="not found"):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigurationError, match="JSON"):
        load_config(bad)


def test_packaged_baseline_loads():
    from importlib import resources

    text = resources.files("bixsim").joinpath("data/baseline.json").read_text("utf-8")
    cfg = config_from_dict(json.loads(text))
    assert cfg.rates.kappa_y == 132.0
    assert cfg.phonon.enable
    sol = dressed_eigenvalues(detunings(cfg), drive_params(cfg))
    assert -sol.eigenvalues[3] == pytest.approx(80.0, abs=1e-6)
