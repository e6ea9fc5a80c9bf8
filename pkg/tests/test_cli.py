"""End-to-end checks of the command line interface (in-process)."""

import json

import pytest

from bixsim.cli import EXIT_CONFIG, EXIT_OK, EXIT_SOLVER, main
from bixsim.system import (
    config_to_dict,
    default_config,
    save_config,
)


@pytest.fixture
def fast_config_path(tmp_path):
    d = config_to_dict(default_config())
    d["phonon"]["enable"] = False
    d["numerics"]["n_max_y"] = 1
    d["numerics"]["n_omega"] = 201
    d["drive"]["omega"] = 252.83669951857598
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(d), encoding="utf-8")
    return str(path)


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "bixsim" in capsys.readouterr().out


def test_dressed_reports_eigenvalues(fast_config_path, capsys):
    rc = main(["dressed", "--config", fast_config_path])
    assert rc == EXIT_OK
    out = capsys.readouterr().out
    assert "lambda_1" in out and "lambda_4" in out
    assert "R1" in out and "L3" in out


def test_dressed_uses_packaged_baseline(capsys):
    rc = main(["dressed"])
    assert rc == EXIT_OK
    assert "closed-form" in capsys.readouterr().out


def test_spectrum_writes_files(fast_config_path, tmp_path, capsys):
    out = tmp_path / "out"
    rc = main([
        "spectrum", "--config", fast_config_path, "--grid", "201",
        "--phonons", "off", "--out", str(out),
    ])
    assert rc == EXIT_OK
    assert (out / "spectrum.csv").exists()
    assert (out / "spectrum.meta.json").exists()
    assert "peaks" in capsys.readouterr().out


def test_spectrum_json_format(fast_config_path, tmp_path):
    out = tmp_path / "out"
    rc = main([
        "spectrum", "--config", fast_config_path, "--format", "json",
        "--out", str(out),
    ])
    assert rc == EXIT_OK
    payload = json.loads((out / "spectrum.json").read_text())
    assert len(payload["omega_offsets"]) == 201
    assert payload["metadata"]["normalized"] is True


def test_power_sweep_command(fast_config_path, tmp_path):
    out = tmp_path / "out"
    rc = main([
        "power-sweep", "--config", fast_config_path, "--rows", "3",
        "--out", str(out), "--threads", "2",
    ])
    assert rc == EXIT_OK
    for name in ("power_axis1.csv", "power_axis2.csv", "power_values.csv"):
        assert (out / name).exists()


def test_detuning_sweep_with_recalibration(fast_config_path, tmp_path, capsys):
    out = tmp_path / "out"
    rc = main([
        "detuning-sweep", "--config", fast_config_path, "--rows", "3",
        "--span", "40", "--zero-splitting", "60", "--out", str(out),
    ])
    assert rc == EXIT_OK
    assert (out / "detuning_values.csv").exists()
    assert "detuning in [-40, 40]" in capsys.readouterr().out


def test_phonon_compare_command(fast_config_path, tmp_path, capsys):
    out = tmp_path / "out"
    rc = main([
        "phonon-compare", "--config", fast_config_path, "--grid", "161",
        "--out", str(out),
    ])
    assert rc == EXIT_OK
    assert (out / "phonons_on.csv").exists()
    assert (out / "phonons_off.csv").exists()
    assert "ratio" in capsys.readouterr().out


def test_check_passes_on_baseline(capsys):
    rc = main(["check", "--grid", "201", "--phonons", "off"])
    assert rc == EXIT_OK
    out = capsys.readouterr().out
    assert "6/6 checks passed" in out
    assert "FAIL" not in out


def test_missing_config_file_is_config_error(capsys):
    rc = main(["dressed", "--config", "/nonexistent/cfg.json"])
    assert rc == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_invalid_config_value_is_config_error(tmp_path, capsys):
    d = config_to_dict(default_config())
    d["rates"]["kappa_x"] = -5.0
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d), encoding="utf-8")
    rc = main(["dressed", "--config", str(path)])
    assert rc == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_unknown_key_is_config_error(tmp_path, capsys):
    d = config_to_dict(default_config())
    d["rates"]["gamma_zz"] = 1.0
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d), encoding="utf-8")
    rc = main(["spectrum", "--config", str(path), "--out", str(tmp_path / "o")])
    assert rc == EXIT_CONFIG
    assert "gamma_zz" in capsys.readouterr().err


def test_undamped_model_is_solver_error(tmp_path, capsys):
    from dataclasses import replace

    cfg = default_config()
    cfg = replace(
        cfg,
        rates=replace(
            cfg.rates,
            gamma_x_g=0.0, gamma_y_g=0.0, gamma_xx_x=0.0, gamma_xx_y=0.0,
            dephasing_x_g=0.0, dephasing_y_g=0.0,
            dephasing_xx_x=0.0, dephasing_xx_y=0.0,
            kappa_y=0.0,
        ),
        couplings=replace(cfg.couplings, g1y=0.0, g2y=0.0),
        phonon=replace(cfg.phonon, enable=False),
        drive=replace(cfg.drive, omega=100.0),
        numerics=replace(cfg.numerics, n_max_y=1, n_omega=101),
    )
    path = tmp_path / "undamped.json"
    save_config(cfg, str(path))
    rc = main(["spectrum", "--config", str(path), "--out", str(tmp_path / "o")])
    assert rc == EXIT_SOLVER
    assert "solver error" in capsys.readouterr().err


def test_bad_grid_value(fast_config_path, capsys):
    rc = main(["dressed", "--config", fast_config_path, "--grid", "2"])
    assert rc == EXIT_CONFIG
    assert "--grid" in capsys.readouterr().err
