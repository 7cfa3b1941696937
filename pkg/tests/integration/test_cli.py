"""
Integration tests for the command line interface.
"""
import json

import pytest

from app.application.use_cases.experiment_runner import EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION
from app.domain.exceptions import ConfigError
from app.presentation.cli import build_config, build_parser, main, parse_center


def test_energy_command_writes_csv(tmp_path, capsys):
    code = main(["energy", "--curve", "circle", "--grid", "64", "--out", str(tmp_path)])

    assert code == EXIT_OK
    lines = (tmp_path / "energy.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# knotlab")
    assert lines[2].startswith("curve_id,N_x,N_w,e_mobius")
    assert lines[3].startswith("circle,64,64,")
    assert str(tmp_path / "energy.csv") in capsys.readouterr().out


def test_inline_torus_knot_decomposition(tmp_path):
    code = main(["decompose", "--curve", "torus_knot(2,3)", "--grid", "128", "--out", str(tmp_path)])
    assert code == EXIT_OK
    assert (tmp_path / "decompose.checks.csv").exists()


def test_curve_spec_file(tmp_path):
    spec = tmp_path / "ellipse.spec"
    spec.write_text("# flat ellipse\nkind = ellipse(3, 1)\nsample_count = 128\n", encoding="utf-8")
    args = build_parser().parse_args(["energy", "--curve", str(spec), "--grid", "64"])

    config = build_config(args)
    assert config.curve.a == 3.0
    assert config.curve.sample_count == 128


def test_run_uses_config_file(tmp_path):
    config_path = tmp_path / "sweep.json"
    config_path.write_text(json.dumps({
        "kind": "gamma-sweep",
        "curve": {"kind": "circle", "sample_count": 128},
        "grid_x": 128,
        "grid_w": 128,
        "m_list": [8, 16],
    }), encoding="utf-8")

    code = main(["run", "--config", str(config_path), "--out", str(tmp_path / "out")])
    assert code == EXIT_OK
    assert (tmp_path / "out" / "gamma-sweep.csv").exists()
    assert (tmp_path / "out" / "gamma-sweep.polygon_m16.csv").exists()


def test_validation_errors_exit_two(tmp_path):
    config_path = tmp_path / "energy.json"
    config_path.write_text('{"kind": "energy", "curve": {"kind": "circle"}}', encoding="utf-8")

    assert main(["energy", "--curve", "circle", "--grid", "100", "--out", str(tmp_path)]) == EXIT_VALIDATION
    assert main(["run", "--out", str(tmp_path)]) == EXIT_VALIDATION
    assert main(["energy", "--out", str(tmp_path)]) == EXIT_VALIDATION
    assert main(["decompose", "--config", str(config_path)]) == EXIT_VALIDATION
    assert main(["energy", "--curve", "spiral(2)"]) == EXIT_VALIDATION


def test_numerical_failure_exits_three(tmp_path):
    code = main(["energy", "--curve", "ellipse(1, 1e-5)", "--grid", "64", "--out", str(tmp_path)])
    assert code == EXIT_NUMERICAL


def test_parse_center():
    assert parse_center("on-curve:0.25") == {"center_mode": "on-curve", "center_t0": 0.25}
    assert parse_center("point:1,2,3") == {"center_mode": "point", "center_point": [1.0, 2.0, 3.0]}
    assert parse_center("random") == {"center_mode": "random"}
    with pytest.raises(ConfigError, match="center"):
        parse_center("somewhere")


def test_flags_override_config(tmp_path):
    config_path = tmp_path / "sweep.json"
    config_path.write_text(
        '{"kind": "mollify-sweep", "curve": {"kind": "circle"}, "eps_list": [0.2]}', encoding="utf-8"
    )
    args = build_parser().parse_args(
        ["mollify-sweep", "--config", str(config_path), "--eps", "0.1,0.05", "--no-assert", "--jobs", "2"]
    )

    config = build_config(args)
    assert config.eps_list == [0.1, 0.05]
    assert config.assert_tolerances is False
    assert config.jobs == 2
