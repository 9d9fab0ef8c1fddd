import math
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from coupledmodes.cli import main, run
from coupledmodes.config import ParseError, ValidationError, parse_config
from coupledmodes.output import read_trajectory_csv, trajectory_csv

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"

TWO_MODE = """\
[scenario]
kind = two-mode

[time]
t_start = 0
t_end = 3.141592653589793
n_steps = 3

[two-mode]
delta = 0
lambda = 1
alpha = 1
beta = 0
"""

GENERAL = """\
[scenario]
kind = general
[time]
t_end = 5
n_steps = 11
[general]
omega = 1, 2, 3
alpha = 0.1+0.2i, 0, -0.3j
lambda_row_0 = 0, 0.5, 0
lambda_row_1 = 0.5, 0, 0.25
lambda_row_2 = 0, 0.25, 0
"""


def write(tmp_path, text, name="scenario.ini"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestParse:
    def test_minimal_two_mode(self):
        cfg = parse_config(TWO_MODE)
        assert cfg.kind == "two-mode"
        assert cfg.two_mode == (0.0, 1.0)
        np.testing.assert_array_equal(cfg.alpha, [1, 0])
        np.testing.assert_allclose(cfg.times(), [0, math.pi / 2, math.pi])

    def test_general_rows_and_complex_values(self):
        cfg = parse_config(GENERAL)
        assert cfg.system.n == 3
        assert cfg.system.coupling[1, 2] == 0.25
        assert cfg.alpha[0] == 0.1 + 0.2j and cfg.alpha[2] == -0.3j
        assert cfg.t_start == 0.0

    def test_sparse_triples(self):
        cfg = parse_config((SCENARIOS / "three_mode_star.ini").read_text())
        assert cfg.system.coupling[0, 2] == 0.3 and cfg.system.coupling[2, 0] == 0.3

    def test_asymmetric_rows_name_the_pair(self):
        text = GENERAL.replace("lambda_row_2 = 0, 0.25, 0", "lambda_row_2 = 0, 0.3, 0")
        with pytest.raises(ValidationError) as err:
            parse_config(text)
        assert "[1][2]" in str(err.value) and "[2][1]" in str(err.value)
        assert err.value.line == 11 and err.value.key == "lambda_row_2"

    def test_time_order(self):
        with pytest.raises(ValidationError) as err:
            parse_config(TWO_MODE.replace("t_end = 3.141592653589793", "t_end = 0"))
        assert err.value.key == "t_end" and err.value.line == 6

    def test_malformed_line(self):
        with pytest.raises(ParseError) as err:
            parse_config(TWO_MODE.replace("beta = 0", "beta 0"))
        assert err.value.line == 13

    def test_bad_number(self):
        with pytest.raises(ParseError) as err:
            parse_config(TWO_MODE.replace("lambda = 1", "lambda = one"))
        assert err.value.key == "lambda" and err.value.line == 11

    @pytest.mark.parametrize(
        "old,new",
        [
            ("kind = two-mode", "kind = three-mode"),
            ("n_steps = 3", "n_steps = 0"),
            ("beta = 0", "beta = 0\ngamma = 2"),
            ("[two-mode]", "[general]"),
        ],
    )
    def test_validation_errors(self, old, new):
        with pytest.raises(ValidationError):
            parse_config(TWO_MODE.replace(old, new))

    def test_duplicate_key(self):
        with pytest.raises(ParseError):
            parse_config(TWO_MODE.replace("beta = 0", "beta = 0\nbeta = 1"))

    def test_star_bath_section(self):
        cfg = parse_config((SCENARIOS / "star_bath.ini").read_text())
        assert cfg.bath.n_bath == 201 and cfg.system.n == 202

    def test_star_bath_invalid_spec(self):
        text = (SCENARIOS / "star_bath.ini").read_text().replace("n_bath = 201", "n_bath = 1")
        with pytest.raises(ValidationError) as err:
            parse_config(text)
        assert err.value.key == "n_bath"

    def test_oracle_section(self):
        cfg = parse_config((SCENARIOS / "oracle_two_mode.ini").read_text())
        assert cfg.fock.n_max == 8 and cfg.fock.n_modes == 2


class TestRun:
    def test_resonant_swap_moduli(self):
        traj = run(parse_config(TWO_MODE)).trajectory
        np.testing.assert_allclose(traj.moduli[:, 0], [1, 0, 1], atol=1e-9)

    def test_signed_coupling_goes_through_general_path(self):
        cfg = parse_config(TWO_MODE.replace("lambda = 1", "lambda = -1"))
        traj = run(cfg).trajectory
        np.testing.assert_allclose(traj.amplitudes[1], [0, 1j], atol=1e-12)

    def test_vacuum_general(self):
        cfg = parse_config(GENERAL.replace("alpha = 0.1+0.2i, 0, -0.3j", "alpha = 0, 0, 0"))
        assert np.all(run(cfg).trajectory.amplitudes == 0)

    def test_oracle_report(self):
        report = run(parse_config((SCENARIOS / "oracle_two_mode.ini").read_text())).report
        fids = [v for k, v in report.items() if k.startswith("fidelity_")]
        assert len(fids) == 5 and min(fids) >= 0.999

    def test_star_bath_report(self):
        report = run(parse_config((SCENARIOS / "star_bath.ini").read_text())).report
        for key in ("fitted_rate", "predicted_rate", "r2", "recurrence_time", "revival_time"):
            assert key in report
        assert abs(report["fitted_rate"] - report["predicted_rate"]) <= 0.15 * report["predicted_rate"]


class TestMain:
    def test_outputs(self, tmp_path):
        cfg = write(tmp_path, GENERAL)
        out, plot, rep = tmp_path / "t.csv", tmp_path / "t.svg", tmp_path / "r.txt"
        assert main(["simulate", str(cfg), "--out", str(out), "--plot", str(plot), "--report", str(rep)]) == 0
        lines = out.read_text().split("\n")
        assert lines[0] == "t,re_0,im_0,abs_0,n_0,re_1,im_1,abs_1,n_1,re_2,im_2,abs_2,n_2"
        assert len(lines) == 13 and lines[-1] == ""
        root = ET.fromstring(plot.read_text())
        assert root.get("viewBox") == "0 0 800 500"
        assert len(root.findall("{http://www.w3.org/2000/svg}polyline")) == 3
        report = dict(line.split(" = ", 1) for line in rep.read_text().splitlines())
        assert report["kind"] == "general" and report["n_modes"] == "3"

    def test_csv_round_trip(self):
        traj = run(parse_config(GENERAL)).trajectory
        back = read_trajectory_csv(trajectory_csv(traj))
        np.testing.assert_array_equal(back.times, traj.times)
        np.testing.assert_array_equal(back.amplitudes, traj.amplitudes)

    def test_deterministic(self, tmp_path):
        cfg = write(tmp_path, GENERAL)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["simulate", str(cfg), "--out", str(a)]) == 0
        assert main(["simulate", str(cfg), "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_stdout_csv(self, tmp_path, capsys):
        assert main(["simulate", str(write(tmp_path, TWO_MODE))]) == 0
        captured = capsys.readouterr()
        assert captured.out.startswith("t,re_0,im_0,abs_0,n_0")
        assert "total_photon_number = 1" in captured.err

    def test_config_error_exit_code(self, tmp_path, capsys):
        cfg = write(tmp_path, TWO_MODE.replace("t_end = 3.141592653589793", "t_end = -1"))
        assert main(["simulate", str(cfg)]) == 1
        assert "t_end" in capsys.readouterr().err

    def test_missing_file_exit_code(self, tmp_path):
        assert main(["simulate", str(tmp_path / "nope.ini")]) == 1

    def test_bad_arguments_exit_code(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 1

    def test_wrong_command_for_kind(self, tmp_path):
        assert main(["oracle-check", str(write(tmp_path, TWO_MODE))]) == 1
        assert main(["simulate", str(SCENARIOS / "oracle_two_mode.ini")]) == 1

    def test_numerical_failure_exit_code(self, tmp_path, capsys):
        text = (SCENARIOS / "oracle_two_mode.ini").read_text().replace("alpha = 0.5", "alpha = 3")
        assert main(["oracle-check", str(write(tmp_path, text))]) == 2
        assert "TruncationError" in capsys.readouterr().err

    def test_oracle_check_command(self, tmp_path):
        rep = tmp_path / "r.txt"
        code = main(["oracle-check", str(SCENARIOS / "oracle_two_mode.ini"), "--out", str(tmp_path / "o.csv"), "--report", str(rep)])
        assert code == 0
        report = dict(line.split(" = ", 1) for line in rep.read_text().splitlines())
        assert float(report["min_fidelity"]) >= 0.999
