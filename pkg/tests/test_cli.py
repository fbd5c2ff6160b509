import json

import numpy as np
import pandas as pd
import pytest

from main import EXIT_INPUT_ERROR, EXIT_NO_ROTATOR, EXIT_OK, build_parser, main, parse_triple
from src.core.geometry import Masses, Shape
from src.core.potentials import CotangentPotential
from src.core.rotator import check_rotator

RIGHT_ANGLES = "1.5707963267949,1.5707963267949,1.5707963267949"


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _read_json(path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def test_parse_triple():
    assert parse_triple("1,2.5,3") == [1.0, 2.5, 3.0]
    with pytest.raises(Exception):
        parse_triple("1,2")
    with pytest.raises(Exception):
        parse_triple("a,b,c")


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_check_right_equilateral(workdir):
    out = workdir / "check.json"
    code = main(["check", "--masses", "1,1,1", "--shape", "1.5708,1.5708,1.5708", "--out", str(out)])
    assert code == EXIT_OK

    report = _read_json(out)
    assert report["is_rotator"] is True
    assert report["classification"] == "ExtendedLagrangian"
    assert report["R3_omega2"] == pytest.approx(3.0, abs=1e-3)
    np.testing.assert_allclose(report["cos_theta"], 1 / np.sqrt(3), atol=1e-4)
    assert report["hemisphere_conditions"] is True


def test_check_in_degrees(workdir):
    out = workdir / "check.json"
    assert main(["check", "--masses", "2,2,2", "--shape", "90,90,90", "--degrees", "--out", str(out)]) == EXIT_OK
    assert _read_json(out)["R3_omega2"] == pytest.approx(6.0, abs=1e-9)


def test_check_not_a_rotator(workdir):
    out = workdir / "check.json"
    assert main(["check", "--masses", "1,2,3", "--shape", RIGHT_ANGLES, "--out", str(out)]) == EXIT_NO_ROTATOR
    report = _read_json(out)
    assert report["is_rotator"] is False
    assert "theta" not in report


def test_check_input_errors(workdir):
    assert main(["check", "--masses", "1,1,1", "--shape", "0.1,0.2,0.5"]) == EXIT_INPUT_ERROR
    assert main(["check", "--masses", "1,0,1", "--shape", RIGHT_ANGLES]) == EXIT_INPUT_ERROR
    assert main(["check", "--masses", "1,1,1"]) == EXIT_INPUT_ERROR
    assert main(["verify", str(workdir / "missing.json")]) == EXIT_INPUT_ERROR


def test_check_small_feasible_triangle(workdir):
    code = main(["check", "--masses", "1,1,1", "--shape", "0.1,0.2,0.25", "--out", str(workdir / "c.json")])
    assert code in (EXIT_OK, EXIT_NO_ROTATOR)


def test_check_as_csv_has_scalar_columns(workdir):
    out = workdir / "check.csv"
    args = ["check", "--masses", "1,1,1", "--shape", RIGHT_ANGLES, "--format", "csv", "--out", str(out)]
    assert main(args) == EXIT_OK

    text = out.read_text(encoding="utf-8")
    assert "[" not in text
    assert "array" not in text
    frame = pd.read_csv(out, float_precision="round_trip")
    assert len(frame) == 1
    row = frame.iloc[0]
    for column in ("m1", "sigma12", "sigma31", "theta1", "phi3", "cos_theta2", "cos_phi31", "R3_omega2"):
        assert isinstance(row[column], float), column
    assert row["R3_omega2"] == pytest.approx(3.0, abs=1e-9)
    np.testing.assert_allclose(row[["cos_theta1", "cos_theta2", "cos_theta3"]].astype(float), 1 / np.sqrt(3), atol=1e-9)

    verdict = check_rotator(
        Masses(row["m1"], row["m2"], row["m3"]),
        Shape(row["sigma12"], row["sigma23"], row["sigma31"]),
        CotangentPotential(1.0),
    )
    assert verdict.is_rotator


def test_check_writes_json_to_stdout(capsys):
    assert main(["check", "--masses", "1,1,1", "--shape", RIGHT_ANGLES]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["is_rotator"] is True
    assert report["command"] == "check"


def test_check_output_is_deterministic(workdir):
    args = ["check", "--masses", "1,1,1", "--shape", "1.2,1.3,1.3"]
    main(args + ["--out", str(workdir / "a.json")])
    main(args + ["--out", str(workdir / "b.json")])
    assert (workdir / "a.json").read_bytes() == (workdir / "b.json").read_bytes()


def test_check_then_verify(workdir):
    saved = workdir / "check.json"
    assert main(["check", "--masses", "1,1,1", "--shape", RIGHT_ANGLES, "--out", str(saved)]) == EXIT_OK

    out = workdir / "verify.json"
    assert main(["verify", str(saved), "--out", str(out)]) == EXIT_OK
    report = _read_json(out)
    assert report["rigid"] is True
    assert report["max_shape_drift"] <= 1e-6
    assert report["max_theta_drift"] <= 1e-6
    assert report["max_rate_spread"] <= 1e-6
    assert report["energy_drift"] <= 1e-8

    frame_path = workdir / "trajectory.csv"
    assert main(["verify", str(saved), "--periods", "0.5", "--format", "csv", "--out", str(frame_path)]) == EXIT_OK
    frame = pd.read_csv(frame_path)
    assert list(frame.columns[:4]) == ["t", "theta1", "theta2", "theta3"]


def test_verify_with_perturbed_angular_velocity_fails(workdir):
    saved = workdir / "check.json"
    main(["check", "--masses", "1,1,1", "--shape", RIGHT_ANGLES, "--out", str(saved)])
    out = workdir / "verify.json"
    assert main(["verify", str(saved), "--omega-scale", "1.1", "--out", str(out)]) == EXIT_NO_ROTATOR
    assert _read_json(out)["rigid"] is False


def test_special_points(workdir):
    out = workdir / "special.json"
    assert main(["special-points", "--out", str(out)]) == EXIT_OK
    payload = _read_json(out)
    assert set(payload) == {
        "sigma_s",
        "pi_minus_sigma_s",
        "sigma_E",
        "two_sigma_E",
        "right_angle_sigmas",
        "sigma_0",
        "nu_band",
    }
    assert payload["sigma_s"] == pytest.approx(1.24904, abs=1e-4)
    assert payload["sigma_0"] == pytest.approx(0.97202, abs=1e-4)


def _recheck_rows(frame):
    potential = CotangentPotential(1.0)
    for _, row in frame.iterrows():
        verdict = check_rotator(
            Masses(row["m1"], row["m2"], row["m3"]),
            Shape(row["sigma12"], row["sigma23"], row["sigma31"]),
            potential,
        )
        assert verdict.is_rotator, (row["parameter"], row["sigma31"], verdict.residual)
        assert verdict.omega_squared_scaled == pytest.approx(row["R3_omega2"], rel=1e-9)


def test_isosceles_curve(workdir):
    out = workdir / "curve.csv"
    assert main(["isosceles-curve", "--resolution", "6", "--out", str(out)]) == EXIT_OK
    frame = pd.read_csv(out, float_precision="round_trip")
    assert len(frame) > 0
    assert set(frame["family"]) == {"equal-mass-isosceles"}
    _recheck_rows(frame)


def test_two_equal_mass_curve_in_output_dir(workdir):
    assert main(["two-equal-mass", "--resolution", "5", "--out", "nu.csv"]) == EXIT_OK
    frame = pd.read_csv(workdir / "analysis_results" / "nu.csv", float_precision="round_trip")
    assert len(frame) > 0
    assert np.all(frame["nu"] > 0)
    np.testing.assert_allclose(frame["sigma12"], np.pi / 2)
    _recheck_rows(frame)
