import json

import numpy as np
import pytest

import maxcorr as mc
from maxcorr.cli import main, read_state_file, write_joint_csv, write_state_file


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code in (0, 1), err
    return code, json.loads(out)


def test_gen_and_mu_roundtrip(tmp_path, capsys):
    path = str(tmp_path / "iso.json")
    code, rep = report(capsys, "gen", "isotropic", "0.4", "-o", path)
    assert code == 0
    assert rep["results"]["digest"].startswith("sha256:")

    code, rep = report(capsys, "mu", path)
    assert code == 0
    assert abs(rep["results"]["mu"] - 0.6) < 1e-10
    assert rep["results"]["marginal_ranks"] == [2, 2]
    assert rep["warnings"] == []


def test_state_file_roundtrip(tmp_path):
    st = mc.random_density(3, 2, seed=7)
    path = str(tmp_path / "st.json")
    write_state_file(path, st)
    back = read_state_file(path)
    assert (back.d_a, back.d_b) == (3, 2)
    assert np.max(np.abs(back.rho - st.rho)) < 1e-15


def test_mu_witness_payload(tmp_path, capsys):
    path = str(tmp_path / "iso.json")
    report(capsys, "gen", "isotropic", "0.2", "-o", path)
    code, rep = report(capsys, "mu", path, "--witness")
    assert code == 0
    w = rep["results"]["witness"]
    assert w["hermitian"] is True
    assert abs(w["objective"] - 0.8) < 1e-10
    assert abs(w["mean_x"][0]) < 1e-10 and abs(w["mean_x"][1]) < 1e-10


def test_mu_oracle_agreement(tmp_path, capsys):
    path = str(tmp_path / "st.json")
    report(capsys, "gen", "random", "--da", "2", "--db", "3", "--seed", "5", "-o", path)
    code, rep = report(capsys, "mu", path, "--oracle", "--restarts", "4", "--seed", "2")
    assert code == 0
    assert rep["results"]["oracle"]["agrees"] is True


def test_reports_are_deterministic_apart_from_timing(tmp_path, capsys):
    path = str(tmp_path / "st.json")
    report(capsys, "gen", "random", "--da", "2", "--db", "2", "--seed", "9", "-o", path)
    _, first = report(capsys, "ment", path, "--restarts", "1", "--iters", "40", "--seed", "3")
    _, second = report(capsys, "ment", path, "--restarts", "1", "--iters", "40", "--seed", "3")
    first.pop("timing")
    second.pop("timing")
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_mu_classical_on_generated_table(tmp_path, capsys):
    path = str(tmp_path / "bsc.csv")
    report(capsys, "gen", "bsc", "0.25", "-o", path)
    code, rep = report(capsys, "mu-classical", path)
    assert code == 0
    assert abs(rep["results"]["mu"] - 0.5) < 1e-12


def test_mu_classical_rejects_bad_table(tmp_path, capsys):
    path = str(tmp_path / "bad.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("0.5, 0.6\n0.2, 0.2\n")
    code, out, err = run(capsys, "mu-classical", path)
    assert code == 2
    assert "error:" in err


def test_ment_detects_separable_family_member(tmp_path, capsys):
    path = str(tmp_path / "iso07.json")
    report(capsys, "gen", "isotropic", "0.7", "-o", path)
    code, rep = report(capsys, "ment", path, "--restarts", "0")
    assert code == 0
    res = rep["results"]
    assert res["upper_bound"] <= 1e-8
    assert res["ppt"]["is_ppt"] is True
    assert res["isotropic"]["separable"] is True
    assert abs(res["isotropic"]["epsilon"] - 0.7) < 1e-9


def test_ment_on_bell_state(tmp_path, capsys):
    path = str(tmp_path / "bell.json")
    report(capsys, "gen", "isotropic", "0.0", "-o", path)
    code, rep = report(capsys, "ment", path, "--restarts", "0")
    res = rep["results"]
    assert abs(res["upper_bound"] - 1.0) < 1e-9
    assert abs(res["lower_bound"] - 1.0) < 1e-9
    assert res["ppt"]["is_ppt"] is False


def test_iso_bounds_command(capsys):
    code, rep = report(capsys, "iso-bounds", "--epsilon", "0.4")
    assert code == 0
    res = rep["results"]
    assert abs(res["lower"] - 0.4) < 1e-12
    assert abs(res["upper"] - 0.6) < 1e-12
    assert res["separable"] is False

    code, _, err = run(capsys, "iso-bounds", "--epsilon", "1.4")
    assert code == 2


def test_twirl_command_reports_family_parameter(tmp_path, capsys):
    path = str(tmp_path / "st.json")
    report(capsys, "gen", "random", "--da", "2", "--db", "2", "--seed", "11", "-o", path)
    code, rep = report(capsys, "twirl", path)
    assert code == 0
    res = rep["results"]
    assert res["clifford_average_gap"] < 1e-10
    assert abs(res["bell_fidelity_in"] - res["bell_fidelity_out"]) < 1e-10
    twirled = np.array(
        [[complex(re, im) for re, im in row] for row in res["state"]["matrix"]]
    )
    iso = mc.isotropic(min(max(res["epsilon"], 0.0), 1.0))
    if 0.0 <= res["epsilon"] <= 1.0:
        assert np.max(np.abs(twirled - iso.rho)) < 1e-9


def test_ppt_command(tmp_path, capsys):
    path = str(tmp_path / "iso.json")
    report(capsys, "gen", "isotropic", "0.5", "-o", path)
    code, rep = report(capsys, "ppt", path)
    assert code == 0
    assert rep["results"]["is_ppt"] is False
    assert abs(rep["results"]["min_eigenvalue"] + 0.125) < 1e-10


@pytest.mark.parametrize(
    "name,trials", [("dpi", 5), ("tensor", 4), ("extremes", 4), ("semicontinuity", 4)]
)
def test_property_suites_pass(name, trials, capsys):
    code, rep = report(capsys, "suite", name, "--trials", str(trials), "--seed", "1")
    assert code == 0
    assert rep["results"]["violations"] == 0


def test_ment_suites_pass(capsys):
    code, rep = report(capsys, "suite", "ment-dpi", "--trials", "2", "--seed", "4")
    assert code == 0
    code, rep = report(capsys, "suite", "ment-tensor", "--trials", "2", "--seed", "4")
    assert code == 0


def test_suite_rejects_unknown_name(capsys):
    code, out, err = run(capsys, "suite", "nonsense", "--trials", "2")
    assert code == 2
    assert "unknown suite" in err


def test_missing_file_is_an_input_error(capsys):
    code, out, err = run(capsys, "mu", "/no/such/file.json")
    assert code == 2


def test_malformed_state_file_is_an_input_error(tmp_path, capsys):
    path = str(tmp_path / "broken.json")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write('{"dims": [2, 2]}')
    code, out, err = run(capsys, "mu", path)
    assert code == 2
    assert "error:" in err


def test_gen_rejects_oversized_dims(capsys, tmp_path):
    code, out, err = run(
        capsys, "gen", "random", "--da", "5", "--db", "2", "-o", str(tmp_path / "x.json")
    )
    assert code == 2


def test_tolerance_override_is_recorded(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MAXCORR_TOL", "1e-05")
    path = str(tmp_path / "iso.json")
    report(capsys, "gen", "isotropic", "0.3", "-o", path)
    code, rep = report(capsys, "mu", path, "--oracle")
    assert rep["tolerances"]["agreement_tol"] == 1e-05
    assert rep["tolerances"]["agreement_tol_source"] == "env:MAXCORR_TOL"

    monkeypatch.setenv("MAXCORR_TOL", "banana")
    code, out, err = run(capsys, "mu", path)
    assert code == 2


def test_csv_joint_roundtrip(tmp_path):
    joint = mc.ClassicalJoint(np.array([[0.3, 0.2], [0.1, 0.4]]))
    path = str(tmp_path / "j.csv")
    write_joint_csv(path, joint)
    from maxcorr.cli import read_joint_csv

    back = read_joint_csv(path)
    assert np.max(np.abs(back.probs - joint.probs)) < 1e-15
