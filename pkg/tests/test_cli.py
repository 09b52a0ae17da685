import json
import subprocess
import sys

import pytest

from framekit.algebra import LaurentPoly
from framekit.cli import dumps, main, run
from framekit.extension import demo_registry

H = "1/2"


def _write(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def _system_json(m0, mt0, m1, mt1):
    return {"m0": m0, "mt0": mt0, "gens": [m1], "tgens": [mt1]}


def test_check_demo_passes():
    report, code = run(["check", "--demo", "b2-single-pair"])
    assert code == 0 and report["outcome"]["all_pass"]
    assert report["outcome"]["cond_c"]["lambda"] == {"-1": "1/4", "0": "3/2", "1": "1/4"}


def test_check_reports_condition_b_failure(tmp_path):
    path = _write(tmp_path / "s.json", _system_json({"0": "3/4", "1": "1/4"}, {"0": "1/4", "1": H, "2": "1/4"},
                                                   {"0": H, "1": "-1/2"}, {"0": H, "1": "-1/2"}))
    report, code = run(["check", "--input", path])
    assert code == 1
    assert report["outcome"]["cond_b"]["pass"] is False


def test_check_accepts_dyadic_decimals(tmp_path):
    b2 = {"0": "0.25", "1": "0.5", "2": "0.25"}
    path = _write(tmp_path / "s.json", _system_json(b2, b2, {"0": "0.5", "1": "-0.5"}, {"0": "0.25", "1": "-0.5", "2": "0.25"}))
    report, code = run(["check", "--input", path])
    assert code == 0 and report["outcome"]["all_pass"]


def test_parse_errors(tmp_path):
    b2 = {"0": "1/4", "1": "1/2", "2": "1/4"}
    bad = _write(tmp_path / "bad.json", _system_json(b2, b2, {"0": "0.1"}, b2))
    assert run(["check", "--input", bad])[1] == 65
    floaty = _write(tmp_path / "float.json", _system_json(b2, b2, {"0": 0.5}, b2))
    assert run(["check", "--input", floaty])[1] == 65
    empty = _write(tmp_path / "empty.json", {"m0": b2, "mt0": b2, "gens": [], "tgens": []})
    report, code = run(["verify", "--input", empty])
    assert code == 65 and report["outcome"]["error"] == "ParseError"
    (tmp_path / "junk.json").write_text("{not json")
    assert run(["verify", "--input", str(tmp_path / "junk.json")])[1] == 65


def test_missing_file():
    report, code = run(["verify", "--input", "/nonexistent/system.json"])
    assert code == 66 and report["outcome"]["error"] == "IoError"


@pytest.mark.parametrize(
    "argv, code",
    [
        (["extend", "--demo", "b2-no-single-pair", "--mode", "one"], 3),
        (["extend", "--demo", "b2-no-single-pair", "--mode", "two"], 0),
        (["extend", "--demo", "b1-b3-mep", "--mode", "one"], 0),
        (["extend", "--demo", "b2-single-pair"], 0),
        (["verify", "--demo", "b2-nonbessel"], 1),
        (["demo", "all"], 0),
        (["demo", "b2l-two-pairs", "--l", "2"], 0),
        (["demo", "b2l-two-pairs", "--l", "3"], 0),
        (["demo", "list"], 0),
        (["demo", "nosuch"], 64),
        (["demo", "b2l-two-pairs", "--l", "1"], 64),
        (["render", "--demo", "b2-single-pair", "--jmin", "3", "--jmax", "1"], 64),
        (["frobnicate"], 64),
        (["check"], 64),
        ([], 64),
    ],
)
def test_exit_codes(argv, code):
    assert run(argv)[1] == code


def test_extend_cross_spline_masks():
    report, _ = run(["extend", "--demo", "b1-b3-mep"])
    out = report["outcome"]
    assert out["m2"]["poly"] == {"0": H, "1": "-1/2"}
    assert out["mt2"]["poly"] == {"0": H, "1": "-1/2"}
    assert out["report"]["verdict"] == "DualFrames"


def test_extend_necessary_failure(tmp_path):
    b2 = {"0": "1/4", "1": "1/2", "2": "1/4"}
    path = _write(tmp_path / "s.json", _system_json(b2, b2, {"0": "1"}, {"0": "1"}))
    report, code = run(["extend", "--input", path])
    assert code == 2 and report["outcome"]["error"] == "NecessaryConditionsFail"


def test_verify_completed_system_via_extend_report(tmp_path):
    report, _ = run(["extend", "--demo", "b2-single-pair"])
    path = tmp_path / "ext.json"
    path.write_text(dumps(report))
    verified, code = run(["verify", "--input", str(path)])
    assert code == 0 and verified["outcome"]["verdict"] == "DualFrames"


def test_render_writes_outputs(tmp_path):
    out = tmp_path / "render"
    report, code = run(["render", "--demo", "b2-single-pair", "--extend", "one", "--out", str(out)])
    assert code == 0
    recon = json.loads((out / "reconstruction.json").read_text())
    assert recon["l2_rel_error"] <= 5e-2
    assert {"j_min", "j_max", "level", "l2_rel_error"} <= set(recon)
    for name in ("phi", "phit", "psi1", "psit1", "psi2", "psit2"):
        assert (out / f"{name}.csv").read_text().startswith("x,value\n")
    assert max(report["outcome"]["mep_residual_float"]) <= 1e-12


def test_render_unverified_system_exits_1():
    report, code = run(["render", "--demo", "b2-single-pair", "--level", "5", "--jmax", "3"])
    assert code == 1 and report["outcome"]["reconstruction"] is None


def test_render_extend_failure_propagates():
    assert run(["render", "--demo", "b2-no-single-pair", "--extend", "one"])[1] == 3


def test_render_nonconvergent_mask(tmp_path):
    path = _write(tmp_path / "s.json", _system_json({"0": "1", "1": H, "2": "-1/2"}, {"0": H, "1": H},
                                                   {"0": H, "1": "-1/2"}, {"0": H, "1": "-1/2"}))
    report, code = run(["render", "--input", path, "--level", "5"])
    assert code == 5
    assert report["outcome"]["non_convergence"]


def test_render_complex_wavelets(tmp_path):
    b1 = {"0": H, "1": H}
    m1 = {"0": "1/2*i", "1": "-1/2*i"}
    path = _write(tmp_path / "s.json", _system_json(b1, b1, m1, m1))
    report, code = run(["render", "--input", path, "--level", "4", "--jmin", "-2", "--jmax", "3", "--out", str(tmp_path)])
    assert code == 0 and report["outcome"]["verdict"] == "DualFrames"
    assert (tmp_path / "psi1.csv").read_text().startswith("x,value,value_imag\n")


def test_render_complex_refinement_mask_is_refused(tmp_path):
    m0 = {"0": "1/2+1/4*i", "1": "1/2-1/4*i"}
    m1 = {"0": H, "1": "-1/2"}
    path = _write(tmp_path / "s.json", _system_json(m0, m0, m1, m1))
    report, code = run(["render", "--input", path, "--level", "4"])
    assert code == 1 and report["outcome"]["error"] == "ComplexMask"


def test_corollary_is_seeded(monkeypatch):
    monkeypatch.setenv("FRAMEKIT_SEED", "7")
    a, code = run(["corollary", "--count", "50"])
    b, _ = run(["corollary", "--count", "50"])
    assert code == 0 and a == b
    assert a["outcome"]["agree"] == 50 and a["outcome"]["criterion_equals_2"] > 0
    monkeypatch.setenv("FRAMEKIT_SEED", "x")
    assert run(["corollary"])[1] == 64


def test_output_is_sorted_and_byte_stable(capsys):
    assert main(["demo", "b1-b3-mep"]) == 0
    first = capsys.readouterr().out
    assert main(["demo", "b1-b3-mep"]) == 0
    assert capsys.readouterr().out == first
    data = json.loads(first)
    assert list(data) == sorted(data)
    assert data["exit_code"] == 0 and data["command"] == "demo"


def test_demo_systems_round_trip_through_files(tmp_path):
    sys_ = demo_registry("b2-nonbessel").system
    path = _write(tmp_path / "s.json", sys_.to_json())
    report, code = run(["verify", "--input", path])
    assert code == 1 and report["outcome"]["verdict"] == "BesselFails"
    assert report["outcome"]["identity_holds"] is True


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "framekit", "demo", "nosuch"], capture_output=True, text=True)
    assert proc.returncode == 64
    assert json.loads(proc.stdout)["outcome"]["error"] == "UnknownDemo"


def test_lambda_json_keys_are_sorted_numerically():
    p = LaurentPoly({10: 1, -2: 1, 3: 1})
    assert list(p.to_json()) == ["-2", "3", "10"]
