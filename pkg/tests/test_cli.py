import json

import pytest

from liehamilton.cli import dumps, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_catalog_entry(capsys):
    code, out, _ = run(capsys, "catalog", "sl2", "--json")
    data = json.loads(out)
    assert code == 0 and data["casimirs"] == ["e1*e3 - e2^2"]


def test_catalog_unknown_is_usage_error(capsys):
    code, _, err = run(capsys, "catalog", "nope")
    assert code == 2 and "unknown" in err


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "sl2", "-1", "--json")
    data = json.loads(out)
    assert code == 0 and data["label"] == "I4"
    assert data["evidence"]["det_on_leaf"] == "e1^2*k"
    assert data["sampled_check"]["max_abs_det_minus_closed_form"] < 1e-12


def test_classify_unsupported(capsys):
    assert run(capsys, "classify", "I14A", "1")[0] == 2
    assert run(capsys, "classify", "so3", "-1")[0] == 2


def test_project(capsys):
    code, out, _ = run(capsys, "project", "R_semi_R2", "--json")
    data = json.loads(out)
    assert code == 0 and all(c["pass"] for c in data["checks"])


def test_verify_pass_and_fault(capsys):
    assert run(capsys, "verify", "kks")[0] == 0
    code, out, _ = run(capsys, "verify", "algebra", "--inject-fault", "so3-sign")
    assert code == 1 and "algebra.so3.jacobi" in out


def _config(tmp_path, **over):
    cfg = {"system": {"algebra": "so3"}, "coefficients": [1, {"type": "trig", "terms": [[0, 1, 2]]}, 0.5],
           "x0": [1, 0.5, 0.2], "t_span": [0, 2], "samples": 5,
           "output": {"csv": str(tmp_path / "t.csv"), "json": str(tmp_path / "t.json")}}
    cfg.update(over)
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    return p


def test_integrate_writes_outputs(capsys, tmp_path):
    code, _, _ = run(capsys, "integrate", "-c", str(_config(tmp_path)), "--tol", "1e-10")
    assert code == 0
    rep = json.loads((tmp_path / "t.json").read_text())
    assert rep["drift"]["e1^2 + e2^2 + e3^2"] < 1e-8
    assert len((tmp_path / "t.csv").read_text().splitlines()) == 6


def test_integrate_group_random(capsys, tmp_path):
    p = _config(tmp_path, system={"group": "SL2"}, coefficients="random_trig", x0=None)
    cfg = json.loads(p.read_text())
    del cfg["x0"]
    p.write_text(json.dumps(cfg))
    assert run(capsys, "integrate", "-c", str(p))[0] == 0


def test_integrate_failure_is_numeric(capsys, tmp_path):
    p = _config(tmp_path, system={"algebra": "sl2"}, coefficients=[0, 200, 0], x0=[1, 0, 1], t_span=[0, 10])
    code, _, err = run(capsys, "integrate", "-c", str(p))
    assert code == 3 and "non-finite" in err


@pytest.mark.parametrize("over", [{"coefficients": [1, 2]}, {"x0": [1, 2]}, {"t_span": [0]},
                                  {"system": {"algebra": "bogus"}}])
def test_integrate_bad_config(capsys, tmp_path, over):
    assert run(capsys, "integrate", "-c", str(_config(tmp_path, **over)))[0] == 2


def test_bad_tol_and_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "kks", "--tol", "-1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nope"])
    assert exc.value.code == 2


def test_dumps_seventeen_digits():
    assert dumps({"x": 0.1}) == '{\n  "x": 0.10000000000000001\n}'
    assert json.loads(dumps([1.0 / 3, float("nan")])) == [1.0 / 3, None]
