import csv
import io
import json
import time
from importlib import resources

import jsonschema
import pytest

from nilclose.cli import EXAMPLES, run


def schema(name):
    return json.loads(resources.files("nilclose").joinpath("schemas", name + ".schema.json").read_text())


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def problem(tmp_path, doc, name="p.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc, indent=2))
    return str(path)


HEIS = {"format": 1, "field": {"min_poly": ["-2", "0", "1"], "root_interval": ["1", "2"]},
        "group": "full_ut", "n": 3}


def test_examples_listing():
    code, out, _ = call("examples")
    assert code == 0
    assert json.loads(out)["examples"] == list(EXAMPLES)


def test_examples_are_schema_valid(tmp_path):
    for name in EXAMPLES:
        code, out, _ = call("examples", name, "--out-dir", str(tmp_path))
        assert code == 0
        doc = json.loads(out)
        jsonschema.validate(doc, schema("problem"))
        assert json.loads((tmp_path / (name + ".json")).read_text()) == doc


def test_unknown_example():
    code, _, err = call("examples", "torus-knot")
    assert code == 2 and "unknown example" in err


def test_heisenberg_line_closure_is_dense(tmp_path):
    code, out, _ = call("examples", "heisenberg-line")
    path = problem(tmp_path, json.loads(out))
    code, out, _ = call("closure-polymap", "--input", path)
    assert code == 0
    res = json.loads(out)
    jsonschema.validate(res, schema("closure_result"))
    assert res["dense_in_group"] is True
    assert res["dims"] == {"raw": 1, "closed": 3}


def test_heisenberg_abelian_commands():
    code, out, _ = call("closure-orbit", "--input", "heisenberg-abelian")
    res = json.loads(out)
    assert code == 0 and res["dims"] == {"raw": 1, "closed": 2}
    assert res["algebra_rational_basis"] == [["1", "0", "0"], ["0", "1", "0"]]
    code, out, _ = call("rationalize", "--input", "heisenberg-abelian")
    sub = json.loads(out)
    jsonschema.validate(sub, schema("subalgebra"))
    assert sub["dim"] == 2 and sub["rational"]
    code, out, _ = call("malcev", "--input", "heisenberg-abelian")
    mal = json.loads(out)
    jsonschema.validate(mal, schema("malcev"))
    assert mal["prefixes_closed"]


def test_kronecker_equi_below_threshold(tmp_path):
    code, out, _ = call("equi", "--input", "kronecker", "--out-dir", str(tmp_path))
    assert code == 0
    verdict = json.loads(out)
    jsonschema.validate(verdict, schema("equi_verdict"))
    assert verdict["verdict"] == "cud-consistent"
    assert verdict["exact"]["cud"] is True
    rows = list(csv.DictReader((tmp_path / "weyl.csv").open()))
    last = [r for r in rows if float(r["T"]) == 1e4]
    assert last and all(float(r["abs_W"]) < 0.02 for r in last)


def test_ln_curve_equi_not_cud():
    code, out, _ = call("equi", "--input", "ln-curve")
    assert code == 0
    assert json.loads(out)["verdict"] == "not-cud"


def test_malformed_rational_reports_position(tmp_path):
    doc = dict(HEIS, subalgebra={"basis": [["1", "1/0", "theta"]]})
    path = problem(tmp_path, doc)
    code, _, err = call("rationalize", "--input", path)
    assert code == 2
    assert "line" in err and "column" in err
    assert "subalgebra/basis/0/1" in err


def test_bad_json_reports_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"format": 1,\n  "n": 3,,\n}')
    code, _, err = call("closure-orbit", "--input", str(path))
    assert code == 2 and "line 2" in err


def test_schema_error_exit(tmp_path):
    path = problem(tmp_path, dict(HEIS, options={"seed": -1}, subalgebra={"basis": []}))
    code, _, err = call("rationalize", "--input", path)
    assert code == 2 and "options/seed" in err


def test_missing_input():
    code, _, err = call("malcev")
    assert code == 2 and "--input" in err


def test_image_not_in_group_exit(tmp_path):
    doc = dict(HEIS)
    doc["group"] = {"n": 3, "algebra_basis": [["1", "0", "0"], ["0", "1", "0"]]}
    doc["map"] = {"vars": ["t"], "factors": [{"exp": [["0", "0", "0"], ["0", "0", "t"], ["0", "0", "0"]]}]}
    code, _, err = call("closure-polymap", "--input", problem(tmp_path, doc))
    assert code == 4 and "precondition" in err


def test_non_subalgebra_exit(tmp_path):
    doc = dict(HEIS, subalgebra={"basis": [["1", "0", "0"], ["0", "0", "1"]]})
    code, _, _ = call("malcev", "--input", problem(tmp_path, doc))
    assert code == 4


def test_failing_verify_exit(tmp_path):
    # dense line checked with a deliberately tiny orbit sample
    code, out, _ = call("examples", "heisenberg-line")
    path = problem(tmp_path, json.loads(out))
    code, out, err = call("verify", "--input", path, "--samples", "50", "--out-dir", str(tmp_path))
    assert code == 3
    rep = json.loads(out)
    jsonschema.validate(rep, schema("verify_report"))
    assert rep["failed_directions"] == ["density"]
    assert "density" in err
    assert (tmp_path / "samples.csv").read_text().count("\n") == 51


def test_verify_passes_and_writes_side_files(tmp_path):
    code, out, _ = call("verify", "--input", "heisenberg-abelian", "--samples", "20000",
                        "--out-dir", str(tmp_path))
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, schema("verify_report"))
    assert rep["max_orbit_to_predicted"] <= 1e-6
    assert rep["counts"]["orbit"] == 20000
    assert json.loads((tmp_path / "report.json").read_text()) == rep


def test_seed_changes_samples_deterministically(tmp_path):
    def samples(seed, tag):
        d = tmp_path / tag
        call("verify", "--input", "kronecker", "--samples", "2000", "--seed", str(seed), "--out-dir", str(d))
        return (d / "samples.csv").read_text()

    first = samples(1, "a")
    assert samples(1, "b") == first
    assert samples(2, "c") != first


def test_tol_flag_overrides_containment(tmp_path):
    doc = json.loads(call("examples", "heisenberg-abelian")[1])
    path = problem(tmp_path, doc)
    code, out, _ = call("verify", "--input", path, "--samples", "5000", "--tol", "1e-20")
    rep = json.loads(out)
    assert rep["tolerances"]["containment"] == 1e-20
    assert code == (3 if rep["max_orbit_to_predicted"] > 1e-20 else 0)


def test_rational_polymap_from_stdin(monkeypatch):
    doc = {"format": 1, "group": "full_ut", "n": 3,
           "map": {"vars": ["t", "s"], "factors": [
               {"matrix": [["1", "t", "1/2*t^2"], ["0", "1", "t"], ["0", "0", "1"]]},
               {"exp": [["0", "0", "s"], ["0", "0", "0"], ["0", "0", "0"]]}]}}
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(doc)))
    code, out, _ = call("closure-polymap", "--input", "-")
    assert code == 0
    assert json.loads(out)["dims"] == {"raw": 2, "closed": 2}


@pytest.mark.parametrize("name", EXAMPLES)
def test_every_example_runs_quickly(name):
    doc = json.loads(call("examples", name)[1])
    commands = ["verify"]
    if "subalgebra" in doc:
        commands += ["closure-orbit", "rationalize", "malcev"]
    if "map" in doc:
        commands.append("closure-polymap")
    if "curve" in doc:
        commands.append("equi")
    for c in commands:
        start = time.perf_counter()
        code, out, err = call(c, "--input", name)
        assert code == 0, err
        assert json.loads(out)["format"] == 1
        assert time.perf_counter() - start < 60
