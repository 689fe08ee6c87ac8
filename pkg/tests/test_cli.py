import json
from pathlib import Path


from thermoamoeba.cli import run
from thermoamoeba.io import config_hash, fmt

DATA = Path(__file__).resolve().parent.parent / "data"


def test_admissible_prints_false(capsys):
    assert run(["admissible", "--spectrum", str(DATA / "fermi.json"), "--u", "1"]) == 0
    assert capsys.readouterr().out.strip() == "false"


def test_compare_table_is_zero(tmp_path):
    code = run(["--out", str(tmp_path), "ensemble-compare", "--spectrum", str(DATA / "fermi.json"),
                "--u", "1/2", "--N", "4,8,12"])
    assert code == 0
    lines = (tmp_path / "ensemble_compare.csv").read_text().splitlines()
    assert lines[0].startswith("# config-hash: ")
    assert all(l.split(",")[-1] == "0.0" for l in lines[2:])


def test_exit_codes(tmp_path):
    fermi = str(DATA / "fermi.json")
    assert run(["--out", str(tmp_path), "ensemble-solve", "--spectrum", fermi, "--u", "2"]) == 2
    assert run(["--out", str(tmp_path), "ensemble-solve", "--spectrum", fermi, "--u", "1"]) == 3
    assert run(["--nope"]) == 2
    assert run(["amoeba", "--poly", str(tmp_path / "missing.json")]) == 2
    assert run(["amoeba", "--poly", str(DATA / "four_component.json"), "--x1", "0:1:1"]) == 2


def test_outputs_byte_identical_across_workers(tmp_path):
    outs = []
    for w in ("1", "3"):
        d = tmp_path / w
        args = ["--out", str(d), "--workers", w, "amoeba", "--poly", str(DATA / "four_component.json"),
                "--x1", "-2:2:12", "--phases", "16"]
        assert run(args) == 0
        outs.append(((d / "amoeba.csv").read_bytes(), (d / "amoeba.svg").read_bytes()))
    assert outs[0] == outs[1]
    assert b"<!-- config-hash:" in outs[0][1]


def test_components_json(tmp_path):
    assert run(["--out", str(tmp_path), "components", "--poly", str(DATA / "four_component.json"),
                "--grid", "-4:4:24"]) == 0
    doc = json.loads((tmp_path / "components.json").read_text())
    assert "config_hash" in doc
    assert sorted(tuple(c["order"]) for c in doc["components"]) == [(0, 0), (1, 1), (1, 2), (2, 1)]
    assert doc["duplicates"] == []


def test_asymp_and_coeffs(tmp_path):
    args = ["--P", str(DATA / "one2.json"), "--Q", str(DATA / "line.json")]
    assert run(["--out", str(tmp_path), "coeffs", *args, "--vertex", "0,0", "--alpha", "3,3"]) == 0
    assert "3,3,20" in (tmp_path / "coeffs.csv").read_text()
    assert run(["--out", str(tmp_path), "asymp", *args, "--q", "1,1", "--k", "10:30:10"]) == 0
    assert (tmp_path / "asymp.csv").read_text().splitlines()[1] == "k,exact,estimate,ratio"


def test_contour_csv(tmp_path):
    assert run(["--out", str(tmp_path), "contour", "--poly", str(DATA / "line.json"), "--directions", "8"]) == 0
    rows = (tmp_path / "contour.csv").read_text().splitlines()
    assert rows[1] == "q_angle,x1,x2,branch_id" and len(rows) == 10


def test_exact_and_solve_outputs(tmp_path):
    assert run(["--out", str(tmp_path), "ensemble-exact", "--spectrum", str(DATA / "three_level.json"),
                "--N", "3", "--E", "3"]) == 0
    doc = json.loads((tmp_path / "ensemble_exact.json").read_text())
    assert doc["total_states"] == "7" and doc["averages"] == {"0": "6/7", "1": "9/7", "2": "6/7"}
    assert run(["--out", str(tmp_path), "ensemble-solve", "--spectrum", str(DATA / "fermi.json"),
                "--u", "1/2"]) == 0
    doc = json.loads((tmp_path / "ensemble_solve.json").read_text())
    assert doc["T"] == ["inf"] and doc["infinite_temperature"] == [True]


def test_hash_and_format():
    assert config_hash({"a": 1, "b": 2}) == config_hash({"b": 2, "a": 1})
    from fractions import Fraction
    assert fmt(Fraction(1, 2)) == "1/2" and fmt(Fraction(4, 2)) == "2"
