import io
import json
import subprocess
import sys

import pytest

from momentlag import corpus
from momentlag.cli import run


def call(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def fixture(name):
    return str(corpus.fixture_dir() / f"{name}.json")


def test_cohomology_pentagon():
    code, out, _ = call("cohomology", "--polytope", fixture("pentagon"), "--coeff", "Z")
    assert code == 0
    data = json.loads(out)
    assert [data["betti"][str(k)] for k in range(8)] == [1, 0, 0, 5, 5, 0, 0, 1]
    assert data["torsion"] == {}


def test_maslov_product_of_simplices():
    code, out, _ = call("maslov", "--quadrics", fixture("prodsimplex_p3_n9"))
    assert code == 0
    data = json.loads(out)
    assert data["value"] == 3 and "gcd(3,6)" in data["trail"]


def test_maslov_not_monotone_exits_one():
    code, out, err = call("maslov", "--polytope", fixture("pentagon"))
    assert code == 1 and out == ""
    data = json.loads(err)
    assert data["error"] == "NotMonotone"


def test_missing_file_is_usage_error():
    code, _, err = call("check", "--polytope", "/nonexistent/nowhere.json")
    assert code == 2 and "momentlag" in err


def test_bad_verb_is_usage_error():
    code, _, _ = call("frobnicate")
    assert code == 2


def test_bad_json_is_usage_error(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert call("check", "--polytope", str(p))[0] == 2


def test_check_and_gale():
    code, out, _ = call("check", "--polytope", fixture("hexagon"))
    data = json.loads(out)["polytope"]
    assert code == 0 and data["delzant"] and data["fano"]
    code, out, _ = call("gale", "--polytope", fixture("square"))
    assert code == 0 and json.loads(out)["quadrics"]["Gamma"] == [[1, 0, 1, 0], [0, 1, 0, 1]]


def test_wedge_then_cohomology(tmp_path):
    code, out, _ = call("wedge", "--polytope", fixture("square"), "--J", "2,3,1,2")
    assert code == 0
    p = tmp_path / "w.json"
    p.write_text(out)
    code, out, _ = call("cohomology", "--quadrics", str(p))
    betti = json.loads(out)["betti"]
    assert {k: v for k, v in betti.items() if v} == {"0": 1, "5": 1, "9": 1, "14": 1}


def test_real_cohomology():
    code, out, _ = call("real-cohomology", "--polytope", fixture("pentagon"))
    data = json.loads(out)
    assert code == 0 and data["cover"] == [1, 10, 1] and data["quotient"] == [1, 6, 1]


def test_massey_verb():
    code, out, _ = call(
        "massey", "--polytope", fixture("truncated_cube"), "--coeff", "Q", "--a", "y3v6", "--b", "y1v4", "--c", "y5v2"
    )
    assert code == 0 and json.loads(out)["nontrivial"] is True
    code, _, _ = call("massey", "--polytope", fixture("truncated_cube"))
    assert code == 2


def test_report_hexagon():
    code, out, _ = call("report", "--quadrics", fixture("hexagon"))
    data = json.loads(out)
    assert code == 0 and data["ambient"] == "CP^5"


def test_table_format():
    code, out, _ = call("maslov", "--quadrics", fixture("prodsimplex_p2_n5"), "--format", "table")
    assert code == 0 and "value" in out and not out.lstrip().startswith("{")


def test_output_is_deterministic():
    first = call("report", "--quadrics", fixture("wide_narrow_k1"))[1]
    second = call("report", "--quadrics", fixture("wide_narrow_k1"))[1]
    assert first == second


def test_stdin_and_console_script():
    doc = (corpus.fixture_dir() / "prodsimplex_p3_n6.json").read_bytes()
    cmd = [sys.executable, "-m", "momentlag.cli", "maslov", "--quadrics", "-"]
    a = subprocess.run(cmd, input=doc, capture_output=True, check=True)
    b = subprocess.run(cmd, input=doc, capture_output=True, check=True)
    assert a.stdout == b.stdout
    assert json.loads(a.stdout)["value"] == 3


def test_fixture_name_fallback():
    code, out, _ = call("maslov", "--quadrics", "three_spheres.json")
    assert code == 0 and json.loads(out)["value"] == 2


@pytest.mark.parametrize("names", [["square", "pentagon", "prodsimplex_p3_n9", "non_delzant"]])
def test_fixtures_verb_matches_golden(names):
    code, out, err = call("fixtures", *names)
    assert code == 0, err
    data = json.loads(out)
    assert data["all_match"] and set(data["fixtures"].values()) == {"ok"}


def test_unknown_fixture():
    assert call("fixtures", "no_such_thing")[0] == 2


def test_bare_fixture_name_is_accepted():
    code, out, _ = call("cohomology", "--polytope", "pentagon", "--coeff", "Z")
    assert code == 0
    betti = {k: v for k, v in json.loads(out)["betti"].items() if v}
    assert betti == {"0": 1, "3": 5, "4": 5, "7": 1}
