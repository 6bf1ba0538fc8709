import csv
import io
import json

import pytest

from chromascope import families as fam
from chromascope.cli import main
from chromascope.commands import parse_probability, resolve_graph, verdict
from chromascope.io import read_graph
from chromascope.report import RunReport


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_expect_exact_json(capsys):
    code, out, _ = run(capsys, "expect", "--graph", "K4", "--p", "0.5", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1
    assert data["results"]["expectation"] == {"value": "151/64", "provenance": "exact", "decimal": 2.359375}


def test_expect_c7_half_is_two(capsys):
    code, out, _ = run(capsys, "expect", "--graph", "C7", "--p-frac", "1/2", "--format", "json")
    assert json.loads(out)["results"]["expectation"]["value"] == 2


def test_reports_are_byte_identical(capsys):
    argv = ["expect", "--graph", "petersen", "--p", "0.3", "--mode", "mc", "--samples", "2000",
            "--seed", "7", "--format", "json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert "monte-carlo seed=7 samples=2000" in first


def test_generated_seed_is_recorded(capsys):
    _, out, _ = run(capsys, "expect", "--graph", "K4", "--p", "0.5", "--mode", "mc", "--samples", "100",
                    "--format", "json")
    inputs = json.loads(out)["inputs"]
    assert inputs["seed_generated"] is True and isinstance(inputs["seed"], int)


def test_cap_exceeded_is_an_advisory(capsys):
    code, _, err = run(capsys, "expect", "--graph", "M5", "--p", "0.5")
    assert code == 3 and "Monte Carlo" in err


def test_parse_error_names_the_line(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2\n0 1\n1 1\n")
    code, _, err = run(capsys, "expect", "--graph", bad, "--p", "0.5")
    assert code == 2 and "bad.txt:3:" in err


def test_bad_probability(capsys):
    code, _, err = run(capsys, "expect", "--graph", "K4", "--p", "1.5")
    assert code == 2 and "[0, 1]" in err


@pytest.mark.parametrize("family, params, n, m", [
    ("kneser", [5, 2], 10, 15),
    ("mycielski", [4], 11, 20),
    ("critical", [4, 9], 19, None),
    ("catalog", ["G3"], 8, 10),
])
def test_gen_roundtrip(tmp_path, capsys, family, params, n, m):
    out = tmp_path / "g.txt"
    code, text, _ = run(capsys, "gen", family, *params, "--out", out)
    g = read_graph(out)
    assert code == 0 and g.n == n and (m is None or g.m == m)
    assert f"n = {n}" in text
    _, stdout_text, _ = run(capsys, "gen", family, *params)
    assert stdout_text == out.read_text()


def test_gen_zykov_writes_parts(tmp_path, capsys):
    code, _, _ = run(capsys, "gen", "zykov", 3, 2, 1, "--out", tmp_path / "z.txt")
    assert code == 0
    assert read_graph(tmp_path / "z.base.txt") == fam.complete(9)
    z = fam.zykov_family(3, 2, 1)
    assert read_graph(tmp_path / "z.part1.txt") == z.parts[0]
    assert read_graph(tmp_path / "z.part2.txt") == z.parts[1]


def test_gen_rejects_bad_params(capsys):
    code, _, err = run(capsys, "gen", "zykov", 4, 2, 1)
    assert code == 2 and "prime" in err


def test_curve_csv(tmp_path, capsys):
    out = tmp_path / "c.csv"
    code, _, _ = run(capsys, "curve", "--graph", "M4", "--p-min", 0, "--p-max", 0.5, "--steps", 11,
                     "--out", out)
    rows = list(csv.reader(out.open()))
    assert code == 0 and rows[0] == ["p", "value", "std_error"] and len(rows) == 12
    assert rows[1] == ["0.0", "1.0", ""]
    code, text, _ = run(capsys, "curve", "--graph", "K3", "--p-min", 0, "--p-max", 1, "--steps", 2)
    assert text == "p,value,std_error\n0.0,1.0,\n1.0,3.0,\n"


def test_curve_mc_has_errors(capsys):
    _, text, _ = run(capsys, "curve", "--graph", "petersen", "--mode", "mc", "--samples", 200,
                     "--seed", 1, "--steps", 3)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert all(r["std_error"] != "" for r in rows)


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--graph", "K10", "--p", "0.5", "--c", 1, "--format", "json")
    res = json.loads(out)["results"]
    assert code == 0 and res["chi"]["value"] == 10
    assert res["hoffman"]["value"] == pytest.approx(10)
    code, out, _ = run(capsys, "bounds", "--graph", "KG6,2", "--format", "json")
    res = json.loads(out)["results"]
    assert res["hoffman"]["value"] == pytest.approx(3) and res["chi"]["value"] == 4
    assert {"compact_bound", "spectral_chi_bound", "aks_comparison", "chi_pow_p"} <= set(res)


@pytest.mark.parametrize("q, n, t, product", [(3, 2, 1, 9), (5, 3, 1, 125)])
def test_verify_product_bound(capsys, q, n, t, product):
    code, out, _ = run(capsys, "verify-product-bound", q, n, t, "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["results"]["product"]["value"] == product


def test_deviation_bench_csv(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code, _, _ = run(capsys, "deviation-bench", "--graph", "petersen", "--p", "0.5", "--trials", 5,
                     "--seed", 3, "--out", out)
    rows = list(csv.reader(out.open()))
    assert code == 0
    assert rows[0] == ["seed", "p", "norm_x", "sigma_exact", "envelope_c4", "perturb_slack_max",
                       "perturb_slack_min"]
    assert [r[0] for r in rows[1:]] == ["3", "4", "5", "6", "7"]
    code, _, _ = run(capsys, "deviation-bench", "--graph", "petersen", "--p", "1", "--trials", 3,
                     "--seed", 0, "--out", out)
    assert all(float(r[2]) == 0 for r in list(csv.reader(out.open()))[1:])


def test_deviation_bench_fails_with_tiny_envelope(capsys):
    code, out, _ = run(capsys, "deviation-bench", "--graph", "petersen", "--p", "0.5", "--trials", 3,
                       "--seed", 3, "--c", 0.001)
    assert code == 1 and "FAIL" in out


def test_verify_shinkar(capsys):
    code, out, _ = run(capsys, "verify-shinkar", 3, 2, "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["results"]["max_ratio"]["value"] == 3 and data["results"]["chi"]["value"] == 4
    assert data["results"]["witness"]["full_vertex_set"] is True
    code, _, _ = run(capsys, "verify-shinkar", 2, 2)
    assert code == 0


def test_verify_catalog_reports_every_entry(capsys):
    code, out, _ = run(capsys, "verify-catalog", "--format", "json")
    data = json.loads(out)
    values = [c for c in data["checks"] if c["name"].endswith("value at 1/2")]
    assert len(values) == 11 and all(c["pass"] for c in values)
    # the printed table itself has G8 below K4 at 1/2, so that row fails honestly
    failing = [c["name"] for c in data["checks"] if not c["pass"]]
    assert failing == ["K4 strictly minimal at p=1/2"]
    assert code == 1


def test_critical(capsys):
    _, out, _ = run(capsys, "critical", "--graph", "grotzsch", "--format", "json")
    assert json.loads(out)["results"]["edge_critical"]["value"] is True


def test_poly_export(capsys):
    code, out, _ = run(capsys, "poly", "--graph", "K3")
    data = json.loads(out)
    assert data == {"n": 3, "m": 3, "counts": [[0, 1, "1"], [1, 2, "3"], [2, 2, "3"], [3, 3, "1"]]}


def test_compare_complete_exact(capsys):
    code, out, _ = run(capsys, "compare-complete", 4, "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["tables"]["comparison"]) == 10
    assert all(r["verdict"] == "consistent" for r in data["tables"]["comparison"])


def test_verdicts():
    assert verdict(2.0, None, 1.9) == "consistent"
    assert verdict(1.8, None, 1.9) == "violation"
    assert verdict(1.95, 0.1, 1.9) == "consistent"
    assert verdict(1.85, 0.1, 1.9) == "inconclusive"
    assert verdict(1.4, 0.1, 1.9) == "violation at >=4 sigma"


def test_resolve_and_probability():
    assert resolve_graph("KG5,2") == fam.petersen()
    assert resolve_graph("m3").n == 5
    assert parse_probability("1/3") == parse_probability("2/6")
    assert str(parse_probability("0.25")) == "1/4"


def test_report_renderings():
    r = RunReport("demo", {"seed": 1})
    r.add("x", parse_probability("1/3"), "exact")
    r.check("x small", "< 1", 1 / 3, True, 0.0)
    assert r.ok
    assert r.to_csv().splitlines()[0] == "kind,name,value,expected,pass,tolerance,provenance"
    assert "PASS  x small" in r.to_text()
    assert json.loads(r.to_json())["results"]["x"]["value"] == "1/3"
    r.check("bad", 1, 2, False)
    assert not r.ok
