import json

import pytest

from ivlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_iterate_degree_table(capsys):
    code, rep = report(capsys, "iterate", "--map", "lv3(a=0)", "--n", "5", "--watch", "x")
    assert code == 0 and rep["passed"]
    assert rep["result"]["degrees"] == [1, 3, 7, 11, 17]
    assert rep["config"]["n"] == 5 and rep["version"]


def test_iterate_components_verbatim(capsys):
    code, rep = report(capsys, "iterate", "--map", "lv3(a=0)", "--n", "1")
    assert rep["result"]["iterates"][0] == "(x*y*z - x*y + x)/(x*z - z + 1)"


def test_iterate_csv(capsys):
    code, out, _ = run(capsys, "iterate", "--map", "lv3(a=1)", "--n", "2", "--format", "csv")
    assert out.splitlines() == ["n,degree,terms", "1,1,4", "2,3,38"]


def test_iterate_symbolic_parameter(capsys):
    _, rep = report(capsys, "iterate", "--map", "lv3(a=a)", "--n", "2")
    assert rep["result"]["term_counts"] == [4, 41]


def test_budget_override(capsys, monkeypatch):
    monkeypatch.setenv("IVLAB_MAX_TERMS", "50")
    code, rep = report(capsys, "iterate", "--map", "lv3(a=0)", "--n", "4")
    assert code == 1 and not rep["passed"]
    assert rep["config"]["budgets"]["max_terms"] == 50
    assert [r["degree"] for r in rep["result"]["table"]] == [1, 3]


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "iterate", "--map", "lv3(a=", "--n", "1")
    assert code == 2 and "position" in err


@pytest.mark.parametrize("argv,code", [
    (["verify", "--target", "variety", "--map", "lv3(a=0)", "--period", "2"], 0),
    (["verify", "--target", "variety", "--map", "lv3(a=0)", "--period", "2", "--generator", "s-1"], 1),
    (["verify", "--target", "lax", "--d", "5"], 0),
    (["verify", "--target", "invariants", "--map", "pv"], 0),
    (["verify", "--target", "special-loci", "--t", "3/4"], 0),
])
def test_verify_exit_codes(capsys, argv, code):
    got, rep = report(capsys, *argv)
    assert got == code
    assert rep["passed"] == (code == 0)
    assert all("passed" in v for v in rep["verdicts"])


def test_verify_reports_evidence(capsys):
    _, rep = report(capsys, "verify", "--target", "variety", "--map", "lv3", "--period", "3")
    assert rep["result"]["membership"]["evidence"] == "exact"


def test_verify_uncataloged(capsys):
    code, _, err = run(capsys, "verify", "--target", "variety", "--map", "lv3(a=1)")
    assert code == 2 and "no cataloged" in err


def test_search_fixed_points(capsys):
    code, rep = report(capsys, "search", "--map", "lv3(a=1)", "--period", "1", "--starts", "100")
    assert code == 0
    assert len(rep["result"]["points"]) == 2
    assert rep["config"]["seed"] == 0


def test_search_classifies_against_catalog(capsys):
    code, rep = report(capsys, "search", "--map", "lv3(a=0)", "--period", "3", "--starts", "100")
    assert code == 0
    loci = rep["result"]["loci"]
    assert loci["off"] == 0 and loci["variety"] > 0


def test_search_uncorrelated(capsys):
    code, rep = report(capsys, "search", "--map", "lv3(a=1/10)", "--period", "2",
                       "--uncorrelated", "--samples", "20")
    assert code == 0 and rep["result"]["uncorrelated_scan"]["isolated"]


def test_reports_are_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        main(["search", "--map", "lv3(a=1)", "--period", "2", "--starts", "50", "-o", str(p)])
    a, b = (json.loads(p.read_text()) for p in paths)
    a.pop("timestamp"), b.pop("timestamp")
    assert a == b
    assert paths[0].read_text().count("timestamp") == 1


def test_text_format(capsys):
    code, out, _ = run(capsys, "verify", "--target", "lax", "--d", "4", "--format", "text")
    assert code == 0 and "PASS  lax_equation(d=4)" in out and out.rstrip().endswith("overall: PASS")


def test_report_subset(capsys):
    code, rep = report(capsys, "report", "--only", "1", "--quiet")
    assert code == 0
    assert rep["result"]["criteria"][0]["number"] == 1
