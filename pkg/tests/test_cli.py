import json
import subprocess
import sys
from importlib import resources

import pytest

from bihomconf import cli
from bihomconf.dsl import parse
from bihomconf.algebra import Algebra

DATA = resources.files("bihomconf") / "data"


def data(name):
    return str(DATA / name)


def run_json(*argv):
    code, text, _ = cli.run([*argv, "--format", "json"])
    return code, json.loads(text)


@pytest.mark.parametrize("argv,code", [
    (["check", "--builtin", "ex25"], 0),
    (["check", "--builtin", "virasoro_ns"], 0),
    (["check", "--input", data("virasoro_f_eq_d.alg")], 1),
    (["check", "--input", data("cur_gl11.alg"), "--algebra", "cur_gl11"], 0),
    (["check-module", "--input", data("ex25_extras.alg"), "--module", "ad"], 0),
    (["cur", "--input", data("cur_gl11.alg")], 0),
    (["cur", "--input", data("cur_gl11.alg"), "--associative"], 1),   # gl11 is not associative
    (["dsum", "--builtin", "ex25", "--other", "ex25"], 0),
    (["compose-twist", "--builtin", "ex25", "--power", "2"], 0),
    (["semidirect", "--builtin", "ex25"], 0),
    (["d2check", "--builtin", "ex25", "--n", "1", "--deg", "2"], 0),
    (["cocycles", "--builtin", "ex25", "--n", "1", "--deg", "1", "--parity", "even"], 0),
    (["cohomology-report", "--builtin", "ex25", "--n", "1", "--deg", "2"], 0),
    (["solve-der", "--builtin", "ex25", "--deg", "1", "--class", "qc"], 0),
    (["classify", "--input", data("ex25_extras.alg")], 0),
    (["ooperator-check", "--input", data("ex25_extras.alg")], 0),
    (["induced", "--input", data("ex25_extras.alg")], 0),
])
def test_exit_codes(argv, code):
    got, text, _ = cli.run(argv)
    assert got == code, text


def test_json_reports_carry_schema():
    code, rep = run_json("check", "--builtin", "virasoro_ns")
    assert code == 0
    assert rep["schema"] == cli.SCHEMA == "bihomconf-report/1"
    assert rep["command"] == "check" and rep["status"] == "ok" and rep["kind"] == "lie"


def test_violation_report_lists_residuals():
    code, rep = run_json("check", "--input", data("virasoro_f_eq_d.alg"))
    assert code == 1 and rep["status"] == "violation"
    got = {tuple(v["basis"]): v["residual"] for v in rep["report"]["violations"] if v["axiom"] == "2.4"}
    assert got[("L", "L")] == "(d^2+4*d*x1+4*x1^2)*L"     # (d + 2x)^2 L


def test_solve_der_dimensions():
    code, rep = run_json("solve-der", "--builtin", "ex25", "--deg", "2", "--class", "der")
    assert code == 0
    assert [s["dimension"] for s in rep["spaces"]] == [5, 0]
    _, rep = run_json("solve-der", "--builtin", "ex25", "--deg", "2", "--class", "qder", "--parity", "even")
    assert rep["spaces"][0]["dimension"] == 11


def test_cohomology_report_values():
    code, rep = run_json("cohomology-report", "--builtin", "ex25", "--n", "1", "--deg", "2", "--parity", "even")
    assert code == 0
    row = rep["truncated"][0]
    assert (row["cochains"], row["cocycles"], row["coboundaries"]) == (18, 5, 0)
    assert rep["variant_search"]["literal_ok"] is True


def test_built_algebra_parses_back():
    code, rep = run_json("dsum", "--builtin", "ex25", "--other", "ex25")
    assert code == 0
    B = parse(rep["result"]).get(rep["result_name"], Algebra)
    assert B.rank == 6 and B.check().ok


def test_twist_of_non_lie_algebra_is_a_violation():
    code, rep = run_json("twist", "--input", data("ex25_extras.alg"), "--maps", "f,f")
    assert code == 1 and rep["status"] == "violation" and rep["error"]


def test_gder_witness():
    code, rep = run_json("gder-witness", "--input", data("ex25_extras.alg"), "--deg", "1")
    assert code == 0 and rep["verdict"] == "witnessed"


def test_induced_bracket_is_reported():
    code, rep = run_json("induced", "--input", data("ex25_extras.alg"))
    assert code == 0
    B = parse(rep["induced"]).get("ad_induced", Algebra)
    assert B.check().ok


@pytest.mark.parametrize("argv", [
    ["check"],
    ["check", "--builtin", "ex25", "--input", data("ex25.alg")],
    ["check", "--builtin", "nope"],
    ["check", "--input", "/nonexistent/file.alg"],
    ["twist", "--builtin", "ex25", "--maps", "f"],
    ["check-assoc", "--builtin", "ex25"],
    ["check", "--builtin", "ex25", "--algebra", "missing"],
])
def test_usage_errors(argv):
    code, text, _ = cli.run(argv)
    assert code == 2 and "error" in text


def test_malformed_file(tmp_path):
    p = tmp_path / "bad.alg"
    p.write_text("algebra a {\n  generators: u: purple;\n}\n")
    code, rep = run_json("check", "--input", str(p))
    assert code == 2 and rep["status"] == "error" and rep["error"].startswith("line 2")


def test_main_writes_out_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert cli.main(["check", "--builtin", "ex25", "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["status"] == "ok"
    assert capsys.readouterr().out == ""


def test_main_errors_go_to_stderr(capsys):
    assert cli.main(["check", "--input", "/nonexistent/file.alg"]) == 2
    captured = capsys.readouterr()
    assert captured.out == "" and "cannot read" in captured.err


def test_main_argparse_failure():
    assert cli.main(["d2check", "--builtin", "ex25"]) == 2     # --n and --deg are required
    assert cli.main(["no-such-command"]) == 2


def test_text_format_has_timing():
    code, text, _ = cli.run(["check", "--builtin", "ex25"])
    assert code == 0 and "status: ok" in text and "time:" in text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bihomconf.cli", "check", "--input", data("virasoro_f_eq_d.alg")],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and "violation" in proc.stdout
