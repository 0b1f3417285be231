import hashlib
import json
import subprocess
import sys

import pytest

from detsing.cli import data_path, main
from detsing.formats import parse_script_file
from detsing.polycore import parse_poly
from detsing.report import incidence_tsv, script_json, script_text, write_script_reports
from detsing.resolve import run_script


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_minors(capsys):
    code, out, _ = run(capsys, "minors", "ex41")
    assert code == 0
    vs = ["x", "y", "z", "w"]
    got = {parse_poly(line, vs) for line in out.splitlines()}
    assert got == {parse_poly(s, vs) for s in ["w^4 - y*z", "w^3*y^3 - x*z", "y^4 - x*w"]}


def test_check(capsys):
    code, out, _ = run(capsys, "check", "ex42")
    assert code == 0
    assert "tilde = Tjur True" in out and out.rstrip().endswith("determinantal")
    code, out, _ = run(capsys, "check", "ex41")
    assert code == 0 and "tilde = Tjur False" in out


def test_check_not_determinantal(capsys, tmp_path):
    f = tmp_path / "bad.dsp"
    f.write_text("vars x\ntype 2 2 1\n(x) (0)\n(0) (x)\n")
    code, out, _ = run(capsys, "check", str(f))
    assert code == 1 and "NOT determinantal" in out


def test_chart(capsys):
    code, out, _ = run(capsys, "chart", "ex41", "--I", "2", "--eliminate", "--saturate", "y*w")
    assert code == 0
    assert "y^2*w^2 - a1*a3" in out.replace("w^2*y^2", "y^2*w^2")


def test_chart_transpose_all(capsys):
    code, out, _ = run(capsys, "chart", "ex41", "--transpose")
    assert code == 0 and out.count("chart        ") == 2


def test_dim_and_smooth(capsys):
    assert run(capsys, "dim", "--vars", "x y z", "--gen", "x")[1].strip() == "2"
    code, out, _ = run(capsys, "smooth", "--vars", "x z w", "--gen", "x^2 + z^3 + w^2*x",
                       "--expect", "singular")
    assert code == 0 and "singular@(0,0,0)" in out
    code, _, _ = run(capsys, "smooth", "--vars", "x z w", "--gen", "x^2 + z^3 + w^2*x",
                     "--expect", "smooth")
    assert code == 1
    code, out, _ = run(capsys, "smooth", "--vars", "x y a2", "--gen",
                       "x^2 + y^3 - a2^2*x^2 - a2^2*y^5", "--candidate", "(0,0,1)")
    assert "dimension 1" in out and "in singular locus" in out


def test_resolve(capsys, tmp_path):
    code, out, _ = run(capsys, "resolve", "e7", "--out", str(tmp_path))
    assert code == 0 and "PASSED" in out
    for suffix in (".txt", ".json", ".incidence.tsv", ".dual.png"):
        assert (tmp_path / f"e7{suffix}").exists()
    assert (tmp_path / "e7.dual.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    data = json.loads((tmp_path / "e7.json").read_text())
    assert data["passed"] and data["graph_ok"]


def test_resolve_failure_exit(capsys, tmp_path):
    bad = tmp_path / "bad.rsc"
    bad.write_text("step 1\n vars x y z\n claim x*y - z^3\n matrix\n  (x) (z)\n  (z) (y)\n chart 1\n")
    code, out, _ = run(capsys, "resolve", str(bad))
    assert code == 1 and "FAILED" in out and "det check" in out


def test_model_check(capsys):
    code, out, _ = run(capsys, "model-check", "--m", "2", "--n", "3", "--t", "2", "--trials", "20")
    assert code == 0 and "minors dimension     4 (expected 4)" in out
    code, out, _ = run(capsys, "model-check", "--m", "3", "--n", "3", "--t", "1", "--trials", "5")
    assert code == 0 and "not applicable" in out
    code, _, err = run(capsys, "model-check", "--m", "2", "--n", "3", "--t", "3")
    assert code == 2 and "error" in err


def test_errors(capsys, tmp_path):
    empty = tmp_path / "e.dsp"
    empty.write_text("")
    assert run(capsys, "check", str(empty))[0] == 2
    assert run(capsys, "check", "no-such-file")[0] == 2
    code, _, err = run(capsys, "--max-pairs", "1", "check", "ex41")
    assert code == 3 and "resource limit" in err


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "detsing.cli", "minors", "a4"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and parse_poly(r.stdout, "xyz") == parse_poly("x*y - z^5", "xyz")


def _digest(path):
    return hashlib.md5(path.read_bytes()).hexdigest()


def test_reports_deterministic(tmp_path):
    script = parse_script_file(data_path("e7.rsc"))
    a = write_script_reports(run_script(script), tmp_path / "a")
    b = write_script_reports(run_script(script), tmp_path / "b")
    for kind in ("text", "json", "tsv", "png"):
        assert _digest(a[kind]) == _digest(b[kind])


def test_tsv_columns():
    rep = run_script(parse_script_file(data_path("e7.rsc")))
    rows = [r.split("\t") for r in incidence_tsv(rep).splitlines()]
    assert rows[0] == ["step", "chart", "a", "b", "meets", "dim", "point", "point_type"]
    e7 = [r for r in rows[1:] if r[0] == "7" and "E7" in r[2:4] and r[4] == "yes"]
    # E4 meets E7 at one point of the chart overlap, listed once per chart
    assert {r[2] for r in e7} == {"E4", "E5", "E6"}
    assert all(r[7] == "smooth" for r in e7)


def test_text_report():
    rep = run_script(parse_script_file(data_path("a4.rsc")))
    txt = script_text(rep)
    assert txt.endswith("PASSED\n")
    assert script_json(rep)["passed"] is True
