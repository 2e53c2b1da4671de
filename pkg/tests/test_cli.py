import json
import subprocess
import sys

import pytest

from nlpva.cli import main, pretty_series


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bracket_text(capsys):
    code, out, _ = run(capsys, "bracket", "--algebra", "builtin:potential-free-boson",
                       "--left", "d(x,1)", "--right", "d(x,1)", "--depth", "4")
    assert code == 0
    assert out.strip() == "{d(x,1) _lambda d(x,1)} = K*lambda"


def test_bracket_json(capsys):
    code, out, _ = run(capsys, "bracket", "--algebra", "builtin:potential-virasoro-magri",
                       "--left", "d(u,1)", "--right", "d(u,1)", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["series"]["coeffs"] == {"3": "1/12*C", "1": "2*d(u,1)", "0": "d(u,2)"}


def test_pretty_series_truncation_marker():
    from nlpva.algebras import builtin
    A = builtin("potential-free-boson")
    assert pretty_series(A.bracket(A.parse("x"), A.parse("x"), -3)) == "-K*lambda^-1 + O(lambda^-4)"


def test_json_is_deterministic(capsys):
    argv = ["check", "skew", "--algebra", "builtin:gurarie-ludwig", "--format", "json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv, "--jobs", "2")
    assert first == second
    doc = json.loads(first)
    assert doc["verdict"] == "pass" and len(doc["reports"]) == 25
    assert list(doc) == sorted(doc)


def test_exit_code_on_failure(capsys):
    code, out, _ = run(capsys, "check", "e12", "--algebra", "builtin:gurarie-ludwig", "--m-range", "0..0",
                       "--format", "tsv")
    assert code == 1
    fails = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert fails and all(len(line.split("\t")) == 7 for line in fails)


def test_specialize_option(capsys):
    code, out, _ = run(capsys, "check", "e12", "--algebra", "builtin:gurarie-ludwig", "--m-range", "0..0",
                       "--specialize", "K=0")
    assert code == 0
    assert "gurarie-ludwig[K=0]" in out


def test_algebra_file(capsys, tmp_path):
    from nlpva.algebra_file import dumps
    from nlpva.algebras import builtin
    path = tmp_path / "fb.toml"
    path.write_text(dumps(builtin("potential-free-boson")))
    code, out, _ = run(capsys, "check", "jacobi", "--algebra", str(path), "--depth", "3")
    assert code == 0 and out.strip().endswith("8/8 passed")


@pytest.mark.parametrize("argv,msg", [
    (["check", "skew", "--algebra", "builtin:nope"], "unknown builtin"),
    (["check", "skew", "--algebra", "/no/such/file.toml"], "no such algebra file"),
    (["check", "skew", "--algebra", "builtin:potential-free-boson", "--specialize", "x=1"], "not central"),
    (["bracket", "--algebra", "builtin:potential-free-boson", "--left", "y", "--right", "x"], "unknown"),
])
def test_errors_go_to_stderr(capsys, argv, msg):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert msg in err


def test_modes_and_ranges(capsys):
    code, out, _ = run(capsys, "modes", "--logva", "virasoro-magri", "--check", "L",
                       "--m-range", "-2..2", "--deg", "2", "--c", "0")
    assert code == 0 and out.strip().endswith("100/100 passed")
    code, out, _ = run(capsys, "modes", "--logva", "free-boson", "--check", "covariance",
                       "--m-range", "-1..1", "--deg", "1")
    assert code == 0


def test_gr_reports_bracket(capsys):
    code, out, _ = run(capsys, "gr", "--logva", "free-boson-no-K")
    assert code == 0
    assert out.splitlines()[0] == "bracket: 0"


def test_plots_written(capsys, tmp_path):
    code, _, err = run(capsys, "vectorfield", "--m-range", "-1..1", "--window", "-2..2",
                       "--plot-dir", str(tmp_path))
    assert code == 0
    assert (tmp_path / "vectorfield.png").stat().st_size > 0
    assert "wrote" in err
    code, _, _ = run(capsys, "binom", "--max", "4", "--plot-dir", str(tmp_path))
    assert code == 0 and (tmp_path / "binom-sum.png").exists()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "nlpva", "binom", "--max", "3"], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.strip().endswith("5/5 passed")


def test_jobs_env_default(monkeypatch):
    from nlpva.cli import build_parser
    monkeypatch.setenv("NLPVA_JOBS", "3")
    args = build_parser().parse_args(["binom"])
    assert args.jobs == 3
