import io
import json
import subprocess
import sys

import pytest

from realtopos import cli

OK = "nested A = (base {K}, base {K});\ncheck A |- A with i;\n"
BAD = "check top |- bot;\n"
SUITE = "check top |- bot;\nsuite kernel seed 1 count 10;\n"


@pytest.fixture
def write(tmp_path):
    def _write(text, name="s.rzk"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


def test_check_exit_codes(write, capsys):
    assert cli.main(["check", write(OK)]) == 0
    assert cli.main(["check", write(BAD)]) == 1
    out = capsys.readouterr().out
    assert "Yes" in out and "No" in out and "1 queries" in out


def test_parse_error_reports_position(write, capsys):
    path = write("prop X = base {K\n")
    assert cli.main(["check", path]) == 2
    err = capsys.readouterr().err
    assert err.startswith(f"{path}:2:1:")


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
    assert cli.main(["check", "--jobs", "0", "x.rzk"]) == 2


def test_suite_runs_only_suites(write, capsys):
    assert cli.main(["suite", write(SUITE)]) == 0
    assert "suite kernel" in capsys.readouterr().out
    assert cli.main(["suite", write(OK)]) == 2


def test_json_file_and_determinism(write, tmp_path):
    src = write(SUITE)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["check", src, "--json", str(a)])
    cli.main(["check", src, "--json", str(b), "--jobs", "2"])
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["source"] == src and rep["exit_code"] == 1


def test_flags_override_set(write, capsys):
    src = write("set depth 1;\npred P over {a} = { a: (base {K}, base {K}) };\ncheck P |- P;\n")
    assert cli.main(["check", src, "--json", "-"]) == 0
    out = capsys.readouterr().out
    assert json.loads(out[out.index("{"):])["results"][0]["verdict"] == "Unknown"
    cli.main(["check", src, "--depth", "3", "--json", "-"])
    out = capsys.readouterr().out
    rep = json.loads(out[out.index("{"):])
    assert rep["results"][0]["verdict"] == "Yes"
    assert rep["config"]["depth"] == 3


def test_repl_answers_each_query():
    inp = io.StringIO("nested A = (base {K}, base {K});\ncheck A |-\n A with i;\ncheck top |- bot;\n"
                      "check B |- B;\nprop X = base {K\n;\ncheck A |- A;\n")
    out = io.StringIO()
    args = cli.build_parser().parse_args(["repl"])
    status = cli.cmd_repl(args, inp=inp, out=out)
    lines = out.getvalue().splitlines()
    verdicts = [ln.split()[1] for ln in lines if not ln.startswith("error")]
    assert verdicts == ["Yes", "No", "Yes"]
    # an undeclared name and an unclosed brace are both parse errors
    assert sum(ln.startswith("error") for ln in lines) == 2
    assert status == 1


def test_console_script_module():
    r = subprocess.run([sys.executable, "-m", "realtopos.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "repl" in r.stdout
