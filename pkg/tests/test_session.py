import json
import pathlib

import pytest

from realtopos import dsl
from realtopos.session import Config, exit_code, run, run_source

CORPUS = pathlib.Path(__file__).parent / "corpus"

REFLEXIVE = """
nested A = (base {K}, base {K});
check A |- A with \\x. x;
check top |- top with i;
"""

PRED = """
set depth 1;
pred P over {a, b} = { a: (base {K}, base {K}), b: top };
check P |- P;
"""


def test_reflexivity_only_session_exits_zero():
    rep = run_source(REFLEXIVE)
    assert [e["verdict"] for e in rep["results"]] == ["Yes", "Yes"]
    assert rep["exit_code"] == 0
    assert rep["summary"] == {"queries": 2, "yes": 2, "no": 0, "unknown": 0, "errors": 0}


def test_top_entails_bot_is_no():
    rep = run_source("check top |- bot;")
    assert rep["results"][0]["verdict"] == "No"
    assert rep["exit_code"] == 1


def test_unknown_does_not_fail():
    rep = run_source("search top |- bot depth 3;")
    assert rep["results"][0]["verdict"] == "Unknown"
    assert rep["exit_code"] == 0


def test_set_and_pinned_override():
    assert run_source(PRED)["results"][0]["verdict"] == "Unknown"
    cfg = Config(depth=3, pinned=frozenset({"depth"}))
    assert run_source(PRED, cfg)["results"][0]["verdict"] == "Yes"


def test_declaration_error_taints_dependents():
    rep = run_source("nested W = (base {S I I (S I I)}, base {});\ncheck W |- W with i;", Config(fuel=200))
    kinds = [(e["line"], e["verdict"]) for e in rep["results"]]
    assert kinds == [(1, "Error"), (2, "Error")]
    assert "earlier" in rep["results"][1]["message"]


def test_small_bound_below_three_is_an_error():
    src = "assembly One = { o: top };\nmap f : One -> One = { o -> o } tracked i;\nsmall f bound 2;"
    assert run_source(src)["results"][0]["verdict"] == "Error"


def test_suite_report_is_deterministic():
    src = "suite kernel seed 3 count 30;\nsuite heyting seed 1 count 3;"
    a = json.dumps(run_source(src), sort_keys=True)
    b = json.dumps(run_source(src), sort_keys=True)
    assert a == b


@pytest.mark.parametrize("name", ["pca_kernel", "logic_core", "assemblies"])
def test_parallel_matches_serial(name):
    s = dsl.parse((CORPUS / f"{name}.rzk").read_text())
    assert run(s, Config(), jobs=3) == run(s, Config())


def test_exit_code_helper():
    assert exit_code({"summary": {"no": 0, "errors": 0}}) == 0
    assert exit_code({"summary": {"no": 0, "errors": 1}}) == 1


def test_timing_adds_seconds():
    assert "seconds" in run_source("check top |- top;", Config(timing=True))
    assert "seconds" not in run_source("check top |- top;")
