from __future__ import annotations

import json

import pytest

from pta_mpc.cli import main
from pta_mpc.dot import export_dot
from pta_mpc.formats import (
    LoadError,
    automaton_hash,
    automaton_to_dict,
    builtin_path,
    check_trace_footer,
    dumps_automaton,
    dumps_trace,
    load_automaton,
    load_scenario,
    loads_automaton,
    parse_trace,
    scenario_from_dict,
    scenario_to_dict,
)
from pta_mpc.model import Automaton, StateRecord
from pta_mpc.objective import COST_ONLY, REDUNDANCY_FIRST, RiskProfile
from pta_mpc.simulator import run_scenario


def test_round_trip(fig3, scenarios):
    again = loads_automaton(dumps_automaton(fig3))
    assert again == fig3
    assert automaton_hash(again) == automaton_hash(fig3)
    s = scenarios["scenario3"]
    assert scenario_from_dict(scenario_to_dict(s)) == s


def test_duplicate_id_is_named(fig3):
    doc = automaton_to_dict(fig3)
    doc["states"].append(dict(doc["states"][3]))
    with pytest.raises(LoadError, match="q4"):
        loads_automaton(json.dumps(doc))


def test_interior_must_be_redundant(fig3):
    doc = automaton_to_dict(fig3)
    for s in doc["states"]:
        if s["id"] == "q14":
            s["membership"] = "original"
    with pytest.raises(LoadError, match=r"\[.+\]"):
        loads_automaton(json.dumps(doc))


def test_syntax_error_location(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "states": [\n    {"id": "a",}\n  ]\n}\n')
    with pytest.raises(LoadError, match=r"bad\.json:3:\d+: syntax error"):
        load_automaton(p)


def test_missing_file():
    with pytest.raises(LoadError, match="cannot read"):
        load_automaton("/nonexistent/x.json")


def test_scenario_unknown_state(tmp_path, fig3):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"name": "s", "events": [{"time": 0, "state": "qq", "value": 1}]}))
    with pytest.raises(LoadError, match="qq"):
        load_scenario(p, fig3)


def test_trace_format(fig3, scenarios):
    trace = run_scenario(fig3, scenarios["scenario3"], RiskProfile(REDUNDANCY_FIRST))
    records = parse_trace(dumps_trace(trace, fig3))
    assert records[0]["record"] == "header" and records[0]["automaton_hash"] == automaton_hash(fig3)
    assert all(r["record"] == "step" for r in records[1:-1])
    footer = records[-1]
    assert footer["verdict"] == "SAT" and footer["tie_set_size"] == 2
    assert check_trace_footer(records, fig3, 1.0)
    footer["realized_value"] += 0.5
    assert not check_trace_footer(records, fig3, 1.0)


def test_dot_export(fig3, scenarios):
    text = export_dot(fig3)
    assert text.count(" [label=") == 17
    assert text.count(" -> ") == 22
    assert text.count("subgraph") == 4
    trace = run_scenario(fig3, scenarios["scenario1"], RiskProfile(COST_ONLY))
    overlay = export_dot(fig3, trace)
    q5 = next(line for line in overlay.splitlines() if line.strip().startswith('"q5" ['))
    assert "diagonals" in q5
    assert "magenta" in overlay
    single = Automaton((StateRecord("only"),), (), desired=(), initial="only")
    assert export_dot(single).count(" [label=") == 1


def _files():
    return builtin_path("fig3"), {n: builtin_path(n) for n in ("scenario1", "scenario2", "scenario3")}


def test_cli_exit_codes(tmp_path, capsys):
    aut, sc = _files()
    assert main(["run", aut, sc["scenario1"], "--profile", "cost_only"]) == 0
    assert "q1 q7 q8 q9 q6" in capsys.readouterr().out
    assert main(["run", aut, sc["scenario2"], "--profile", "cost_only"]) == 2
    assert main(["run", aut, "/nonexistent.json"]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["run", str(bad), sc["scenario1"]]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["run", aut, sc["scenario1"], "--profile", "nope"])
    assert exc.value.code == 1
    assert main(["run", aut, sc["scenario1"], "--lambda", "-1"]) == 1


def test_cli_outputs(tmp_path, capsys):
    aut, sc = _files()
    trace_file = tmp_path / "t.jsonl"
    dot_file = tmp_path / "g.dot"
    rc = main(["run", aut, sc["scenario3"], "--trace", str(trace_file), "--dot", str(dot_file), "--compare", "--seed-check"])
    assert rc == 0
    out = capsys.readouterr().out
    assert '"divergence_step"' in out
    assert parse_trace(trace_file.read_text())[-1]["tie_set_size"] == 2
    assert dot_file.read_text().startswith("digraph")
    assert main(["dot", aut]) == 0
    assert capsys.readouterr().out.startswith("digraph")
