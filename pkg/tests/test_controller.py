from __future__ import annotations

import random

import pytest

from pta_mpc.controller import RUNNING, SAT, UNSAT, ControllerMemory, run_to_completion, step
from pta_mpc.model import Automaton, EdgeRecord, StateRecord
from pta_mpc.objective import COST_ONLY, EQ17, MODES, REDUNDANCY_FIRST, RiskProfile, score_sequence
from pta_mpc.randomized import random_automaton
from pta_mpc.simulator import ScenarioScript, ScriptError, ScriptEvent, compare_profiles, run_scenario
from pta_mpc.update import EdsState


def test_initial_memory(fig3):
    mem = ControllerMemory.initial(fig3)
    assert (mem.current, mem.traversed, mem.remaining_desired, mem.verdict) == ("q1", ("q1",), ("q6",), RUNNING)


def test_empty_desired_is_sat_without_steps():
    total = Automaton((StateRecord("a"),), (), desired=(), initial="a")
    trace = run_to_completion(total, ScenarioScript(), RiskProfile())
    assert trace.final_verdict == SAT and trace.steps == () and trace.realized_path.sequence == ("a",)


def test_one_step_commitment(fig3):
    mem = ControllerMemory.initial(fig3)
    new, out = step(fig3, mem, EdsState({"q5": 1}), RiskProfile(REDUNDANCY_FIRST))
    assert out.committed_state == out.planned_path.sequence[1] == "q10"
    assert new.traversed == ("q1", "q10")
    assert new.clock == 1.0
    with pytest.raises(ValueError):
        step(fig3, ControllerMemory("q6", ("q6",), (), verdict=SAT), EdsState(), RiskProfile())


def test_stranded_on_failed_current_state(fig3):
    mem = ControllerMemory("q8", ("q1", "q7", "q8"), ("q6",), 2.0)
    new, out = step(fig3, mem, EdsState({"q8": 1}), RiskProfile(COST_ONLY))
    assert new.verdict == UNSAT and "stranded" in new.diagnostic


def test_guard_keeps_traversed_failures_harmless(fig3):
    # q10 is behind us; its failure must not change the plan from q11
    mem = ControllerMemory("q11", ("q1", "q10", "q11"), ("q6",), 2.0)
    _, a = step(fig3, mem, EdsState({"q5": 1}), RiskProfile(REDUNDANCY_FIRST))
    _, b = step(fig3, mem, EdsState({"q5": 1, "q10": 1}), RiskProfile(REDUNDANCY_FIRST))
    assert a.tie_set == b.tie_set


@pytest.mark.parametrize("name", ["scenario1", "scenario2", "scenario3"])
@pytest.mark.parametrize("mode", MODES)
def test_realized_score_matches_recompute(fig3, scenarios, name, mode):
    trace = run_scenario(fig3, scenarios[name], RiskProfile(mode))
    ref = score_sequence(fig3, trace.realized_path.sequence, RiskProfile(mode))
    if len(trace.realized_path.sequence) > 1:
        assert trace.realized_score.value == pytest.approx(ref.value, abs=1e-9)


@pytest.mark.parametrize("name", ["scenario1", "scenario2", "scenario3"])
def test_event_conservation(fig3, scenarios, name):
    for mode in MODES:
        trace = run_scenario(fig3, scenarios[name], RiskProfile(mode))
        delivered = [ev for _, ev in trace.wall_events]
        assert len(delivered) == len(set(delivered))
        final_clock = trace.steps[-1].clock if trace.steps else 0.0
        due = [ev for ev in scenarios[name].events if ev.time <= final_clock]
        assert set(due) <= set(delivered)
        assert all(t >= ev.time for t, ev in trace.wall_events)


def test_replan_consistency_without_events():
    # with no new signals the committed prefix follows the first plan
    for i in range(100):
        rng = random.Random(40_000 + i)
        total = random_automaton(rng)
        trace = run_to_completion(total, ScenarioScript(), RiskProfile(EQ17))
        if trace.final_verdict != SAT or not trace.steps:
            continue
        first = trace.steps[0]
        assert trace.realized_score.value == pytest.approx(first.score.value, abs=1e-9)


def test_empty_script_on_fig3(fig3):
    base = run_scenario(fig3, ScenarioScript(name="quiet"), RiskProfile(COST_ONLY))
    averse = run_scenario(fig3, ScenarioScript(name="quiet"), RiskProfile(REDUNDANCY_FIRST))
    assert base.realized_score.value == pytest.approx(7.333, abs=1e-3)
    assert averse.realized_path.sequence == ("q1", "q2", "q3", "q4", "q5", "q6")
    assert averse.realized_score.value == pytest.approx(8.333, abs=1e-3)
    assert averse.realized_score.escape_count == 2


def test_compare_profiles(fig3, scenarios):
    report = compare_profiles(fig3, scenarios["scenario1"])
    assert report.divergence_step == 0
    d = report.to_dict()
    assert d["baseline"]["realized_path"] == ["q1", "q7", "q8", "q9", "q6"]
    assert d["risk_averse"]["escape_count"] == 2
    same = compare_profiles(fig3, ScenarioScript((ScriptEvent(0, "q3", 1), ScriptEvent(0, "q10", 1))))
    assert same.divergence_step is None


def test_script_validation(fig3):
    with pytest.raises(ScriptError):
        ScenarioScript.of("x", [(0, "q5", 1), (1, "q5", 0)])
    with pytest.raises(ScriptError):
        ScenarioScript.of("x", [(-1, "q5", 1)])
    with pytest.raises(ScriptError):
        ScenarioScript.of("x", [(0, "q5", 2)])
    with pytest.raises(ScriptError):
        run_scenario(fig3, ScenarioScript.of("x", [(0, "q99", 1)]), RiskProfile())
    s = ScenarioScript.of("x", [(2, "q8", 1), (0, "q5", -1), (0, "q5", 1)])
    assert [(e.time, e.value) for e in s.events] == [(0, -1), (0, 1), (2, 1)]
