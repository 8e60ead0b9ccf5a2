"""Scripted failure scenarios and baseline-versus-risk-averse comparisons."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .controller import RunTrace, run_to_completion
from .model import Automaton
from .objective import COST_ONLY, REDUNDANCY_FIRST, RiskProfile
from .update import EDS_VALUES


class ScriptError(ValueError):
    pass


@dataclass(frozen=True)
class ScriptEvent:
    time: float
    state: str
    value: int


@dataclass(frozen=True)
class ScenarioScript:
    events: tuple[ScriptEvent, ...] = ()
    name: str = "unnamed"

    def __post_init__(self) -> None:
        events = []
        for i, ev in enumerate(self.events):
            if not isinstance(ev, ScriptEvent):
                ev = ScriptEvent(*ev)
            if not (ev.time >= 0):
                raise ScriptError(f"events[{i}]: trigger time must be >= 0, got {ev.time}")
            if ev.value not in EDS_VALUES:
                raise ScriptError(f"events[{i}]: value must be -1, 0 or +1, got {ev.value!r}")
            events.append(ev)
        # sorted() is stable, so equal trigger times keep file order
        events = sorted(events, key=lambda e: e.time)
        failed: set[str] = set()
        for ev in events:
            if ev.value == 1:
                failed.add(ev.state)
            elif ev.state in failed:
                raise ScriptError(f"state {ev.state!r} cannot leave the failed state (no repair semantics)")
        object.__setattr__(self, "events", tuple(events))

    def check(self, automaton: Automaton) -> None:
        for ev in self.events:
            if not automaton.has_state(ev.state):
                raise ScriptError(f"scenario {self.name!r} refers to unknown state {ev.state!r}")

    @classmethod
    def of(cls, name: str, events: Iterable[tuple[float, str, int]]) -> ScenarioScript:
        return cls(tuple(ScriptEvent(float(t), s, int(v)) for t, s, v in events), name)


def run_scenario(total: Automaton, script: ScenarioScript, profile: RiskProfile) -> RunTrace:
    script.check(total)
    return run_to_completion(total, script, profile)


@dataclass(frozen=True)
class ComparisonReport:
    scenario: str
    baseline: RunTrace
    risk_averse: RunTrace
    divergence_step: int | None

    def to_dict(self) -> dict:
        def summary(trace: RunTrace) -> dict:
            return {
                "profile": trace.profile.mode,
                "verdict": trace.final_verdict,
                "realized_path": list(trace.realized_path.sequence),
                "value": round(trace.realized_score.value, 6),
                "escape_count": trace.realized_score.escape_count,
            }

        return {
            "scenario": self.scenario,
            "baseline": summary(self.baseline),
            "risk_averse": summary(self.risk_averse),
            "divergence_step": self.divergence_step,
        }


def _divergence(a: RunTrace, b: RunTrace) -> int | None:
    sa = [s.committed_state for s in a.steps]
    sb = [s.committed_state for s in b.steps]
    for i in range(max(len(sa), len(sb))):
        x = sa[i] if i < len(sa) else None
        y = sb[i] if i < len(sb) else None
        if x != y:
            return i
    return None


def compare_profiles(total: Automaton, script: ScenarioScript, risk_weight: float = 1.0) -> ComparisonReport:
    base = run_scenario(total, script, RiskProfile(COST_ONLY, risk_weight))
    averse = run_scenario(total, script, RiskProfile(REDUNDANCY_FIRST, risk_weight))
    return ComparisonReport(script.name, base, averse, _divergence(base, averse))
