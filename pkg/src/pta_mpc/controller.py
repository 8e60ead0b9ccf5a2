"""Receding-horizon control loop.

Each iteration rebuilds the effective view from the current state, plans a
full path through the remaining desired states and commits only its first
transition.  The clock advances by the cost of each committed state; signal
changes are observed at planning instants only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

from .model import Automaton, Path
from .objective import PathScore, RiskProfile, score_sequence
from .planner import PlanRequest, plan
from .update import EdsState, UpdateError, apply_update

if TYPE_CHECKING:
    from .simulator import ScenarioScript, ScriptEvent

RUNNING = "running"
SAT = "sat"
UNSAT = "unsat"


@dataclass(frozen=True)
class ControllerMemory:
    current: str
    traversed: tuple[str, ...]
    remaining_desired: tuple[str, ...]
    clock: float = 0.0
    verdict: str = RUNNING
    diagnostic: str | None = None

    @classmethod
    def initial(cls, total: Automaton) -> ControllerMemory:
        q0 = total.initial
        remaining = tuple(total.desired)
        if remaining and remaining[0] == q0:
            remaining = remaining[1:]
        return cls(q0, (q0,), remaining, 0.0, RUNNING if remaining else SAT)


@dataclass(frozen=True)
class StepOutcome:
    clock: float
    current: str
    committed_state: str | None
    planned_path: Path | None
    score: PathScore | None
    eds_snapshot: EdsState
    tie_set: tuple[Path, ...] = ()
    # per-step share of the realized score: the term of the state being left
    # and the escapes of the committed transition under this step's view
    step_cost: float = 0.0
    step_risk: float = 0.0
    step_escapes: int = 0
    replanned: bool = False
    diagnostic: str | None = None


@dataclass(frozen=True)
class RunTrace:
    scenario: str
    profile: RiskProfile
    steps: tuple[StepOutcome, ...]
    final_verdict: str
    realized_path: Path
    realized_score: PathScore
    wall_events: tuple[tuple[float, "ScriptEvent"], ...] = ()
    diagnostic: str | None = None

    @property
    def final_replan(self) -> StepOutcome | None:
        """The last step that planned under newly applied signals (or the first step)."""
        hits = [s for s in self.steps if s.replanned]
        return hits[-1] if hits else None

    @property
    def frontier(self) -> tuple[Path, ...]:
        """Tie set of the final replanning step, as full horizons from the initial state."""
        step = self.final_replan
        if step is None or not step.tie_set:
            return ()
        idx = self.realized_path.sequence.index(step.current)
        prefix = self.realized_path.sequence[:idx]
        return tuple(Path(prefix + p.sequence, p.total_cost) for p in step.tie_set)


def step(
    total: Automaton,
    memory: ControllerMemory,
    eds: EdsState,
    profile: RiskProfile,
    replanned: bool = True,
) -> tuple[ControllerMemory, StepOutcome]:
    """One loop iteration: update, plan, commit one transition."""
    if memory.verdict != RUNNING:
        raise ValueError(f"controller is not running (verdict {memory.verdict!r})")
    behind = memory.traversed[:-1]
    try:
        view = apply_update(total, eds, memory.current, behind)
    except UpdateError as exc:
        out = StepOutcome(memory.clock, memory.current, None, None, None, eds, replanned=replanned, diagnostic=str(exc))
        return replace(memory, verdict=UNSAT, diagnostic=str(exc)), out

    result = plan(PlanRequest(view, memory.current, memory.remaining_desired, profile))
    if not result.sat:
        msg = f"UNSAT: no feasible path from {memory.current!r} through {list(memory.remaining_desired)}"
        out = StepOutcome(memory.clock, memory.current, None, None, None, eds, replanned=replanned, diagnostic=msg)
        return replace(memory, verdict=UNSAT, diagnostic=msg), out

    chosen = result.best
    nxt = chosen.sequence[1]
    here = score_sequence(total, (memory.current, nxt), profile, view.armed_edges)
    remaining = memory.remaining_desired
    if remaining and remaining[0] == nxt:
        remaining = remaining[1:]
    new_memory = ControllerMemory(
        current=nxt,
        traversed=memory.traversed + (nxt,),
        remaining_desired=remaining,
        clock=memory.clock + total.state(nxt).cost,
        verdict=RUNNING if remaining else SAT,
    )
    out = StepOutcome(
        clock=memory.clock,
        current=memory.current,
        committed_state=nxt,
        planned_path=chosen,
        score=result.score,
        eds_snapshot=eds,
        tie_set=result.optimal_paths,
        step_cost=here.cost_sum,
        step_risk=here.risk_sum,
        step_escapes=here.escape_count,
        replanned=replanned,
    )
    return new_memory, out


def run_to_completion(total: Automaton, script: ScenarioScript, profile: RiskProfile) -> RunTrace:
    """Drive :func:`step` until the desired states are exhausted or planning fails.

    Script events whose trigger time is at or before the clock are applied at
    the next planning instant.
    """
    memory = ControllerMemory.initial(total)
    eds = EdsState()
    events = list(script.events)
    pending = 0
    wall: list[tuple[float, ScriptEvent]] = []
    steps: list[StepOutcome] = []

    def deliver(clock: float) -> bool:
        nonlocal pending, eds
        applied = False
        while pending < len(events) and events[pending].time <= clock:
            ev = events[pending]
            eds = eds.with_value(ev.state, ev.value)
            wall.append((clock, ev))
            pending += 1
            applied = True
        return applied

    # a simple path visits every state at most once
    for _ in range(len(total.states) + 1):
        if memory.verdict != RUNNING:
            break
        fresh = deliver(memory.clock)
        memory, outcome = step(total, memory, eds, profile, replanned=fresh or not steps)
        steps.append(outcome)
    deliver(memory.clock)

    cost = math.fsum(s.step_cost for s in steps)
    risk = math.fsum(s.step_risk for s in steps)
    score = PathScore(cost, risk, cost + profile.risk_weight * risk, sum(s.step_escapes for s in steps))
    return RunTrace(
        scenario=script.name,
        profile=profile,
        steps=tuple(steps),
        final_verdict=memory.verdict,
        realized_path=Path(memory.traversed, score.value),
        realized_score=score,
        wall_events=tuple(wall),
        diagnostic=memory.diagnostic,
    )
