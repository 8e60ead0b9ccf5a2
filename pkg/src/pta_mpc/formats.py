"""JSON documents for automata and scenarios, and the JSON-lines trace format."""

from __future__ import annotations

import hashlib
import json
import os
from importlib import resources
from typing import Any, Union

from .controller import RunTrace
from .model import (
    ORIGINAL,
    Automaton,
    EdgeRecord,
    ModelError,
    RedundantPathRecord,
    StateRecord,
)
from .objective import RiskProfile, score_sequence
from .simulator import ScenarioScript, ScriptError, ScriptEvent

PathLike = Union[str, "os.PathLike[str]"]

BUILTIN = ("fig3", "scenario1", "scenario2", "scenario3")


class LoadError(ValueError):
    """A document could not be read, parsed or validated."""


def _read(source: PathLike) -> tuple[str, str]:
    name = os.fspath(source)
    try:
        with open(name, encoding="utf-8") as fh:
            return name, fh.read()
    except OSError as exc:
        raise LoadError(f"{name}: cannot read ({exc.strerror})") from exc


def _parse(name: str, text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoadError(f"{name}:{exc.lineno}:{exc.colno}: syntax error: {exc.msg}") from exc


def _require(doc: dict, key: str, where: str) -> Any:
    if key not in doc:
        raise LoadError(f"{where}: missing field {key!r}")
    return doc[key]


def automaton_from_dict(doc: Any, name: str = "<automaton>") -> Automaton:
    if not isinstance(doc, dict):
        raise LoadError(f"{name}: top level must be an object")
    try:
        states = []
        for i, s in enumerate(_require(doc, "states", name)):
            where = f"{name}: states[{i}]"
            states.append(
                StateRecord(
                    id=str(_require(s, "id", where)),
                    label=str(s.get("label", "")),
                    cost=float(s.get("cost", 1.0)),
                    risk_factor=float(s.get("risk_factor", 0.0)),
                    membership=s.get("membership", ORIGINAL),
                )
            )
        edges = []
        for i, e in enumerate(doc.get("edges", [])):
            where = f"{name}: edges[{i}]"
            edges.append(
                EdgeRecord(
                    source=str(_require(e, "source", where)),
                    target=str(_require(e, "target", where)),
                    cost=float(e.get("cost", 0.0)),
                    membership=e.get("membership", ORIGINAL),
                    redundant_path_id=e.get("redundant_path_id"),
                )
            )
        paths = [
            RedundantPathRecord(str(_require(p, "id", f"{name}: redundant_paths[{i}]")), tuple(p.get("sequence", ())))
            for i, p in enumerate(doc.get("redundant_paths", []))
        ]
        automaton = Automaton(
            states=tuple(states),
            edges=tuple(edges),
            redundant_paths=tuple(paths),
            desired=tuple(doc.get("desired", ())),
            initial=str(_require(doc, "initial", name)),
        )
        automaton.validate()
    except ModelError as exc:
        raise LoadError(f"{name}: [{exc.invariant}] {exc}") from exc
    except (TypeError, ValueError, AttributeError) as exc:
        raise LoadError(f"{name}: malformed document: {exc}") from exc
    return automaton


def automaton_to_dict(automaton: Automaton) -> dict:
    return {
        "states": [
            {"id": s.id, "label": s.label, "cost": s.cost, "risk_factor": s.risk_factor, "membership": s.membership}
            for s in automaton.states
        ],
        "edges": [
            {
                "source": e.source,
                "target": e.target,
                "cost": e.cost,
                "membership": e.membership,
                "redundant_path_id": e.redundant_path_id,
            }
            for e in automaton.edges
        ],
        "redundant_paths": [{"id": p.id, "sequence": list(p.sequence)} for p in automaton.redundant_paths],
        "desired": list(automaton.desired),
        "initial": automaton.initial,
    }


def dumps_automaton(automaton: Automaton) -> str:
    return json.dumps(automaton_to_dict(automaton), indent=2) + "\n"


def loads_automaton(text: str, name: str = "<string>") -> Automaton:
    return automaton_from_dict(_parse(name, text), name)


def load_automaton(source: PathLike) -> Automaton:
    name, text = _read(source)
    return loads_automaton(text, name)


def automaton_hash(automaton: Automaton) -> str:
    canon = json.dumps(automaton_to_dict(automaton), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def scenario_from_dict(doc: Any, name: str = "<scenario>") -> ScenarioScript:
    if not isinstance(doc, dict):
        raise LoadError(f"{name}: top level must be an object")
    try:
        events = []
        for i, ev in enumerate(doc.get("events", [])):
            where = f"{name}: events[{i}]"
            events.append(
                ScriptEvent(float(_require(ev, "time", where)), str(_require(ev, "state", where)), int(_require(ev, "value", where)))
            )
        return ScenarioScript(tuple(events), str(doc.get("name", os.path.basename(name))))
    except ScriptError as exc:
        raise LoadError(f"{name}: {exc}") from exc
    except (TypeError, ValueError, AttributeError) as exc:
        raise LoadError(f"{name}: malformed document: {exc}") from exc


def scenario_to_dict(script: ScenarioScript) -> dict:
    return {
        "name": script.name,
        "events": [{"time": e.time, "state": e.state, "value": e.value} for e in script.events],
    }


def load_scenario(source: PathLike, automaton: Automaton | None = None) -> ScenarioScript:
    name, text = _read(source)
    script = scenario_from_dict(_parse(name, text), name)
    if automaton is not None:
        try:
            script.check(automaton)
        except ScriptError as exc:
            raise LoadError(f"{name}: {exc}") from exc
    return script


def builtin_path(name: str) -> str:
    """Filesystem path of a shipped fixture (``fig3``, ``scenario1`` ...)."""
    if name not in BUILTIN:
        raise KeyError(name)
    return str(resources.files("pta_mpc") / "data" / f"{name}.json")


def trace_records(trace: RunTrace, automaton: Automaton) -> list[dict]:
    steps = []
    events_at: dict[float, list] = {}
    for t, ev in trace.wall_events:
        events_at.setdefault(t, []).append({"time": ev.time, "state": ev.state, "value": ev.value})
    header = {
        "record": "header",
        "automaton_hash": automaton_hash(automaton),
        "scenario": trace.scenario,
        "profile": trace.profile.mode,
        "lambda": trace.profile.risk_weight,
    }
    for i, s in enumerate(trace.steps):
        steps.append(
            {
                "record": "step",
                "index": i,
                "clock": s.clock,
                "current": s.current,
                "applied_events": events_at.get(s.clock, []) if s.replanned else [],
                "planned_path": list(s.planned_path.sequence) if s.planned_path else None,
                "value": s.score.value if s.score else None,
                "escape_count": s.score.escape_count if s.score else None,
                "tie_set": [list(p.sequence) for p in s.tie_set],
                "committed": s.committed_state,
            }
        )
    footer = {
        "record": "footer",
        "verdict": trace.final_verdict.upper(),
        "realized_path": list(trace.realized_path.sequence),
        "realized_value": trace.realized_score.value,
        "escape_count": trace.realized_score.escape_count,
        "tie_set_size": len(trace.frontier),
        "frontier": [list(p.sequence) for p in trace.frontier],
        "diagnostic": trace.diagnostic,
    }
    return [header, *steps, footer]


def dumps_trace(trace: RunTrace, automaton: Automaton) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in trace_records(trace, automaton))


def parse_trace(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def check_trace_footer(records: list[dict], automaton: Automaton, risk_weight: float) -> bool:
    """Recompute the footer value from the realized path."""
    footer = records[-1]
    score = score_sequence(automaton, footer["realized_path"], RiskProfile(risk_weight=risk_weight))
    return abs(score.value - footer["realized_value"]) <= 1e-9
