"""Exact optimal path search through an ordered list of desired states.

The search is label-correcting over simple paths.  A label carries the set of
visited states, so label ``A`` may prune label ``B`` at the same node only
when ``A`` visited a subset of ``B``'s states and is strictly better: every
completion of ``B`` is then also open to ``A``.  Equal labels are all kept,
which is what lets the planner return the complete tie set.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .model import ModelError, Path
from .objective import (
    COST_ONLY,
    EQ17,
    REDUNDANCY_FIRST,
    PathScore,
    RiskProfile,
    armed_out_degree,
    compare_keys,
    objective_key,
    score_sequence,
)
from .update import EffectiveView

SAT = "SAT"
UNSAT = "UNSAT"


class PlanError(ModelError):
    """Malformed planning request (distinct from an UNSAT verdict)."""


@dataclass(frozen=True)
class PlanRequest:
    view: EffectiveView
    start: str
    remaining_desired: tuple[str, ...]
    profile: RiskProfile = field(default_factory=RiskProfile)

    def __post_init__(self) -> None:
        object.__setattr__(self, "remaining_desired", tuple(self.remaining_desired))


@dataclass(frozen=True)
class PlanResult:
    verdict: str
    optimal_paths: tuple[Path, ...] = ()
    score: PathScore | None = None

    @property
    def sat(self) -> bool:
        return self.verdict == SAT

    @property
    def best(self) -> Path | None:
        """Deterministic pick from the tie set: smallest state-id sequence."""
        return self.optimal_paths[0] if self.optimal_paths else None


class _Label:
    __slots__ = ("node", "stage", "visited", "path", "esc", "cost", "risk", "alive")

    def __init__(self, node, stage, visited, path, esc, cost, risk):
        self.node = node
        self.stage = stage
        self.visited = visited
        self.path = path
        self.esc = esc
        self.cost = cost
        self.risk = risk
        self.alive = True


def _edge_weights(view: EffectiveView) -> dict[str, list[tuple[str, int, float, float]]]:
    total = view.total
    armed = view.armed_edges
    armed_out = armed_out_degree(armed)
    out: dict[str, list[tuple[str, int, float, float]]] = {}
    for e in view.automaton.edges:
        st = total.state(e.source)
        x = total.centrality[e.source]
        esc = armed_out.get(e.source, 0) - (e.key in armed)
        out.setdefault(e.source, []).append((e.target, esc, st.cost + e.cost, st.risk_factor / x * st.cost))
    for succ in out.values():
        succ.sort()
    return out


def _label_key(label: _Label, profile: RiskProfile) -> tuple:
    if profile.mode == COST_ONLY:
        return (label.cost,)
    value = label.cost + profile.risk_weight * label.risk
    if profile.mode == EQ17:
        return (value,)
    return (-label.esc, value)


def _search(
    weights: dict[str, list[tuple[str, int, float, float]]],
    start: str,
    waypoints: Sequence[str],
    profile: RiskProfile,
    forbidden: frozenset[str] = frozenset(),
) -> list[tuple[str, ...]]:
    """All simple paths from ``start`` through ``waypoints`` in order that are
    optimal up to the search tolerance (the caller re-scores exactly)."""
    waypoints = tuple(waypoints)
    stage0 = 1 if waypoints and waypoints[0] == start else 0
    if stage0 == len(waypoints):
        return [(start,)]
    later = {w: i for i, w in enumerate(waypoints)}
    root = _Label(start, stage0, frozenset([start]), (start,), 0, 0.0, 0.0)
    buckets: dict[tuple[str, int], list[_Label]] = {(start, stage0): [root]}
    queue = deque([root])
    done: list[_Label] = []
    best: tuple | None = None
    value_only = profile.mode != REDUNDANCY_FIRST

    while queue:
        lab = queue.popleft()
        if not lab.alive:
            continue
        if value_only and best is not None and compare_keys(_label_key(lab, profile), best) > 0:
            continue
        for nxt, esc, cost, risk in weights.get(lab.node, ()):
            if nxt in lab.visited or nxt in forbidden:
                continue
            stage = lab.stage
            idx = later.get(nxt)
            if idx is not None:
                if idx != stage:
                    continue
                stage += 1
            cand = _Label(nxt, stage, lab.visited | {nxt}, lab.path + (nxt,), lab.esc + esc, lab.cost + cost, lab.risk + risk)
            key = _label_key(cand, profile)
            if value_only and best is not None and compare_keys(key, best) > 0:
                continue
            bucket = buckets.setdefault((nxt, stage), [])
            dominated = False
            for other in bucket:
                if other.visited <= cand.visited and compare_keys(_label_key(other, profile), key) < 0:
                    dominated = True
                    break
            if dominated:
                continue
            keep = []
            for other in bucket:
                if cand.visited <= other.visited and compare_keys(key, _label_key(other, profile)) < 0:
                    other.alive = False
                else:
                    keep.append(other)
            keep.append(cand)
            buckets[(nxt, stage)] = keep
            if stage == len(waypoints):
                done.append(cand)
                if best is None or compare_keys(key, best) < 0:
                    best = key
            else:
                queue.append(cand)

    done = [d for d in done if d.alive]
    if not done:
        return []
    best = min((_label_key(d, profile) for d in done), key=_CmpKey)
    return sorted(d.path for d in done if compare_keys(_label_key(d, profile), best) == 0)


class _CmpKey:
    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return compare_keys(self.k, other.k) < 0


def _finalize(request: PlanRequest, candidates: list[tuple[str, ...]]) -> PlanResult:
    view, profile = request.view, request.profile
    armed = view.armed_edges
    scored = [(seq, score_sequence(view.total, seq, profile, armed)) for seq in set(candidates)]
    if not scored:
        return PlanResult(UNSAT)
    best = min((objective_key(s, profile) for _, s in scored), key=_CmpKey)
    ties = sorted(seq for seq, s in scored if compare_keys(objective_key(s, profile), best) == 0)
    scores = dict(scored)
    paths = tuple(Path(seq, scores[seq].value) for seq in ties)
    return PlanResult(SAT, paths, scores[ties[0]])


def plan(request: PlanRequest) -> PlanResult:
    """Optimal simple paths from ``start`` visiting ``remaining_desired`` in order.

    The problem is split at the desired states; each segment is solved on its
    own with the other desired states forbidden.  If every combination of the
    segment optima repeats a state, a joint search over the whole sequence
    is run instead.
    """
    view = request.view
    start = request.start
    if not view.automaton.has_state(start):
        raise PlanError(f"start state {start!r} is not in the view")
    desired = request.remaining_desired
    if len(set(desired)) != len(desired):
        raise PlanError("remaining desired states must be distinct")
    if not desired or desired == (start,):
        return _finalize(request, [(start,)])
    if start in desired[1:]:
        return PlanResult(UNSAT)
    if any(not view.automaton.has_state(d) for d in desired):
        return PlanResult(UNSAT)

    weights = _edge_weights(view)
    profile = request.profile
    points = (start,) + (desired if desired[0] != start else desired[1:])
    all_points = frozenset(points)

    segments: list[list[tuple[str, ...]]] = []
    for a, b in zip(points, points[1:]):
        seg = _search(weights, a, (b,), profile, forbidden=all_points - {a, b})
        if not seg:
            return PlanResult(UNSAT)
        segments.append(seg)

    combined = []
    for parts in product(*segments):
        seq = parts[0] + tuple(s for p in parts[1:] for s in p[1:])
        if len(set(seq)) == len(seq):
            combined.append(seq)
    if combined:
        return _finalize(request, combined)
    return _finalize(request, _search(weights, start, points[1:], profile))


def enumerate_all_paths(view: EffectiveView, start: str, desired: Sequence[str], bound: int) -> set[Path]:
    """Every simple path from ``start`` visiting ``desired`` in order and ending
    at its last element, with at most ``bound`` states."""
    auto = view.automaton
    desired = tuple(desired)
    if not auto.has_state(start):
        return set()
    if not desired:
        return {Path((start,))}
    out: set[Path] = set()

    def walk(path: list[str], stage: int) -> None:
        node = path[-1]
        if stage == len(desired):
            out.add(Path(tuple(path)))
            return
        if len(path) >= bound:
            return
        for nxt in auto.successors[node]:
            if nxt in path:
                continue
            s = stage
            if nxt in desired:
                if desired.index(nxt) != stage:
                    continue
                s += 1
            path.append(nxt)
            walk(path, s)
            path.pop()

    walk([start], 1 if desired[0] == start else 0)
    return out
