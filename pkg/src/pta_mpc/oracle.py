"""Brute-force reference implementations for cross-checking.

Everything here is deliberately naive and imports only the data types of
:mod:`pta_mpc.model`: exhaustive path enumeration, direct scoring loops and
reachability by repeated full-graph sweeps.  Meant for tests on small
instances only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .model import ORIGINAL, Automaton

MAX_ORACLE_STATES = 20
_TOL = 1e-9


class OracleRefused(ValueError):
    pass


@dataclass(frozen=True)
class OracleView:
    """Plain-data mirror of an effective view."""

    states: frozenset[str]
    edges: frozenset[tuple[str, str]]
    armed_paths: frozenset[str]
    trimmed: frozenset[str]


@dataclass(frozen=True)
class OracleResult:
    sat: bool
    paths: tuple[tuple[str, ...], ...]
    cost_sum: float = 0.0
    value: float = 0.0
    escape_count: int = 0


@dataclass(frozen=True)
class OracleReport:
    instance: str
    oracle: OracleResult
    subject: OracleResult
    equal: bool


def _sweep_reach(states: Iterable[str], edges: Iterable[tuple[str, str]], root: str) -> set[str]:
    # repeated full passes over the edge list until nothing changes
    edges = list(edges)
    seen = {root} if root in set(states) else set()
    changed = True
    while changed:
        changed = False
        for a, b in edges:
            if a in seen and b not in seen:
                seen.add(b)
                changed = True
    return seen


def oracle_update(
    total: Automaton, eds: Mapping[str, int], root: str, traversed: Iterable[str] = ()
) -> OracleView:
    values = dict(eds) if isinstance(eds, Mapping) else dict(eds.values)
    shielded = set(traversed) - {root}
    failed = {s for s, v in values.items() if v == 1 and s not in shielded}
    if root in failed or root not in {s.id for s in total.states}:
        raise ValueError("root is failed or unknown")
    aux = {s for s, v in values.items() if v == -1 and s not in shielded}
    goal = total.desired[-1] if total.desired else None
    alive = {s.id for s in total.states} - failed
    original = [(e.source, e.target) for e in total.edges if e.membership == ORIGINAL]
    original = [(a, b) for a, b in original if a in alive and b in alive]

    def usable(rp) -> bool:
        return bool(failed) or rp.sequence[0] in aux or root in rp.sequence[1:-1]

    armed: set[str] = set()
    for _ in range(len(total.redundant_paths) + 2):
        graph = list(original)
        for rp in total.redundant_paths:
            if rp.id in armed and usable(rp):
                graph += list(zip(rp.sequence, rp.sequence[1:]))
        from_root = _sweep_reach(alive, graph, root)
        nxt = set()
        for rp in total.redundant_paths:
            ok = all(s in alive for s in rp.sequence)
            ok = ok and (rp.sequence[0] in from_root or root in rp.sequence[1:-1])
            ok = ok and (goal is None or goal in _sweep_reach(alive, graph, rp.sequence[-1]))
            if ok:
                nxt.add(rp.id)
        if nxt == armed:
            break
        armed = nxt
    states = frozenset(from_root)
    edges = frozenset((a, b) for a, b in graph if a in states and b in states)
    return OracleView(states, edges, frozenset(armed), frozenset({s.id for s in total.states} - states))


def _all_simple_paths(edges, start, desired, limit):
    adj: dict[str, list[str]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
    found = []
    stack = [(start,)]
    while stack:
        p = stack.pop()
        # keep the desired states that appear, in order of appearance
        seen_desired = [s for s in p if s in desired]
        if seen_desired != list(desired[: len(seen_desired)]):
            continue
        if p[-1] == desired[-1]:
            if len(seen_desired) == len(desired):
                found.append(p)
            continue
        if len(p) >= limit:
            continue
        for b in adj.get(p[-1], []):
            if b not in p:
                stack.append(p + (b,))
    return found


def _naive_score(total: Automaton, seq, armed_edges, weight):
    cost = 0.0
    risk = 0.0
    esc = 0
    for i in range(len(seq) - 1):
        s = seq[i]
        rec = [r for r in total.states if r.id == s][0]
        outdeg = sum(1 for e in total.edges if e.source == s)
        cost += rec.cost
        for e in total.edges:
            if e.source == s and e.target == seq[i + 1]:
                cost += e.cost
        risk += rec.risk_factor / outdeg * rec.cost
        for a, b in armed_edges:
            if a == s and b != seq[i + 1]:
                esc += 1
    return cost, cost + weight * risk, esc


def _better(mode, a, b) -> int:
    # a, b = (cost, value, esc)
    if mode == "cost_only":
        pairs = [(a[0], b[0])]
    elif mode == "eq17":
        pairs = [(a[1], b[1])]
    else:
        if a[2] != b[2]:
            return -1 if a[2] > b[2] else 1
        pairs = [(a[1], b[1])]
    for x, y in pairs:
        if abs(x - y) > _TOL:
            return -1 if x < y else 1
    return 0


def oracle_plan_raw(
    total: Automaton,
    view_states: Iterable[str],
    view_edges: Iterable[tuple[str, str]],
    armed_paths: Iterable[str],
    start: str,
    desired: Iterable[str],
    mode: str,
    weight: float = 1.0,
) -> OracleResult:
    """Exhaustive optimum over all simple paths of the given view."""
    view_states = set(view_states)
    if len(view_states) > MAX_ORACLE_STATES:
        raise OracleRefused(f"oracle refuses instances with more than {MAX_ORACLE_STATES} states")
    desired = tuple(desired)
    if start not in view_states:
        return OracleResult(False, ())
    armed_edges = set()
    for rp in total.redundant_paths:
        if rp.id in set(armed_paths):
            armed_edges |= set(zip(rp.sequence, rp.sequence[1:]))
    if not desired or desired == (start,):
        candidates = [(start,)]
    else:
        if desired[0] == start:
            desired = desired[1:]
        candidates = _all_simple_paths(view_edges, start, desired, len(view_states) + 1)
    if not candidates:
        return OracleResult(False, ())
    scored = [(p, _naive_score(total, p, armed_edges, weight)) for p in candidates]
    best = scored[0][1]
    for _, sc in scored[1:]:
        if _better(mode, sc, best) < 0:
            best = sc
    ties = sorted(p for p, sc in scored if _better(mode, sc, best) == 0)
    rep = dict(scored)[ties[0]]
    return OracleResult(True, tuple(ties), rep[0], rep[1], rep[2])


def oracle_plan(view, start: str, desired, profile) -> OracleResult:
    """Exhaustive optimum for an effective view under a risk profile."""
    return oracle_plan_raw(
        view.total,
        [s.id for s in view.automaton.states],
        [(e.source, e.target) for e in view.automaton.edges],
        view.armed_redundant_paths,
        start,
        desired,
        profile.mode,
        profile.risk_weight,
    )


def check_plan(instance: str, view, start: str, desired, profile, result) -> OracleReport:
    """Compare a planner result with the oracle on the same problem."""
    ref = oracle_plan(view, start, desired, profile)
    if result.sat:
        sc = result.score
        subj = OracleResult(
            True,
            tuple(p.sequence for p in result.optimal_paths),
            sc.cost_sum,
            sc.value,
            sc.escape_count,
        )
    else:
        subj = OracleResult(False, ())
    equal = (
        ref.sat == subj.sat
        and set(ref.paths) == set(subj.paths)
        and abs(ref.value - subj.value) <= _TOL
        and abs(ref.cost_sum - subj.cost_sum) <= _TOL
        and ref.escape_count == subj.escape_count
    )
    return OracleReport(instance, ref, subj, equal)

