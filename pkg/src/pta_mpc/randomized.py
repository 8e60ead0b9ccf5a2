"""Seeded random automata and the self-check campaign behind ``--seed-check``."""

from __future__ import annotations

import random

from .model import ORIGINAL, REDUNDANT, Automaton, EdgeRecord, RedundantPathRecord, StateRecord
from .objective import MODES, RiskProfile
from .oracle import check_plan, oracle_update
from .planner import PlanRequest, plan
from .update import EdsState, UpdateError, apply_update

WEIGHTS = (0.5, 1.0, 2.0)


def random_automaton(
    rng: random.Random,
    max_states: int = 12,
    density: float = 0.4,
    max_redundant_paths: int = 3,
) -> Automaton:
    n_red_paths = rng.randint(0, max_redundant_paths)
    n_orig = rng.randint(3, max(3, max_states - 2 * n_red_paths))
    orig = [f"o{i}" for i in range(n_orig)]
    p = rng.uniform(0.6 * density, density)
    # unit weights make ties common
    uniform = rng.random() < 0.3
    pick = (lambda: 1.0) if uniform else (lambda: rng.choice(WEIGHTS))
    edges = [
        EdgeRecord(a, b)
        for a in orig
        for b in orig
        if a != b and rng.random() < p
    ]
    states = [StateRecord(s, s, pick(), pick(), ORIGINAL) for s in orig]
    paths = []
    budget = max_states - n_orig
    for k in range(n_red_paths):
        if budget < 1:
            break
        i, j = rng.sample(orig, 2)
        length = rng.randint(1, min(2, budget))
        budget -= length
        interior = [f"r{k}_{m}" for m in range(length)]
        seq = [i, *interior, j]
        pid = f"p{k}"
        for s in interior:
            states.append(StateRecord(s, s, pick(), pick(), REDUNDANT))
        for a, b in zip(seq, seq[1:]):
            edges.append(EdgeRecord(a, b, 0.0, REDUNDANT, pid))
        paths.append(RedundantPathRecord(pid, tuple(seq)))
    n_desired = rng.randint(1, 2)
    desired = tuple(rng.sample(orig[1:], min(n_desired, len(orig) - 1)))
    return Automaton(tuple(states), tuple(edges), tuple(paths), desired, orig[0])


def random_eds(rng: random.Random, automaton: Automaton, root: str) -> EdsState:
    values = {}
    for s in automaton.states:
        if s.id == root:
            continue
        r = rng.random()
        if r < 0.08:
            values[s.id] = 1
        elif r < 0.14:
            values[s.id] = -1
    return EdsState(values)


def self_check(n: int = 50, seed: int = 0) -> list[str]:
    """Planner and update operator against the oracles; returns failure descriptions."""
    failures = []
    for i in range(n):
        rng = random.Random(seed * 100_003 + i)
        total = random_automaton(rng)
        eds = random_eds(rng, total, total.initial)
        try:
            view = apply_update(total, eds, total.initial)
        except UpdateError:
            continue
        ref = oracle_update(total, eds, total.initial)
        got_states = {s.id for s in view.automaton.states}
        got_edges = {e.key for e in view.automaton.edges}
        if (got_states, got_edges, set(view.armed_redundant_paths)) != (ref.states, ref.edges, ref.armed_paths):
            failures.append(f"instance {i}: update operator disagrees with oracle")
            continue
        for mode in MODES:
            profile = RiskProfile(mode, rng.choice(WEIGHTS))
            result = plan(PlanRequest(view, total.initial, total.desired, profile))
            report = check_plan(f"seed={seed} i={i} mode={mode}", view, total.initial, total.desired, profile, result)
            if not report.equal:
                failures.append(f"{report.instance}: planner disagrees with oracle")
    return failures
