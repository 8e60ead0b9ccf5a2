"""Emergency declaration signals and the update operator.

Each state carries a signal in {-1, 0, +1}: -1 enables the redundant paths
that start at the state (auxiliary detour), +1 declares the state failed.
:func:`apply_update` turns the total automaton plus the current signals into
the effective view the planner searches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .model import ORIGINAL, Automaton, ModelError, reachable

NORMAL = "normal"
AUXILIARY = "auxiliary"
EMERGENCY = "emergency"

EDS_VALUES = (-1, 0, 1)


class UpdateError(RuntimeError):
    """The planning root is unknown or failed; the controller is stranded."""


@dataclass(frozen=True)
class EdsState:
    """Per-state signal values; missing keys read as 0."""

    values: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for k, v in dict(self.values).items():
            if v not in EDS_VALUES:
                raise ValueError(f"EDS value for {k!r} must be -1, 0 or +1, got {v!r}")
            if v != 0:
                clean[k] = int(v)
        object.__setattr__(self, "values", dict(sorted(clean.items())))

    def __getitem__(self, state: str) -> int:
        return self.values.get(state, 0)

    def __hash__(self) -> int:
        return hash(tuple(self.values.items()))

    def with_value(self, state: str, value: int) -> EdsState:
        return EdsState({**self.values, state: value})

    def check(self, automaton: Automaton) -> None:
        for k in self.values:
            if not automaton.has_state(k):
                raise ModelError(f"EDS refers to unknown state {k!r}")

    @property
    def failed(self) -> frozenset[str]:
        return frozenset(k for k, v in self.values.items() if v == 1)

    @property
    def auxiliary(self) -> frozenset[str]:
        return frozenset(k for k, v in self.values.items() if v == -1)


def _as_eds(eds: EdsState | Mapping[str, int] | None) -> EdsState:
    if eds is None:
        return EdsState()
    return eds if isinstance(eds, EdsState) else EdsState(eds)


@dataclass(frozen=True)
class EffectiveView:
    automaton: Automaton
    total: Automaton
    active_redundant_edges: frozenset[tuple[str, str]]
    armed_redundant_paths: frozenset[str]
    trimmed_states: frozenset[str]
    failed_states: frozenset[str] = frozenset()

    @property
    def root(self) -> str:
        return self.automaton.initial

    @property
    def armed_edges(self) -> frozenset[tuple[str, str]]:
        """Edges of every armed redundant path, traversable or not."""
        keys: set[tuple[str, str]] = set()
        for pid in self.armed_redundant_paths:
            keys.update(self.total.redundant_path_map[pid].edge_keys)
        return frozenset(keys)


def classify_case(eds: EdsState | Mapping[str, int]) -> str:
    eds = _as_eds(eds)
    if eds.failed:
        return EMERGENCY
    if eds.auxiliary:
        return AUXILIARY
    return NORMAL


def apply_update(
    total: Automaton,
    eds: EdsState | Mapping[str, int] | None,
    root: str,
    traversed: Iterable[str] = (),
) -> EffectiveView:
    """Build the effective view rooted at ``root``.

    ``traversed`` holds the states already left behind; signals on them are
    ignored.  The root itself is never shielded: a failed root raises
    :class:`UpdateError`.

    A redundant path is armed when all of its states are non-failed, its start
    anchor is reachable from the root (or the root lies inside it) and the
    last desired state is reachable from its end anchor.  Armed paths are
    traversable when their start anchor signals -1, when the root lies inside
    them, or when any failure is in effect.  Arming and reachability feed each
    other, so they are iterated to the least fixed point.
    """
    eds = _as_eds(eds)
    if not total.has_state(root):
        raise UpdateError(f"planning root {root!r} is not a state")
    guard = set(traversed) - {root}
    failed = frozenset(s for s in eds.failed if s not in guard)
    if root in failed:
        raise UpdateError(f"controller stranded: current state {root!r} has failed")
    emergency = bool(failed)
    aux_anchors = {s for s in eds.auxiliary if s not in guard}
    goal = total.desired[-1] if total.desired else None

    alive = {s.id for s in total.states if s.id not in failed}
    base_edges = [e.key for e in total.edges if e.membership == ORIGINAL and e.source in alive and e.target in alive]

    def enabled(rp) -> bool:
        return emergency or rp.start_anchor in aux_anchors or root in rp.interior

    armed: set[str] = set()
    while True:
        succ: dict[str, list[str]] = {}
        for a, b in base_edges:
            succ.setdefault(a, []).append(b)
        for pid in sorted(armed):
            rp = total.redundant_path_map[pid]
            if enabled(rp):
                for a, b in rp.edge_keys:
                    succ.setdefault(a, []).append(b)
        from_root = reachable(succ, root)
        new_armed = set()
        for rp in total.redundant_paths:
            if any(s not in alive for s in rp.sequence):
                continue
            if rp.start_anchor not in from_root and root not in rp.interior:
                continue
            if goal is not None and goal not in reachable(succ, rp.end_anchor):
                continue
            new_armed.add(rp.id)
        if new_armed == armed:
            break
        armed = new_armed

    kept = from_root
    traversable = _edge_keys_of(succ)
    edges = []
    active: set[tuple[str, str]] = set()
    for e in total.edges:
        if e.source not in kept or e.target not in kept:
            continue
        if e.membership == ORIGINAL:
            edges.append(e)
        elif e.key in traversable:
            edges.append(e)
            active.add(e.key)
    paths = tuple(
        rp
        for rp in total.redundant_paths
        if rp.id in armed and enabled(rp) and all(s in kept for s in rp.sequence)
    )
    view = Automaton(
        states=tuple(s for s in total.states if s.id in kept),
        edges=tuple(edges),
        redundant_paths=paths,
        desired=total.desired,
        initial=root,
    )
    return EffectiveView(
        automaton=view,
        total=total,
        active_redundant_edges=frozenset(active),
        armed_redundant_paths=frozenset(armed),
        trimmed_states=frozenset(s.id for s in total.states if s.id not in kept),
        failed_states=failed,
    )


def _edge_keys_of(succ: Mapping[str, Iterable[str]]) -> set[tuple[str, str]]:
    return {(a, b) for a, bs in succ.items() for b in bs}


def active_redundant_paths(view: EffectiveView) -> frozenset[str]:
    """Redundant paths whose anchors are both legal in ``view``."""
    return view.armed_redundant_paths
