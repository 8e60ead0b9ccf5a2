"""Priced timed automaton data model and structural queries.

The automaton is a cost-weighted directed graph.  States and edges are split
into an original part (the failure-free system) and a redundant part made of
bypass paths whose first and last states belong to the original part.
Clock guards, invariants and resets are not modelled; the controller tracks a
scalar clock and the set of traversed states instead.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

ORIGINAL = "original"
REDUNDANT = "redundant"
MEMBERSHIPS = (ORIGINAL, REDUNDANT)


class ModelError(ValueError):
    """Raised when an automaton or a path violates a structural invariant.

    ``invariant`` names the violated rule so loaders can report it.
    """

    def __init__(self, message: str, invariant: str = "input"):
        super().__init__(message)
        self.invariant = invariant


@dataclass(frozen=True)
class StateRecord:
    id: str
    label: str = ""
    cost: float = 1.0
    risk_factor: float = 0.0
    membership: str = ORIGINAL

    def __post_init__(self) -> None:
        if not (self.cost >= 0):
            raise ModelError(f"state {self.id!r}: cost must be >= 0, got {self.cost}", "nonnegative-cost")
        if not (self.risk_factor >= 0):
            raise ModelError(
                f"state {self.id!r}: risk_factor must be >= 0, got {self.risk_factor}", "nonnegative-risk"
            )
        if self.membership not in MEMBERSHIPS:
            raise ModelError(f"state {self.id!r}: unknown membership {self.membership!r}", "membership")


@dataclass(frozen=True)
class EdgeRecord:
    source: str
    target: str
    cost: float = 0.0
    membership: str = ORIGINAL
    redundant_path_id: str | None = None

    def __post_init__(self) -> None:
        if self.source == self.target:
            raise ModelError(f"edge {self.source}->{self.target}: self-loops are not allowed", "no-self-loops")
        if not (self.cost >= 0):
            raise ModelError(f"edge {self.source}->{self.target}: cost must be >= 0", "nonnegative-cost")
        if self.membership not in MEMBERSHIPS:
            raise ModelError(
                f"edge {self.source}->{self.target}: unknown membership {self.membership!r}", "membership"
            )

    @property
    def key(self) -> tuple[str, str]:
        return (self.source, self.target)


@dataclass(frozen=True)
class RedundantPathRecord:
    id: str
    sequence: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sequence", tuple(self.sequence))
        if len(self.sequence) < 2:
            raise ModelError(f"redundant path {self.id!r}: needs at least two states", "redundant-path-shape")

    @property
    def start_anchor(self) -> str:
        return self.sequence[0]

    @property
    def end_anchor(self) -> str:
        return self.sequence[-1]

    @property
    def interior(self) -> tuple[str, ...]:
        return self.sequence[1:-1]

    @property
    def edge_keys(self) -> tuple[tuple[str, str], ...]:
        return tuple(zip(self.sequence, self.sequence[1:]))


@dataclass(frozen=True)
class Path:
    sequence: tuple[str, ...]
    total_cost: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "sequence", tuple(self.sequence))

    def __len__(self) -> int:
        return len(self.sequence)

    @property
    def edges(self) -> tuple[tuple[str, str], ...]:
        return tuple(zip(self.sequence, self.sequence[1:]))


@dataclass(frozen=True)
class Automaton:
    """The automaton tuple.

    Construction checks the graph-level invariants (unique ids, known edge
    endpoints, one edge per ordered pair, known initial state).  The
    membership rules for a user-supplied total automaton are checked by
    :meth:`validate`; effective views produced by the update operator are not
    required to satisfy them (a view may be rooted at a redundant state).
    """

    states: tuple[StateRecord, ...]
    edges: tuple[EdgeRecord, ...] = ()
    redundant_paths: tuple[RedundantPathRecord, ...] = ()
    desired: tuple[str, ...] = ()
    initial: str = ""

    def __post_init__(self) -> None:
        for name in ("states", "edges", "redundant_paths", "desired"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        seen: set[str] = set()
        for i, s in enumerate(self.states):
            if s.id in seen:
                raise ModelError(f"states[{i}]: duplicate state id {s.id!r}", "unique-state-ids")
            seen.add(s.id)
        pairs: set[tuple[str, str]] = set()
        for i, e in enumerate(self.edges):
            for end in (e.source, e.target):
                if end not in seen:
                    raise ModelError(f"edges[{i}]: unknown state {end!r}", "edge-endpoints-exist")
            if e.key in pairs:
                raise ModelError(f"edges[{i}]: duplicate edge {e.source}->{e.target}", "simple-graph")
            pairs.add(e.key)
        path_ids: set[str] = set()
        for i, rp in enumerate(self.redundant_paths):
            if rp.id in path_ids:
                raise ModelError(f"redundant_paths[{i}]: duplicate id {rp.id!r}", "unique-redundant-path-ids")
            path_ids.add(rp.id)
        if self.initial not in seen:
            raise ModelError(f"initial state {self.initial!r} is not a state", "initial-exists")

    # lookups

    @cached_property
    def state_map(self) -> dict[str, StateRecord]:
        return {s.id: s for s in self.states}

    @cached_property
    def edge_map(self) -> dict[tuple[str, str], EdgeRecord]:
        return {e.key: e for e in self.edges}

    @cached_property
    def successors(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {s.id: [] for s in self.states}
        for e in self.edges:
            out[e.source].append(e.target)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def redundant_path_map(self) -> dict[str, RedundantPathRecord]:
        return {rp.id: rp for rp in self.redundant_paths}

    @cached_property
    def centrality(self) -> dict[str, int]:
        """Out-degree of every state, cached once per automaton."""
        return {sid: len(succ) for sid, succ in self.successors.items()}

    @property
    def original_states(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.states if s.membership == ORIGINAL)

    def state(self, state_id: str) -> StateRecord:
        try:
            return self.state_map[state_id]
        except KeyError:
            raise ModelError(f"unknown state {state_id!r}") from None

    def has_state(self, state_id: str) -> bool:
        return state_id in self.state_map

    def has_edge(self, source: str, target: str) -> bool:
        return (source, target) in self.edge_map

    def original(self) -> Automaton:
        """The original automaton: original states and original edges only."""
        keep = {s.id for s in self.states if s.membership == ORIGINAL}
        return Automaton(
            states=tuple(s for s in self.states if s.id in keep),
            edges=tuple(e for e in self.edges if e.membership == ORIGINAL and e.source in keep and e.target in keep),
            redundant_paths=(),
            desired=self.desired,
            initial=self.initial,
        )

    def validate(self) -> None:
        """Check the rules a user-supplied total automaton must satisfy."""
        if self.state(self.initial).membership != ORIGINAL:
            raise ModelError(f"initial state {self.initial!r} must be original", "initial-is-original")
        for i, d in enumerate(self.desired):
            if d not in self.state_map:
                raise ModelError(f"desired[{i}]: unknown state {d!r}", "desired-exist")
        if len(set(self.desired)) != len(self.desired):
            raise ModelError("desired states must be distinct", "desired-distinct")
        for i, e in enumerate(self.edges):
            if e.membership == ORIGINAL:
                for end in (e.source, e.target):
                    if self.state_map[end].membership != ORIGINAL:
                        raise ModelError(
                            f"edges[{i}]: original edge touches redundant state {end!r}", "original-edge-membership"
                        )
            elif e.redundant_path_id is not None and e.redundant_path_id not in self.redundant_path_map:
                raise ModelError(
                    f"edges[{i}]: unknown redundant path {e.redundant_path_id!r}", "redundant-edge-path-exists"
                )
        for i, rp in enumerate(self.redundant_paths):
            for s in rp.sequence:
                if s not in self.state_map:
                    raise ModelError(f"redundant_paths[{i}]: unknown state {s!r}", "redundant-path-states-exist")
            for anchor in (rp.start_anchor, rp.end_anchor):
                if self.state_map[anchor].membership != ORIGINAL:
                    raise ModelError(
                        f"redundant_paths[{i}] ({rp.id}): anchor {anchor!r} must be an original state "
                        "(only the first and last states of a redundant path are original)",
                        "redundant-path-anchors-original",
                    )
            for s in rp.interior:
                if self.state_map[s].membership != REDUNDANT:
                    raise ModelError(
                        f"redundant_paths[{i}] ({rp.id}): interior state {s!r} must be redundant "
                        "(only the first and last states of a redundant path are original)",
                        "redundant-path-interior-redundant",
                    )
            if len(set(rp.sequence)) != len(rp.sequence):
                raise ModelError(f"redundant_paths[{i}] ({rp.id}): repeated state", "redundant-path-simple")
            for a, b in rp.edge_keys:
                e = self.edge_map.get((a, b))
                if e is None or e.membership != REDUNDANT:
                    raise ModelError(
                        f"redundant_paths[{i}] ({rp.id}): missing redundant edge {a}->{b}", "redundant-path-connected"
                    )
                if e.redundant_path_id not in (None, rp.id):
                    raise ModelError(
                        f"redundant_paths[{i}] ({rp.id}): edge {a}->{b} is tagged {e.redundant_path_id!r}",
                        "redundant-edge-path-id",
                    )


def reachable(successors: Mapping[str, Iterable[str]], root: str, allowed: set[str] | None = None) -> set[str]:
    """States reachable from ``root`` (inclusive), optionally restricted to ``allowed``."""
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in successors.get(u, ()):
            if v not in seen and (allowed is None or v in allowed):
                seen.add(v)
                queue.append(v)
    return seen


def _check_known(automaton: Automaton, ids: Iterable[str]) -> None:
    for s in ids:
        if s not in automaton.state_map:
            raise ModelError(f"unknown state {s!r}")


def is_feasible_path(automaton: Automaton, path: Path | Sequence[str]) -> bool:
    seq = path.sequence if isinstance(path, Path) else tuple(path)
    _check_known(automaton, seq)
    if len(set(seq)) != len(seq):
        return False
    return all(automaton.has_edge(a, b) for a, b in zip(seq, seq[1:]))


def legal_states(automaton: Automaton, root: str) -> set[str]:
    """States reachable from ``root`` along the automaton's edges; the rest are failed."""
    _check_known(automaton, [root])
    return reachable(automaton.successors, root)


def out_degree_centrality(automaton: Automaton, state: str) -> int:
    """Out-degree of ``state``.  Pass the total automaton, never a trimmed view."""
    _check_known(automaton, [state])
    return automaton.centrality[state]


def end_parity(sigma: Sequence[str], candidate: Sequence[str]) -> bool:
    """True iff ``candidate`` is a suffix of ``sigma`` starting at one of its elements."""
    sigma, candidate = tuple(sigma), tuple(candidate)
    if not candidate or len(candidate) > len(sigma):
        return False
    return sigma[len(sigma) - len(candidate):] == candidate


def _contains_end_parity(sigma: tuple[str, ...], seq: tuple[str, ...]) -> bool:
    # every end parity ends with the last desired state, and that state alone is one
    return bool(sigma) and sigma[-1] in seq


def are_equivalent_paths(
    automaton: Automaton, u1: Path, u2: Path, redundant_path: RedundantPathRecord
) -> bool:
    """Whether a redundant path can connect ``u1`` to ``u2``.

    Both paths must be feasible in the original automaton and their suffixes
    from the start and end anchors must each contain an end parity of the
    desired sequence.
    """
    s1, s2 = u1.sequence, u2.sequence
    if redundant_path.start_anchor not in s1:
        raise ModelError(f"start anchor {redundant_path.start_anchor!r} is not on the first path")
    if redundant_path.end_anchor not in s2:
        raise ModelError(f"end anchor {redundant_path.end_anchor!r} is not on the second path")
    original = automaton.original()
    for seq in (s1, s2):
        if any(not original.has_state(s) for s in seq) or not is_feasible_path(original, seq):
            return False
    suffix1 = s1[s1.index(redundant_path.start_anchor):]
    suffix2 = s2[s2.index(redundant_path.end_anchor):]
    sigma = tuple(automaton.desired)
    return _contains_end_parity(sigma, suffix1) and _contains_end_parity(sigma, suffix2)
