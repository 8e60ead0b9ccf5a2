"""Cost and risk scoring of candidate paths.

A path's value sums ``(1 + w * h_i / x_i) * P_i`` over every state except the
last one, where ``h_i`` is the user risk factor, ``x_i`` the out-degree of the
state in the total automaton and ``w`` the risk weight of the profile.  The
escape count tallies the armed redundant edges that leave the path; the
``redundancy_first`` mode prefers paths with more of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import Automaton, ModelError, Path, StateRecord, is_feasible_path
from .update import EffectiveView

COST_ONLY = "cost_only"
EQ17 = "eq17"
REDUNDANCY_FIRST = "redundancy_first"
MODES = (COST_ONLY, EQ17, REDUNDANCY_FIRST)

# values closer than this are treated as tied
TIE_TOL = 1e-9


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class RiskProfile:
    """Selection rule.

    ``cost_only`` ranks by plain cost (the risk weight only affects the
    reported value), ``eq17`` ranks by the risk-weighted value and
    ``redundancy_first`` ranks by escape count (more is better), then value.
    """

    mode: str = EQ17
    risk_weight: float = 1.0

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown profile mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if not (self.risk_weight >= 0) or math.isinf(self.risk_weight):
            raise ValueError(f"risk weight must be finite and >= 0, got {self.risk_weight}")


@dataclass(frozen=True)
class PathScore:
    cost_sum: float
    risk_sum: float
    value: float
    escape_count: int = 0


def uncertainty_ratio(state: StateRecord, centrality: int) -> float:
    if centrality <= 0:
        raise DomainError(f"state {state.id!r} has out-degree 0; terminal states carry no risk term")
    return state.risk_factor / centrality


def armed_out_degree(armed_edges: Iterable[tuple[str, str]]) -> dict[str, int]:
    out: dict[str, int] = {}
    for a, _ in armed_edges:
        out[a] = out.get(a, 0) + 1
    return out


def score_sequence(
    total: Automaton,
    sequence: Sequence[str],
    profile: RiskProfile,
    armed_edges: frozenset[tuple[str, str]] = frozenset(),
) -> PathScore:
    """Score a state sequence against the total automaton.

    No feasibility check; :func:`score_path` is the checked entry point.
    """
    seq = tuple(sequence)
    costs: list[float] = []
    risks: list[float] = []
    escapes = 0
    armed_out = armed_out_degree(armed_edges)
    for i, sid in enumerate(seq[:-1]):
        st = total.state(sid)
        costs.append(st.cost)
        edge = total.edge_map.get((sid, seq[i + 1]))
        if edge is not None and edge.cost:
            costs.append(edge.cost)
        risks.append(uncertainty_ratio(st, total.centrality[sid]) * st.cost)
        escapes += armed_out.get(sid, 0) - ((sid, seq[i + 1]) in armed_edges)
    cost_sum = math.fsum(costs)
    risk_sum = math.fsum(risks)
    return PathScore(cost_sum, risk_sum, cost_sum + profile.risk_weight * risk_sum, escapes)


def score_path(total: Automaton, view: EffectiveView, path: Path, profile: RiskProfile) -> PathScore:
    if not is_feasible_path(view.automaton, path):
        raise ModelError(f"path {'->'.join(path.sequence)} is not feasible in the view")
    return score_sequence(total, path.sequence, profile, view.armed_edges)


def objective_key(score: PathScore, profile: RiskProfile) -> tuple:
    if profile.mode == COST_ONLY:
        return (score.cost_sum,)
    if profile.mode == EQ17:
        return (score.value,)
    return (-score.escape_count, score.value)


def compare_keys(a: tuple, b: tuple) -> int:
    """-1 if ``a`` is better, 1 if ``b`` is better, 0 when tied within TIE_TOL."""
    for x, y in zip(a, b):
        if isinstance(x, int) and isinstance(y, int):
            if x != y:
                return -1 if x < y else 1
        elif abs(x - y) > TIE_TOL:
            return -1 if x < y else 1
    return 0


def compare(a: PathScore, b: PathScore, profile: RiskProfile) -> int:
    return compare_keys(objective_key(a, profile), objective_key(b, profile))
