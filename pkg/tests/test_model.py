from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pta_mpc.model import (
    Automaton,
    EdgeRecord,
    ModelError,
    Path,
    RedundantPathRecord,
    StateRecord,
    are_equivalent_paths,
    end_parity,
    is_feasible_path,
    legal_states,
    out_degree_centrality,
)

# expected out-degrees of the running example
EXPECTED_CENTRALITY = {
    "q1": 3, "q2": 2, "q3": 1, "q4": 2, "q5": 1, "q6": 0, "q7": 1, "q8": 1, "q9": 1,
    "q10": 1, "q11": 1, "q12": 3, "q13": 1, "q14": 1, "q15": 1, "q16": 1, "q17": 1,
}
BOTTOM = ("q1", "q2", "q3", "q4", "q5", "q6")
MIDDLE = ("q1", "q7", "q8", "q9", "q6")
TOP = ("q1", "q10", "q11", "q12", "q13", "q6")


def test_fixture_shape(fig3):
    assert len(fig3.states) == 17
    assert len(fig3.edges) == 22
    assert len(fig3.redundant_paths) == 4
    assert fig3.desired == ("q6",)
    assert fig3.initial == "q1"
    assert len(fig3.original_states) == 13


def test_feasible_paths(fig3):
    assert is_feasible_path(fig3, Path(MIDDLE))
    assert is_feasible_path(fig3, Path(("q1",)))
    assert not is_feasible_path(fig3, Path(("q1", "q6")))


def test_redundant_edge_absent_from_normal_view(fig3):
    from pta_mpc.update import apply_update

    view = apply_update(fig3, {}, "q1").automaton
    assert not view.has_edge("q4", "q15")
    # q15 is trimmed from the case-normal view, so the path is rejected as unknown
    with pytest.raises(ModelError):
        is_feasible_path(view, ("q4", "q15", "q9"))
    assert is_feasible_path(fig3, ("q4", "q15", "q9"))


def test_repeated_state_is_infeasible():
    a = Automaton(
        states=(StateRecord("a"), StateRecord("b")),
        edges=(EdgeRecord("a", "b"), EdgeRecord("b", "a")),
        initial="a",
    )
    assert not is_feasible_path(a, ("a", "b", "a"))


def test_legal_states(fig3):
    assert legal_states(fig3, "q1") == {s.id for s in fig3.states}
    original = fig3.original()
    no_q5 = Automaton(
        states=tuple(s for s in original.states if s.id != "q5"),
        edges=tuple(e for e in original.edges if "q5" not in e.key),
        desired=original.desired,
        initial="q1",
    )
    legal = legal_states(no_q5, "q1")
    assert "q6" in legal
    assert legal == {f"q{i}" for i in range(1, 14)} - {"q5"}
    single = Automaton(states=(StateRecord("q0"),), initial="q0")
    assert legal_states(single, "q0") == {"q0"}
    with pytest.raises(ModelError):
        legal_states(fig3, "nope")


def test_centrality_of_running_example(fig3):
    got = {s.id: out_degree_centrality(fig3, s.id) for s in fig3.states}
    assert got == EXPECTED_CENTRALITY
    assert sum(got.values()) == len(fig3.edges)


@pytest.mark.parametrize(
    "candidate,expected",
    [(("b", "c"), True), (("a", "c"), False), (("a", "b", "c"), True), (("c",), True), ((), False), (("b",), False)],
)
def test_end_parity(candidate, expected):
    assert end_parity(("a", "b", "c"), candidate) is expected


@given(st.lists(st.text(min_size=1, max_size=3), min_size=1, max_size=6, unique=True))
def test_end_parity_full_sequence_and_suffixes(sigma):
    assert end_parity(sigma, sigma)
    for k in range(len(sigma)):
        assert end_parity(sigma, sigma[k:])


def test_equivalent_paths(fig3):
    r2 = fig3.redundant_path_map["r2"]
    assert are_equivalent_paths(fig3, Path(BOTTOM), Path(MIDDLE), r2)
    # a detour that rejoins the same row
    assert are_equivalent_paths(fig3, Path(BOTTOM), Path(BOTTOM), RedundantPathRecord("loop", ("q2", "q14", "q4")))
    assert not are_equivalent_paths(fig3, Path(BOTTOM), Path(("q1", "q7", "q8", "q9")), r2)
    with pytest.raises(ModelError):
        are_equivalent_paths(fig3, Path(MIDDLE), Path(MIDDLE), r2)


def test_construction_errors():
    with pytest.raises(ModelError) as exc:
        Automaton(states=(StateRecord("a"), StateRecord("a")), initial="a")
    assert exc.value.invariant == "unique-state-ids"
    with pytest.raises(ModelError):
        EdgeRecord("a", "a")
    with pytest.raises(ModelError):
        StateRecord("a", cost=-1)
    with pytest.raises(ModelError):
        Automaton(states=(StateRecord("a"),), edges=(EdgeRecord("a", "b"),), initial="a")
    with pytest.raises(ModelError):
        Automaton(
            states=(StateRecord("a"), StateRecord("b")),
            edges=(EdgeRecord("a", "b"), EdgeRecord("a", "b")),
            initial="a",
        )


@given(st.data())
def test_legal_states_monotone_and_fixed_point(data):
    n = data.draw(st.integers(2, 8))
    ids = [f"s{i}" for i in range(n)]
    pairs = [(a, b) for a in ids for b in ids if a != b]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    auto = Automaton(tuple(StateRecord(i) for i in ids), tuple(EdgeRecord(a, b) for a, b in chosen), initial="s0")
    legal = legal_states(auto, "s0")
    assert "s0" in legal
    induced = Automaton(
        tuple(StateRecord(i) for i in ids if i in legal),
        tuple(EdgeRecord(a, b) for a, b in chosen if a in legal and b in legal),
        initial="s0",
    )
    assert legal_states(induced, "s0") == legal
    if chosen:
        drop = data.draw(st.sampled_from(chosen))
        fewer = Automaton(
            auto.states, tuple(EdgeRecord(a, b) for a, b in chosen if (a, b) != drop), initial="s0"
        )
        assert legal_states(fewer, "s0") <= legal


@given(st.data())
def test_feasibility_prefix_closed(data):
    ids = [f"s{i}" for i in range(6)]
    pairs = [(a, b) for a in ids for b in ids if a != b]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True))
    auto = Automaton(tuple(StateRecord(i) for i in ids), tuple(EdgeRecord(a, b) for a, b in chosen), initial="s0")
    seq = data.draw(st.lists(st.sampled_from(ids), min_size=1, max_size=6))
    if is_feasible_path(auto, seq):
        for k in range(1, len(seq)):
            assert is_feasible_path(auto, seq[:k])
