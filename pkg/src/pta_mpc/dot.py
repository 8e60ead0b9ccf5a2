"""Graphviz DOT export of an automaton, optionally overlaid with a run."""

from __future__ import annotations

from .controller import RunTrace
from .model import REDUNDANT, Automaton
from .objective import COST_ONLY

_PATH_COLOURS = {COST_ONLY: "magenta"}
_DEFAULT_PATH_COLOUR = "green"


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(total: Automaton, trace: RunTrace | None = None) -> str:
    """Render ``total`` as a DOT digraph.

    Original states and edges are solid, redundant ones dashed, each redundant
    path gets its own subgraph.  With a trace, failed states are drawn hatched
    (``diagonals``) and the realized path is coloured: magenta for the
    cost-only baseline, green otherwise.
    """
    failed: set[str] = set()
    on_path: set[str] = set()
    path_edges: set[tuple[str, str]] = set()
    colour = _DEFAULT_PATH_COLOUR
    if trace is not None:
        failed = {ev.state for _, ev in trace.wall_events if ev.value == 1}
        seq = trace.realized_path.sequence
        on_path = set(seq)
        path_edges = set(zip(seq, seq[1:]))
        colour = _PATH_COLOURS.get(trace.profile.mode, _DEFAULT_PATH_COLOUR)

    lines = ["digraph pta {", "  rankdir=LR;", "  node [shape=circle];"]
    for s in total.states:
        attrs = [f"label={_q(s.id)}", f"tooltip={_q(s.label)}"]
        styles = []
        if s.membership == REDUNDANT:
            styles.append("dashed")
        if s.id in failed:
            styles += ["filled", "diagonals"]
            attrs.append('fillcolor="gray80"')
        elif s.id in on_path:
            styles.append("filled")
            attrs.append(f"fillcolor={_q(colour)}")
        if s.id == total.initial:
            attrs.append("peripheries=2")
        if styles:
            attrs.append(f"style={_q(','.join(styles))}")
        lines.append(f"  {_q(s.id)} [{', '.join(attrs)}];")

    def edge_line(src: str, dst: str, dashed: bool, indent: str = "  ") -> str:
        attrs = []
        if dashed:
            attrs.append("style=dashed")
        if (src, dst) in path_edges:
            attrs += [f"color={_q(colour)}", "penwidth=2.5"]
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        return f"{indent}{_q(src)} -> {_q(dst)}{suffix};"

    grouped: set[tuple[str, str]] = set()
    for rp in total.redundant_paths:
        keys = [k for k in rp.edge_keys if k in total.edge_map]
        grouped.update(keys)
        lines.append(f"  subgraph {_q('redundant_' + rp.id)} {{")
        lines.append(f"    label={_q(rp.id)};")
        lines.extend(edge_line(a, b, True, "    ") for a, b in keys)
        lines.append("  }")
    for e in total.edges:
        if e.key not in grouped:
            lines.append(edge_line(e.source, e.target, e.membership == REDUNDANT))
    lines.append("}")
    return "\n".join(lines) + "\n"
