from __future__ import annotations

import pytest

from pta_mpc.formats import builtin_path, load_automaton, load_scenario


@pytest.fixture(scope="session")
def fig3():
    return load_automaton(builtin_path("fig3"))


@pytest.fixture(scope="session")
def scenarios(fig3):
    return {n: load_scenario(builtin_path(n), fig3) for n in ("scenario1", "scenario2", "scenario3")}


def pytest_terminal_summary(terminalreporter):
    # one line per acceptance criterion, in criterion order
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in nodeid and rep.when in ("call", "setup"):
                name = nodeid.split("::")[-1]
                number = int(name.split("_")[2])
                rows.append((number, name, "PASS" if outcome == "passed" else "FAIL"))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, verdict in sorted(rows):
        terminalreporter.write_line(f"criterion {number}: {verdict}  {name}")
