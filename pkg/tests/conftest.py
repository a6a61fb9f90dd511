import time

import pytest

from pwk.model import LEND, REND, ComponentSpec, MachineSpec, Rule

SESSION_START = time.perf_counter()
_criteria = {}


def pytest_collection_modifyitems(items):
    # the suite-runtime criterion must run last
    last = [it for it in items if it.name == "test_criterion_10_suite_runtime"]
    items[:] = [it for it in items if it not in last] + last


def pytest_runtest_logreport(report):
    marker = "test_criterion_"
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith(marker):
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number = int(name[len(marker):].split("_", 1)[0])
        _criteria[number] = (report.outcome, name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        outcome, name = _criteria[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {name}")


def component(states, initial, rules, accepting=(), back=None, send=None, default="none"):
    return ComponentSpec(
        states=tuple(states.split()),
        initial=initial,
        accepting=frozenset(accepting),
        delta=tuple(Rule(*r) for r in rules),
        send_default=default,
        send=dict(send or {}),
        reverse_delta=None if back is None else tuple(Rule(*r) for r in back),
    )


def machine(name, upper, lower, alphabet=("a", "b"), messages=()):
    return MachineSpec(name, tuple(alphabet), tuple(messages), upper, lower)


@pytest.fixture
def looping_machine():
    """Upper waits on the left endmarker forever on every input."""
    return machine("looper",
                   component("s", "s", [("s", LEND, None, "s", 0)]),
                   component("t", "t", [("t", REND, None, "t", 0)]))


@pytest.fixture
def ambiguous_machine():
    """Forward-deterministic, but the reverse tables admit two predecessors of (r,1,t,2)."""
    upper = component("s r p", "s", [("s", LEND, None, "r", 1), ("p", "a", None, "r", 0)],
                      back=[("r", LEND, None, "s", 1), ("r", "a", None, "p", 0)])
    lower = component("t", "t", [("t", REND, None, "t", 0)], back=[("t", REND, None, "t", 0)])
    return machine("ambiguous", upper, lower, alphabet=("a",))


@pytest.fixture
def merge_machine():
    """Two configurations step into (r,0,t,n+1): an in-degree-2 node."""
    upper = component("s r", "s", [("s", LEND, None, "r", 0), ("r", LEND, None, "r", 0)])
    lower = component("t", "t", [("t", REND, None, "t", 0)])
    return machine("merge", upper, lower)
