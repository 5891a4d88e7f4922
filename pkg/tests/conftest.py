"""Prints one ACCEPTANCE line per criterion at the end of the run.

Tests in ``test_acceptance.py`` carry ``@pytest.mark.criterion(group, item)``.
An item passes when all its tests pass, is skipped when all are skipped and
fails otherwise; a group rolls up its items the same way.
"""
from collections import defaultdict

import pytest

_criteria = {}
_outcomes = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(group, item): acceptance criterion checked by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _criteria[item.nodeid] = tuple(mark.args)


def pytest_runtest_logreport(report):
    key = _criteria.get(report.nodeid)
    if key is None:
        return
    if report.failed:
        _outcomes[key].append("FAIL")
    elif report.skipped:
        _outcomes[key].append("SKIP")
    elif report.when == "call":
        _outcomes[key].append("PASS")


def _combine(states):
    if "FAIL" in states:
        return "FAIL"
    if states and all(s == "SKIP" for s in states):
        return "SKIP"
    return "PASS" if "PASS" in states else "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    groups = defaultdict(list)
    for (group, item), states in _outcomes.items():
        groups[group].append((item, _combine(states)))
    for group, items in groups.items():
        for item, state in items:
            tr.write_line(f"ACCEPTANCE {group} / {item}: {state}")
        tr.write_line(f"ACCEPTANCE [PRIMARY] {group}: {_combine([s for _, s in items])}")
