from __future__ import annotations

from functools import lru_cache

import pytest

from infhecke.classification import GroupData, classify
from infhecke.groups import GroupParams


@lru_cache(maxsize=None)
def group_data(d: int, e: int, r: int) -> GroupData:
    return GroupData.of(GroupParams(d, e, r))


@lru_cache(maxsize=None)
def classification(d: int, e: int, r: int):
    return classify(group_data(d, e, r))


@pytest.fixture
def data():
    return group_data


@pytest.fixture
def classified():
    return classification


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
