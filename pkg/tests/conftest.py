from __future__ import annotations

import pytest

from lbgraphs.instances import generate

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture(scope="session")
def base212():
    return generate("base", {"d": 2, "r": 1, "D": 2})


@pytest.fixture(scope="session")
def product1():
    return generate("product", {"d1": 2, "r1": 1, "d2": 2, "r2": 1, "D": 1})


@pytest.fixture(scope="session")
def spanner_micro():
    return generate("spanner", {"d1": 2, "r1": 1, "d2": 2, "r2": 1, "D": 1, "t": 1})


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {k}. {title}: {detail}")
