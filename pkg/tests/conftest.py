from __future__ import annotations

import functools

import pytest

from negaspec.stabilizer import flat_cut_layout


@functools.lru_cache(maxsize=None)
def layout(d: int, L: int):
    return flat_cut_layout(d, L)


@pytest.fixture(scope="session")
def layout_of():
    return layout


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
