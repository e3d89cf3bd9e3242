import numpy as np
import pytest

from zalmsim import Biphoton, preset, run
from zalmsim.pipeline import RunConfig
from dataclasses import replace

ACCEPTANCE_LINES = []


def record(label: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def case1():
    return preset("case1")


@pytest.fixture(scope="session")
def case2():
    return preset("case2")


@pytest.fixture(scope="session")
def psi1(case1):
    return Biphoton.gaussian(case1.source)


@pytest.fixture(scope="session")
def psi2(case2):
    return Biphoton.gaussian(case2.source)


@pytest.fixture(scope="session")
def tables():
    """Full 81-channel runs, computed once per (case, points) and cached."""
    cache = {}

    def get(case: str, points: int = 257, **memory):
        key = (case, points, tuple(sorted(memory.items())))
        if key not in cache:
            cfg = preset(case)
            cfg = replace(cfg, grid=replace(cfg.grid, points_per_channel=points))
            if memory:
                cfg = replace(cfg, memory=replace(cfg.memory, **memory))
            cache[key] = run(cfg)
        return cache[key]

    return get


def column(table, name):
    return np.array([r[name] for r in table.rows], dtype=float)
