import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qiils.graph import Graph, gen_regular, random_graph

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def edge():
    return Graph(2, [(0, 1, 1.0)], name="edge")


@pytest.fixture
def triangle():
    return Graph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], name="triangle")


@pytest.fixture
def petersen():
    outer = [(i, (i + 1) % 5, 1.0) for i in range(5)]
    spokes = [(i, i + 5, 1.0) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5, 1.0) for i in range(5)]
    return Graph(10, outer + spokes + inner, name="petersen")


def small_graphs(count, seed=0, nmax=10, signed=True):
    """Reproducible small random graphs with mixed-sign weights."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(3, nmax + 1))
        m = int(rng.integers(1, n * (n - 1) // 2 + 1))
        g = random_graph(n, m, seed=int(rng.integers(2**31)), signed=signed)
        out.append(g)
    return out


def u3r(n, seed):
    return gen_regular(n, 3, seed=seed)


# ------------------------------------------------------- acceptance reporting

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
