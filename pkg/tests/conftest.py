import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from dfs_shape.graphs import SparseGraph

# first calls pay numba compilation; wall-clock deadlines would be noise
settings.register_profile("repo", deadline=None)
settings.load_profile("repo")


@st.composite
def small_graphs(draw, max_n=12):
    """Arbitrary simple graphs on 1..n with n <= max_n."""
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return SparseGraph.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


@pytest.fixture
def path3():
    return SparseGraph.from_edges(3, [(1, 2), (2, 3)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            name = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in name or rep.when != "call":
                continue
            number = int(name.split("test_criterion_")[1][:2])
            detail = dict(rep.user_properties).get("detail", "")
            rows.append((number, "PASS" if outcome == "passed" else "FAIL", detail))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, verdict, detail in sorted(rows):
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {detail}")
