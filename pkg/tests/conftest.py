import numpy as np
import pytest
from hypothesis import strategies as st

from curveball.graph_core import AdjacencySetRep, Flavor


def random_rep(flavor, n, p, seed, m=None):
    """Dense-ish random graph of the given flavor (0-based sets)."""
    g = np.random.default_rng(seed)
    if flavor is Flavor.BIPARTITE:
        m = m or n
        hit = g.random((n, m)) < p
        return AdjacencySetRep(flavor, [np.flatnonzero(r) for r in hit], m=m)
    hit = g.random((n, n)) < p
    if flavor is Flavor.UNDIRECTED:
        hit = np.triu(hit, 1)
        hit |= hit.T
    elif flavor is Flavor.DIRECTED_SIMPLE:
        np.fill_diagonal(hit, False)
    return AdjacencySetRep(flavor, [np.flatnonzero(r) for r in hit])


@st.composite
def reps(draw, flavors=tuple(Flavor), max_n=8):
    flavor = draw(st.sampled_from(flavors))
    n = draw(st.integers(2, max_n))
    m = draw(st.integers(1, max_n)) if flavor is Flavor.BIPARTITE else None
    p = draw(st.floats(0.0, 1.0))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_rep(flavor, n, p, seed, m)


@pytest.fixture
def triangle():
    return AdjacencySetRep(Flavor.DIRECTED_SIMPLE, [{1}, {2}, {0}])


ACCEPTANCE = []  # (number, ok, detail) filled by test_acceptance


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
