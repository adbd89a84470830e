import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from p2panon.graph import ChannelPolicy, Edge, Topology  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_digraph(rng, n, out_k, n_adv):
    arcs = []
    for u in range(n):
        others = [v for v in range(n) if v != u]
        for v in rng.choice(others, size=min(out_k, len(others)), replace=False):
            arcs.append((u, int(v)))
    adv = rng.choice(n, size=n_adv, replace=False)
    return Topology.from_arcs(n, arcs, adversaries=[int(a) for a in adv])


def random_channel_graph(rng, n, p_edge, n_adv, fee_choices=(1, 2, 3, 5, 8)):
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p_edge:
                cap = int(rng.integers(2, 20))
                for a, b in ((u, v), (v, u)):
                    pol = ChannelPolicy(0.0, float(rng.choice(fee_choices)), 40, cap)
                    edges.append(Edge(a, b, policy=pol))
    adv = rng.choice(n, size=n_adv, replace=False) if n_adv else []
    return Topology(n, tuple(edges), frozenset(int(a) for a in adv))


@st.composite
def small_digraphs(draw, min_n=3, max_n=9, out_k=2, max_adv=3):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    n_adv = draw(st.integers(1, min(max_adv, n - 1)))
    return random_digraph(np.random.default_rng(seed), n, out_k, n_adv)


@st.composite
def small_channel_graphs(draw, min_n=3, max_n=9, max_adv=3):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    p = draw(st.sampled_from([0.3, 0.5, 0.8]))
    n_adv = draw(st.integers(0, min(max_adv, n - 2)))
    return random_channel_graph(np.random.default_rng(seed), n, p, n_adv)


@pytest.fixture
def sxa():
    """S(0) -> {X(1), A(2)}, X -> {A, S}; A adversarial."""
    return Topology.from_arcs(3, [(0, 1), (0, 2), (1, 2), (1, 0)], adversaries=[2])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
