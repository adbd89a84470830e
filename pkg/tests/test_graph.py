import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_channel_graph, small_channel_graphs
from oracles import brute_betweenness, union_find_components
from p2panon.exceptions import (DuplicateRecordError, EmptyTopologyError, InvalidParameterError,
                                SnapshotParseError)
from p2panon.graph import (ChannelPolicy, Edge, Topology, TopologyKind, assign_adversaries,
                           betweenness_centrality, derive_privacy_subgraph, dump_ln_snapshot,
                           dump_topology, filter_by_amount, generate_k_regular,
                           generate_line_graph, generate_quasi_4_regular,
                           generate_scale_free_graph, generate_weighted_random_graph,
                           largest_connected_component, load_ln_snapshot, load_topology,
                           parse_ln_snapshot)
from p2panon.ln import CostModel


def unit(n, pairs, adversaries=()):
    arcs = [(u, v) for a, b in pairs for u, v in ((a, b), (b, a))]
    return Topology.from_arcs(n, arcs, adversaries=adversaries)


# -- generators ----------------------------------------------------------

def test_line_graph_three_cycle():
    t = generate_line_graph(3, 0)
    assert all(t.out_degree(v) == 1 and t.in_degree(v) == 1 for v in range(3))


@pytest.mark.parametrize("n,seed", [(5, 42), (50, 1), (1000, 9)])
def test_line_graph_single_circuit(n, seed):
    t = generate_line_graph(n, seed)
    assert t.kind is TopologyKind.LINE
    v, seen = 0, []
    for _ in range(n):
        seen.append(v)
        v = t.successors(v)[0]
    assert v == 0 and sorted(seen) == list(range(n))


def test_generators_are_pure():
    assert generate_line_graph(1000, 5) == generate_line_graph(1000, 5)
    assert generate_quasi_4_regular(200, 5) == generate_quasi_4_regular(200, 5)
    assert generate_line_graph(100, 5) != generate_line_graph(100, 6)


@pytest.mark.parametrize("bad", [0, 2, -1])
def test_line_graph_rejects_small(bad):
    with pytest.raises(InvalidParameterError):
        generate_line_graph(bad, 0)


def test_quasi_4_regular_degrees():
    t = generate_quasi_4_regular(100, 7)
    assert all(t.out_degree(v) == 2 for v in range(100))
    assert sum(t.in_degree(v) for v in range(100)) == 200
    with pytest.raises(InvalidParameterError):
        generate_quasi_4_regular(4, 0)


def test_quasi_4_regular_indegree_law():
    t = generate_quasi_4_regular(1000, 3)
    frac = np.mean([t.in_degree(v) == 2 for v in range(1000)])
    assert abs(frac - 0.27) <= 0.05


def test_k_regular():
    t = generate_k_regular(4, 1, 0)
    assert all(t.out_degree(v) == 1 for v in range(4))
    assert generate_k_regular(1000, 8, 1).edge_count == 8000
    t = generate_k_regular(50, 8, 2)
    for v in range(50):
        succ = t.successors(v)
        assert len(set(succ)) == 8 and v not in succ
    with pytest.raises(InvalidParameterError):
        generate_k_regular(8, 8, 0)


def test_privacy_subgraph_is_within_base():
    bg = generate_k_regular(100, 8, 1)
    psg = derive_privacy_subgraph(bg, 2, 3)
    for v in range(100):
        assert psg.out_degree(v) == 2
        assert set(psg.successors(v)) <= set(bg.successors(v))


def test_weighted_random_graph():
    t = generate_weighted_random_graph(1000, 5, 1000, 9)
    assert t.edge_count == 2 * (1000 * 5 // 2)
    fees = [e.policy.base_fee for e in t.edges]
    assert abs(np.mean(fees) - 1000) / 1000 < 0.05
    assert generate_weighted_random_graph(1000, 5, 1000, 9) == t


def test_weighted_random_small_connectivity_reported():
    t = generate_weighted_random_graph(10, 2, 1, 0)
    lcc = largest_connected_component(t)
    assert 1 <= lcc.n <= 10


def test_scale_free_has_hubs():
    t = generate_scale_free_graph(1000, 5, 1000, 2)
    degs = sorted((t.degree(v) for v in range(1000)), reverse=True)
    assert abs(np.mean(degs) / 2 - 5) < 0.5
    assert degs[0] > 10 * np.median(degs)


# -- snapshot --------------------------------------------------------------

SNAP = {
    "nodes": [{"id": "alice"}, {"id": "bob"}],
    "channels": [{"channel_id": "c1", "node1": "alice", "node2": "bob", "capacity": 1000,
                  "node1_policy": {"base_fee": 1000, "proportional_fee_rate": 1e-6, "timelock": 40},
                  "node2_policy": {"base_fee": 2, "proportional_fee_rate": 0.0, "timelock": 144}}],
}


def test_minimal_snapshot():
    t = load_ln_snapshot(json.dumps(SNAP))
    assert t.n == 2 and t.edge_count == 2
    assert t.alias(0) == "alice"
    assert t.edge(0, 1).policy.base_fee == 1000 and t.edge(1, 0).policy.timelock == 144


def test_snapshot_round_trip_bytes():
    text = dump_ln_snapshot(load_ln_snapshot(SNAP))
    assert dump_ln_snapshot(load_ln_snapshot(text)) == text
    assert json.loads(text) == SNAP


def test_missing_policy_drops_direction():
    doc = json.loads(json.dumps(SNAP))
    del doc["channels"][0]["node2_policy"]
    t = load_ln_snapshot(doc)
    assert t.has_edge(0, 1) and not t.has_edge(1, 0)


def test_snapshot_errors_name_record():
    doc = json.loads(json.dumps(SNAP))
    del doc["channels"][0]["capacity"]
    with pytest.raises(SnapshotParseError, match=r"channels\[0\] \(c1\): missing 'capacity'"):
        load_ln_snapshot(doc)
    doc = json.loads(json.dumps(SNAP))
    doc["channels"].append(dict(doc["channels"][0]))
    with pytest.raises(DuplicateRecordError, match="channels\\[1\\]"):
        load_ln_snapshot(doc)
    with pytest.raises(SnapshotParseError):
        load_ln_snapshot("{not json")


def test_parallel_channels_collapse_to_cheapest():
    doc = json.loads(json.dumps(SNAP))
    ch = json.loads(json.dumps(doc["channels"][0]))
    ch["channel_id"] = "c2"
    ch["node1_policy"]["base_fee"] = 10
    doc["channels"].append(ch)
    t, report = parse_ln_snapshot(doc)
    assert t.edge(0, 1).channel_id == "c2"
    assert t.edge(1, 0).channel_id == "c1"
    assert {r[0] for r in report.collapsed} == {"c1", "c2"}


def test_snapshot_edge_count_convention():
    # each channel yields two directed arcs: 6196 channels -> 12392 arcs
    rng = np.random.default_rng(0)
    n, m = 1202, 6196
    pairs = set()
    while len(pairs) < m:
        u, v = sorted(int(x) for x in rng.choice(n, 2, replace=False))
        pairs.add((u, v))
    pol = {"base_fee": 1, "proportional_fee_rate": 0.0, "timelock": 40}
    doc = {"nodes": [{"id": f"n{i}"} for i in range(n)],
           "channels": [{"channel_id": f"c{k}", "node1": f"n{u}", "node2": f"n{v}",
                         "capacity": 100, "node1_policy": pol, "node2_policy": pol}
                        for k, (u, v) in enumerate(sorted(pairs))]}
    t = load_ln_snapshot(doc)
    assert t.n == 1202 and t.edge_count == 12392


def test_topology_export_round_trip():
    t = assign_adversaries(generate_quasi_4_regular(30, 1), "random", 3, 1)
    text = dump_topology(t)
    assert load_topology(text) == t
    assert dump_topology(load_topology(text)) == text
    w = assign_adversaries(generate_weighted_random_graph(20, 4, 10, 1), "top-degree", 2)
    assert load_topology(dump_topology(w)) == w


# -- transforms ------------------------------------------------------------

def _cap_graph(cap):
    pol = ChannelPolicy(0.0, 1.0, 40, cap)
    return Topology(2, (Edge(0, 1, policy=pol), Edge(1, 0, policy=pol)))


def test_filter_by_amount_threshold():
    assert filter_by_amount(_cap_graph(10), 6).edge_count == 0
    assert filter_by_amount(_cap_graph(10), 5).edge_count == 2
    t = _cap_graph(10)
    assert filter_by_amount(t, 0) == t
    with pytest.raises(InvalidParameterError):
        filter_by_amount(t, -1)


@given(small_channel_graphs(), st.integers(0, 12), st.integers(0, 12))
def test_filter_by_amount_monotone(t, a, b):
    lo, hi = sorted((a, b))
    low = {(e.src, e.dst) for e in filter_by_amount(t, lo).edges}
    high = {(e.src, e.dst) for e in filter_by_amount(t, hi).edges}
    assert high <= low
    assert filter_by_amount(t, hi).n == t.n


def test_lcc():
    t = unit(5, [(0, 1), (1, 2), (3, 4)])
    lcc = largest_connected_component(t)
    assert lcc.n == 3 and [lcc.alias(v) for v in range(3)] == ["0", "1", "2"]
    tied = unit(4, [(2, 3), (0, 1)])
    assert [largest_connected_component(tied).alias(v) for v in range(2)] == ["0", "1"]
    whole = unit(3, [(0, 1), (1, 2)])
    assert largest_connected_component(whole) is whole
    with pytest.raises(EmptyTopologyError):
        largest_connected_component(Topology(0))


def test_lcc_after_filter_matches_union_find():
    t = generate_weighted_random_graph(300, 2, 10, 4)
    f = filter_by_amount(t, 3_000_000)
    comps = union_find_components(f.n, [(e.src, e.dst) for e in f.edges])
    assert largest_connected_component(f).n == max(len(c) for c in comps)


# -- centrality and adversaries --------------------------------------------

def test_betweenness_path():
    t = unit(3, [(0, 1), (1, 2)])
    assert betweenness_centrality(t) == {0: 0.0, 1: 2.0, 2: 0.0}


@pytest.mark.parametrize("n", [4, 5, 7])
def test_betweenness_star(n):
    t = unit(n, [(0, v) for v in range(1, n)])
    bc = betweenness_centrality(t)
    assert bc[0] == (n - 1) * (n - 2)
    assert all(bc[v] == 0 for v in range(1, n))


def test_betweenness_tree_leaves_zero():
    t = unit(6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)])
    bc = betweenness_centrality(t)
    assert all(bc[v] == 0 for v in (3, 4, 5))


@given(small_channel_graphs(max_n=8))
def test_betweenness_matches_brute_force(t):
    model = CostModel()
    assert betweenness_centrality(t, model) == brute_betweenness(t, model)


def test_assign_adversaries():
    star = unit(5, [(0, v) for v in range(1, 5)])
    assert assign_adversaries(star, "top-degree", 1).adversaries == {0}
    assert assign_adversaries(unit(3, [(0, 1), (1, 2)]), "top-betweenness", 1).adversaries == {1}
    t = generate_quasi_4_regular(100, 1)
    a = assign_adversaries(t, "random", 10, 5)
    assert a.adversaries == assign_adversaries(t, "random", 10, 5).adversaries
    assert len(a.adversaries) == 10 and a.edges == t.edges
    for bad in (0, 100, 2.5):
        with pytest.raises(InvalidParameterError):
            assign_adversaries(t, "random", bad, 0)


@given(small_channel_graphs(), st.integers(0, 1000), st.sampled_from(["random", "top-degree"]))
def test_assign_adversaries_preserves_edges(t, seed, strategy):
    c = max(1, t.n // 3)
    a = assign_adversaries(t, strategy, c, seed)
    assert a.edges == t.edges and len(a.adversaries) == c
    assert len(a.honest_nodes) == t.n - c


def test_topology_invariants():
    with pytest.raises(InvalidParameterError):
        Topology.from_arcs(2, [(0, 0)])
    with pytest.raises(InvalidParameterError):
        Topology.from_arcs(2, [(0, 1), (0, 1)])
    with pytest.raises(InvalidParameterError):
        ChannelPolicy(base_fee=-1)
    rng = np.random.default_rng(0)
    t = random_channel_graph(rng, 6, 0.5, 1)
    assert t.honest_mask.sum() == 5
