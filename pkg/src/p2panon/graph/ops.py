"""Topology transforms and interrogation: amount filtering, components, centrality, adversaries."""
from __future__ import annotations

import enum

import numpy as np

from .._rng import derive_rng
from ..exceptions import EmptyTopologyError, InvalidParameterError
from .topology import Topology, relabel


class AdversaryStrategy(str, enum.Enum):
    RANDOM = "random"
    TOP_DEGREE = "top-degree"
    TOP_BETWEENNESS = "top-betweenness"


def filter_by_amount(t: Topology, amount) -> Topology:
    """Drop every directed edge whose usable balance (capacity / 2) is below ``amount``."""
    if amount < 0:
        raise InvalidParameterError("amount must be non-negative")
    if any(e.capacity is None for e in t.edges):
        raise InvalidParameterError("amount filtering needs channel capacities on every edge")
    if amount == 0:
        return t
    return t.with_edges(e for e in t.edges if e.capacity / 2 >= amount)


def weak_components(t: Topology):
    """Weakly connected components, each a sorted list, ordered by smallest member."""
    parent = list(range(t.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in t.edges:
        a, b = find(e.src), find(e.dst)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups = {}
    for v in range(t.n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda g: g[0])


def largest_connected_component(t: Topology) -> Topology:
    """Induced subgraph on the largest weak component (ties: the one holding the smallest id).

    Nodes are relabelled densely; original names survive in ``aliases``.
    """
    if t.n == 0:
        raise EmptyTopologyError("topology has no nodes")
    comps = weak_components(t)
    biggest = max(comps, key=lambda g: (len(g), -g[0]))
    if len(biggest) == t.n:
        return t
    return relabel(t, biggest)


def betweenness_centrality(t: Topology, cost_model=None, trees=None):
    """Raw count, per node, of honest ordered pairs whose best route crosses it as an intermediary.

    ``trees`` may supply precomputed ``{source: (order, parent, cost)}`` from
    :func:`~p2panon.ln.routing.shortest_path_tree`.
    """
    from ..ln.routing import CostModel, shortest_path_tree

    model = CostModel() if cost_model is None else cost_model
    honest = t.honest_mask
    counts = np.zeros(t.n)
    for s in t.honest_nodes:
        order, parent, _ = trees[s] if trees is not None else shortest_path_tree(t, s, model)
        below = np.zeros(t.n, dtype=np.int64)
        for v in reversed(order[1:]):
            own = 1 if honest[v] else 0
            counts[v] += below[v]
            below[parent[v]] += below[v] + own
    return {v: float(counts[v]) for v in range(t.n)}


def assign_adversaries(t: Topology, strategy, count, seed=0, cost_model=None, centrality=None):
    """Mark exactly ``count`` nodes adversarial; the edge set is untouched."""
    strategy = AdversaryStrategy(strategy)
    if int(count) != count or not 0 < count < t.n:
        raise InvalidParameterError(f"count must satisfy 0 < count < N={t.n}, got {count}")
    count = int(count)
    if strategy is AdversaryStrategy.RANDOM:
        rng = derive_rng(seed, "adversaries", t.n, count)
        chosen = rng.choice(t.n, size=count, replace=False)
    elif strategy is AdversaryStrategy.TOP_DEGREE:
        chosen = sorted(range(t.n), key=lambda v: (-t.degree(v), v))[:count]
    else:
        if centrality is None:
            centrality = betweenness_centrality(t.with_adversaries(()), cost_model)
        chosen = sorted(range(t.n), key=lambda v: (-centrality[v], v))[:count]
    return t.with_adversaries(int(v) for v in chosen)


def adversary_count(n, fraction=None, count=None):
    """Resolve a count-or-fraction budget; fractions round half-up and stay in ``[1, n-1]``."""
    if (fraction is None) == (count is None):
        raise InvalidParameterError("give exactly one of fraction or count")
    if count is not None:
        return int(count)
    c = int(np.floor(fraction * n + 0.5))
    return min(max(c, 1), n - 1)
