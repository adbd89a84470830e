"""Source routing under the LND edge-cost function.

Ties between equal-cost routes are broken towards the lexicographically
smallest node-id sequence.  Dijkstra runs on keys ``(cost, path)``, which are
monotone under path extension, so the settled path of every node is the
minimum of that total order and the result is prefix-closed (a tree).
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..exceptions import InvalidParameterError

DEFAULT_RF = 1.5e-9
DEFAULT_AMOUNT = 1


def edge_cost(amount, policy, rf=DEFAULT_RF, bias=0.0):
    """``amount*proportional_fee_rate + base_fee + amount*timelock*rf + bias``."""
    if amount < 0:
        raise InvalidParameterError("amount must be non-negative")
    return (amount * policy.proportional_fee_rate + policy.base_fee
            + amount * policy.timelock * rf + bias)


@dataclass(frozen=True)
class CostModel:
    amount: float = DEFAULT_AMOUNT
    rf: float = DEFAULT_RF
    bias: float = 0.0

    def __post_init__(self):
        if self.amount < 0:
            raise InvalidParameterError("amount must be non-negative")

    def __call__(self, edge):
        if edge.policy is None:
            return edge.weight
        return edge_cost(self.amount, edge.policy, self.rf, self.bias)


@dataclass(frozen=True)
class Route:
    nodes: tuple
    total_cost: float

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise InvalidParameterError("a route needs at least two nodes")
        if len(set(self.nodes)) != len(self.nodes):
            raise InvalidParameterError(f"route {self.nodes} repeats a node")

    @property
    def source(self):
        return self.nodes[0]

    @property
    def destination(self):
        return self.nodes[-1]

    def key(self):
        return (self.total_cost, self.nodes)


def path_cost(t, nodes, cost_model):
    """Left-to-right sum of edge costs; the same accumulation order Dijkstra uses."""
    total = 0.0
    for u, v in zip(nodes, nodes[1:]):
        e = t.edge(u, v)
        if e is None:
            raise InvalidParameterError(f"{u}->{v} is not an edge")
        total = total + cost_model(e)
    return total


def _lex_dijkstra(t, src, cost_model, target=None, banned_nodes=(), banned_edges=(),
                  root=None):
    """Settled ``{node: (cost, path)}`` from ``src``; stops early once ``target`` settles.

    ``root`` is an optional ``(cost, path)`` prefix ending at ``src``; costs then
    accumulate from it so that they equal the left fold over the whole path.
    """
    banned_nodes = set(banned_nodes)
    banned_edges = set(banned_edges)
    start = (0.0, (src,)) if root is None else root
    best = {src: start}
    settled = {}
    heap = [start]
    while heap:
        cost, path = heapq.heappop(heap)
        u = path[-1]
        if u in settled:
            continue
        settled[u] = (cost, path)
        if u == target:
            break
        for e in t.out_edges(u):
            v = e.dst
            if v in settled or v in banned_nodes or (u, v) in banned_edges:
                continue
            cand = (cost + cost_model(e), path + (v,))
            cur = best.get(v)
            if cur is None or cand < cur:
                best[v] = cand
                heapq.heappush(heap, cand)
    return settled


def shortest_path_tree(t, src, cost_model=CostModel()):
    """Best-route tree from ``src``.

    Returns ``(order, parent, cost)``: ``order`` lists reachable nodes in
    settlement order (parents precede children), ``parent`` is an int array
    with ``-1`` for the root and unreachable nodes, ``cost`` holds route costs
    (``inf`` when unreachable).
    """
    settled = _lex_dijkstra(t, src, cost_model)
    parent = np.full(t.n, -1, dtype=np.int64)
    cost = np.full(t.n, np.inf)
    order = list(settled)
    for v, (c, path) in settled.items():
        cost[v] = c
        if len(path) > 1:
            parent[v] = path[-2]
    return order, parent, cost


def best_path(t, src, dst, amount=DEFAULT_AMOUNT, rf=DEFAULT_RF, bias=0.0) -> Optional[Route]:
    """Cheapest route from ``src`` to ``dst``; ``None`` when unreachable."""
    if src == dst:
        raise InvalidParameterError("source and destination must differ")
    settled = _lex_dijkstra(t, src, CostModel(amount, rf, bias), target=dst)
    if dst not in settled:
        return None
    cost, path = settled[dst]
    return Route(path, cost)


def best_k_paths(t, src, dst, amount=DEFAULT_AMOUNT, k=1, rf=DEFAULT_RF, bias=0.0):
    """Yen's algorithm: up to ``k`` loopless routes, best first, same tie-breaking as :func:`best_path`."""
    if k < 1:
        raise InvalidParameterError("k must be at least 1")
    first = best_path(t, src, dst, amount, rf, bias)
    if first is None:
        return []
    model = CostModel(amount, rf, bias)
    accepted = [first]
    known = {first.nodes}
    candidates = []
    while len(accepted) < k:
        prev = accepted[-1].nodes
        for i in range(len(prev) - 1):
            root = prev[: i + 1]
            spur = prev[i]
            banned_edges = {p.nodes[i: i + 2] for p in accepted
                            if len(p.nodes) > i + 1 and p.nodes[: i + 1] == root}
            settled = _lex_dijkstra(t, spur, model, target=dst, banned_nodes=root[:-1],
                                    banned_edges=banned_edges,
                                    root=(path_cost(t, root, model), root))
            if dst not in settled:
                continue
            cost, nodes = settled[dst]
            if nodes in known:
                continue
            known.add(nodes)
            heapq.heappush(candidates, (cost, nodes))
        if not candidates:
            break
        cost, nodes = heapq.heappop(candidates)
        accepted.append(Route(nodes, cost))
    return accepted
