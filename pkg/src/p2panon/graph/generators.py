"""Seeded topology generators.

Every generator is a pure function of its arguments: the seed feeds a PCG64
stream dedicated to that generator, so identical inputs give identical edges.
"""
from __future__ import annotations

import numpy as np

from .._rng import derive_rng
from ..exceptions import InvalidParameterError
from .topology import ChannelPolicy, Edge, Topology, TopologyKind

DEFAULT_TIMELOCK = 40
DEFAULT_CAPACITY_RANGE = (100_000, 10_000_000)


def _check_int(name, value, minimum):
    if int(value) != value or value < minimum:
        raise InvalidParameterError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def generate_line_graph(n, seed):
    """A single directed Hamiltonian circuit over a random permutation of ``n`` nodes."""
    n = _check_int("n", n, 3)
    order = derive_rng(seed, "line-graph", n).permutation(n)
    arcs = [(int(order[i]), int(order[(i + 1) % n])) for i in range(n)]
    return Topology.from_arcs(n, arcs, TopologyKind.LINE)


def _random_out_neighbours(rng, n, k):
    """For each node, ``k`` distinct successors drawn uniformly from the other nodes."""
    arcs = []
    for u in range(n):
        picks = rng.choice(n - 1, size=k, replace=False)
        for p in sorted(int(x) for x in picks):
            arcs.append((u, p if p < u else p + 1))
    return arcs


def generate_quasi_4_regular(n, seed):
    """Each node picks two distinct successors uniformly at random; indegree is unconstrained."""
    n = _check_int("n", n, 5)
    rng = derive_rng(seed, "quasi-4-regular", n)
    return Topology.from_arcs(n, _random_out_neighbours(rng, n, 2), TopologyKind.QUASI_4_REGULAR)


def generate_k_regular(n, out_k, seed):
    """Each node picks ``out_k`` distinct successors uniformly at random."""
    out_k = _check_int("out_k", out_k, 1)
    n = _check_int("n", n, 2)
    if n <= out_k:
        raise InvalidParameterError(f"n ({n}) must exceed out_k ({out_k})")
    rng = derive_rng(seed, "k-regular", n, out_k)
    t = Topology.from_arcs(n, _random_out_neighbours(rng, n, out_k), TopologyKind.K_REGULAR)
    return Topology(t.n, t.edges, kind=TopologyKind.K_REGULAR, params=(("out_k", out_k),))


def derive_privacy_subgraph(base, out_k=2, seed=0):
    """Keep ``out_k`` randomly chosen outgoing edges of every node of ``base``.

    This is the privacy subgraph as a Dandelion++ node would build it from its
    outbound connections; ``base`` must give every node at least ``out_k`` successors.
    """
    rng = derive_rng(seed, "privacy-subgraph", base.n, out_k)
    arcs = []
    for u in range(base.n):
        succ = base.successors(u)
        if len(succ) < out_k:
            raise InvalidParameterError(f"node {u} has only {len(succ)} successors")
        picks = rng.choice(len(succ), size=out_k, replace=False)
        arcs.extend((u, succ[int(i)]) for i in sorted(picks))
    kind = TopologyKind.QUASI_4_REGULAR if out_k == 2 else TopologyKind.K_REGULAR
    return Topology.from_arcs(base.n, arcs, kind, adversaries=base.adversaries)


def _fee_policies(rng, count, mean_fee):
    fees = np.maximum(1, np.rint(rng.exponential(mean_fee, size=count)))
    capacities = rng.integers(*DEFAULT_CAPACITY_RANGE, size=count)
    return fees, capacities


def _channel_graph(n, pairs, rng, mean_fee, kind, params):
    fees, caps = _fee_policies(rng, 2 * len(pairs), mean_fee)
    edges = []
    for idx, (u, v) in enumerate(pairs):
        cap = int(caps[2 * idx])
        cid = f"c{idx}"
        for d, (a, b) in enumerate(((u, v), (v, u))):
            policy = ChannelPolicy(0.0, float(fees[2 * idx + d]), DEFAULT_TIMELOCK, cap)
            edges.append(Edge(a, b, policy=policy, channel_id=cid))
    return Topology(n, tuple(edges), kind=kind, params=params)


def generate_weighted_random_graph(n, avg_degree, mean_fee, seed):
    """Uniform random channel graph with ``floor(n * avg_degree / 2)`` channels.

    Each channel yields two directed edges carrying independent base fees drawn
    from an exponential law with mean ``mean_fee`` (rounded, at least 1).
    No connectivity guarantee is made.
    """
    n = _check_int("n", n, 3)
    avg_degree = _check_int("avg_degree", avg_degree, 2)
    if n <= avg_degree:
        raise InvalidParameterError(f"n ({n}) must exceed avg_degree ({avg_degree})")
    if mean_fee <= 0:
        raise InvalidParameterError("mean_fee must be positive")
    rng = derive_rng(seed, "weighted-random", n, avg_degree)
    m = n * avg_degree // 2
    total = n * (n - 1) // 2
    chosen = np.sort(rng.choice(total, size=m, replace=False))
    pairs = [_unrank_pair(int(r), n) for r in chosen]
    return _channel_graph(n, pairs, rng, mean_fee, TopologyKind.WEIGHTED_RANDOM,
                          (("avg_degree", avg_degree), ("mean_fee", mean_fee)))


def _unrank_pair(r, n):
    # rank r over pairs (u, v), u < v, in row-major order
    u = 0
    row = n - 1
    while r >= row:
        r -= row
        u += 1
        row -= 1
    return u, u + 1 + r


def generate_scale_free_graph(n, avg_degree, mean_fee, seed):
    """Preferential-attachment channel graph with mean degree close to ``avg_degree``.

    Every new node opens ``floor(avg_degree/2)`` or ``ceil(avg_degree/2)``
    channels (chosen at random so the mean matches) to existing nodes picked
    proportionally to their degree.  Fees are drawn as in
    :func:`generate_weighted_random_graph`.
    """
    n = _check_int("n", n, 3)
    avg_degree = _check_int("avg_degree", avg_degree, 2)
    if n <= avg_degree:
        raise InvalidParameterError(f"n ({n}) must exceed avg_degree ({avg_degree})")
    rng = derive_rng(seed, "scale-free", n, avg_degree)
    half = avg_degree / 2
    lo, frac = int(np.floor(half)), half - np.floor(half)
    m0 = max(lo + 1, 2)
    pairs = [(u, v) for u in range(m0) for v in range(u + 1, m0)]
    targets = [x for p in pairs for x in p]
    for new in range(m0, n):
        m = lo + (1 if rng.random() < frac else 0)
        m = min(max(m, 1), new)
        chosen = set()
        while len(chosen) < m:
            chosen.add(targets[int(rng.integers(len(targets)))])
        for v in sorted(chosen):
            pairs.append((v, new))
            targets.extend((v, new))
    return _channel_graph(n, pairs, rng, mean_fee, TopologyKind.SCALE_FREE,
                          (("avg_degree", avg_degree), ("mean_fee", mean_fee)))
