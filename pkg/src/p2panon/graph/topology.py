"""Immutable directed topology with node roles and optional channel policies."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from ..exceptions import InvalidParameterError


class NodeRole(enum.Enum):
    HONEST = "honest"
    ADVERSARIAL = "adversarial"


class TopologyKind(str, enum.Enum):
    LINE = "line"
    QUASI_4_REGULAR = "quasi-4-regular"
    K_REGULAR = "k-regular"
    WEIGHTED_RANDOM = "weighted-random"
    SCALE_FREE = "scale-free"
    LN_SNAPSHOT = "ln-snapshot"
    GENERIC = "generic"


@dataclass(frozen=True)
class ChannelPolicy:
    """Routing policy of one channel direction (the direction leaving the policy's owner)."""

    proportional_fee_rate: float = 0.0
    base_fee: float = 0.0
    timelock: float = 0.0
    capacity: Optional[float] = None

    def __post_init__(self):
        for name in ("proportional_fee_rate", "base_fee", "timelock"):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"{name} must be non-negative")
        if self.capacity is not None and self.capacity <= 0:
            raise InvalidParameterError("capacity must be positive for an existing channel")


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    weight: float = 1.0
    policy: Optional[ChannelPolicy] = None
    channel_id: Optional[str] = None

    @property
    def capacity(self):
        return None if self.policy is None else self.policy.capacity


@dataclass(frozen=True)
class Topology:
    """A directed graph over dense node ids ``0..n-1``.

    Edges are kept sorted by ``(src, dst)``; at most one edge per ordered pair.
    ``aliases`` maps ids back to external names (snapshot aliases, or original
    ids after relabelling); it is ``None`` when ids are the only names.
    """

    n: int
    edges: tuple = ()
    adversaries: frozenset = frozenset()
    kind: TopologyKind = TopologyKind.GENERIC
    aliases: Optional[tuple] = None
    params: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise InvalidParameterError("node count must be non-negative")
        edges = tuple(sorted(self.edges, key=lambda e: (e.src, e.dst)))
        seen = set()
        for e in edges:
            if not (0 <= e.src < self.n and 0 <= e.dst < self.n):
                raise InvalidParameterError(f"edge {e.src}->{e.dst} references an unknown node")
            if e.src == e.dst:
                raise InvalidParameterError(f"self-loop at node {e.src}")
            if (e.src, e.dst) in seen:
                raise InvalidParameterError(f"duplicate edge {e.src}->{e.dst}")
            seen.add((e.src, e.dst))
        object.__setattr__(self, "edges", edges)
        adversaries = frozenset(int(a) for a in self.adversaries)
        for a in adversaries:
            if not 0 <= a < self.n:
                raise InvalidParameterError(f"adversary {a} is not a node")
        object.__setattr__(self, "adversaries", adversaries)
        if self.aliases is not None:
            aliases = tuple(str(a) for a in self.aliases)
            if len(aliases) != self.n:
                raise InvalidParameterError("aliases must name every node")
            natural = all(a == str(i) for i, a in enumerate(aliases))
            object.__setattr__(self, "aliases", None if natural else aliases)

    @classmethod
    def from_arcs(cls, n, arcs, kind=TopologyKind.GENERIC, adversaries=(), weights=None):
        """Build from ``(src, dst)`` pairs, optionally with a parallel ``weights`` list."""
        arcs = list(arcs)
        if weights is None:
            edges = [Edge(int(u), int(v)) for u, v in arcs]
        else:
            edges = [Edge(int(u), int(v), float(w)) for (u, v), w in zip(arcs, weights)]
        return cls(n, tuple(edges), frozenset(adversaries), TopologyKind(kind))

    # -- structure -------------------------------------------------------

    @cached_property
    def _out(self):
        out = [[] for _ in range(self.n)]
        for e in self.edges:
            out[e.src].append(e)
        return tuple(tuple(lst) for lst in out)

    @cached_property
    def _in(self):
        inn = [[] for _ in range(self.n)]
        for e in self.edges:
            inn[e.dst].append(e)
        return tuple(tuple(sorted(lst, key=lambda e: e.src)) for lst in inn)

    @cached_property
    def _edge_index(self):
        return {(e.src, e.dst): e for e in self.edges}

    def out_edges(self, u):
        return self._out[u]

    def in_edges(self, v):
        return self._in[v]

    @cached_property
    def _succ(self):
        return tuple(tuple(e.dst for e in lst) for lst in self._out)

    @cached_property
    def _pred(self):
        return tuple(tuple(e.src for e in lst) for lst in self._in)

    def successors(self, u):
        return self._succ[u]

    def predecessors(self, v):
        return self._pred[v]

    def edge(self, u, v):
        return self._edge_index.get((u, v))

    def has_edge(self, u, v):
        return (u, v) in self._edge_index

    def out_degree(self, u):
        return len(self._out[u])

    def in_degree(self, v):
        return len(self._in[v])

    def degree(self, v):
        """Total degree (in + out); for channel graphs this is twice the channel count."""
        return len(self._out[v]) + len(self._in[v])

    @property
    def edge_count(self):
        return len(self.edges)

    @cached_property
    def in_csr(self):
        """``(indptr, indices)`` of in-neighbours, as int64 arrays."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for v in range(self.n):
            indptr[v + 1] = indptr[v] + len(self._in[v])
        indices = np.fromiter((e.src for v in range(self.n) for e in self._in[v]),
                              dtype=np.int64, count=int(indptr[-1]))
        return indptr, indices

    @cached_property
    def out_degrees(self):
        return np.array([len(o) for o in self._out], dtype=np.int64)

    # -- roles -----------------------------------------------------------

    def role(self, v):
        return NodeRole.ADVERSARIAL if v in self.adversaries else NodeRole.HONEST

    def is_adversarial(self, v):
        return v in self.adversaries

    def is_honest(self, v):
        return v not in self.adversaries

    @cached_property
    def honest_nodes(self):
        return tuple(v for v in range(self.n) if v not in self.adversaries)

    @cached_property
    def honest_mask(self):
        mask = np.ones(self.n, dtype=np.bool_)
        for a in self.adversaries:
            mask[a] = False
        return mask

    @property
    def nodes(self):
        """``(id, role)`` pairs in id order."""
        return [(v, self.role(v)) for v in range(self.n)]

    def with_adversaries(self, adversaries):
        return replace(self, adversaries=frozenset(adversaries))

    def with_edges(self, edges, kind=None):
        return replace(self, edges=tuple(edges), kind=self.kind if kind is None else kind)

    def alias(self, v):
        return str(v) if self.aliases is None else self.aliases[v]

    def __repr__(self):
        return (f"Topology(kind={self.kind.value}, n={self.n}, edges={len(self.edges)}, "
                f"adversaries={len(self.adversaries)})")


def relabel(t: Topology, keep: Iterable[int]) -> Topology:
    """Induced subgraph on ``keep``, relabelled densely in ascending id order."""
    keep = sorted(set(keep))
    new_id = {old: i for i, old in enumerate(keep)}
    edges = tuple(
        replace(e, src=new_id[e.src], dst=new_id[e.dst])
        for e in t.edges if e.src in new_id and e.dst in new_id
    )
    aliases = tuple(t.alias(v) for v in keep)
    adversaries = frozenset(new_id[a] for a in t.adversaries if a in new_id)
    return Topology(len(keep), edges, adversaries, t.kind, aliases, t.params)
