"""Adversarial observations of source-routed payments and the resulting originator posterior.

The route universe is a :class:`PathSet`: the best (or best-k) routes for every
ordered pair of honest nodes.  An adversary sitting on a route learns the
node it received the payment from and the node it passed it to; colluding
adversaries on the same route pool that into a single observation made of
the first adversary's predecessor and the last adversary's successor.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from ..exceptions import ImpossibleObservationError, InvalidParameterError
from ..posterior import Posterior, from_likelihoods
from .routing import DEFAULT_AMOUNT, DEFAULT_RF, CostModel, Route, best_k_paths, shortest_path_tree

MATCH_MODES = ("full", "predecessor", "successor", "any")


@dataclass(frozen=True, order=True)
class LnObservation:
    first_adversary: int
    predecessor: int
    last_adversary: int
    successor: int

    def key(self):
        return (f"p{self.predecessor}:a{self.first_adversary}-a{self.last_adversary}"
                f":s{self.successor}")


def _observe(nodes, is_adv):
    idx = [m for m in range(1, len(nodes) - 1) if is_adv(nodes[m])]
    if not idx:
        return None
    f, l = idx[0], idx[-1]
    return LnObservation(nodes[f], nodes[f - 1], nodes[l], nodes[l + 1])


def observations_from_route(route, t) -> Optional[LnObservation]:
    """Short-circuited observation of ``route``; ``None`` if no intermediary is adversarial."""
    nodes = route.nodes if isinstance(route, Route) else tuple(route)
    return _observe(nodes, t.is_adversarial)


def route_matches(nodes, obs, t, match="full"):
    """Whether a route is consistent with ``obs`` under the given view.

    ``full``: same (predecessor, first, last, successor).  ``predecessor``:
    ``obs.first_adversary`` is an intermediary entered from ``obs.predecessor``.
    ``successor``: ``obs.last_adversary`` is an intermediary left towards
    ``obs.successor``.  ``any``: ``obs.first_adversary`` is an intermediary.
    """
    if match == "full":
        return _observe(nodes, t.is_adversarial) == obs
    interior = nodes[1:-1]
    if match == "predecessor":
        j, p = obs.first_adversary, obs.predecessor
        return j in interior and nodes[nodes.index(j) - 1] == p
    if match == "successor":
        j, s = obs.last_adversary, obs.successor
        return j in interior and nodes[nodes.index(j) + 1] == s
    if match == "any":
        return obs.first_adversary in interior
    raise InvalidParameterError(f"match must be one of {MATCH_MODES}")


class PathSet:
    """Best-k routes for every reachable ordered pair of honest nodes.

    With ``k == 1`` routes are kept as one best-route tree per source (routes
    are prefix-closed), otherwise as explicit lists.
    """

    def __init__(self, t, amount, k, cost_model, trees=None, routes=None):
        self.topology = t
        self.amount = amount
        self.k = k
        self.cost_model = cost_model
        self._trees = trees
        self._routes = routes
        self._index = None

    @property
    def sources(self):
        return self.topology.honest_nodes

    def routes(self, s, d):
        """Routes from ``s`` to ``d``, best first; empty if the pair is unreachable or not honest."""
        t = self.topology
        if s == d or not (t.is_honest(s) and t.is_honest(d)):
            return []
        if self._routes is not None:
            return list(self._routes.get((s, d), ()))
        _, parent, cost = self._trees[s]
        if parent[d] < 0:
            return []
        path = [d]
        while path[-1] != s:
            path.append(int(parent[path[-1]]))
        return [Route(tuple(reversed(path)), float(cost[d]))]

    def pairs(self):
        for s in self.sources:
            for d in self.sources:
                r = self.routes(s, d)
                if r:
                    yield (s, d), r

    def iter_routes(self, s):
        for d in self.sources:
            yield from self.routes(s, d)

    def route_count(self, s):
        return self.index[1].get(s, 0)

    @property
    def index(self):
        """``(obs -> {source: count}, {source: SP_source})``, built once."""
        if self._index is None:
            self._index = self._build_index()
        return self._index

    def _build_index(self):
        t = self.topology
        by_obs = defaultdict(lambda: defaultdict(int))
        totals = {}
        if self._routes is not None:
            for (s, _), rs in sorted(self._routes.items()):
                totals[s] = totals.get(s, 0) + len(rs)
                for r in rs:
                    obs = _observe(r.nodes, t.is_adversarial)
                    if obs is not None:
                        by_obs[obs][s] += 1
        else:
            for s in self.sources:
                for obs, d in _tree_observations(t, s, *self._trees[s][:2]):
                    totals[s] = totals.get(s, 0) + 1
                    if obs is not None:
                        by_obs[obs][s] += 1
        return {o: dict(c) for o, c in by_obs.items()}, totals

    def observations_by_pair(self, s):
        """``(destination, observation-or-None)`` for every route out of ``s`` (k == 1 only)."""
        if self._trees is None:
            raise InvalidParameterError("per-pair observations are only cached for k == 1")
        return [(d, obs) for obs, d in _tree_observations(self.topology, s, *self._trees[s][:2])]


def _tree_observations(t, s, order, parent):
    # Walk the tree root-first, carrying the first interior adversary (and its
    # predecessor) and the last interior adversary (and its successor).
    first = {s: None}
    last = {s: None}
    out = []
    for v in order[1:]:
        u = int(parent[v])
        inner_adv = u != s and t.is_adversarial(u)
        f = first[u]
        if f is None and inner_adv:
            f = (u, int(parent[u]))
        first[v] = f
        last[v] = (u, v) if inner_adv else last[u]
        if t.is_honest(v):
            obs = None if f is None else LnObservation(f[0], f[1], last[v][0], last[v][1])
            out.append((obs, v))
    return out


def build_path_set(t, amount=DEFAULT_AMOUNT, k=1, rf=DEFAULT_RF, bias=0.0, trees=None) -> PathSet:
    """Best-k routes between all ordered honest pairs of ``t``.

    ``trees`` may carry precomputed shortest-path trees (``{source: tree}``) for ``k == 1``.
    """
    if k < 1:
        raise InvalidParameterError("k must be at least 1")
    model = CostModel(amount, rf, bias)
    honest = t.honest_nodes
    if k == 1:
        trees = {s: trees[s] if trees is not None and s in trees
                 else shortest_path_tree(t, s, model) for s in honest}
        return PathSet(t, amount, k, model, trees=trees)
    routes = {}
    for s in honest:
        for d in honest:
            if s != d:
                rs = best_k_paths(t, s, d, amount, k, rf, bias)
                if rs:
                    routes[(s, d)] = tuple(rs)
    return PathSet(t, amount, k, model, routes=routes)


def ln_likelihoods(ps, obs, match="full"):
    """``{i: SP_i(obs) / SP_i}`` over honest sources with at least one matching route."""
    if match == "full":
        by_obs, totals = ps.index
        return {i: c / totals[i] for i, c in by_obs.get(obs, {}).items()}
    if match not in MATCH_MODES:
        raise InvalidParameterError(f"match must be one of {MATCH_MODES}")
    t = ps.topology
    lik = {}
    for s in ps.sources:
        hits = total = 0
        for r in ps.iter_routes(s):
            total += 1
            hits += route_matches(r.nodes, obs, t, match)
        if hits:
            lik[s] = hits / total
    return lik


def ln_posterior(ps, obs, prior=None, match="full") -> Posterior:
    lik = ln_likelihoods(ps, obs, match)
    if not lik:
        raise ImpossibleObservationError(f"no route in the path set yields {obs.key()}")
    return from_likelihoods(lik, obs, prior)
