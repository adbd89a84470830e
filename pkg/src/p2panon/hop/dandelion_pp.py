"""Originator posterior on a Dandelion++ privacy subgraph.

The chance that honest node ``i`` originated a transaction first seen by
adversary ``j`` from predecessor ``p`` is the total probability of the simple
stems ``i -> ... -> p -> j`` whose every node except ``j`` is honest.  A stem
contributes ``1/outdeg(i)`` for the originator's forced hop times
``p_f/outdeg(v)`` for each intermediary ``v`` that passed it on.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from ..posterior import Posterior, from_likelihoods
from ._checks import check_p_f
from .stem import PathEnumerationBounds


def _bounds(t, bounds):
    return PathEnumerationBounds.default_for(t) if bounds is None else bounds


def enumerate_stem_paths(t, i, obs, bounds=None):
    """Simple honest-interior paths ``i -> ... -> obs.predecessor -> obs.adversary``, sorted."""
    bounds = _bounds(t, bounds)
    p, j = obs.predecessor, obs.adversary
    if not (t.is_honest(i) and t.is_honest(p) and t.has_edge(p, j)):
        return []
    found = []
    path = [i]
    on_path = {i}

    def extend(u):
        if u == p:
            found.append(tuple(path) + (j,))
            return
        if len(path) >= bounds.max_hops:
            return
        for v in t.successors(u):
            if v in on_path or t.is_adversarial(v):
                continue
            path.append(v)
            on_path.add(v)
            extend(v)
            path.pop()
            on_path.discard(v)

    extend(i)
    found.sort()
    return found


def path_contribution(t, path, p_f):
    """Probability that the stem follows ``path`` (ending at the adversary)."""
    w = 1.0 / t.out_degree(path[0])
    for v in path[1:-1]:
        w *= p_f / t.out_degree(v)
    return w


def dpp_forward_probability(t, i, obs, p_f, bounds=None):
    """``P(obs | i originated)``, summed over :func:`enumerate_stem_paths`."""
    check_p_f(p_f)
    bounds = _bounds(t, bounds)
    total = 0.0
    for path in enumerate_stem_paths(t, i, obs, bounds):
        w = path_contribution(t, path, p_f)
        if w >= bounds.min_contribution:
            total += w
    return total


@njit(cache=True)
def _backward_path_sums(indptr, indices, outdeg, honest, p, p_f, max_hops, min_c):
    # Depth-first walk over in-edges from the predecessor; every node reached is
    # a candidate originator whose stem is the reversed walk.
    n = outdeg.shape[0]
    out = np.zeros(n)
    c = 1.0 / outdeg[p]
    if c < min_c:
        return out
    out[p] += c
    if max_hops < 2:
        return out
    on_path = np.zeros(n, dtype=np.bool_)
    nodes = np.empty(max_hops, dtype=np.int64)
    ptr = np.empty(max_hops, dtype=np.int64)
    carry = np.empty(max_hops, dtype=np.float64)
    nodes[0] = p
    ptr[0] = indptr[p]
    carry[0] = p_f / outdeg[p]
    on_path[p] = True
    d = 0
    while d >= 0:
        u = nodes[d]
        if ptr[d] < indptr[u + 1]:
            w = indices[ptr[d]]
            ptr[d] += 1
            if not honest[w] or on_path[w]:
                continue
            c = carry[d] / outdeg[w]
            if c < min_c:
                continue
            out[w] += c
            if d + 2 < max_hops:
                d += 1
                nodes[d] = w
                ptr[d] = indptr[w]
                carry[d] = carry[d - 1] * p_f / outdeg[w]
                on_path[w] = True
        else:
            on_path[u] = False
            d -= 1
    return out


def dpp_likelihoods(t, p_f, obs, bounds=None):
    """Forward probability of ``obs`` for every honest node, as ``{node: value}`` (zeros dropped)."""
    check_p_f(p_f)
    obs.check(t)
    bounds = _bounds(t, bounds)
    if not t.is_honest(obs.predecessor):
        return {}
    indptr, indices = t.in_csr
    sums = _backward_path_sums(indptr, indices, t.out_degrees.astype(np.float64),
                               t.honest_mask, obs.predecessor, float(p_f),
                               int(bounds.max_hops), float(bounds.min_contribution))
    return {int(v): float(sums[v]) for v in np.flatnonzero(sums)}


def dpp_posterior(t, p_f, obs, bounds=None, prior=None) -> Posterior:
    return from_likelihoods(dpp_likelihoods(t, p_f, obs, bounds), obs, prior)
