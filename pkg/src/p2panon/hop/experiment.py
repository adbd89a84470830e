"""Hop-by-hop experiments: every honest node originates transactions; intercepted ones are scored."""
from __future__ import annotations

import numpy as np

from .._rng import derive_rng
from ..metrics import min_entropy, shannon_entropy
from ..report import Record, RunResult
from ..scenario import prior_for, run_topology
from .dandelion import dandelion_posterior
from .dandelion_pp import dpp_posterior
from .stem import PathEnumerationBounds, StemObservation, simulate_stem_phase


def _bounds(cfg, t):
    if cfg.bounds is None:
        return PathEnumerationBounds.default_for(t)
    default = PathEnumerationBounds.default_for(t)
    return PathEnumerationBounds(cfg.bounds.max_hops or default.max_hops,
                                 cfg.bounds.min_contribution)


def _scorer(cfg, t):
    from ..config import Scheme

    prior = prior_for(cfg, t)
    if cfg.scheme is Scheme.DANDELION:
        def posterior(obs):
            return dandelion_posterior(t, cfg.p_f, obs, prior)
    else:
        bounds = _bounds(cfg, t)

        def posterior(obs):
            return dpp_posterior(t, cfg.p_f, obs, bounds, prior)

    cache = {}

    def score(obs):
        hit = cache.get(obs)
        if hit is None:
            p = posterior(obs)
            hit = cache[obs] = (obs.key(), shannon_entropy(p), min_entropy(p), p.support)
        return hit
    return score


def _line_distances(t):
    """For each node: (hops to the next adversary along the circuit, that adversary)."""
    n = t.n
    dist = np.zeros(n, dtype=np.int64)
    target = np.full(n, -1, dtype=np.int64)
    start = min(t.adversaries)
    order = [start]
    v = t.successors(start)[0]
    while v != start:
        order.append(v)
        v = t.successors(v)[0]
    d, nxt = 0, start
    for v in reversed(order):
        if t.is_adversarial(v):
            d, nxt = 0, v
            continue
        d += 1
        dist[v], target[v] = d, nxt
    return dist, target


def _run_line(cfg, t, run, score):
    """Dandelion on a circuit: the stem length is geometric, so only the first adversary ahead matters."""
    dist, target = _line_distances(t)
    honest = np.asarray(t.honest_nodes, dtype=np.int64)
    rng = derive_rng(cfg.seed, "stems", run)
    hops = rng.geometric(1.0 - cfg.p_f, size=(honest.size, cfg.tx_per_node))
    caught = hops >= dist[honest][:, None]
    records = []
    for row, col in zip(*np.nonzero(caught)):
        j = int(target[honest[row]])
        key, h, hmin, support = score(StemObservation(j, t.predecessors(j)[0]))
        records.append(Record(run, key, h, hmin, support))
    return records, int(caught.size), int(caught.sum())


def _run_walks(cfg, t, run, score):
    rng = derive_rng(cfg.seed, "stems", run)
    records = []
    total = caught = 0
    for i in t.honest_nodes:
        for _ in range(cfg.tx_per_node):
            out = simulate_stem_phase(t, i, cfg.p_f, rng)
            total += 1
            if out.intercepted:
                caught += 1
                key, h, hmin, support = score(out.observation)
                records.append(Record(run, key, h, hmin, support))
    return records, total, caught


def run_hop_by_hop_once(cfg, run, fast_line=True):
    from ..config import Scheme

    t = run_topology(cfg, run)
    score = _scorer(cfg, t)
    if cfg.scheme is Scheme.DANDELION and fast_line:
        records, total, caught = _run_line(cfg, t, run, score)
    else:
        records, total, caught = _run_walks(cfg, t, run, score)
    return RunResult(run, records, total, caught)


def run_hop_by_hop_experiment(cfg, workers=1):
    """Dandelion / Dandelion++ experiment over ``cfg.runs`` independent runs."""
    from ..runner import run
    return run(cfg, workers)
