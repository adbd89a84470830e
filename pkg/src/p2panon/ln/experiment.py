"""Lightning experiment: every honest node pays every other honest node once."""
from __future__ import annotations

from .._rng import derive_rng
from ..graph.ops import betweenness_centrality, filter_by_amount, largest_connected_component
from ..metrics import min_entropy, shannon_entropy
from ..report import Record, RunResult
from ..scenario import (adversary_seed, build_topology, place_adversaries, prior_for,
                        topology_seed)
from ..graph.ops import assign_adversaries
from .anonymity import build_path_set, ln_posterior, observations_from_route
from .routing import CostModel, shortest_path_tree


def ln_topology(cfg, run):
    """Topology of run ``run``: generated or loaded, filtered by amount, then (optionally) its LCC."""
    from dataclasses import replace
    t = build_topology(replace(cfg.topology, lcc=False), topology_seed(cfg, run))
    if cfg.amount > 0 and all(e.capacity is not None for e in t.edges):
        t = filter_by_amount(t, cfg.amount)
    if cfg.topology.lcc:
        t = largest_connected_component(t)
    return t


def run_ln_once(cfg, run):
    model = CostModel(cfg.amount, cfg.rf, cfg.bias)
    t = ln_topology(cfg, run)
    trees = None
    if cfg.k == 1:
        # routing ignores roles, so one set of trees serves centrality and the path set
        trees = {s: shortest_path_tree(t, s, model) for s in range(t.n)}
    count = cfg.adversary.resolve(t.n)
    if cfg.adversary.strategy == "top-betweenness":
        centrality = betweenness_centrality(t, model, trees)
        t = assign_adversaries(t, "top-betweenness", count, centrality=centrality)
    else:
        t = place_adversaries(t, cfg.adversary, adversary_seed(cfg, run), model)
    ps = build_path_set(t, cfg.amount, cfg.k, cfg.rf, cfg.bias, trees=trees)
    prior = prior_for(cfg, t)
    cache = {}
    records = []
    total = caught = 0
    for s in ps.sources:
        if cfg.k == 1:
            observed = [obs for _, obs in ps.observations_by_pair(s)]
        else:
            observed = []
            for d in ps.sources:
                rs = ps.routes(s, d)
                if rs:
                    pick = rs[int(derive_rng(cfg.seed, "route", run, s, d).integers(len(rs)))]
                    observed.append(observations_from_route(pick, t))
        for obs in observed:
            total += 1
            if obs is None:
                continue
            caught += 1
            hit = cache.get(obs)
            if hit is None:
                p = ln_posterior(ps, obs, prior)
                hit = cache[obs] = (obs.key(), shannon_entropy(p), min_entropy(p), p.support)
            records.append(Record(run, *hit))
    return RunResult(run, records, total, caught,
                     {"run": run, "nodes": t.n, "directed_edges": t.edge_count,
                      "adversaries": sorted(t.adversaries)})


def run_ln_experiment(cfg, workers=1):
    from ..runner import run
    return run(cfg, workers)
