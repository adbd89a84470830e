"""Per-run topology and adversary placement, derived from a config and a run index."""
from __future__ import annotations

from pathlib import Path

from ._rng import derive_seed
from .graph import generators as gen
from .graph.ops import assign_adversaries, largest_connected_component
from .graph.snapshot import load_ln_snapshot


def build_topology(spec, seed):
    """Topology for ``spec`` (a :class:`~p2panon.config.TopologySpec`) without adversaries."""
    g = spec.generator
    if g == "line":
        t = gen.generate_line_graph(spec.n, seed)
    elif g == "quasi-4-regular":
        t = gen.generate_quasi_4_regular(spec.n, seed)
    elif g == "k-regular":
        t = gen.generate_k_regular(spec.n, spec.out_k, seed)
    elif g == "weighted-random":
        t = gen.generate_weighted_random_graph(spec.n, spec.avg_degree, spec.mean_fee, seed)
    elif g == "scale-free":
        t = gen.generate_scale_free_graph(spec.n, spec.avg_degree, spec.mean_fee, seed)
    elif g == "snapshot":
        t = load_ln_snapshot(Path(spec.path).read_text())
    else:
        raise ValueError(f"unknown generator {g!r}")
    if spec.lcc:
        t = largest_connected_component(t)
    return t


def topology_seed(cfg, run):
    return derive_seed(cfg.seed, "topology", run)


def adversary_seed(cfg, run):
    return derive_seed(cfg.seed, "adversaries", run)


def place_adversaries(t, adversary, seed, cost_model=None):
    return assign_adversaries(t, adversary.strategy, adversary.resolve(t.n), seed,
                              cost_model=cost_model)


def run_topology(cfg, run, cost_model=None):
    """The adversary-labelled topology used in run ``run``."""
    t = build_topology(cfg.topology, topology_seed(cfg, run))
    return place_adversaries(t, cfg.adversary, adversary_seed(cfg, run), cost_model)


def prior_for(cfg, t):
    """Prior weights for the honest nodes of ``t``; ``None`` means uniform."""
    if cfg.prior is None:
        return None
    return cfg.prior.weights(t.honest_nodes)
