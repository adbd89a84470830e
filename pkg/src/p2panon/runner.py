"""Experiment dispatch and the worker pool.

Runs are independent and seeded from ``(seed, run index)``, so results do not
depend on how they are scheduled; the harness merges them in run order.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor

from .config import Scheme
from .exceptions import AnonymityError, RunError
from .report import ExperimentReport


def default_workers():
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1


def _run_one(cfg, index):
    from .hop.experiment import run_hop_by_hop_once
    from .ln.experiment import run_ln_once
    try:
        if cfg.scheme in (Scheme.DANDELION, Scheme.DANDELION_PP):
            return run_hop_by_hop_once(cfg, index)
        if cfg.scheme is Scheme.LN:
            return run_ln_once(cfg, index)
        if cfg.scheme is Scheme.SUBGRAPH_LEARNING:
            return learning_run(cfg, index)
        raise AnonymityError(f"unknown scheme {cfg.scheme!r}")
    except RunError:
        raise
    except Exception as exc:
        raise RunError(index, exc) from exc


def _map(fn, cfg, indices, workers):
    if workers <= 1 or len(indices) <= 1:
        return [fn(cfg, i) for i in indices]
    with ProcessPoolExecutor(max_workers=min(workers, len(indices))) as pool:
        return list(pool.map(fn, [cfg] * len(indices), indices,
                             chunksize=max(1, len(indices) // (4 * workers))))


def run(cfg, workers=1, timing=False):
    """Execute every run of ``cfg`` and merge the results into an :class:`ExperimentReport`."""
    start = time.perf_counter()
    if cfg.scheme is Scheme.SUBGRAPH_LEARNING:
        report = learning_report(cfg, workers)
    else:
        results = _map(_run_one, cfg, list(range(cfg.runs)), workers)
        report = ExperimentReport.from_runs(cfg.echo(), results)
    if timing:
        report.wall_clock_seconds = time.perf_counter() - start
    return report


def learning_run(cfg, index):
    from ._rng import derive_seed
    from .graph.generators import derive_privacy_subgraph, generate_k_regular
    from .learning import learn_privacy_subgraph

    seed = derive_seed(cfg.seed, "learning", index)
    bg = generate_k_regular(cfg.topology.n, cfg.topology.out_k, derive_seed(seed, "base-graph"))
    psg = derive_privacy_subgraph(bg, cfg.topology.psg_out_k, derive_seed(seed, "privacy-subgraph"))
    fraction = cfg.adversary.fraction
    if fraction is None:
        fraction = cfg.adversary.count / bg.n
    learned = learn_privacy_subgraph(bg, psg, fraction, cfg.tx_per_node, cfg.p_f, seed,
                                     cfg.learning.second_hop, cfg.learning.elimination)
    doc = learned.document()
    doc["run"] = index
    return doc


def _wrapped_learning_run(cfg, index):
    try:
        return learning_run(cfg, index)
    except Exception as exc:
        raise RunError(index, exc) from exc


def learning_report(cfg, workers=1):
    """Subgraph-learning runs; the report carries no per-transaction records."""
    from .metrics import summarize

    docs = _map(_wrapped_learning_run, cfg, list(range(cfg.runs)), workers)
    acc = [d["accuracy"] for d in docs]
    extra = {"accuracy": summarize(acc).as_dict(), "learned": docs}
    return ExperimentReport(cfg.echo(), [], 0, 0, extra)
