"""Learning the Dandelion++ privacy subgraph from diffusion statistics.

The adversary pushes many stem transactions through one honest target and
watches which of the target's base-graph neighbours diffuse them.  The
target's two privacy-subgraph successors diffuse far more often than any
other neighbour, so the two most frequent diffusers are taken as its
successors.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ._rng import derive_rng, derive_seed
from .exceptions import InsufficientDataError, InvalidParameterError
from .graph.ops import adversary_count, assign_adversaries
from .hop.stem import stem_walk


@dataclass(frozen=True)
class DiffusionCounts:
    """Diffusions per base-graph successor of ``target`` (zeros kept).

    ``diffusers`` tallies every diffusing node, candidate or not.
    """

    target: int
    counts: dict
    diffusers: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class SuccessorInference:
    target: int
    successors: tuple
    tied: bool
    confidence: int


@dataclass(frozen=True)
class LearnedSubgraph:
    edges: frozenset
    accuracy: float
    inferences: tuple = ()
    adversaries: frozenset = frozenset()

    def document(self):
        return {
            "accuracy": self.accuracy,
            "inferred_edges": sorted([u, v] for u, v in self.edges),
            "adversaries": sorted(self.adversaries),
            "targets": [{"target": i.target, "successors": list(i.successors),
                         "confidence": i.confidence, "tied": i.tied} for i in self.inferences],
        }


def simulate_diffusion_counts(bg, psg, target, tx_count, p_f, rng) -> DiffusionCounts:
    """Send ``tx_count`` stems through ``target`` over ``psg`` and tally the diffusers."""
    if not 0 <= p_f < 1:
        raise InvalidParameterError("p_f must lie in [0, 1)")
    candidates = bg.successors(target)
    tally = Counter()
    for _ in range(tx_count):
        tally[stem_walk(psg, target, p_f, rng, stop_at_adversary=False).diffuser] += 1
    return DiffusionCounts(target, {c: tally.get(c, 0) for c in candidates},
                           dict(sorted(tally.items())))


def _rank(counts):
    return sorted(counts, key=lambda c: (-counts[c], c))


def successor_inference(dc, slots=2, exclude=(), fixed=()) -> SuccessorInference:
    """Top-``slots`` candidates by count (ties to the smaller id), with tie flag and margin.

    ``fixed`` successors are already known and fill slots first; ``exclude``
    removes candidates known not to be successors.
    """
    fixed = tuple(sorted(fixed))[:slots]
    free = slots - len(fixed)
    pool = {c: n for c, n in dc.counts.items() if c not in exclude and c not in fixed}
    if len(pool) < free or len(dc.counts) < 2:
        raise InsufficientDataError(
            f"target {dc.target}: {len(pool)} candidates for {free} open successor slots")
    ranked = _rank(pool)
    chosen = ranked[:free]
    if free == 0:
        return SuccessorInference(dc.target, fixed, False, 0)
    edge = pool[chosen[-1]]
    runner_up = pool[ranked[free]] if len(ranked) > free else 0
    tied = len(ranked) > free and runner_up == edge
    return SuccessorInference(dc.target, fixed + tuple(chosen), tied,
                              int(edge - runner_up))


def infer_successors(dc):
    """The two candidates that diffused most, in rank order; ties go to the smaller id."""
    return successor_inference(dc).successors


def second_hop_counts(bg, dc):
    """Credit every candidate with the diffusions of its own base-graph successors."""
    cand = set(dc.counts)
    pooled = dict(dc.counts)
    for c in dc.counts:
        pooled[c] += sum(dc.diffusers.get(x, 0) for x in bg.successors(c)
                         if x not in cand and x != dc.target)
    return DiffusionCounts(dc.target, pooled, dc.diffusers)


def learn_privacy_subgraph(bg, psg, adversary_fraction, tx_per_node, p_f, seed,
                           second_hop=False, elimination=False) -> LearnedSubgraph:
    """Infer every honest node's successors and score edge recall against ``psg``.

    Adversaries know their own successors.  With ``elimination`` they also use
    what they know of their predecessors: an honest node's edges into
    adversaries are fixed and other adversaries are ruled out as its
    successors.  ``second_hop`` adds the diffusions of each candidate's own
    neighbours to its count before ranking.
    """
    if not 0 < adversary_fraction < 1:
        raise InvalidParameterError("adversary_fraction must lie in (0, 1)")
    count = adversary_count(bg.n, fraction=adversary_fraction)
    bg = assign_adversaries(bg, "random", count, derive_seed(seed, "adversaries"))
    adversaries = bg.adversaries
    slots = psg.out_degree(0) if psg.n else 2
    edges = {(a, s) for a in adversaries for s in psg.successors(a)}
    inferences = []
    for target in bg.honest_nodes:
        rng = derive_rng(seed, "diffusion", target)
        dc = simulate_diffusion_counts(bg, psg, target, tx_per_node, p_f, rng)
        if second_hop:
            dc = second_hop_counts(bg, dc)
        fixed, exclude = (), ()
        if elimination:
            fixed = tuple(a for a in psg.successors(target) if a in adversaries)
            exclude = tuple(c for c in dc.counts if c in adversaries and c not in fixed)
        inf = successor_inference(dc, slots, exclude, fixed)
        inferences.append(inf)
        edges.update((target, s) for s in inf.successors)
    true_edges = {(e.src, e.dst) for e in psg.edges}
    accuracy = len(edges & true_edges) / len(true_edges)
    return LearnedSubgraph(frozenset(edges), accuracy, tuple(inferences), frozenset(adversaries))
