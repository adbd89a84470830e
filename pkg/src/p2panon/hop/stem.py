"""Stem-phase observations, outcomes and the Monte Carlo stem walk."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..exceptions import InvalidParameterError


@dataclass(frozen=True, order=True)
class StemObservation:
    """First adversary to receive a stem transaction and the node that handed it over."""

    adversary: int
    predecessor: int

    def key(self):
        return f"a{self.adversary}:p{self.predecessor}"

    def check(self, t):
        if not t.is_adversarial(self.adversary):
            raise InvalidParameterError(f"node {self.adversary} is not adversarial")
        if self.predecessor == self.adversary:
            raise InvalidParameterError("predecessor and adversary must differ")
        if not t.has_edge(self.predecessor, self.adversary):
            raise InvalidParameterError(
                f"no privacy-subgraph edge {self.predecessor}->{self.adversary}")


@dataclass(frozen=True)
class PathEnumerationBounds:
    max_hops: int = 12
    min_contribution: float = 1e-12

    def __post_init__(self):
        if int(self.max_hops) != self.max_hops or self.max_hops < 1:
            raise InvalidParameterError("max_hops must be an integer >= 1")
        if not 0 <= self.min_contribution < 1:
            raise InvalidParameterError("min_contribution must lie in [0, 1)")

    @classmethod
    def default_for(cls, t):
        """12 hops on graphs of outdegree <= 2, 5 hops on denser ones."""
        dense = t.n and int(t.out_degrees.max()) > 2
        return cls(max_hops=5 if dense else 12)


@dataclass(frozen=True)
class StemOutcome:
    """Either ``Intercepted(observation, hops)`` or ``Diffused(diffuser, hops)``.

    ``hops`` counts edges travelled, so the first recipient is at hop 1.
    """

    hops: int
    observation: Optional[StemObservation] = None
    diffuser: Optional[int] = None

    @classmethod
    def intercepted_at(cls, observation, hops):
        return cls(hops, observation=observation)

    @classmethod
    def diffused_by(cls, node, hops):
        return cls(hops, diffuser=node)

    @property
    def intercepted(self):
        return self.observation is not None


def stem_walk(t, start, p_f, rng, stop_at_adversary=True):
    """One stem phase from ``start``; returns :class:`StemOutcome`.

    ``start`` always forwards.  Each later honest recipient forwards with
    probability ``p_f`` to a uniformly chosen successor and diffuses otherwise.
    A node that receives a transaction it already relayed diffuses it at once,
    so stems are simple paths.  With ``stop_at_adversary`` the walk ends at the
    first adversarial recipient; otherwise adversaries relay like everyone else.
    """
    cur = start
    seen = {start}
    hops = 0
    while True:
        succ = t.successors(cur)
        if not succ:
            if hops == 0:
                raise InvalidParameterError(f"node {start} has no successor to forward to")
            return StemOutcome.diffused_by(cur, hops)
        nxt = succ[int(rng.integers(len(succ)))] if len(succ) > 1 else succ[0]
        hops += 1
        if stop_at_adversary and t.is_adversarial(nxt):
            return StemOutcome.intercepted_at(StemObservation(nxt, cur), hops)
        if nxt in seen:
            return StemOutcome.diffused_by(nxt, hops)
        seen.add(nxt)
        cur = nxt
        if rng.random() >= p_f:
            return StemOutcome.diffused_by(cur, hops)


def simulate_stem_phase(t, originator, p_f, rng) -> StemOutcome:
    """Stem phase of a transaction created by the honest node ``originator``."""
    if not 0 <= p_f < 1:
        raise InvalidParameterError("p_f must lie in [0, 1)")
    if not t.is_honest(originator):
        raise InvalidParameterError(f"originator {originator} is adversarial")
    return stem_walk(t, originator, p_f, rng)
