"""Originator posterior: Bayes' rule over honest suspects."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Optional

import numpy as np

from .exceptions import ImpossibleObservationError, InvalidParameterError


@dataclass(frozen=True)
class Posterior:
    """Probability of each honest node being the originator, given ``observation``.

    ``probabilities`` holds only the positive entries, keyed by node id in
    ascending order; every other node has probability exactly 0.
    """

    probabilities: Mapping[int, float]
    observation: Any = None

    def __getitem__(self, node):
        return self.probabilities.get(node, 0.0)

    @property
    def support(self):
        return len(self.probabilities)

    @property
    def suspects(self):
        return tuple(self.probabilities)

    def argmax(self):
        """Likeliest originator; ties go to the smaller id."""
        return max(self.probabilities, key=lambda v: (self.probabilities[v], -v))

    def as_array(self, n):
        out = np.zeros(n)
        for v, p in self.probabilities.items():
            out[v] = p
        return out


def uniform_prior(honest):
    honest = tuple(honest)
    return {v: 1.0 / len(honest) for v in honest}


def check_prior(prior, honest_mask):
    """Reject priors that weigh adversaries or carry negative or non-finite weights."""
    for v, w in prior.items():
        if not 0 <= v < len(honest_mask) or not honest_mask[v]:
            raise InvalidParameterError(f"prior names node {v}, which is not an honest node")
        if not np.isfinite(w) or w < 0:
            raise InvalidParameterError(f"prior weight of node {v} must be finite and non-negative")


def from_likelihoods(likelihoods: Mapping[int, float], observation=None,
                     prior: Optional[Mapping[int, float]] = None) -> Posterior:
    """Normalise ``prior * likelihood`` over the suspects.

    With no prior every suspect weighs the same, which is the uniform prior
    with its constant factor cancelled.  Nodes missing from an explicit prior
    weigh 0.
    """
    weights = {}
    for v in sorted(likelihoods):
        w = likelihoods[v] if prior is None else prior.get(v, 0.0) * likelihoods[v]
        if w > 0:
            weights[v] = w
    total = sum(weights.values())
    if not total > 0:
        raise ImpossibleObservationError(f"no honest node could have produced {observation!r}")
    return Posterior({v: w / total for v, w in weights.items()}, observation)
