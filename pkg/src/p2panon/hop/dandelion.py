"""Originator posterior on a Dandelion line graph."""
from __future__ import annotations

from ..exceptions import ImpossibleObservationError, InvalidParameterError
from ..graph.topology import TopologyKind
from ..posterior import Posterior, from_likelihoods
from ._checks import check_p_f


def _check_line(t):
    if t.kind is not TopologyKind.LINE and not all(
            t.out_degree(v) == 1 and t.in_degree(v) == 1 for v in range(t.n)):
        raise InvalidParameterError("a line (single circuit) topology is required")


def partition_of(t, j):
    """Honest nodes between the previous adversary and ``j``, nearest to ``j`` first."""
    _check_line(t)
    if not t.is_adversarial(j):
        raise InvalidParameterError(f"node {j} is not adversarial")
    out = []
    v = t.predecessors(j)[0]
    while t.is_honest(v):
        out.append(v)
        v = t.predecessors(v)[0]
    return out


def dandelion_likelihoods(t, p_f, obs):
    """``{i: p_f**(h-1)}`` over the partition, ``h`` the hop distance from ``i`` to the adversary."""
    check_p_f(p_f)
    obs.check(t)
    part = partition_of(t, obs.adversary)
    if not part:
        raise ImpossibleObservationError(f"{obs.key()}: no honest node precedes the adversary")
    lik = {}
    w = 1.0
    for v in part:
        lik[v] = w
        w *= p_f
    return lik


def dandelion_posterior(t, p_f, obs, prior=None) -> Posterior:
    return from_likelihoods(dandelion_likelihoods(t, p_f, obs), obs, prior)
