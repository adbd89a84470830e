"""Estimator-style wrappers: fit on a labelled topology, then score observations.

``predict_proba`` returns one row per observation over ``classes_`` (the honest
node ids), ``predict`` the likeliest originator and ``transform`` the
``[entropy, min-entropy, support]`` triple.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .hop.dandelion import dandelion_posterior
from .hop.dandelion_pp import dpp_posterior
from .hop.stem import PathEnumerationBounds
from .learning import learn_privacy_subgraph
from .ln.anonymity import MATCH_MODES, build_path_set, ln_posterior
from .ln.routing import DEFAULT_AMOUNT, DEFAULT_RF
from .metrics import min_entropy, shannon_entropy
from .validation import check_is_fitted, check_probability, check_topology
from .exceptions import InvalidParameterError


class _OriginatorModel(BaseEstimator):

    def _posterior(self, obs):
        raise NotImplementedError

    def posterior(self, obs):
        check_is_fitted(self, "topology_")
        return self._posterior(obs)

    def predict_proba(self, observations):
        check_is_fitted(self, "topology_")
        col = {v: i for i, v in enumerate(self.classes_)}
        out = np.zeros((len(observations), len(self.classes_)))
        for r, obs in enumerate(observations):
            for v, p in self._posterior(obs).probabilities.items():
                out[r, col[v]] = p
        return out

    def predict(self, observations):
        return np.array([self.posterior(o).argmax() for o in observations], dtype=np.int64)

    def transform(self, observations):
        rows = []
        for o in observations:
            p = self.posterior(o)
            rows.append((shannon_entropy(p), min_entropy(p), float(p.support)))
        return np.array(rows, dtype=float).reshape(len(rows), 3)

    def _fit_common(self, topology):
        self.topology_ = check_topology(topology)
        self.classes_ = np.array(topology.honest_nodes, dtype=np.int64)
        return self


class DandelionOriginatorModel(_OriginatorModel):
    """Originator posterior on a Dandelion line graph."""

    def __init__(self, p_f=0.9, prior=None):
        self.p_f = p_f
        self.prior = prior

    def fit(self, topology, y=None):
        check_probability(self.p_f, "p_f")
        return self._fit_common(topology)

    def _posterior(self, obs):
        return dandelion_posterior(self.topology_, self.p_f, obs, self.prior)


class DandelionPPOriginatorModel(_OriginatorModel):
    """Originator posterior on a Dandelion++ privacy subgraph."""

    def __init__(self, p_f=0.9, max_hops=None, min_contribution=1e-12, prior=None):
        self.p_f = p_f
        self.max_hops = max_hops
        self.min_contribution = min_contribution
        self.prior = prior

    def fit(self, topology, y=None):
        check_probability(self.p_f, "p_f")
        self._fit_common(topology)
        hops = self.max_hops or PathEnumerationBounds.default_for(topology).max_hops
        self.bounds_ = PathEnumerationBounds(hops, self.min_contribution)
        return self

    def _posterior(self, obs):
        return dpp_posterior(self.topology_, self.p_f, obs, self.bounds_, self.prior)


class LightningOriginatorModel(_OriginatorModel):
    """Originator posterior over the best-k route universe of a channel graph."""

    def __init__(self, amount=DEFAULT_AMOUNT, k=1, rf=DEFAULT_RF, bias=0.0, match="full",
                 prior=None):
        self.amount = amount
        self.k = k
        self.rf = rf
        self.bias = bias
        self.match = match
        self.prior = prior

    def fit(self, topology, y=None):
        if self.match not in MATCH_MODES:
            raise InvalidParameterError(f"match must be one of {MATCH_MODES}")
        self._fit_common(topology)
        self.path_set_ = build_path_set(topology, self.amount, self.k, self.rf, self.bias)
        return self

    def _posterior(self, obs):
        return ln_posterior(self.path_set_, obs, self.prior, self.match)


class PrivacySubgraphLearner(BaseEstimator):
    """Diffusion-frequency attack on the privacy subgraph; ``score`` is edge recall."""

    def __init__(self, adversary_fraction=0.1, tx_per_node=50, p_f=0.9, seed=0,
                 second_hop=False, elimination=False):
        self.adversary_fraction = adversary_fraction
        self.tx_per_node = tx_per_node
        self.p_f = p_f
        self.seed = seed
        self.second_hop = second_hop
        self.elimination = elimination

    def fit(self, base_graph, privacy_subgraph):
        check_probability(self.p_f, "p_f", open_low=False)
        check_probability(self.adversary_fraction, "adversary_fraction")
        self.learned_ = learn_privacy_subgraph(
            base_graph, privacy_subgraph, self.adversary_fraction, self.tx_per_node, self.p_f,
            self.seed, self.second_hop, self.elimination)
        self.successors_ = {i.target: i.successors for i in self.learned_.inferences}
        for a in self.learned_.adversaries:
            self.successors_[a] = privacy_subgraph.successors(a)
        return self

    def predict(self, targets):
        check_is_fitted(self, "learned_")
        return np.array([self.successors_[int(v)] for v in targets], dtype=np.int64)

    def score(self, privacy_subgraph, y=None):
        check_is_fitted(self, "learned_")
        true = {(e.src, e.dst) for e in privacy_subgraph.edges}
        return len(self.learned_.edges & true) / len(true)
