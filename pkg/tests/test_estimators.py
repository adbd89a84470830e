import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from p2panon import (DandelionOriginatorModel, DandelionPPOriginatorModel,
                     LightningOriginatorModel, PrivacySubgraphLearner)
from p2panon.graph import (Topology, derive_privacy_subgraph, generate_k_regular,
                           generate_line_graph, generate_quasi_4_regular)
from p2panon.hop import StemObservation, dandelion_posterior, dpp_posterior
from p2panon.ln import LnObservation, build_path_set, ln_posterior


def test_params_and_clone():
    m = DandelionPPOriginatorModel(p_f=0.8, max_hops=4)
    assert m.get_params()["max_hops"] == 4
    c = clone(m)
    assert c.get_params() == m.get_params() and c is not m
    assert LightningOriginatorModel(k=3).set_params(match="any").match == "any"


def test_not_fitted():
    with pytest.raises(NotFittedError):
        DandelionOriginatorModel().predict([StemObservation(1, 0)])


def test_dandelion_model_matches_function():
    t = generate_line_graph(20, 0).with_adversaries([3, 11])
    m = DandelionOriginatorModel(p_f=0.7).fit(t)
    obs = [StemObservation(a, t.predecessors(a)[0]) for a in (11, 3)]
    proba = m.predict_proba(obs)
    assert proba.shape == (2, len(t.honest_nodes))
    np.testing.assert_allclose(proba.sum(axis=1), 1.0)
    p = dandelion_posterior(t, 0.7, obs[0])
    assert m.predict(obs)[0] == p.argmax()
    feats = m.transform(obs)
    assert feats.shape == (2, 3)


def test_dpp_model_bounds_and_posterior():
    t = generate_quasi_4_regular(30, 2).with_adversaries([0, 7])
    m = DandelionPPOriginatorModel(p_f=0.9).fit(t)
    assert m.bounds_.max_hops == 12
    obs = StemObservation(7, t.predecessors(7)[0])
    expected = dpp_posterior(t, 0.9, obs, m.bounds_)
    assert m.posterior(obs) == expected


def test_lightning_model():
    arcs = [(a, b) for a, b in [(1, 2), (2, 4), (3, 4), (4, 5), (5, 6)]]
    arcs += [(b, a) for a, b in arcs]
    t = Topology.from_arcs(7, arcs, adversaries=[4, 0])
    m = LightningOriginatorModel().fit(t)
    obs = LnObservation(4, 2, 4, 5)
    assert m.posterior(obs) == ln_posterior(build_path_set(t), obs)
    assert set(m.classes_) == {1, 2, 3, 5, 6}
    np.testing.assert_allclose(m.predict_proba([obs]).sum(), 1.0)


def test_subgraph_learner():
    bg = generate_k_regular(150, 8, 2)
    psg = derive_privacy_subgraph(bg, 2, 3)
    learner = PrivacySubgraphLearner(tx_per_node=40, seed=1).fit(bg, psg)
    honest = [v for v in range(bg.n) if not learner.learned_.adversaries or
              v not in learner.learned_.adversaries]
    pred = learner.predict(honest[:3])
    assert len(pred) == 3 and all(len(p) == 2 for p in pred)
    assert learner.score(psg) == learner.learned_.accuracy > 0.5
