import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from lambda_lab.estimator import LambdaLabeler, check_graph, check_hk
from lambda_lab.graphs import cycle, path, product_of
from lambda_lab.keys import InstanceKey
from lambda_lab.labeling import Labeling, verify


def test_params_roundtrip():
    est = LambdaLabeler(h=2, k=1, method="square")
    assert est.get_params() == {"h": 2, "k": 1, "method": "square", "node_limit": None,
                                "time_limit": None, "workers": 1}
    assert clone(est).get_params() == est.get_params()
    est.set_params(h=1)
    assert est.h == 1


def test_fit_predict_exact():
    g = product_of("PC", 3, 7)
    est = LambdaLabeler().fit(g)
    assert est.span_ == 5 and est.n_components_ == 1
    assert verify(g, Labeling(tuple(est.labels_)), 1, 1) == []
    assert np.array_equal(est.predict(), est.labels_)
    assert np.array_equal(est.predict(g), est.labels_)
    assert est.score() == -5.0


def test_inputs():
    adj = np.zeros((5, 5), dtype=int)
    for t in range(5):
        adj[t, (t + 1) % 5] = adj[(t + 1) % 5, t] = 1
    assert LambdaLabeler().fit_predict(adj).max() == 4
    assert LambdaLabeler().fit("PP:3×3:1,1:all").span_ == 4
    assert LambdaLabeler(method="square").fit(InstanceKey("PC", 2, 9)).span_ == 2
    assert LambdaLabeler(h=2, k=1).fit(path(5)).span_ == 4


def test_construct_method():
    est = LambdaLabeler(method="construct").fit("PC:4×11:1,1:all")
    assert est.span_ == 4 and est.method_ == "fig1-tiles"
    with pytest.raises(TypeError):
        LambdaLabeler(method="construct").fit(cycle(5))


def test_validation():
    with pytest.raises(NotFittedError):
        LambdaLabeler().predict()
    with pytest.raises(ValueError):
        LambdaLabeler(method="nope").fit(path(3))
    with pytest.raises(ValueError):
        LambdaLabeler(h=2, method="square").fit(path(3))
    with pytest.raises(ValueError):
        check_graph(np.ones((2, 3)))
    with pytest.raises(ValueError):
        check_graph(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        check_graph(np.eye(2, dtype=int))
    with pytest.raises(ValueError):
        check_graph(np.array([[0, 2], [2, 0]]))
    with pytest.raises(TypeError):
        check_hk(1.5, 1)
    with pytest.raises(ValueError):
        check_hk(1, -1)
    assert check_hk(np.int64(2), 1) == (2, 1)
