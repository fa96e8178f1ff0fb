import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from delzant_corners import catalog
from delzant_corners.estimators import EmbeddedToricClassifier, LegendreTransformer


def test_transformer_round_trip(cp2):
    est = LegendreTransformer(cp2).fit()
    X = np.array([[0.5, 0.5], [1.0, 0.5], [0.1, 1.7]])
    assert np.allclose(est.inverse_transform(est.transform(X)), X, atol=1e-9)
    assert np.allclose(est.transform([[2 / 3, 2 / 3]]), 0, atol=1e-12)


def test_transformer_params_and_validation(polytope_dir):
    est = LegendreTransformer(str(polytope_dir / "cp3.json"))
    assert est.get_params() == {"polytope": str(polytope_dir / "cp3.json")}
    with pytest.raises(NotFittedError):
        est.transform([[0.1, 0.1, 0.1]])
    est.fit()
    with pytest.raises(ValueError):
        est.transform([[0.1, 0.1]])
    assert clone(est).get_params() == est.get_params()


def test_classifier(cp2):
    clf = EmbeddedToricClassifier(cp2).fit()
    X = [[1, 0], [2, 1], [3, 1], [-1, -2], [2, 3]]
    assert clf.predict(X).tolist() == [True, True, False, True, False]
    per = clf.predict_per_vertex([[3, 1]])
    assert per.shape == (1, 3) and per.sum() == 2
    assert clf.score(X, [True, True, False, True, False]) == 1.0
    with pytest.raises(ValueError):
        clf.predict([[0.5, 1.0]])


def test_default_polytope():
    assert LegendreTransformer().fit().polytope_.name == "CP2"
