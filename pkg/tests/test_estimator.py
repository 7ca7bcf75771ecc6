import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.linear_model import LinearRegression
from sklearn.pipeline import make_pipeline

from gencheb import GeneralizedChebyshev
from gencheb.errors import OrderingViolation
from gencheb.quadrature import inner_product


def test_fit_attributes():
    est = GeneralizedChebyshev(alphas=[-0.6], betas=[0.6], n_terms=5).fit()
    assert est.period_ == 2 and est.mapping_ is not None
    assert est.a_[1] == pytest.approx(0.16) and est.b_[0] == pytest.approx(0.6)
    assert est.n_features_in_ == 1
    irr = GeneralizedChebyshev(alphas=[-0.3], betas=[0.1]).fit()
    assert irr.period_ is None and irr.mapping_ is None


def test_transform_is_orthonormal_when_asked():
    est = GeneralizedChebyshev(alphas=[-0.3], betas=[0.1], n_terms=6, normalize=True).fit()
    cfg = est.config_
    gram = np.array(
        [[inner_product(cfg, lambda x: est.transform(x)[:, i], lambda x: est.transform(x)[:, j]) for j in range(6)]
         for i in range(6)]
    )
    assert np.allclose(gram, np.eye(6), atol=1e-10)


def test_shapes_and_errors():
    est = GeneralizedChebyshev(n_terms=3)
    with pytest.raises(NotFittedError):
        est.transform([[0.0]])
    est.fit()
    assert est.transform(np.zeros((4, 1))).shape == (4, 3)
    assert est.transform(np.zeros(4)).shape == (4, 3)
    assert est.second_kind([[0.5]])[0, 1] == 1.0
    with pytest.raises(ValueError):
        est.transform(np.zeros((2, 2)))
    assert list(est.get_feature_names_out()) == ["P_0", "P_1", "P_2"]
    with pytest.raises(OrderingViolation):
        GeneralizedChebyshev(alphas=[0.5], betas=[0.1]).fit()
    with pytest.raises(ValueError):
        GeneralizedChebyshev(n_terms=0).fit()


def test_roots_and_aux():
    est = GeneralizedChebyshev(alphas=[-0.6], betas=[0.6]).fit()
    assert np.allclose(est.roots(2), [-np.sqrt(0.68), np.sqrt(0.68)])
    assert len(est.roots(3, "Q")) == 2
    with pytest.raises(ValueError):
        est.roots(2, "R")
    assert est.aux()(2).gammas[0] == pytest.approx(-0.6)


def test_sklearn_integration():
    est = GeneralizedChebyshev(alphas=[-0.6], betas=[0.6], n_terms=4)
    assert clone(est).get_params() == est.get_params()
    x = np.linspace(0.61, 0.99, 30)[:, None]
    y = np.sin(3 * x[:, 0])
    pipe = make_pipeline(GeneralizedChebyshev(alphas=[-0.6], betas=[0.6], n_terms=6, normalize=True), LinearRegression())
    assert pipe.fit(x, y).score(x, y) > 0.999
