import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from symtensor.convex.bodies import HPolytope, VPolytope
from symtensor.convex.rational import identity
from symtensor.estimators import LoewnerEllipsoid, TensorNormTransformer

CUBE2 = HPolytope(identity(2))


def test_loewner_estimator_on_cube_vertices():
    est = LoewnerEllipsoid().fit([[1, 1], [1, -1]])
    np.testing.assert_allclose(est.shape_, 0.5 * np.eye(2), atol=1e-6)
    assert est.converged_ and est.n_features_in_ == 2
    assert list(est.predict([[1, 1], [0.1, 0], [2, 0]])) == [1, 1, -1]
    np.testing.assert_allclose(est.score_samples([[1, 1]]), [1.0], atol=1e-6)
    Z = est.transform([[1, 1], [1, -1]])
    np.testing.assert_allclose(np.linalg.norm(Z, axis=1), [1, 1], atol=1e-6)


def test_params_and_clone():
    est = LoewnerEllipsoid(tol=1e-5, max_iter=50)
    assert est.get_params() == {"tol": 1e-5, "max_iter": 50}
    c = clone(est)
    assert c.get_params() == est.get_params() and not hasattr(c, "shape_")


def test_not_fitted_and_feature_mismatch():
    with pytest.raises(NotFittedError):
        LoewnerEllipsoid().transform([[1, 0]])
    est = LoewnerEllipsoid().fit(np.random.default_rng(0).standard_normal((6, 3)))
    with pytest.raises(ValueError):
        est.transform([[1, 0]])
    with pytest.raises(ValueError):
        LoewnerEllipsoid(tol=0).fit([[1, 0], [0, 1]])


def test_tensor_norm_transformer_features():
    tr = TensorNormTransformer(CUBE2, CUBE2)
    out = tr.fit_transform([[1, 0, 0, 1], [1, 1, 1, -1], [0.5, 0, 0, 0]])
    np.testing.assert_allclose(out[:, 0], [1, 1, 0.5])
    np.testing.assert_allclose(out[:, 1], [1, 2, 0.5])
    np.testing.assert_allclose(out[:, 2], [1, np.sqrt(2), 0.5], atol=1e-4)
    assert list(tr.get_feature_names_out()) == ["eps", "pi", "omega2"]


def test_transformer_in_pipeline_and_validation():
    pipe = make_pipeline(FunctionTransformer(lambda X: 2 * np.asarray(X)),
                         TensorNormTransformer(CUBE2, VPolytope(identity(2)), norms=("eps",)))
    out = pipe.fit_transform([[1, 0, 0, 0]])
    assert out.shape == (1, 1) and out[0, 0] == 2
    with pytest.raises(ValueError):
        TensorNormTransformer(CUBE2, None).fit()
    with pytest.raises(ValueError):
        TensorNormTransformer(CUBE2, CUBE2, norms=("nuclear",)).fit()
    with pytest.raises(ValueError):
        TensorNormTransformer(CUBE2, CUBE2).fit().transform([[1, 2, 3]])
