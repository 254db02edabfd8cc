import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from sphereflow.analysis import gage_residual
from sphereflow.estimator import CurveShorteningFlow, check_curves
from sphereflow.exceptions import InvalidCurve
from sphereflow.flow import FlowParams, evolve
from sphereflow.harness.generators import PerturbationSpec, gen_latitude_circle, gen_perturbed_bisector


def batch():
    return np.stack([gen_perturbed_bisector(PerturbationSpec(seed=k, amplitude=0.2, modes=2, n=64)).vertices for k in range(3)])


def test_transform_matches_evolve():
    X = batch()
    est = CurveShorteningFlow(t_end=0.2, resample_n=64)
    Y = est.fit_transform(X)
    assert Y.shape == (3, 64, 3)
    ref = evolve(X[1], FlowParams(t_end=0.2, resample_n=64, record_every=50)).final.vertices
    np.testing.assert_array_equal(Y[1], ref)
    assert [s.kind for s in est.terminal_status_] == ["ReachedEnd"] * 3


def test_transform_flattens_toward_great_circles():
    X = batch()
    Y = CurveShorteningFlow(t_end=2.0, resample_n=64).fit_transform(X)
    assert all(gage_residual(y) < 0.5 * gage_residual(x) for x, y in zip(X, Y))


def test_params_are_sklearn_compatible():
    est = CurveShorteningFlow(t_end=0.5, cfl_factor=0.1)
    assert clone(est).get_params() == est.get_params()
    est.set_params(resample_n=128)
    assert est.resample_n == 128
    assert make_pipeline(CurveShorteningFlow(t_end=0.01, resample_n=64)).fit_transform(batch()).shape == (3, 64, 3)


def test_fit_validates_params():
    with pytest.raises(ValueError):
        CurveShorteningFlow(cfl_factor=1.0).fit()


def test_strict_mode_raises_on_singular_curve():
    small = gen_latitude_circle(0.2, 64).vertices
    with pytest.raises(RuntimeError):
        CurveShorteningFlow(t_end=1.0, resample_n=64, strict=True).fit_transform([small])
    est = CurveShorteningFlow(t_end=1.0, resample_n=64)
    est.fit_transform(small)
    assert est.terminal_status_[0].kind == "Singular"


def test_check_curves():
    assert len(check_curves(batch()[0])) == 1
    with pytest.raises(InvalidCurve):
        check_curves([np.ones((5, 3))])
