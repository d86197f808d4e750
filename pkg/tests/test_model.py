import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from blqq.model import (
    ChainConfig,
    Dataset,
    EffectOrders,
    HyperState,
    ParameterState,
    PriorConfig,
    build_prior_covariance,
    joint_log_likelihood,
    predict,
    s_score,
)


def make_params(beta1, beta2, sigma2, rho, n=0):
    return ParameterState(beta1=np.asarray(beta1, dtype=float),
                          beta2=np.asarray(beta2, dtype=float),
                          sigma2=sigma2, rho=rho, u=np.zeros(n))


def test_dataset_validation():
    X = np.array([[1.0, 0.5], [0.3, -1.0], [0.0, 2.0]])
    data = Dataset(X, [1.0, 2.0, 3.0], [0, 1, 1])
    assert data.n == 3 and data.p == 2
    assert data.columns == ["x1", "x2"]
    with pytest.raises(ValueError):
        Dataset(X, [1.0, np.nan, 3.0], [0, 1, 1])
    with pytest.raises(ValueError):
        Dataset(X, [1.0, 2.0, 3.0], [0, 1, 2])
    with pytest.raises(ValueError):
        Dataset(X, [1.0, 2.0], [0, 1])
    with pytest.raises(ValueError):
        Dataset(X[:1], [1.0], [0])


def test_parameter_state_validation():
    with pytest.raises(ValueError):
        make_params([0.0], [0.0], -1.0, 0.0)
    with pytest.raises(ValueError):
        make_params([0.0], [0.0], 1.0, 1.0)


def test_hyper_state_validation():
    HyperState(0.5, 0.5, 0.3, 0.3)
    with pytest.raises(ValueError):
        HyperState(0.0, 0.5, 0.3, 0.3)
    with pytest.raises(ValueError):
        HyperState(0.5, 0.5, 1.0, 0.3)


def test_chain_config_validation():
    with pytest.raises(ValueError):
        ChainConfig(iterations=100, burn_in=100)
    with pytest.raises(ValueError):
        ChainConfig(iterations=0)


def test_s_score_independent_case():
    # rho = 0 reduces to the plain probit score x'beta1
    params = make_params([1.0, -2.0], [0.5, 0.5], 4.0, 0.0)
    x = np.array([2.0, 1.0])
    assert s_score(x, 10.0, params) == pytest.approx(0.0, abs=1e-15)


def test_s_score_hand_value():
    # (x'b1 + (rho/sigma)(y - x'b2)) / sqrt(1 - rho^2)
    params = make_params([0.5], [1.0], 4.0, 0.6)
    val = s_score(np.array([1.0]), 3.0, params)
    expected = (0.5 + (0.6 / 2.0) * (3.0 - 1.0)) / math.sqrt(1 - 0.36)
    assert val == pytest.approx(expected, rel=1e-12)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 5), st.floats(-0.9, 0.9))
def test_s_score_shift_invariance(b2, y_val, sigma2, rho):
    # only the residual y - x'beta2 enters; shifting both leaves s unchanged
    x = np.array([1.0])
    base = make_params([0.7], [b2], sigma2, rho)
    shifted = make_params([0.7], [b2 + 1.5], sigma2, rho)
    assert s_score(x, y_val, base) == pytest.approx(
        s_score(x, y_val + 1.5, shifted), rel=1e-9, abs=1e-9)


def test_joint_log_likelihood_matches_quadrature():
    rng = np.random.default_rng(0)
    n, p = 8, 2
    X = rng.standard_normal((n, p))
    beta1 = np.array([0.8, -0.4])
    beta2 = np.array([1.1, 0.6])
    y = X @ beta2 + rng.standard_normal(n)
    z = (rng.standard_normal(n) > 0).astype(int)
    data = Dataset(X, y, z)
    for rho, sigma2 in [(0.0, 1.0), (0.6, 2.0), (-0.8, 0.5)]:
        params = make_params(beta1, beta2, sigma2, rho, n=n)
        fast = joint_log_likelihood(data, params)
        slow = oracles.quadrature_joint_loglik(X, y, z, beta1, beta2, sigma2, rho)
        assert fast == pytest.approx(slow, rel=1e-7, abs=1e-7)


def test_joint_log_likelihood_extreme_scores_finite():
    # huge coefficients push the probit scores deep into the tails
    X = np.array([[1.0], [1.0], [-1.0]])
    data = Dataset(X, [0.0, 0.1, -0.2], [1, 0, 1])
    params = make_params([50.0], [0.0], 1.0, 0.0, n=3)
    assert np.isfinite(joint_log_likelihood(data, params))


def test_build_prior_covariance_pattern():
    orders = EffectOrders([0, 1, 1, 2])
    V = build_prior_covariance(orders, 1.0, 0.5)
    assert np.allclose(V, np.diag([1.0, 0.5, 0.5, 0.25]))
    with pytest.raises(ValueError):
        build_prior_covariance(orders, 1.0, 1.5)
    with pytest.raises(ValueError):
        build_prior_covariance(orders, -1.0, 0.5)


def test_prior_config_validation():
    with pytest.raises(ValueError):
        PriorConfig(nu=-1.0)


class _FakeChain:
    def __init__(self, beta1, beta2):
        self.beta1 = beta1
        self.beta2 = beta2


def test_predict_degenerate_chain():
    # single draw: prediction is just the plug-in value
    chain = _FakeChain(np.array([[0.0, 1.0]]), np.array([[2.0, -1.0]]))
    y_hat, p_z1 = predict(chain, np.array([1.0, 1.0]))
    assert y_hat == pytest.approx(1.0)
    from blqq.distributions import std_normal_cdf
    assert p_z1 == pytest.approx(std_normal_cdf(1.0), rel=1e-12)


def test_predict_averages_over_draws():
    chain = _FakeChain(np.array([[1.0], [-1.0]]), np.array([[2.0], [4.0]]))
    y_hat, p_z1 = predict(chain, np.array([1.0]))
    assert y_hat == pytest.approx(3.0)
    assert p_z1 == pytest.approx(0.5, abs=1e-12)  # Phi(1) + Phi(-1) averages to 1/2
