import numpy as np
import pytest

from blqq.distributions import RandomStream
from blqq.simulate import (
    BIRTH_COLUMNS,
    SimulationScenario,
    gen_ar1_covariance,
    gen_birth_records,
    gen_replicate,
    gen_sparse_coefficients,
)


def test_ar1_covariance_values():
    S = gen_ar1_covariance(4)
    assert S[0, 0] == 1.0
    assert S[0, 1] == 0.5
    assert S[0, 3] == 0.125
    assert np.array_equal(S, S.T)
    assert np.all(np.linalg.eigvalsh(S) > 0)
    with pytest.raises(ValueError):
        gen_ar1_covariance(0)


def test_sparse_coefficients_support_and_magnitudes():
    beta = gen_sparse_coefficients(10, 0.2, RandomStream(0))
    nz = beta[beta != 0]
    assert nz.shape[0] == 2
    # |N(3,1)| magnitudes land well away from zero almost surely
    assert np.all(np.abs(nz) > 0.01)
    with pytest.raises(ValueError):
        gen_sparse_coefficients(10, 0.25, RandomStream(0))


def test_sparse_coefficients_sign_balance():
    signs = []
    for k in range(400):
        beta = gen_sparse_coefficients(4, 0.25, RandomStream(1000 + k))
        signs.append(np.sign(beta[beta != 0][0]))
    frac = np.mean(np.array(signs) > 0)
    assert 0.4 < frac < 0.6


def test_scenario_validates_sparsity():
    with pytest.raises(ValueError):
        SimulationScenario(p=10, sparsity=0.15)
    assert SimulationScenario(p=10, sparsity=0.5).n_nonzero == 5


def test_replicate_shapes_and_consistency():
    scenario = SimulationScenario(p=10, sparsity=0.2, n_train=100, n_test=50)
    rep = gen_replicate(scenario, 0)
    assert rep.train.X.shape == (100, 10)
    assert rep.test.X.shape == (50, 10)
    assert np.count_nonzero(rep.beta1_true) == 2
    assert np.count_nonzero(rep.beta2_true) == 2
    assert np.array_equal(rep.train.z, (rep.u_train >= 0).astype(int))
    assert np.array_equal(rep.test.z, (rep.u_test >= 0).astype(int))


def test_replicate_bit_identical_regeneration():
    scenario = SimulationScenario(base_seed=5)
    a = gen_replicate(scenario, 3)
    b = gen_replicate(scenario, 3)
    assert np.array_equal(a.train.X, b.train.X)
    assert np.array_equal(a.train.y, b.train.y)
    assert np.array_equal(a.beta1_true, b.beta1_true)
    c = gen_replicate(scenario, 4)
    assert not np.array_equal(a.train.X, c.train.X)


def test_coefficients_redrawn_or_fixed():
    varying = SimulationScenario(base_seed=6)
    a = gen_replicate(varying, 0)
    b = gen_replicate(varying, 1)
    assert not np.array_equal(a.beta1_true, b.beta1_true)
    fixed = SimulationScenario(base_seed=6, fix_coefficients=True)
    c = gen_replicate(fixed, 0)
    d = gen_replicate(fixed, 1)
    assert np.array_equal(c.beta1_true, d.beta1_true)
    assert not np.array_equal(c.train.X, d.train.X)


def test_replicate_population_moments():
    # large split: residual correlation, noise variance, predictor covariance
    scenario = SimulationScenario(p=4, sparsity=0.25, rho_true=0.7,
                                  sigma2_true=2.0, n_train=60_000, n_test=10,
                                  base_seed=7)
    rep = gen_replicate(scenario, 0)
    eta = rep.u_train - rep.train.X @ rep.beta1_true
    phi = rep.train.y - rep.train.X @ rep.beta2_true
    assert np.corrcoef(eta, phi)[0, 1] == pytest.approx(0.7, abs=0.01)
    assert eta.var() == pytest.approx(1.0, abs=0.02)
    assert phi.var() == pytest.approx(2.0, abs=0.04)
    emp = np.cov(rep.train.X.T)
    assert np.allclose(emp, gen_ar1_covariance(4), atol=0.02)


def test_birth_records_schema_and_consistency():
    data = gen_birth_records(0, n=2000)
    assert data.columns == BIRTH_COLUMNS
    assert data.X.shape == (2000, 9)
    day = data.X[:, 0]
    assert day.min() >= 1 and day.max() <= 366
    for j in (1, 3, 4, 5, 6, 7, 8):
        assert set(np.unique(data.X[:, j])) <= {0.0, 1.0}
    age = data.X[:, 2]
    assert 14.0 <= age.min() and age.max() <= 50.0
    # plausible grams and a preterm rate in a sane band
    assert 2000 < data.y.mean() < 4500
    assert 0.2 < data.z.mean() < 0.8
    again = gen_birth_records(0, n=2000)
    assert np.array_equal(data.y, again.y)


def test_birth_records_negative_dependence():
    # with rho < 0 the preterm group should weigh less on average
    data = gen_birth_records(1, n=20_000, rho=-0.85)
    assert data.y[data.z == 1].mean() < data.y[data.z == 0].mean() - 100
