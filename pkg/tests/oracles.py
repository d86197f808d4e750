"""Brute-force reference implementations used to check the fast paths.

Everything here materializes the full 2n-sized objects on purpose: these
oracles must stay independent of the shortcut formulas they validate.
"""
import numpy as np
from scipy import integrate, stats


def dense_blocks(X, sigma2, rho):
    n, p = X.shape
    s = np.sqrt(sigma2)
    Xfull = np.block([
        [X, np.zeros((n, p))],
        [np.zeros((n, p)), X],
    ])
    Sig_eps = np.block([
        [np.eye(n), rho * s * np.eye(n)],
        [rho * s * np.eye(n), sigma2 * np.eye(n)],
    ])
    return Xfull, Sig_eps


def dense_full_conditional(X, y, u, sigma2, rho, v1, v2):
    """mu_beta, sigma_beta by explicit 2n x 2n construction."""
    Xfull, Sig_eps = dense_blocks(X, sigma2, rho)
    Sinv = np.linalg.inv(Sig_eps)
    prior_inv = np.diag(np.concatenate([1.0 / v1, 1.0 / v2]))
    A = prior_inv + Xfull.T @ Sinv @ Xfull
    sigma_beta = np.linalg.inv(A)
    mu_beta = sigma_beta @ Xfull.T @ Sinv @ np.concatenate([u, y])
    return mu_beta, sigma_beta


def dense_loo_conditional(X, y, u, sigma2, rho, v1, v2, i):
    """mu_beta_-i, sigma_beta_-i by deleting row i of the u-equation."""
    n, p = X.shape
    Xfull, Sig_eps = dense_blocks(X, sigma2, rho)
    keep = [k for k in range(2 * n) if k != i]
    Xm = Xfull[keep]
    Sm = Sig_eps[np.ix_(keep, keep)]
    Sinv = np.linalg.inv(Sm)
    prior_inv = np.diag(np.concatenate([1.0 / v1, 1.0 / v2]))
    A = prior_inv + Xm.T @ Sinv @ Xm
    sigma_mi = np.linalg.inv(A)
    resp = np.concatenate([np.delete(u, i), y])
    mu_mi = sigma_mi @ Xm.T @ Sinv @ resp
    return mu_mi, sigma_mi


def dense_loo_moments(X, y, u, sigma2, rho, v1, v2, i):
    """Leave-one-out predictive mean/variance of u_i from the dense route."""
    mu_mi, sigma_mi = dense_loo_conditional(X, y, u, sigma2, rho, v1, v2, i)
    s = np.sqrt(sigma2)
    w = rho / s
    b = np.concatenate([X[i], -w * X[i]])
    m = w * y[i] + b @ mu_mi
    v = b @ sigma_mi @ b + (1.0 - rho * rho)
    return m, v


def quadrature_joint_loglik(X, y, z, beta1, beta2, sigma2, rho):
    """Per-observation numeric integration of the latent region probability."""
    s = np.sqrt(sigma2)
    total = 0.0
    for i in range(X.shape[0]):
        mean = np.array([X[i] @ beta1, X[i] @ beta2])
        cov = np.array([[1.0, rho * s], [rho * s, sigma2]])
        rv = stats.multivariate_normal(mean=mean, cov=cov)
        lo, hi = (0.0, np.inf) if z[i] == 1 else (-np.inf, 0.0)
        val, _ = integrate.quad(lambda uu: rv.pdf([uu, y[i]]), lo, hi)
        total += np.log(val)
    return total


def grid_quadrature_posterior_mean_beta(X, y, z, sigma2, rho, v1, v2, grid):
    """Posterior mean of (beta1, beta2) for p=1 by 2-D grid quadrature.

    Posterior ~ prior N(0, diag(v1, v2)) times the u-integrated likelihood.
    """
    from blqq.model import Dataset, ParameterState, joint_log_likelihood
    data = Dataset(X, y, z)
    logpost = np.empty((grid.size, grid.size))
    for a, b1 in enumerate(grid):
        for c, b2 in enumerate(grid):
            params = ParameterState(beta1=np.array([b1]), beta2=np.array([b2]),
                                    sigma2=sigma2, rho=rho,
                                    u=np.zeros(X.shape[0]))
            lp = joint_log_likelihood(data, params)
            lp += -0.5 * b1 * b1 / v1 - 0.5 * b2 * b2 / v2
            logpost[a, c] = lp
    w = np.exp(logpost - logpost.max())
    w /= w.sum()
    mean_b1 = float((w.sum(axis=1) * grid).sum())
    mean_b2 = float((w.sum(axis=0) * grid).sum())
    return mean_b1, mean_b2
