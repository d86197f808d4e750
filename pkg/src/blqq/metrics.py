"""Loss measures, credible-interval variable selection, and chain diagnostics."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


@dataclass
class PosteriorSummary:
    """Per-parameter mean, sd, and equal-tailed 95% interval endpoints."""

    names: list
    mean: np.ndarray
    sd: np.ndarray
    q025: np.ndarray
    q975: np.ndarray


@dataclass
class LossReport:
    rmse: float
    me: float
    fsl: int
    fp: int
    fn: int
    l2_beta1: float
    l2_beta2: float
    rho_hat: float


def summarize_draws(draws: np.ndarray, names) -> PosteriorSummary:
    """Summary of a (draws x parameters) matrix of post-burn-in samples."""
    draws = np.atleast_2d(np.asarray(draws, dtype=float))
    if draws.shape[0] < 1:
        raise ValueError("no draws to summarize")
    q = np.quantile(draws, [0.025, 0.975], axis=0)
    return PosteriorSummary(
        names=list(names),
        mean=draws.mean(axis=0),
        sd=draws.std(axis=0, ddof=1) if draws.shape[0] > 1 else np.zeros(draws.shape[1]),
        q025=q[0],
        q975=q[1],
    )


def rmse(y_true, y_pred) -> float:
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    if y_true.shape != y_pred.shape or y_true.size < 1:
        raise ValueError("inputs must be nonempty vectors of equal length")
    return float(np.sqrt(np.mean((y_true - y_pred) ** 2)))


def misclassification(z_true, z_pred) -> float:
    z_true = np.asarray(z_true)
    z_pred = np.asarray(z_pred)
    if z_true.shape != z_pred.shape:
        raise ValueError("inputs must have equal length")
    return float(np.mean(z_true != z_pred))


def l2_loss(beta_hat, beta_true) -> float:
    """Squared Euclidean distance between estimated and true coefficients."""
    beta_hat = np.asarray(beta_hat, dtype=float)
    beta_true = np.asarray(beta_true, dtype=float)
    if beta_hat.shape != beta_true.shape:
        raise ValueError("inputs must have equal length")
    diff = beta_hat - beta_true
    return float(diff @ diff)


def select_via_ci(summary: PosteriorSummary) -> np.ndarray:
    """Coefficient selected iff its 95% interval excludes 0 (closed-interval
    convention: an endpoint exactly at 0 counts as containing 0)."""
    return ~((summary.q025 <= 0.0) & (0.0 <= summary.q975))


def fsl(selected, true_support):
    """False positives, false negatives, and their sum over a support vector."""
    selected = np.asarray(selected, dtype=bool)
    true_support = np.asarray(true_support, dtype=bool)
    if selected.shape != true_support.shape:
        raise ValueError("inputs must have equal length")
    fp = int(np.sum(selected & ~true_support))
    fn = int(np.sum(~selected & true_support))
    return fp, fn, fp + fn


def acf(chain, max_lag: int) -> np.ndarray:
    """Sample autocorrelations for lags 0..max_lag (lag 0 is 1)."""
    chain = np.asarray(chain, dtype=float)
    n = chain.shape[0]
    if n < 2 * max_lag:
        raise ValueError("need at least 2 * max_lag draws")
    centered = chain - chain.mean()
    c0 = float(centered @ centered) / n
    if c0 == 0.0:
        out = np.zeros(max_lag + 1)
        out[0] = 1.0
        return out
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for k in range(1, max_lag + 1):
        out[k] = float(centered[:-k] @ centered[k:]) / n / c0
    return out


def effective_sample_size(chain) -> float:
    """ESS via Geyer's initial-positive-sequence truncation of the ACF sum.

    A zero-variance chain is reported as degenerate (ESS 1.0) with a warning
    rather than an error.
    """
    chain = np.asarray(chain, dtype=float)
    n = chain.shape[0]
    if n < 100:
        raise ValueError("need at least 100 draws")
    if np.std(chain) == 0.0:
        warnings.warn("constant chain: effective sample size is degenerate", RuntimeWarning)
        return 1.0
    max_lag = min(n // 2 - 1, 1000)
    rho = acf(chain, max_lag)
    # Sum consecutive-lag pairs while their sum stays positive.
    tau = 1.0
    m = 1
    while m + 1 <= max_lag:
        pair = rho[m] + rho[m + 1]
        if pair <= 0.0:
            break
        tau += 2.0 * pair
        m += 2
    ess = n / tau
    return float(min(max(ess, 1.0), n))
