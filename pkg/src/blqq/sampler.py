"""Gibbs/MH engine for the joint latent-variable model.

The latent sweep integrates the regression coefficients out and samples each
u_i from its leave-one-out truncated normal. The leave-one-out moments are
obtained from the full-data full conditional of beta through a rank-one
covariance downdate: because the error precision factorizes as a 2x2 matrix
kroneckered with the identity, the downdate scalars collapse to
c = 1/(1-rho^2) and b_i = [x_i; -(rho/sigma) x_i], and no n-sized matrix is
ever formed. The same structure gives the O(p) incremental update of the
right-hand statistic as each u_i is refreshed mid-sweep.
"""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import linalg as sla
from scipy import special

from .distributions import (
    RandomStream,
    _trunc_std_lower,
    sample_scaled_inv_chi2,
)
from .model import (
    ChainConfig,
    Dataset,
    EffectOrders,
    HyperState,
    ParameterState,
    PriorConfig,
    prior_variance_diagonal,
)

_DENOM_FLOOR = 1e-10
_COND_LIMIT = 1e12


class IllConditionedError(RuntimeError):
    """Raised when the 2p x 2p full-conditional system is numerically singular."""

    def __init__(self, cond_estimate):
        self.cond_estimate = cond_estimate
        super().__init__(f"full-conditional system ill-conditioned (cond ~ {cond_estimate:.3e})")


@dataclass
class FullConditionalBeta:
    """Full conditional N(mu_beta, sigma_beta) of the stacked (beta1, beta2)."""

    mu_beta: np.ndarray
    sigma_beta: np.ndarray
    chol: np.ndarray            # lower Cholesky factor of sigma_beta
    precision: np.ndarray       # cached for the degenerate-downdate fallback


@dataclass
class SamplerWorkspace:
    """Precomputed cross-products and incrementally maintained statistics."""

    X: np.ndarray
    y: np.ndarray
    z: np.ndarray
    gram: np.ndarray            # X'X
    xty: np.ndarray             # X'y
    xtu: np.ndarray             # X'u, maintained incrementally during sweeps
    u: np.ndarray               # view of the current latent vector
    eta: np.ndarray             # u - X beta1
    phi: np.ndarray             # y - X beta2
    loo_fallbacks: int = 0

    @classmethod
    def build(cls, data: Dataset, state: ParameterState) -> "SamplerWorkspace":
        X, y = data.X, data.y
        return cls(
            X=X,
            y=y,
            z=data.z,
            gram=X.T @ X,
            xty=X.T @ y,
            xtu=X.T @ state.u,
            u=state.u,
            eta=state.u - X @ state.beta1,
            phi=y - X @ state.beta2,
        )

    def refresh_residuals(self, state: ParameterState) -> None:
        self.eta = state.u - self.X @ state.beta1
        self.phi = self.y - self.X @ state.beta2


def _statistic(ws: SamplerWorkspace, sigma2: float, rho: float) -> np.ndarray:
    """Right-hand statistic X_full' Sigma_eps^{-1} [u; y] as a 2p vector."""
    s = math.sqrt(sigma2)
    one_m = 1.0 - rho * rho
    t1 = (ws.xtu - (rho / s) * ws.xty) / one_m
    t2 = (-(rho / s) * ws.xtu + ws.xty / sigma2) / one_m
    return np.concatenate([t1, t2])


def _as_diag(V) -> np.ndarray:
    V = np.asarray(V, dtype=float)
    return np.diag(V) if V.ndim == 2 else V


def compute_beta_full_conditional(ws: SamplerWorkspace, u, y, sigma2, rho, V1, V2) -> FullConditionalBeta:
    """Mean and covariance of beta | u, y, sigma2, rho with prior N(0, diag(V1, V2)).

    Built directly from the p x p Gram matrix via the Kronecker structure of
    the error precision; nothing of size n enters the linear algebra.
    """
    if not -1.0 < rho < 1.0:
        raise ValueError("rho must lie in (-1, 1)")
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    v1 = _as_diag(V1)
    v2 = _as_diag(V2)
    p = ws.gram.shape[0]
    s = math.sqrt(sigma2)
    one_m = 1.0 - rho * rho
    k11 = 1.0 / one_m
    k12 = -rho / (one_m * s)
    k22 = 1.0 / (one_m * sigma2)

    A = np.empty((2 * p, 2 * p))
    A[:p, :p] = k11 * ws.gram
    A[:p, :p][np.diag_indices(p)] += 1.0 / v1
    A[p:, p:] = k22 * ws.gram
    A[p:, p:][np.diag_indices(p)] += 1.0 / v2
    A[:p, p:] = k12 * ws.gram
    A[p:, :p] = A[:p, p:].T

    eigs = np.linalg.eigvalsh(A)
    if eigs[0] <= 0.0 or eigs[-1] / eigs[0] > _COND_LIMIT:
        raise IllConditionedError(np.inf if eigs[0] <= 0 else eigs[-1] / eigs[0])

    L = np.linalg.cholesky(A)
    Linv = sla.solve_triangular(L, np.eye(2 * p), lower=True)
    sigma_beta = Linv.T @ Linv
    sigma_beta = 0.5 * (sigma_beta + sigma_beta.T)

    ws.xtu = ws.X.T @ np.asarray(u, dtype=float)
    t = _statistic(ws, sigma2, rho)
    mu_beta = sigma_beta @ t
    return FullConditionalBeta(
        mu_beta=mu_beta,
        sigma_beta=sigma_beta,
        chol=np.linalg.cholesky(sigma_beta),
        precision=A,
    )


def loo_downdate(fc: FullConditionalBeta, ws: SamplerWorkspace, i: int, sigma2, rho):
    """Leave-one-out (mu_beta_-i, sigma_beta_-i) after removing observation i
    from the u-equation, via the rank-one shortcut.

    Falls back to a direct inversion of the downdated 2p x 2p precision when
    the shortcut denominator degenerates; the fallback count is tracked on the
    workspace.
    """
    s = math.sqrt(sigma2)
    w = rho / s
    c = 1.0 / (1.0 - rho * rho)
    x_i = ws.X[i]
    b = np.concatenate([x_i, -w * x_i])
    t_mi = _statistic(ws, sigma2, rho) - (c * (ws.u[i] - w * ws.y[i])) * b

    q = fc.sigma_beta @ b
    d = float(b @ q)
    denom = 1.0 - c * d
    if denom < _DENOM_FLOOR:
        ws.loo_fallbacks += 1
        sigma_mi = np.linalg.inv(fc.precision - c * np.outer(b, b))
        sigma_mi = 0.5 * (sigma_mi + sigma_mi.T)
    else:
        sigma_mi = fc.sigma_beta + (c / denom) * np.outer(q, q)
    return sigma_mi @ t_mi, sigma_mi


def _draw_halfline(m: float, v: float, nonnegative: bool, gen) -> float:
    sd = math.sqrt(v)
    if nonnegative:
        return m + sd * _trunc_std_lower(-m / sd, gen)
    val = -(-m + sd * _trunc_std_lower(m / sd, gen))
    return val if val < 0.0 else -np.finfo(float).tiny


def sample_u_sweep(data: Dataset, state: ParameterState, fc: FullConditionalBeta,
                   ws: SamplerWorkspace, rng: RandomStream) -> np.ndarray:
    """One in-order sweep of u_1..u_n from their leave-one-out conditionals.

    Each u_i is drawn from N(m_i, v_i) truncated to the half-line dictated by
    z_i, with beta integrated out; the statistic X' Sigma_eps^{-1}[u; y] is
    updated in O(p) immediately after each draw so later indices condition on
    the partially updated u.
    """
    X, y, z = ws.X, ws.y, ws.z
    n, p = X.shape
    u = state.u
    rho, sigma2 = state.rho, state.sigma2
    s = math.sqrt(sigma2)
    w = rho / s
    one_m = 1.0 - rho * rho
    c = 1.0 / one_m
    gen = rng.generator

    B = np.hstack([X, -w * X])
    Q = B @ fc.sigma_beta
    d = np.einsum("ij,ij->i", Q, B)
    denom = 1.0 - c * d
    t = _statistic(ws, sigma2, rho)

    for i in range(n):
        yi = y[i]
        ui = u[i]
        if denom[i] < _DENOM_FLOOR:
            ws.loo_fallbacks += 1
            b = B[i]
            sigma_mi = np.linalg.inv(fc.precision - c * np.outer(b, b))
            mu_mi = sigma_mi @ (t - (c * (ui - w * yi)) * b)
            m = w * yi + float(b @ mu_mi)
            v = float(b @ sigma_mi @ b) + one_m
        else:
            m = w * yi + (float(Q[i] @ t) - c * d[i] * (ui - w * yi)) / denom[i]
            v = d[i] / denom[i] + one_m
        if v < one_m:
            v = one_m
        un = _draw_halfline(m, v, z[i] == 1, gen)
        delta = un - ui
        u[i] = un
        xd = delta * X[i]
        t[:p] += c * xd
        t[p:] -= (c * w) * xd
        ws.xtu += xd
    return u


def sample_beta(fc: FullConditionalBeta, rng: RandomStream):
    """One joint draw of (beta1, beta2) from the cached full conditional."""
    draw = fc.mu_beta + fc.chol @ rng.generator.standard_normal(fc.mu_beta.shape[0])
    p = draw.shape[0] // 2
    return draw[:p], draw[p:]


def _cross_quad(eta, phi, sigma2, rho) -> float:
    s = math.sqrt(sigma2)
    return float(np.sum(sigma2 * eta * eta - (2.0 * rho * s) * phi * eta + phi * phi))


def _log_sigma2_target(sigma2, eta, phi, rho, n, prior: PriorConfig, joint: bool) -> float:
    nu0 = prior.sigma2_prior_dof
    if joint:
        bracket = _cross_quad(eta, phi, sigma2, rho) / (1.0 - rho * rho) \
            + nu0 * prior.sigma2_prior_scale
    else:
        # rho frozen at 0 with cross-terms disabled: the latent residuals drop
        # out of the conditional exactly.
        bracket = float(phi @ phi) + nu0 * prior.sigma2_prior_scale
    return -0.5 * (n + 2.0 + nu0) * math.log(sigma2) - bracket / (2.0 * sigma2)


def sample_sigma2_mh(state: ParameterState, ws: SamplerWorkspace, prior: PriorConfig,
                     step: float, rng: RandomStream, joint: bool = True):
    """Random-walk MH on log sigma^2 (Jacobian included)."""
    gen = rng.generator
    n = ws.y.shape[0]
    cur = state.sigma2
    prop = math.exp(math.log(cur) + step * gen.standard_normal())
    log_ratio = (
        _log_sigma2_target(prop, ws.eta, ws.phi, state.rho, n, prior, joint)
        - _log_sigma2_target(cur, ws.eta, ws.phi, state.rho, n, prior, joint)
        + math.log(prop) - math.log(cur)
    )
    unif = gen.random()
    if math.log(max(unif, 1e-300)) < log_ratio:
        return prop, True
    return cur, False


def _log_rho_target(rho, eta, phi, sigma2, n) -> float:
    one_m = 1.0 - rho * rho
    return -0.5 * n * math.log(one_m) \
        - _cross_quad(eta, phi, sigma2, rho) / (2.0 * sigma2 * one_m)


def sample_rho_mh(state: ParameterState, ws: SamplerWorkspace, step: float, rng: RandomStream):
    """Random-walk MH on atanh(rho) (Jacobian included; flat prior on (-1,1))."""
    gen = rng.generator
    n = ws.y.shape[0]
    cur = state.rho
    zp = math.atanh(cur) + step * gen.standard_normal()
    prop = math.tanh(zp)
    log_ratio = (
        _log_rho_target(prop, ws.eta, ws.phi, state.sigma2, n)
        - _log_rho_target(cur, ws.eta, ws.phi, state.sigma2, n)
        + math.log1p(-prop * prop) - math.log1p(-cur * cur)
    )
    unif = gen.random()
    if math.log(max(unif, 1e-300)) < log_ratio:
        return prop, True
    return cur, False


def sample_tau2(beta_k, orders: EffectOrders, r_k, prior: PriorConfig, rng: RandomStream) -> float:
    """Conjugate scaled-inv-chi^2 draw for one prior variance tau_k^2."""
    beta_k = np.asarray(beta_k, dtype=float)
    rpow = np.power(float(r_k), orders.orders.astype(float))
    quad = float(np.sum(beta_k * beta_k / rpow))
    p = beta_k.shape[0]
    dof = prior.nu + p
    scale = (quad + prior.nu * prior.delta_sq) / dof
    return float(sample_scaled_inv_chi2(dof, scale, rng))


def _log_r_target(r, beta_sq, orders_f, tau_sq, a, b) -> float:
    return (
        -0.5 * float(orders_f.sum()) * math.log(r)
        - float(np.sum(beta_sq * np.power(r, -orders_f))) / (2.0 * tau_sq)
        + (a - 1.0) * math.log(r)
        + (b - 1.0) * math.log1p(-r)
    )


def sample_r_mh(beta_k, tau_sq_k, orders: EffectOrders, prior: PriorConfig,
                step: float, rng: RandomStream, current: float = None):
    """Random-walk MH on logit(r) for one shrinkage decay parameter."""
    gen = rng.generator
    beta_sq = np.asarray(beta_k, dtype=float) ** 2
    orders_f = orders.orders.astype(float)
    cur = float(current)
    if not 0.0 < cur < 1.0:
        raise ValueError("current r must lie in (0, 1)")
    logit = math.log(cur) - math.log1p(-cur)
    prop = 1.0 / (1.0 + math.exp(-(logit + step * gen.standard_normal())))
    prop = min(max(prop, 1e-12), 1.0 - 1e-12)
    log_ratio = (
        _log_r_target(prop, beta_sq, orders_f, tau_sq_k, prior.a, prior.b)
        - _log_r_target(cur, beta_sq, orders_f, tau_sq_k, prior.a, prior.b)
        + math.log(prop) + math.log1p(-prop)
        - math.log(cur) - math.log1p(-cur)
    )
    unif = gen.random()
    if math.log(max(unif, 1e-300)) < log_ratio:
        return prop, True
    return cur, False


def init_state(data: Dataset, prior: PriorConfig, cfg: ChainConfig):
    """Initialization: least squares for beta2/sigma^2, probit MLE for beta1,
    sign-corrected link values for u, sample correlation for rho."""
    X, y, z = data.X, data.y, data.z
    n, p = X.shape

    beta2, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < p:
        warnings.warn("X'X is singular; using ridge-regularized least squares", RuntimeWarning)
        beta2 = np.linalg.solve(X.T @ X + 1e-6 * np.eye(p), X.T @ y)
    resid = y - X @ beta2
    sigma2 = max(float(resid @ resid) / n, 1e-6)

    beta1 = _probit_mle(X, z)
    xb = X @ beta1
    mag = np.maximum(np.abs(xb), 1e-3)
    u0 = np.where(z == 1, mag, -mag)

    if np.std(u0) > 0 and np.std(y) > 0:
        rho0 = float(np.corrcoef(u0, y)[0, 1])
    else:
        rho0 = 0.0
    rho0 = min(max(rho0, -0.95), 0.95)

    state = ParameterState(beta1=beta1, beta2=beta2, sigma2=sigma2, rho=rho0, u=u0)
    hyper = HyperState(
        tau1_sq=cfg.init_tau1_sq,
        tau2_sq=cfg.init_tau2_sq,
        r1=cfg.init_r1,
        r2=cfg.init_r2,
    )
    return state, hyper


def _probit_mle(X, z, max_iter=50):
    """Probit coefficients by Fisher scoring; ridge-penalized on separation."""
    n, p = X.shape
    if len(np.unique(z)) < 2:
        warnings.warn("binary response is constant; using ridge-penalized probit", RuntimeWarning)
        return _probit_ridge(X, z, lam=1.0, max_iter=max_iter)
    beta = np.zeros(p)
    for _ in range(max_iter):
        lin = np.clip(X @ beta, -8.0, 8.0)
        cdf = special.ndtr(lin)
        pdf = np.exp(-0.5 * lin * lin) / math.sqrt(2.0 * math.pi)
        cdf = np.clip(cdf, 1e-10, 1.0 - 1e-10)
        wgt = pdf * pdf / (cdf * (1.0 - cdf))
        grad = X.T @ (pdf * (z - cdf) / (cdf * (1.0 - cdf)))
        hess = X.T @ (wgt[:, None] * X) + 1e-8 * np.eye(p)
        try:
            delta = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            warnings.warn("probit scoring failed; using ridge-penalized probit", RuntimeWarning)
            return _probit_ridge(X, z, lam=1.0, max_iter=max_iter)
        beta = beta + delta
        if not np.all(np.isfinite(beta)) or np.max(np.abs(beta)) > 50.0:
            warnings.warn("probit separation detected; using ridge-penalized probit", RuntimeWarning)
            return _probit_ridge(X, z, lam=1.0, max_iter=max_iter)
        if np.max(np.abs(delta)) < 1e-8:
            break
    return beta


def _probit_ridge(X, z, lam=1.0, max_iter=50):
    n, p = X.shape
    beta = np.zeros(p)
    for _ in range(max_iter):
        lin = np.clip(X @ beta, -8.0, 8.0)
        cdf = np.clip(special.ndtr(lin), 1e-10, 1.0 - 1e-10)
        pdf = np.exp(-0.5 * lin * lin) / math.sqrt(2.0 * math.pi)
        wgt = pdf * pdf / (cdf * (1.0 - cdf))
        grad = X.T @ (pdf * (z - cdf) / (cdf * (1.0 - cdf))) - lam * beta
        hess = X.T @ (wgt[:, None] * X) + lam * np.eye(p)
        delta = np.linalg.solve(hess, grad)
        beta = beta + delta
        if np.max(np.abs(delta)) < 1e-8:
            break
    return beta


@dataclass
class ChainOutput:
    """Stored post-burn-in draws plus acceptance and timing bookkeeping."""

    beta1: np.ndarray           # (S, p)
    beta2: np.ndarray           # (S, p)
    sigma2: np.ndarray          # (S,)
    rho: np.ndarray
    tau1_sq: np.ndarray
    tau2_sq: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    acceptance: dict            # target -> post-adaptation acceptance rate
    accept_counts: dict         # target -> (accepted, proposed)
    final_u: np.ndarray
    config: ChainConfig
    loo_fallbacks: int
    timings: dict = field(default_factory=dict)

    @property
    def n_stored(self) -> int:
        return self.sigma2.shape[0]


_MH_TARGETS = ("sigma2", "rho", "r1", "r2")

# Adapted step sizes stay inside these bounds. The ceiling has to be generous:
# when the data carry little information about r its logit-scale posterior is
# heavy-tailed, and reaching 0.35 acceptance needs steps well beyond 10.
_STEP_BOUNDS = (1e-3, 80.0)


def run_chain(data: Dataset, orders: EffectOrders, prior: PriorConfig, cfg: ChainConfig) -> ChainOutput:
    """Full Gibbs run: init, then per iteration the u-sweep, the joint beta
    draw, MH moves for sigma^2 and rho, conjugate tau^2 draws, and MH moves
    for r1/r2. MH steps adapt toward 0.35 acceptance during burn-in only."""
    state, hyper = init_state(data, prior, cfg)
    joint = not cfg.freeze_rho_at_zero
    if not joint:
        state = ParameterState(beta1=state.beta1, beta2=state.beta2,
                               sigma2=state.sigma2, rho=0.0, u=state.u)

    root = RandomStream(cfg.seed)
    rngs = {name: root.substream(k) for k, name in enumerate(
        ("u", "beta", "sigma2", "rho", "tau1", "tau2", "r1", "r2"), start=1)}

    ws = SamplerWorkspace.build(data, state)
    X, y = data.X, data.y
    p = data.p

    steps = {"sigma2": cfg.mh_step_sigma2, "rho": cfg.mh_step_rho,
             "r1": cfg.mh_step_r, "r2": cfg.mh_step_r}
    accepted = {t: 0 for t in _MH_TARGETS}
    proposed = {t: 0 for t in _MH_TARGETS}

    n_store = (cfg.iterations - cfg.burn_in) // cfg.thin
    store = {
        "beta1": np.empty((n_store, p)),
        "beta2": np.empty((n_store, p)),
        "sigma2": np.empty(n_store),
        "rho": np.empty(n_store),
        "tau1_sq": np.empty(n_store),
        "tau2_sq": np.empty(n_store),
        "r1": np.empty(n_store),
        "r2": np.empty(n_store),
    }
    timings = {"u_sweep": 0.0, "beta": 0.0, "sigma2_rho": 0.0, "hyper": 0.0}

    s_idx = 0
    for j in range(1, cfg.iterations + 1):
        try:
            v1 = prior_variance_diagonal(orders, hyper.tau1_sq, hyper.r1)
            v2 = prior_variance_diagonal(orders, hyper.tau2_sq, hyper.r2)

            tic = time.perf_counter()
            fc = compute_beta_full_conditional(ws, state.u, y, state.sigma2, state.rho, v1, v2)
            if cfg.update_u:
                sample_u_sweep(data, state, fc, ws, rngs["u"])
                xtu_ref = X.T @ state.u
                err = np.linalg.norm(ws.xtu - xtu_ref)
                if err > 1e-8 * max(np.linalg.norm(xtu_ref), 1.0):
                    raise RuntimeError("incremental X'u statistic drifted")
                ws.xtu = xtu_ref
                fc.mu_beta = fc.sigma_beta @ _statistic(ws, state.sigma2, state.rho)
            timings["u_sweep"] += time.perf_counter() - tic

            tic = time.perf_counter()
            if cfg.update_beta:
                b1, b2 = sample_beta(fc, rngs["beta"])
                state.beta1, state.beta2 = b1, b2
            ws.refresh_residuals(state)
            timings["beta"] += time.perf_counter() - tic

            tic = time.perf_counter()
            mh_hits = {}
            if cfg.update_sigma2:
                val, acc = sample_sigma2_mh(state, ws, prior, steps["sigma2"],
                                            rngs["sigma2"], joint=joint)
                state.sigma2 = val
                mh_hits["sigma2"] = acc
            if cfg.update_rho and joint:
                val, acc = sample_rho_mh(state, ws, steps["rho"], rngs["rho"])
                state.rho = val
                mh_hits["rho"] = acc
            timings["sigma2_rho"] += time.perf_counter() - tic

            tic = time.perf_counter()
            if cfg.update_hyper:
                hyper.tau1_sq = sample_tau2(state.beta1, orders, hyper.r1, prior, rngs["tau1"])
                hyper.tau2_sq = sample_tau2(state.beta2, orders, hyper.r2, prior, rngs["tau2"])
                r1, acc1 = sample_r_mh(state.beta1, hyper.tau1_sq, orders, prior,
                                       steps["r1"], rngs["r1"], current=hyper.r1)
                hyper.r1 = r1
                mh_hits["r1"] = acc1
                r2, acc2 = sample_r_mh(state.beta2, hyper.tau2_sq, orders, prior,
                                       steps["r2"], rngs["r2"], current=hyper.r2)
                hyper.r2 = r2
                mh_hits["r2"] = acc2
            timings["hyper"] += time.perf_counter() - tic
        except (IllConditionedError, np.linalg.LinAlgError, FloatingPointError) as exc:
            raise RuntimeError(f"numeric failure at iteration {j}: {exc}") from exc

        if j <= cfg.burn_in and cfg.adapt_during_burnin:
            gamma = j ** -0.6
            for t, acc in mh_hits.items():
                proposal = steps[t] * math.exp(gamma * ((1.0 if acc else 0.0) - 0.35))
                steps[t] = min(max(proposal, _STEP_BOUNDS[0]), _STEP_BOUNDS[1])
        elif j > cfg.burn_in:
            for t, acc in mh_hits.items():
                proposed[t] += 1
                if acc:
                    accepted[t] += 1

        if j > cfg.burn_in and (j - cfg.burn_in) % cfg.thin == 0:
            store["beta1"][s_idx] = state.beta1
            store["beta2"][s_idx] = state.beta2
            store["sigma2"][s_idx] = state.sigma2
            store["rho"][s_idx] = state.rho
            store["tau1_sq"][s_idx] = hyper.tau1_sq
            store["tau2_sq"][s_idx] = hyper.tau2_sq
            store["r1"][s_idx] = hyper.r1
            store["r2"][s_idx] = hyper.r2
            s_idx += 1

    rates = {t: (accepted[t] / proposed[t] if proposed[t] else float("nan"))
             for t in _MH_TARGETS}
    return ChainOutput(
        beta1=store["beta1"], beta2=store["beta2"], sigma2=store["sigma2"],
        rho=store["rho"], tau1_sq=store["tau1_sq"], tau2_sq=store["tau2_sq"],
        r1=store["r1"], r2=store["r2"],
        acceptance=rates,
        accept_counts={t: (accepted[t], proposed[t]) for t in _MH_TARGETS},
        final_u=state.u.copy(),
        config=replace(cfg),
        loo_fallbacks=ws.loo_fallbacks,
        timings=timings,
    )
