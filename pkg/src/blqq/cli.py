"""Command-line surface: simulate / fit / predict / replicate / summarize.

Every command is fully seeded; rerunning with the same flags produces
byte-identical output files. Exit codes: 0 success, 2 validation error,
3 numeric failure.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np
from scipy import special

from . import io as bio
from .baselines import fit_sm_b
from .distributions import inverse_mills
from .metrics import (
    LossReport,
    effective_sample_size,
    acf,
    fsl,
    l2_loss,
    misclassification,
    rmse,
    select_via_ci,
    summarize_draws,
)
from .model import ChainConfig, Dataset, EffectOrders, PriorConfig
from .sampler import IllConditionedError, run_chain
from .simulate import SimulationScenario, gen_replicate

GRID_RHOS = (0.0, 0.85, -0.5)
GRID_PS = (10, 30)
GRID_SPARSITIES = (0.2, 0.5)

LOSS_FIELDS = ("rmse", "me", "fsl", "l2_beta1", "l2_beta2", "rho_hat")


def _setting_name(rho, p, s) -> str:
    return f"rho{rho:g}_p{p}_s{s:g}"


def _add_chain_flags(ap):
    ap.add_argument("--iterations", type=int, default=10_000)
    ap.add_argument("--burn-in", type=int, default=1_000)
    ap.add_argument("--thin", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--nu", type=float, default=2.0)
    ap.add_argument("--delta-sq", type=float, default=2.0)
    ap.add_argument("--beta-a", type=float, default=0.1)
    ap.add_argument("--beta-b", type=float, default=0.1)
    ap.add_argument("--init-tau1-sq", type=float, default=0.5)
    ap.add_argument("--init-tau2-sq", type=float, default=0.5)
    ap.add_argument("--init-r1", type=float, default=0.3)
    ap.add_argument("--init-r2", type=float, default=0.3)
    ap.add_argument("--no-adapt", action="store_true")


def _chain_config(args) -> ChainConfig:
    return ChainConfig(
        iterations=args.iterations,
        burn_in=args.burn_in,
        thin=args.thin,
        seed=args.seed,
        adapt_during_burnin=not args.no_adapt,
        init_tau1_sq=args.init_tau1_sq,
        init_tau2_sq=args.init_tau2_sq,
        init_r1=args.init_r1,
        init_r2=args.init_r2,
    )


def _prior_config(args) -> PriorConfig:
    return PriorConfig(nu=args.nu, delta_sq=args.delta_sq, a=args.beta_a, b=args.beta_b)


def predict_draws(chain, X, y=None, z=None):
    """Posterior-mean predictions for every row of X.

    Each response is predicted conditionally on the other when it is
    observed: with y in hand, P(z=1|y,x) averages Phi of the probit score
    s(y|theta,x); with z in hand, E[y|z,x] adds the rho*sigma-scaled
    inverse Mills adjustment to x'beta2. When the other response is absent
    the marginal rules Phi(x'beta1) and x'beta2 apply. For a chain with
    rho pinned at 0 both forms coincide, so the separate-model baseline is
    untouched by the conditioning.
    """
    lin1 = X @ chain.beta1.T        # (n, S)
    lin2 = X @ chain.beta2.T
    rho = np.asarray(chain.rho, dtype=float)
    sigma = np.sqrt(np.asarray(chain.sigma2, dtype=float))
    if y is not None:
        s = (lin1 + (rho / sigma) * (np.asarray(y, dtype=float)[:, None] - lin2)) \
            / np.sqrt(1.0 - rho * rho)
        p_z1 = special.ndtr(s).mean(axis=1)
    else:
        p_z1 = special.ndtr(lin1).mean(axis=1)
    if z is not None:
        zcol = np.asarray(z)[:, None]
        # E[eps1 | z]: inverse Mills ratio on the half-line z dictates
        lam = np.where(zcol == 1, inverse_mills(lin1), -inverse_mills(-lin1))
        y_hat = (lin2 + (rho * sigma) * lam).mean(axis=1)
    else:
        y_hat = lin2.mean(axis=1)
    z_hat = (p_z1 >= 0.5).astype(int)
    return y_hat, p_z1, z_hat


def evaluate_fit(chain, test: Dataset, beta1_true, beta2_true) -> LossReport:
    """All the loss measures for one fitted replicate."""
    y_hat, _, z_hat = predict_draws(chain, test.X, y=test.y, z=test.z)
    draws = np.hstack([chain.beta1, chain.beta2])
    names = [f"b{j}" for j in range(draws.shape[1])]
    selected = select_via_ci(summarize_draws(draws, names))
    true_support = np.concatenate([beta1_true != 0, beta2_true != 0])
    fp, fn, total = fsl(selected, true_support)
    return LossReport(
        rmse=rmse(test.y, y_hat),
        me=misclassification(test.z, z_hat),
        fsl=total,
        fp=fp,
        fn=fn,
        l2_beta1=l2_loss(chain.beta1.mean(axis=0), beta1_true),
        l2_beta2=l2_loss(chain.beta2.mean(axis=0), beta2_true),
        rho_hat=float(chain.rho.mean()),
    )


def _full_summary(chain):
    p = chain.beta1.shape[1]
    names = [f"beta1_{j + 1}" for j in range(p)] + [f"beta2_{j + 1}" for j in range(p)]
    names += ["sigma2", "rho", "tau1_sq", "tau2_sq", "r1", "r2"]
    draws = np.hstack([
        chain.beta1, chain.beta2,
        chain.sigma2[:, None], chain.rho[:, None],
        chain.tau1_sq[:, None], chain.tau2_sq[:, None],
        chain.r1[:, None], chain.r2[:, None],
    ])
    return summarize_draws(draws, names), names, draws


def _write_fit_outputs(out_dir, chain, meta, max_acf_lag=50):
    os.makedirs(out_dir, exist_ok=True)
    bio.write_chain_csv(os.path.join(out_dir, "chain.csv"), chain, meta=meta)
    summary, names, draws = _full_summary(chain)
    bio.write_summary_csv(os.path.join(out_dir, "summary.csv"), summary, meta=meta)

    lag = min(max_acf_lag, max(1, draws.shape[0] // 2 - 1))
    scalar_names = ["sigma2", "rho"]
    acf_table = {}
    ess = {}
    for name in names:
        col = draws[:, names.index(name)]
        if draws.shape[0] >= 100:
            if np.std(col) == 0.0:
                ess[name] = 1.0
            else:
                ess[name] = effective_sample_size(col)
        if name in scalar_names and np.std(col) > 0:
            acf_table[name] = acf(col, lag)
    bio.write_diagnostics_csv(os.path.join(out_dir, "diagnostics.csv"),
                              chain.acceptance, ess, acf_table, meta=meta)

    p = chain.beta1.shape[1]
    hist_params = {"sigma2": chain.sigma2, "rho": chain.rho}
    for j in range(p):
        hist_params[f"beta1_{j + 1}"] = chain.beta1[:, j]
        hist_params[f"beta2_{j + 1}"] = chain.beta2[:, j]
    for name, col in hist_params.items():
        bio.write_histogram_csv(os.path.join(out_dir, f"hist_{name}.csv"), col, meta=meta)


# --- subcommands -----------------------------------------------------------

def cmd_simulate(args) -> int:
    settings = ([(r, p, s) for r in GRID_RHOS for p in GRID_PS for s in GRID_SPARSITIES]
                if args.all else [(args.rho, args.p, args.sparsity)])
    for rho, p, s in settings:
        scenario = SimulationScenario(
            p=p, sparsity=s, rho_true=rho,
            n_train=args.n_train, n_test=args.n_test,
            sigma2_true=args.sigma2, replicates=args.replicates,
            base_seed=args.seed, fix_coefficients=args.fix_coefficients,
        )
        out = os.path.join(args.out_dir, _setting_name(rho, p, s))
        os.makedirs(out, exist_ok=True)
        meta = {"seed": args.seed, "rho_true": rho, "p": p, "sparsity": s}
        orders = EffectOrders(np.ones(p, dtype=int))
        for k in range(args.replicates):
            rep = gen_replicate(scenario, k)
            rep_meta = dict(meta, replicate=k)
            bio.write_dataset_csv(os.path.join(out, f"rep{k}_train.csv"),
                                  rep.train, orders=orders, meta=rep_meta)
            bio.write_dataset_csv(os.path.join(out, f"rep{k}_test.csv"),
                                  rep.test, orders=orders, meta=rep_meta)
            bio.write_truth_csv(os.path.join(out, f"rep{k}_truth.csv"), rep, meta=rep_meta)
    return 0


def cmd_fit(args) -> int:
    data, orders = bio.parse_dataset_csv(args.data)
    cfg = _chain_config(args)
    prior = _prior_config(args)
    if args.model == "smb":
        chain = fit_sm_b(data, orders, prior, cfg).chain
    else:
        chain = run_chain(data, orders, prior, cfg)
    meta = bio.config_meta(cfg, extra={"model": args.model, "data": os.path.basename(args.data)})
    _write_fit_outputs(args.out_dir, chain, meta)
    return 0


def cmd_predict(args) -> int:
    chain = bio.read_chain_csv(args.chain)
    parsed, _ = bio.parse_dataset_csv(args.data, require_responses=False)
    if isinstance(parsed, Dataset):
        X, y_true, z_true = parsed.X, parsed.y, parsed.z
    else:
        X, y_true, z_true = parsed[0], parsed[1], parsed[2]
    if X.shape[1] != chain.beta1.shape[1]:
        raise bio.DatasetFormatError(
            f"dataset has {X.shape[1]} predictors but chain was fit with {chain.beta1.shape[1]}")
    y_hat, p_z1, z_hat = predict_draws(chain, X, y=y_true, z=z_true)
    losses = None
    if y_true is not None and z_true is not None:
        losses = {"rmse": rmse(y_true, y_hat), "me": misclassification(z_true, z_hat)}
    bio.write_predictions_csv(args.out, y_hat, p_z1, z_hat,
                              y_true=y_true, z_true=z_true, losses=losses,
                              meta={"chain": os.path.basename(args.chain),
                                    "data": os.path.basename(args.data)})
    return 0


def run_setting(rho, p, s, replicates, args):
    """Generate -> fit BLQQ and SM(B) -> score, for one grid setting.

    Per-replicate failures are recorded and the run continues.
    """
    scenario = SimulationScenario(p=p, sparsity=s, rho_true=rho,
                                  base_seed=args.seed, replicates=replicates)
    prior = _prior_config(args)
    rows = []
    for k in range(replicates):
        rep = gen_replicate(scenario, k)
        orders = EffectOrders(np.ones(p, dtype=int))
        for method in ("blqq", "smb"):
            cfg = ChainConfig(
                iterations=args.iterations, burn_in=args.burn_in, thin=args.thin,
                seed=args.seed + 7919 * k + (0 if method == "blqq" else 1),
                adapt_during_burnin=not args.no_adapt,
                init_tau1_sq=args.init_tau1_sq, init_tau2_sq=args.init_tau2_sq,
                init_r1=args.init_r1, init_r2=args.init_r2,
            )
            try:
                if method == "smb":
                    chain = fit_sm_b(rep.train, orders, prior, cfg).chain
                else:
                    chain = run_chain(rep.train, orders, prior, cfg)
                report = evaluate_fit(chain, rep.test, rep.beta1_true, rep.beta2_true)
                rows.append((k, method, report, "ok"))
            except (RuntimeError, np.linalg.LinAlgError, IllConditionedError) as exc:
                rows.append((k, method, None, f"failed: {exc}"))
    return rows


def _aggregate(rows):
    """Per-method mean and standard error of each loss over the successful reps."""
    table = {}
    for method in ("blqq", "smb"):
        reports = [rep for (_, m, rep, status) in rows if m == method and rep is not None]
        stats = {}
        for fname in LOSS_FIELDS:
            vals = np.array([getattr(rep, fname) for rep in reports], dtype=float)
            if vals.size:
                mean = float(vals.mean())
                se = float(vals.std(ddof=1) / np.sqrt(vals.size)) if vals.size > 1 else 0.0
            else:
                mean, se = float("nan"), float("nan")
            stats[fname] = (mean, se, int(vals.size))
        table[method] = stats
    return table


def cmd_replicate(args) -> int:
    settings = ([(r, p, s) for r in GRID_RHOS for p in GRID_PS for s in GRID_SPARSITIES]
                if args.all else [(args.rho, args.p, args.sparsity)])
    os.makedirs(args.out_dir, exist_ok=True)

    raw_lines = ["setting,replicate,method,status," + ",".join(LOSS_FIELDS + ("fp", "fn"))]
    agg_lines = ["setting,method,measure,mean,se,n_ok"]
    for rho, p, s in settings:
        name = _setting_name(rho, p, s)
        rows = run_setting(rho, p, s, args.replicates, args)
        for k, method, report, status in rows:
            if report is None:
                raw_lines.append(f"{name},{k},{method},{status},,,,,,,,")
            else:
                vals = [repr(float(getattr(report, f))) for f in LOSS_FIELDS]
                raw_lines.append(
                    f"{name},{k},{method},{status}," + ",".join(vals)
                    + f",{report.fp},{report.fn}")
        table = _aggregate(rows)
        for method, stats in table.items():
            for measure, (mean, se, n_ok) in stats.items():
                if n_ok < args.replicates:
                    measure_flag = measure + " (incomplete)"
                else:
                    measure_flag = measure
                agg_lines.append(
                    f"{name},{method},{measure_flag},{repr(mean)},{repr(se)},{n_ok}")

    meta = [f"#seed: {args.seed}", f"#iterations: {args.iterations}",
            f"#burn_in: {args.burn_in}", f"#replicates: {args.replicates}"]
    with open(os.path.join(args.out_dir, "losses_raw.csv"), "w", newline="\n") as fh:
        fh.write("\n".join(meta + raw_lines) + "\n")
    with open(os.path.join(args.out_dir, "losses_summary.csv"), "w", newline="\n") as fh:
        fh.write("\n".join(meta + agg_lines) + "\n")
    return 0


def cmd_summarize(args) -> int:
    chain = bio.read_chain_csv(args.chain)
    summary, _, _ = _full_summary(chain)
    bio.write_summary_csv(args.out, summary,
                          meta={"chain": os.path.basename(args.chain)})
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blqq",
                                 description="Joint Bayesian model for paired continuous/binary responses")
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate simulation-study datasets")
    sim.add_argument("--rho", type=float, default=0.85)
    sim.add_argument("--p", type=int, default=10)
    sim.add_argument("--sparsity", type=float, default=0.2)
    sim.add_argument("--n-train", type=int, default=100)
    sim.add_argument("--n-test", type=int, default=100)
    sim.add_argument("--sigma2", type=float, default=2.0)
    sim.add_argument("--replicates", type=int, default=1)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--all", action="store_true", help="write the full 12-setting grid")
    sim.add_argument("--fix-coefficients", action="store_true")
    sim.add_argument("--out-dir", required=True)
    sim.set_defaults(func=cmd_simulate)

    fit = sub.add_parser("fit", help="fit a model to a dataset file")
    fit.add_argument("--data", required=True)
    fit.add_argument("--model", choices=("blqq", "smb"), default="blqq")
    _add_chain_flags(fit)
    fit.add_argument("--out-dir", required=True)
    fit.set_defaults(func=cmd_fit)

    pred = sub.add_parser("predict", help="predict from a stored chain")
    pred.add_argument("--chain", required=True)
    pred.add_argument("--data", required=True)
    pred.add_argument("--out", required=True)
    pred.set_defaults(func=cmd_predict)

    repl = sub.add_parser("replicate", help="run the end-to-end replication loop")
    repl.add_argument("--rho", type=float, default=0.85)
    repl.add_argument("--p", type=int, default=10)
    repl.add_argument("--sparsity", type=float, default=0.2)
    repl.add_argument("--replicates", type=int, default=10)
    repl.add_argument("--all", action="store_true")
    _add_chain_flags(repl)
    repl.add_argument("--out-dir", required=True)
    repl.set_defaults(func=cmd_replicate)

    summ = sub.add_parser("summarize", help="summarize a stored chain")
    summ.add_argument("--chain", required=True)
    summ.add_argument("--out", required=True)
    summ.set_defaults(func=cmd_summarize)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (bio.DatasetFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
