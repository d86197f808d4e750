"""CSV file formats: datasets, chains, summaries, diagnostics, predictions.

All files are comma-separated with LF line endings and '.' decimals, carry
their provenance (seed and configuration) in leading '#'-prefixed lines, and
use shortest round-trip float formatting so parse(write(x)) == x exactly.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .metrics import PosteriorSummary
from .model import ChainConfig, Dataset, EffectOrders


class DatasetFormatError(ValueError):
    """Malformed dataset file; message carries the offending line number."""


def _fmt(v) -> str:
    return repr(float(v))


def _write_lines(path, lines):
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _meta_lines(meta) -> list:
    return [f"#{k}: {v}" for k, v in (meta or {}).items()]


def config_meta(cfg: ChainConfig, extra=None) -> dict:
    meta = {
        "seed": cfg.seed,
        "iterations": cfg.iterations,
        "burn_in": cfg.burn_in,
        "thin": cfg.thin,
        "mh_step_sigma2": cfg.mh_step_sigma2,
        "mh_step_rho": cfg.mh_step_rho,
        "mh_step_r": cfg.mh_step_r,
        "adapt_during_burnin": cfg.adapt_during_burnin,
        "init_tau1_sq": cfg.init_tau1_sq,
        "init_tau2_sq": cfg.init_tau2_sq,
        "init_r1": cfg.init_r1,
        "init_r2": cfg.init_r2,
    }
    meta.update(extra or {})
    return meta


# --- dataset ---------------------------------------------------------------

def parse_dataset_csv(path, require_responses: bool = True):
    """Read a dataset file.

    Header row is required; a `y` column (continuous) and a `z` column (0/1)
    are expected, all other columns are predictors in file order. An optional
    `#orders:` comment supplies per-predictor effect orders (default all 1).
    Returns (Dataset, EffectOrders); with require_responses=False a missing
    y or z column yields None in its place and a plain (X, columns) dataset
    cannot be built, so the return is (X, y, z, columns, orders) style kept
    uniform: y/z arrays may be None.
    """
    orders_spec = None
    header = None
    rows = []
    with open(path, "r", newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("orders:"):
                    try:
                        orders_spec = [int(tok) for tok in body[len("orders:"):].split(",")]
                    except ValueError:
                        raise DatasetFormatError(f"line {lineno}: malformed #orders: entry")
                continue
            cells = next(csv.reader([line]))
            if header is None:
                header = [c.strip() for c in cells]
            else:
                rows.append((lineno, cells))

    if header is None:
        raise DatasetFormatError("file has no header row")
    has_y = "y" in header
    has_z = "z" in header
    if require_responses and not has_y:
        raise DatasetFormatError("missing required column 'y'")
    if require_responses and not has_z:
        raise DatasetFormatError("missing required column 'z'")

    y_idx = header.index("y") if has_y else None
    z_idx = header.index("z") if has_z else None
    pred_idx = [j for j in range(len(header)) if j not in (y_idx, z_idx)]
    if not pred_idx:
        raise DatasetFormatError("no predictor columns found")

    n = len(rows)
    X = np.empty((n, len(pred_idx)))
    y = np.empty(n) if has_y else None
    z = np.empty(n, dtype=int) if has_z else None
    for r, (lineno, cells) in enumerate(rows):
        if len(cells) != len(header):
            raise DatasetFormatError(
                f"line {lineno}: expected {len(header)} cells, found {len(cells)}")
        for k, j in enumerate(pred_idx):
            try:
                X[r, k] = float(cells[j])
            except ValueError:
                raise DatasetFormatError(
                    f"line {lineno}: non-numeric value {cells[j]!r} in column {header[j]!r}")
        if has_y:
            try:
                y[r] = float(cells[y_idx])
            except ValueError:
                raise DatasetFormatError(
                    f"line {lineno}: non-numeric value {cells[y_idx]!r} in column 'y'")
        if has_z:
            val = cells[z_idx].strip()
            if val not in ("0", "1"):
                raise DatasetFormatError(
                    f"line {lineno}: column 'z' must be 0 or 1, found {val!r}")
            z[r] = int(val)

    columns = [header[j] for j in pred_idx]
    if orders_spec is not None:
        if len(orders_spec) != len(pred_idx):
            raise DatasetFormatError(
                f"#orders: lists {len(orders_spec)} entries for {len(pred_idx)} predictors")
        orders = EffectOrders(np.array(orders_spec))
    else:
        orders = EffectOrders(np.ones(len(pred_idx), dtype=int))

    if has_y and has_z:
        return Dataset(X, y, z, columns=columns), orders
    return (X, y, z, columns), orders


def write_dataset_csv(path, data: Dataset, orders: EffectOrders = None, meta=None):
    lines = _meta_lines(meta)
    if orders is not None:
        lines.append("#orders: " + ",".join(str(int(o)) for o in orders.orders))
    lines.append(",".join(list(data.columns) + ["y", "z"]))
    for i in range(data.n):
        cells = [_fmt(v) for v in data.X[i]] + [_fmt(data.y[i]), str(int(data.z[i]))]
        lines.append(",".join(cells))
    _write_lines(path, lines)


# --- chain -----------------------------------------------------------------

def chain_columns(p: int) -> list:
    cols = ["iteration"]
    cols += [f"beta1_{j + 1}" for j in range(p)]
    cols += [f"beta2_{j + 1}" for j in range(p)]
    cols += ["sigma2", "rho", "tau1_sq", "tau2_sq", "r1", "r2"]
    return cols


def write_chain_csv(path, chain, meta=None):
    p = chain.beta1.shape[1]
    lines = _meta_lines(meta)
    lines.append(",".join(chain_columns(p)))
    for i in range(chain.beta1.shape[0]):
        cells = [str(i)]
        cells += [_fmt(v) for v in chain.beta1[i]]
        cells += [_fmt(v) for v in chain.beta2[i]]
        cells += [_fmt(chain.sigma2[i]), _fmt(chain.rho[i]),
                  _fmt(chain.tau1_sq[i]), _fmt(chain.tau2_sq[i]),
                  _fmt(chain.r1[i]), _fmt(chain.r2[i])]
        lines.append(",".join(cells))
    _write_lines(path, lines)


@dataclass
class ChainDraws:
    """Chain draws re-read from disk; mirrors the stored ChainOutput arrays."""

    beta1: np.ndarray
    beta2: np.ndarray
    sigma2: np.ndarray
    rho: np.ndarray
    tau1_sq: np.ndarray
    tau2_sq: np.ndarray
    r1: np.ndarray
    r2: np.ndarray


def read_chain_csv(path) -> ChainDraws:
    header = None
    rows = []
    with open(path, "r", newline="") as fh:
        for raw in fh:
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.startswith("#"):
                continue
            cells = next(csv.reader([line]))
            if header is None:
                header = cells
            else:
                rows.append(cells)
    if header is None:
        raise DatasetFormatError("chain file has no header row")
    arr = np.array([[float(c) for c in row] for row in rows])
    cols = {name: k for k, name in enumerate(header)}
    p = sum(1 for name in header if name.startswith("beta1_"))
    if p == 0:
        raise DatasetFormatError("chain file has no beta1 columns")
    b1 = arr[:, [cols[f"beta1_{j + 1}"] for j in range(p)]]
    b2 = arr[:, [cols[f"beta2_{j + 1}"] for j in range(p)]]
    return ChainDraws(
        beta1=b1, beta2=b2,
        sigma2=arr[:, cols["sigma2"]], rho=arr[:, cols["rho"]],
        tau1_sq=arr[:, cols["tau1_sq"]], tau2_sq=arr[:, cols["tau2_sq"]],
        r1=arr[:, cols["r1"]], r2=arr[:, cols["r2"]],
    )


# --- summaries, diagnostics, histograms ------------------------------------

def write_summary_csv(path, summary: PosteriorSummary, meta=None):
    lines = _meta_lines(meta)
    lines.append("parameter,mean,sd,q2.5,q97.5")
    for k, name in enumerate(summary.names):
        lines.append(",".join([name, _fmt(summary.mean[k]), _fmt(summary.sd[k]),
                               _fmt(summary.q025[k]), _fmt(summary.q975[k])]))
    _write_lines(path, lines)


def write_diagnostics_csv(path, acceptance, ess, acf_table, meta=None):
    """acceptance: {target: rate}; ess: {param: value};
    acf_table: {param: array of autocorrelations by lag}."""
    lines = _meta_lines(meta)
    lines.append("record,name,lag,value")
    for target, rate in acceptance.items():
        lines.append(f"acceptance,{target},,{_fmt(rate) if rate == rate else 'nan'}")
    for name, value in ess.items():
        lines.append(f"ess,{name},,{_fmt(value)}")
    for name, values in acf_table.items():
        for lag, value in enumerate(values):
            lines.append(f"acf,{name},{lag},{_fmt(value)}")
    _write_lines(path, lines)


def write_histogram_csv(path, draws, bins: int = 30, meta=None):
    counts, edges = np.histogram(np.asarray(draws, dtype=float), bins=bins)
    lines = _meta_lines(meta)
    lines.append("bin_left,bin_right,count")
    for k in range(counts.shape[0]):
        lines.append(f"{_fmt(edges[k])},{_fmt(edges[k + 1])},{int(counts[k])}")
    _write_lines(path, lines)


def write_predictions_csv(path, y_hat, p_z1, z_hat, y_true=None, z_true=None,
                          losses=None, meta=None):
    lines = _meta_lines(meta)
    header = "row,y_hat,p_z1,z_hat"
    if y_true is not None:
        header += ",y_true,z_true"
    lines.append(header)
    for i in range(len(y_hat)):
        cells = [str(i), _fmt(y_hat[i]), _fmt(p_z1[i]), str(int(z_hat[i]))]
        if y_true is not None:
            cells += [_fmt(y_true[i]), str(int(z_true[i]))]
        lines.append(",".join(cells))
    for k, v in (losses or {}).items():
        lines.append(f"#{k}: {_fmt(v)}")
    _write_lines(path, lines)


def write_truth_csv(path, rep, meta=None):
    lines = _meta_lines(meta)
    lines.append(f"#rho_true: {_fmt(rep.rho_true)}")
    lines.append(f"#sigma2_true: {_fmt(rep.sigma2_true)}")
    lines.append("index,beta1_true,beta2_true")
    for j in range(rep.beta1_true.shape[0]):
        lines.append(f"{j + 1},{_fmt(rep.beta1_true[j])},{_fmt(rep.beta2_true[j])}")
    _write_lines(path, lines)


def read_truth_csv(path):
    rho_true = None
    sigma2_true = None
    b1, b2 = [], []
    header_seen = False
    with open(path, "r", newline="") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if line.startswith("#rho_true:"):
                rho_true = float(line.split(":", 1)[1])
            elif line.startswith("#sigma2_true:"):
                sigma2_true = float(line.split(":", 1)[1])
            elif line.startswith("#") or not line.strip():
                continue
            elif not header_seen:
                header_seen = True
            else:
                cells = line.split(",")
                b1.append(float(cells[1]))
                b2.append(float(cells[2]))
    return np.array(b1), np.array(b2), rho_true, sigma2_true
