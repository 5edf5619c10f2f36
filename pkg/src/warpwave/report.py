"""File outputs for experiment results: delimited data plus rendered figures.

Every writer prints numbers with 17 significant digits so a written file
round-trips to the exact double.  Figures are rendered headlessly next to
the delimited output.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .harness import McReport


def write_text(path, text: str) -> Path:
    p = Path(path)
    p.write_text(text)
    return p


def write_fit_csv(path, xs, fhat) -> Path:
    lines = ["x,fhat"]
    for x, f in zip(np.asarray(xs), np.asarray(fhat)):
        lines.append(f"{x:.17g},{f:.17g}")
    return write_text(path, "\n".join(lines) + "\n")


def write_simulation_csv(path, xs, ys, f_true, sigma_x) -> Path:
    lines = ["x,y,f_true,sigma_x"]
    for row in zip(np.asarray(xs), np.asarray(ys), np.asarray(f_true), np.asarray(sigma_x)):
        lines.append(",".join(f"{v:.17g}" for v in row))
    return write_text(path, "\n".join(lines) + "\n")


def render_fit_figure(path, xs, fhat, raw_xs=None, raw_ys=None, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    if raw_xs is not None and raw_ys is not None:
        ax.plot(raw_xs, raw_ys, ".", ms=2, color="0.7", label="observations")
    ax.plot(xs, fhat, lw=1.2, color="C0", label="fit")
    ax.set_xlabel("x")
    ax.set_ylabel("fitted value")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def render_mse_curve(path, report: McReport, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ds = [r.d for r in report.rows]
    means = [r.mse_mean for r in report.rows]
    errs = [r.mse_stderr for r in report.rows]
    ax.errorbar(ds, means, yerr=errs, marker="o", ms=4, lw=1.2, capsize=3)
    ax.set_xlabel("d")
    ax.set_ylabel("mean MSE")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def write_mc_outputs(report: McReport, output, title: str = "") -> list[Path]:
    """Write the full report set: CSV, JSON mirror, curve CSV, and figure.

    ``output`` names the main CSV; sibling files share its stem.
    """
    base = Path(output)
    stem = base.with_suffix("")
    written = [
        write_text(base if base.suffix else stem.with_suffix(".csv"), report.to_csv_text()),
        write_text(stem.with_suffix(".json"), report.to_json_text()),
        write_text(stem.parent / (stem.name + "_curve.csv"), report.curve_csv_text()),
        render_mse_curve(stem.with_suffix(".png"), report, title=title),
    ]
    return written
