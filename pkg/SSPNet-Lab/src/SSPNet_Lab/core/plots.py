"""
PNG renderings of the CSV files the lab writes. Plotting only reads CSV.
"""

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from .errors import ConfigError  # noqa: E402

logger = logging.getLogger(__name__)

PLOT_KINDS = ("tv", "solution", "metrics", "pgr", "sweep", "order", "variance")


def _tv(frame, ax):
    ax.plot(frame["t"], frame["tv"], marker=".")
    ax.set_xlabel("t")
    ax.set_ylabel("total variation")


def _solution(frame, ax):
    ax.plot(frame["x"], frame["u"], label="u")
    if "sigmoid_u" in frame:
        ax.plot(frame["x"], frame["sigmoid_u"], label="sigmoid(u)")
    ax.set_xlabel("x")
    ax.legend()


def _metrics(frame, ax):
    for column in ("clean_acc", "adv_acc"):
        if column in frame:
            ax.plot(frame["epoch"], frame[column], marker="o", label=column)
    ax.set_xlabel("epoch")
    ax.set_ylabel("accuracy")
    ax.legend()


def _pgr(frame, ax):
    for (model, p), rows in frame.groupby(["model", "p"], sort=True):
        ax.plot(rows["group"], rows["ratio"], marker="o", label=f"{model} (p={p})")
    ax.set_xlabel("group")
    ax.set_ylabel("perturbation growth ratio")
    ax.legend()


def _sweep(frame, ax):
    for method, rows in frame.groupby("method", sort=True):
        ax.plot(rows["epsilon"], rows["accuracy"], marker="o", label=method)
    ax.set_xlabel("epsilon")
    ax.set_ylabel("accuracy")
    ax.legend()


def _order(frame, ax):
    for kind, rows in frame.groupby("kind", sort=True):
        ax.loglog(rows["dt"], rows["error"], marker="o", label=kind)
    ax.set_xlabel("dt")
    ax.set_ylabel("error at T")
    ax.legend()


def _variance(frame, ax):
    ax.bar(frame["block_kind"], frame["ratio"], yerr=frame["stderr"])
    ax.set_ylabel("Var[out] / Var[x]")


_RENDERERS = {
    "tv": _tv,
    "solution": _solution,
    "metrics": _metrics,
    "pgr": _pgr,
    "sweep": _sweep,
    "order": _order,
    "variance": _variance,
}


def render_csv(kind: str, csv_path: str | Path, png_path: str | Path) -> Path:
    if kind not in _RENDERERS:
        raise ConfigError(f"unknown plot kind '{kind}', expected one of {', '.join(PLOT_KINDS)}")
    frame = pd.read_csv(csv_path)
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        _RENDERERS[kind](frame, ax)
        ax.set_title(Path(csv_path).stem)
        fig.tight_layout()
        fig.savefig(png_path, dpi=120)
    finally:
        plt.close(fig)
    logger.info("wrote %s", png_path)
    return Path(png_path)
