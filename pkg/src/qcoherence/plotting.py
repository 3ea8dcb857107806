"""Figures written next to the text/JSON output of the CLI."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _figure(width: float = 7.0, height: float | None = None):
    golden = (math.sqrt(5) - 1.0) / 2.0
    fig, ax = plt.subplots(figsize=(width, height or width * golden), facecolor="w")
    ax.tick_params(labelsize=10)
    return fig, ax


def plot_patterns(coherent, luders, path, title: str = "") -> None:
    """Screen probabilities of the coherent state and of its Lüders state."""
    fig, ax = _figure()
    x = np.arange(len(coherent))
    ax.plot(x, coherent, "-o", ms=3, lw=1.2, label="coherent")
    ax.plot(x, luders, "--", lw=1.5, label="Lüders (sum of single slits)")
    ax.set_xlabel("screen cell")
    ax.set_ylabel("probability")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_residuals(reports, path) -> None:
    """Log-scale bar chart of max residual against tolerance for each suite."""
    fig, ax = _figure(9.0, 4.5)
    names = [r.suite for r in reports]
    floor = 1e-18
    res = [min(max(r.max_residual, floor), 1.0) for r in reports]
    tol = [r.tolerance for r in reports]
    colors = ["tab:green" if r.passed else "tab:red" for r in reports]
    x = np.arange(len(names))
    ax.bar(x, res, color=colors)
    ax.scatter(x, tol, marker="_", s=300, color="k", label="tolerance", zorder=3)
    ax.set_yscale("log")
    ax.set_xticks(x)
    ax.set_xticklabels(names, rotation=45, ha="right")
    ax.set_ylabel("max residual")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
