"""Figures written next to the command line reports (matplotlib, Agg backend)."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

_VERDICT = ListedColormap(["#c0392b", "#27ae60"])


def _save(fig, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)
    return path


def verdict_grid(path, title, rows, cols, ok, xlabel="", ylabel=""):
    """Pass/fail matrix; ``ok[i][j]`` is True, False or None (not run)."""
    data = [[float("nan") if v is None else (1.0 if v else 0.0) for v in row] for row in ok]
    fig, ax = plt.subplots(figsize=(max(4, 0.45 * len(cols) + 2), max(3, 0.45 * len(rows) + 1.5)))
    ax.imshow(data, cmap=_VERDICT, vmin=0, vmax=1, aspect="auto")
    ax.set_xticks(range(len(cols)), [str(c) for c in cols], rotation=60, fontsize=7)
    ax.set_yticks(range(len(rows)), [str(r) for r in rows], fontsize=7)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title, fontsize=9)
    return _save(fig, path)


def series_support(path, title, series):
    """Number of monomials in each coefficient of a Laurent series."""
    exps = sorted(series.coeffs)
    sizes = [len(list(series.coeffs[n].monomials())) for n in exps]
    fig, ax = plt.subplots(figsize=(5, 3))
    if exps:
        ax.stem(exps, sizes, basefmt=" ")
    ax.axvline(series.floor - 0.5, color="grey", ls=":", lw=1)
    ax.set_xlabel("exponent of lambda")
    ax.set_ylabel("monomials in coefficient")
    ax.set_title(title, fontsize=9)
    return _save(fig, path)


def curves(path, title, xs, named_ys, xlabel="", ylabel="", logy=False):
    fig, ax = plt.subplots(figsize=(5, 3))
    for name, ys in named_ys.items():
        ax.plot(xs, ys, marker="o", ms=3, label=name)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=7)
    ax.set_title(title, fontsize=9)
    return _save(fig, path)
