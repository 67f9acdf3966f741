"""Matplotlib figures for experiment tables, rendered to SVG files.

Figures are deterministic: the SVG hash salt is pinned, and creation
date / creator metadata are stripped, so identical tables render to
byte-identical files.  One file per metric, written next to the CSV.
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

matplotlib.rcParams["svg.hashsalt"] = "conclab"

__all__ = ["render_figures"]

_SAVE_KW = dict(format="svg", metadata={"Date": None, "Creator": "conclab"})


def _save(fig, path: Path):
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def _column(table, name):
    i = table.columns.index(name)
    return [row[i] for row in table.rows]


def _tube_figures(table, outdir: Path):
    ns = _column(table, "n")
    log_ratio = _column(table, "log_ratio")
    pairs = [(n, v) for n, v in zip(ns, log_ratio) if v is not None]
    paths = []
    if pairs:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot([p[0] for p in pairs], [p[1] / math.log(10) for p in pairs], marker="o")
        ax.set_xlabel("n")
        ax.set_ylabel("log10 [ exp(-Cn) / tube measure ]")
        ax.set_title("Exponential decay against the exact tube measure")
        ax.grid(True, alpha=0.3)
        path = outdir / "tube_ratio.svg"
        _save(fig, path)
        paths.append(path)
    exact = _column(table, "tube_exact")
    rec = _column(table, "recursive_bound")
    simp = _column(table, "simplified_bound")
    rows = [
        (n, e, r, s)
        for n, e, r, s in zip(ns, exact, rec, simp)
        if r is not None and s is not None
    ]
    if rows:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot([r[0] for r in rows], [r[1] for r in rows], marker="o", label="exact")
        ax.plot([r[0] for r in rows], [r[2] for r in rows], marker="s", label="recursive bound")
        ax.plot([r[0] for r in rows], [r[3] for r in rows], marker="^", label="simplified bound")
        ax.set_xlabel("n")
        ax.set_ylabel("measure")
        ax.set_title("Tube measure and its lower bounds")
        ax.legend()
        ax.grid(True, alpha=0.3)
        path = outdir / "tube_bounds.svg"
        _save(fig, path)
        paths.append(path)
    return paths


def _free_group_figures(table, outdir: Path):
    qcol = table.columns.index("min_over_i_distribution_quantiles")
    row = next((r for r in table.rows if r[qcol]), None)
    if row is None:
        return []
    levels, values = [], []
    for part in row[qcol].split(";"):
        level, value = part.split(":")
        levels.append(int(level[1:]))
        values.append(float(value))
    cand = next((r[table.columns.index("candidate_vector_min")] for r in table.rows if r[table.columns.index("candidate_vector_min")] is not None), None)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(levels, values, marker="o", label="sampled min restricted norm")
    ax.axhline(1.0 / 6.0, linestyle="--", color="gray", label="stated 1/6 bound")
    if cand is not None:
        ax.axhline(cand, linestyle=":", color="red", label="designated candidate")
    ax.set_xlabel("quantile (%)")
    ax.set_ylabel("min_i restricted norm")
    ax.set_title("High-mass branch: minimum translated-class norm")
    ax.legend()
    ax.grid(True, alpha=0.3)
    path = outdir / "free_group_min_norm.svg"
    _save(fig, path)
    return [path]


def _folner_figures(table, outdir: Path):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(_column(table, "position"), _column(table, "boundary_ratio"), marker="o")
    ax.set_xlabel("chain position")
    ax.set_ylabel("|K Δ DK| / |K|")
    ax.set_title("Folner boundary ratio along the chain")
    ax.grid(True, alpha=0.3)
    path = outdir / "folner_ratio.svg"
    _save(fig, path)
    return [path]


def _hamming_figures(table, outdir: Path):
    ns = _column(table, "n")
    paths = []
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, _column(table, "phi_before"), marker="o", label="phi(sigma, eta)")
    ax.plot(ns, _column(table, "phi_after"), marker="s", label="phi after right translation")
    ax.set_xlabel("n")
    ax.set_ylabel("phi")
    ax.set_title("Normalized Hamming ratio before / after translation")
    ax.legend()
    ax.grid(True, alpha=0.3)
    path = outdir / "hamming_phi.svg"
    _save(fig, path)
    paths.append(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, _column(table, "amplification"), marker="o")
    ax.set_xlabel("n")
    ax.set_ylabel("amplification")
    ax.set_title("Amplification ratio n/2 of the translation")
    ax.grid(True, alpha=0.3)
    path = outdir / "hamming_amplification.svg"
    _save(fig, path)
    paths.append(path)
    return paths


def _fibre_figures(table, outdir: Path):
    fig, ax = plt.subplots(figsize=(6, 4))
    index = list(range(1, len(table.rows) + 1))
    ax.bar(index, _column(table, "margin"))
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("grid point")
    ax.set_ylabel("estimate - product bound")
    ax.set_title("Neighborhood measure vs. product lower bound")
    ax.grid(True, alpha=0.3, axis="y")
    path = outdir / "fibre_margin.svg"
    _save(fig, path)
    return [path]


_RENDERERS = {
    "tube": _tube_figures,
    "free_group": _free_group_figures,
    "folner": _folner_figures,
    "hamming": _hamming_figures,
    "fibre": _fibre_figures,
}


def render_figures(table, outdir) -> list:
    """Render the figure set for a table; returns the written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    renderer = _RENDERERS.get(table.name)
    if renderer is None:
        return []
    return renderer(table, outdir)
