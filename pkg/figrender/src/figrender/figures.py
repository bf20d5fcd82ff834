"""The five figures, each a pure function of validated record rows.

Figures 1-3 read sweep records (per-trial fidelities and spectral errors
over dimension); figures 4-5 read capacity records (entropy, purity,
structural capacity). Output images are diffable: a fixed style sheet,
fixed PNG metadata, and no timestamps.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import CAPACITY_COLUMNS, SWEEP_COLUMNS, SchemaError, read_many

STYLE = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
    "legend.frameon": False,
}

_PNG_METADATA = {"Software": "fig-render"}


@dataclass(frozen=True)
class FigureSpec:
    """One render request: which figure, from which files, to where."""
    figure: int
    inputs: tuple
    output: Path

    def __post_init__(self):
        if self.figure not in (1, 2, 3, 4, 5):
            raise ValueError(f"figure id must be 1..5, got {self.figure}")
        if not self.inputs:
            raise ValueError("at least one input file is required")


def _per_dim_mean(records, column):
    dims = sorted({r["d"] for r in records})
    means = [float(np.mean([r[column] for r in records if r["d"] == d]))
             for d in dims]
    return np.array(dims), np.array(means)


def _save(fig, spec: FigureSpec):
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, metadata=_PNG_METADATA)
    plt.close(fig)


def _fig1_fidelity_vs_dim(records, spec):
    fig, ax = plt.subplots()
    for column, label in (("fidelity_standard", "standard"),
                          ("fidelity_hw", "group-averaged (HW)"),
                          ("fidelity_matched", "matched cyclic")):
        dims, means = _per_dim_mean(records, column)
        ax.plot(dims, means, marker="o", label=label)
    dims, audit = _per_dim_mean(records, "analytic_hw_fidelity")
    ax.plot(dims, audit, linestyle="--", color="black",
            label="analytic HW audit")
    ax.set_xlabel("dimension d")
    ax.set_ylabel("mean fidelity")
    ax.set_title("Single-copy fidelity vs dimension")
    ax.legend()
    _save(fig, spec)
    return {"dims": dims.tolist()}


def _fig2_improvement_ratio(records, spec):
    dims, std = _per_dim_mean(records, "fidelity_standard")
    _, hw = _per_dim_mean(records, "fidelity_hw")
    fig, ax = plt.subplots()
    ax.plot(dims, hw / std, marker="s", color="tab:purple")
    ax.axhline(1.0, color="black", linewidth=0.8)
    ax.set_xlabel("dimension d")
    ax.set_ylabel("mean fidelity ratio (group-averaged / standard)")
    ax.set_yscale("linear")
    ax.set_title("Fidelity improvement ratio")
    _save(fig, spec)
    return {"dims": dims.tolist(), "ratio": (hw / std).tolist()}


def _fig3_spectral_error(records, spec):
    fig, ax = plt.subplots()
    for column, label in (("spectral_error_hw", "group-averaged (HW)"),
                          ("spectral_error_matched", "matched cyclic")):
        dims, means = _per_dim_mean(records, column)
        ax.plot(dims, means, marker="o", label=label)
    ax.set_xlabel("dimension d")
    ax.set_ylabel("mean spectral error")
    ax.set_title("Spectral estimation error vs dimension")
    ax.legend()
    _save(fig, spec)
    return {"dims": dims.tolist()}


def _fig4_content_vs_structure(records, spec):
    fig, ax = plt.subplots()
    kinds = sorted({r["kind"] for r in records})
    markers = {"random": "o", "pure_anchor": "*", "mixed_anchor": "D"}
    for kind in kinds:
        sub = [r for r in records if r["kind"] == kind]
        ax.scatter([r["kappa"] for r in sub],
                   [r["von_neumann_entropy"] for r in sub],
                   s=90 if kind.endswith("anchor") else 14,
                   marker=markers.get(kind, "o"),
                   label=kind.replace("_", " "), alpha=0.8)
    ax.set_xlabel("structural capacity $\\kappa$")
    ax.set_ylabel("von Neumann entropy $S$ (bits)")
    ax.set_title("Information content vs structural capacity")
    ax.legend()
    _save(fig, spec)
    return {"kinds": kinds}


def _fig5_capacity_vs_purity(records, spec):
    purity = np.array([r["purity"] for r in records])
    kappa = np.array([r["kappa"] for r in records])
    # the analytic curve the points must lie on
    deviation = float(np.max(np.abs(kappa - (1.0 + 1.0 / purity))))
    grid = np.linspace(float(purity.min()), 1.0, 400)
    fig, ax = plt.subplots()
    ax.plot(grid, 1.0 + 1.0 / grid, color="black",
            label="$\\kappa = 1 + 1/\\mathrm{purity}$")
    ax.scatter(purity, kappa, s=14, color="tab:orange", alpha=0.7,
               label="records", zorder=3)
    ax.set_xlabel("purity")
    ax.set_ylabel("structural capacity $\\kappa$")
    ax.set_title("Capacity vs purity with the universal curve")
    ax.legend()
    _save(fig, spec)
    return {"max_curve_deviation": deviation}


_RENDERERS = {
    1: (_fig1_fidelity_vs_dim, SWEEP_COLUMNS),
    2: (_fig2_improvement_ratio, SWEEP_COLUMNS),
    3: (_fig3_spectral_error, SWEEP_COLUMNS),
    4: (_fig4_content_vs_structure, CAPACITY_COLUMNS),
    5: (_fig5_capacity_vs_purity, CAPACITY_COLUMNS),
}


def render(spec: FigureSpec) -> dict:
    """Render one figure to spec.output; returns figure metadata
    (for figure 5, the max vertical deviation of the points from the
    analytic curve, in data coordinates)."""
    renderer, columns = _RENDERERS[spec.figure]
    records = read_many(spec.inputs, columns)
    with plt.style.context(STYLE):
        return renderer(records, spec)
