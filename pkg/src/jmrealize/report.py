"""Render verification and feasibility results to files: CSV tables plus figures.

Figures are drawn straight onto Agg canvases (no pyplot, no global state), so
rendering works headless and concurrently. The CSV files carry the same rows
as the JSON reports; the figures are a hypergraph sketch with the minimal
incompatible sets highlighted, the eigenvalue spectra of the realized POVMs,
and the residual history of the feasibility oracle.
"""

from __future__ import annotations

import csv
import math
import os

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure
from matplotlib.patches import Polygon

from .feasibility import FeasibilityReport
from .hypergraph import JmHypergraph, facets, minimal_incompatible_sets
from .realization import Realization, VerificationReport

__all__ = [
    "hypergraph_figure",
    "spectra_figure",
    "residual_figure",
    "write_verification_report",
    "write_feasibility_report",
]

_FACET_COLORS = ("#6baed6", "#74c476", "#fd8d3c", "#9e9ac8", "#fdd0a2", "#c6dbef")


def _vertex_positions(h: JmHypergraph) -> dict[str, tuple[float, float]]:
    n = max(len(h.vertices), 1)
    return {
        v: (math.cos(2 * math.pi * i / n + math.pi / 2), math.sin(2 * math.pi * i / n + math.pi / 2))
        for i, v in enumerate(h.vertices)
    }


def _inflate(points: list[tuple[float, float]], factor: float) -> list[tuple[float, float]]:
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return [(cx + (x - cx) * factor, cy + (y - cy) * factor) for x, y in points]


def hypergraph_figure(h: JmHypergraph, highlight_minimal: bool = True) -> Figure:
    """Circular sketch: facets as filled polygons/lines, minimal incompatible sets dashed."""
    fig = Figure(figsize=(5, 5))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    pos = _vertex_positions(h)

    for i, facet in enumerate(f for f in facets(h) if len(f) >= 2):
        points = [pos[v] for v in facet]
        color = _FACET_COLORS[i % len(_FACET_COLORS)]
        if len(points) == 2:
            (x0, y0), (x1, y1) = points
            ax.plot([x0, x1], [y0, y1], color=color, linewidth=2.5, zorder=1)
        else:
            ax.add_patch(Polygon(points, closed=True, facecolor=color, alpha=0.35, zorder=1))

    if highlight_minimal:
        for s in minimal_incompatible_sets(h):
            points = _inflate([pos[v] for v in s], 1.12)
            if len(points) == 2:
                (x0, y0), (x1, y1) = points
                ax.plot([x0, x1], [y0, y1], "r--", linewidth=1.5, zorder=2)
            else:
                ax.add_patch(
                    Polygon(points, closed=True, fill=False, edgecolor="red",
                            linestyle="--", linewidth=1.5, zorder=2)
                )

    for v, (x, y) in pos.items():
        ax.plot([x], [y], "ko", markersize=8, zorder=3)
        ax.annotate(v, (x * 1.22, y * 1.22), ha="center", va="center", fontsize=11)

    ax.set_xlim(-1.5, 1.5)
    ax.set_ylim(-1.5, 1.5)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title("compatibility structure (dashed: minimal incompatible sets)", fontsize=9)
    return fig


def spectra_figure(r: Realization) -> Figure:
    """Eigenvalues of every realized POVM element; positivity margin at a glance."""
    fig = Figure(figsize=(max(4, 1.2 * len(r.hypergraph.vertices) + 2), 4))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    for i, v in enumerate(r.hypergraph.vertices):
        povm = r.assembled[v]
        for outcome, element, marker in zip(povm.outcomes, povm.elements, ("^", "v")):
            eigenvalues = np.linalg.eigvalsh((element + element.conj().T) / 2)
            offset = -0.12 if outcome == 1 else 0.12
            ax.plot(
                [i + offset] * len(eigenvalues),
                eigenvalues,
                marker,
                markersize=5,
                linestyle="none",
                color="tab:blue" if outcome == 1 else "tab:orange",
            )
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xticks(range(len(r.hypergraph.vertices)))
    ax.set_xticklabels(r.hypergraph.vertices)
    ax.set_ylabel("eigenvalues of POVM elements")
    ax.set_title(f"realized POVMs on dimension {r.total_dim}", fontsize=10)
    fig.tight_layout()
    return fig


def residual_figure(history, feas_tol: float | None = None) -> Figure:
    fig = Figure(figsize=(5.5, 3.5))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    iterations = range(1, len(history) + 1)
    positive = [max(r, 1e-300) for r in history]
    ax.semilogy(list(iterations), positive, color="tab:blue")
    if feas_tol is not None:
        ax.axhline(feas_tol, color="tab:red", linestyle="--", linewidth=1,
                   label=f"feasibility tolerance {feas_tol:g}")
        ax.legend(fontsize=8)
    ax.set_xlabel("iteration")
    ax.set_ylabel("constraint residual")
    ax.set_title("alternating-projection residual", fontsize=10)
    fig.tight_layout()
    return fig


def write_verification_report(
    report: VerificationReport, realization: Realization, directory: str
) -> list[str]:
    """Write checks.csv, hypergraph.png, and spectra.png under ``directory``."""
    os.makedirs(directory, exist_ok=True)
    paths = []

    csv_path = os.path.join(directory, "checks.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check", "target", "passed", "residual", "heuristic", "detail"])
        for c in report.checks:
            writer.writerow([c.check, c.target, c.passed, repr(c.residual), c.heuristic, c.detail])
    paths.append(csv_path)

    graph_path = os.path.join(directory, "hypergraph.png")
    hypergraph_figure(realization.hypergraph).savefig(graph_path, dpi=150)
    paths.append(graph_path)

    spectra_path = os.path.join(directory, "spectra.png")
    spectra_figure(realization).savefig(spectra_path, dpi=150)
    paths.append(spectra_path)
    return paths


def write_feasibility_report(
    report: FeasibilityReport, directory: str, feas_tol: float | None = None
) -> list[str]:
    """Write residuals.csv and residuals.png under ``directory``."""
    os.makedirs(directory, exist_ok=True)
    paths = []

    csv_path = os.path.join(directory, "residuals.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "residual"])
        for i, r in enumerate(report.residual_history, start=1):
            writer.writerow([i, repr(r)])
    paths.append(csv_path)

    figure_path = os.path.join(directory, "residuals.png")
    residual_figure(report.residual_history, feas_tol).savefig(figure_path, dpi=150)
    paths.append(figure_path)
    return paths
