"""Preset report figures: rate tables rendered as SVG charts beside CSV data.

Two presets are provided.  ``fig2`` tabulates the per-use rates of both
schemes for n = 1..10 uses and memory s in {0, 1, 2, 3} at eta = 0.7, drawn as
grouped bars (one panel per scheme).  ``fig3`` sweeps the memory 0..3 in steps
of 0.05 for nine transmissivities at n = 10, drawn as one line per (scheme,
eta) plus the infinite-memory asymptote log2(2N + 1).  Both presets fix the
mean excitation budget at N = 8.  Every plotted series carries an SVG group id
derived from :func:`fig2_series_id` / :func:`fig3_series_id`, so the chart can
be cross-referenced against its CSV companion.
"""

from __future__ import annotations

import matplotlib
import numpy as np
from matplotlib import pyplot as plt

from .environment import ChannelParams
from .rates import noiseless_rate, scheme_rate_many

__all__ = [
    "ASYMPTOTE_ID",
    "BUDGET",
    "FIG2_ETA",
    "FIG2_MEMORIES",
    "FIG2_USES",
    "FIG3_ETAS",
    "FIG3_MEMORIES",
    "FIG3_USES",
    "fig2_rows",
    "fig3_rows",
    "fig2_series_id",
    "fig3_series_id",
    "render_fig2",
    "render_fig3",
]

SCHEME_ORDER = ("local", "collective")
BUDGET = 8.0

FIG2_USES = tuple(range(1, 11))
FIG2_MEMORIES = (0.0, 1.0, 2.0, 3.0)
FIG2_ETA = 0.7

FIG3_USES = 10
FIG3_ETAS = tuple(round(0.1 * i, 1) for i in range(1, 10))
FIG3_MEMORIES = tuple(round(0.05 * i, 2) for i in range(61))

ASYMPTOTE_ID = "series-asymptote"


def fig2_series_id(scheme: str, s: float) -> str:
    return f"series-{scheme}-s{s:g}"


def fig3_series_id(scheme: str, eta: float) -> str:
    return f"series-{scheme}-eta{eta:g}"


def _evaluate(points, params, schemes):
    """Rows for a (point -> ChannelParams) grid, point-major, local first."""
    per_scheme = {scheme: scheme_rate_many(map(params, points), scheme) for scheme in schemes}
    rows = []
    for i, point in enumerate(points):
        for scheme in schemes:
            result = per_scheme[scheme][i]
            rows.append(
                {
                    **point,
                    "scheme": scheme,
                    "total_bits": result.total_bits,
                    "per_use_bits": result.per_use_bits,
                }
            )
    return rows


def fig2_rows() -> list[dict]:
    """Per-use rates for every (n, s) of the fig2 preset, n-major row order."""
    points = [{"n": n, "s": s} for n in FIG2_USES for s in FIG2_MEMORIES]
    return _evaluate(
        points,
        lambda pt: ChannelParams(n=pt["n"], eta=FIG2_ETA, s=pt["s"], n_mean=BUDGET),
        SCHEME_ORDER,
    )


def fig3_rows() -> list[dict]:
    """Per-use rates for every (eta, s) of the fig3 preset, eta-major row order."""
    points = [{"eta": eta, "s": s} for eta in FIG3_ETAS for s in FIG3_MEMORIES]
    return _evaluate(
        points,
        lambda pt: ChannelParams(n=FIG3_USES, eta=pt["eta"], s=pt["s"], n_mean=BUDGET),
        SCHEME_ORDER,
    )


def _save(fig, path) -> None:
    # keep text as text in the SVG so series labels stay searchable
    with matplotlib.rc_context({"svg.fonttype": "none"}):
        fig.savefig(path, format="svg")
    plt.close(fig)


def render_fig2(rows, path) -> None:
    """Grouped-bar chart of the fig2 rows: one panel per scheme, bars by memory."""
    per_use = {(row["n"], row["s"], row["scheme"]): row["per_use_bits"] for row in rows}
    uses = sorted({row["n"] for row in rows})
    memories = sorted({row["s"] for row in rows})
    width = 0.8 / len(memories)
    fig, axes = plt.subplots(2, 1, figsize=(7.5, 6.5), sharex=True, sharey=True)
    for ax, scheme in zip(axes, ("collective", "local")):
        for i, s in enumerate(memories):
            offsets = np.asarray(uses, dtype=float) + (i - 0.5 * (len(memories) - 1)) * width
            heights = [per_use[(n, s, scheme)] for n in uses]
            bars = ax.bar(offsets, heights, width=width, label=f"s = {s:g}")
            for j, patch in enumerate(bars.patches):
                patch.set_gid(f"{fig2_series_id(scheme, s)}-{j}")
        ax.set_ylabel("bits per use")
        ax.set_title(f"{scheme} scheme")
        ax.grid(axis="y", alpha=0.3)
    axes[0].legend(title="memory", ncols=len(memories), fontsize="small")
    axes[1].set_xlabel("channel uses n")
    axes[1].set_xticks(list(uses))
    fig.suptitle(f"Per-use rates, eta = {FIG2_ETA:g}, N = {BUDGET:g}")
    _save(fig, path)


def render_fig3(rows, path) -> None:
    """Line chart of the fig3 rows: rates vs memory, one curve per (scheme, eta)."""
    etas = sorted({row["eta"] for row in rows})
    fig, ax = plt.subplots(figsize=(7.5, 5.5))
    cmap = matplotlib.colormaps["viridis"]
    for eta in etas:
        color = cmap((eta - min(etas)) / (max(etas) - min(etas) or 1.0))
        for scheme, style in (("collective", "-"), ("local", ":")):
            subset = [row for row in rows if row["eta"] == eta and row["scheme"] == scheme]
            subset.sort(key=lambda row: row["s"])
            (line,) = ax.plot(
                [row["s"] for row in subset],
                [row["per_use_bits"] for row in subset],
                style,
                color=color,
                linewidth=1.4,
            )
            line.set_gid(fig3_series_id(scheme, eta))
    asymptote = ax.axhline(noiseless_rate(BUDGET), linestyle="--", color="black", linewidth=1.0)
    asymptote.set_gid(ASYMPTOTE_ID)
    ax.set_xlabel("memory s")
    ax.set_ylabel("bits per use")
    ax.set_title(
        f"Per-use rates vs memory, n = {FIG3_USES}, N = {BUDGET:g}\n"
        f"eta = {min(etas):g} (bottom) to {max(etas):g} (top)"
    )
    handles = [
        plt.Line2D([], [], linestyle="-", color="gray", label="collective"),
        plt.Line2D([], [], linestyle=":", color="gray", label="local"),
        plt.Line2D([], [], linestyle="--", color="black", label="log2(2N + 1) asymptote"),
    ]
    ax.legend(handles=handles, loc="center right", fontsize="small")
    ax.grid(alpha=0.3)
    _save(fig, path)
