"""Matplotlib renderings of the comparison and hit/miss tables.

Figures are drawn from the same table builders as the delimited output, so
a plotted value always matches the corresponding CSV row.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .bench import ExperimentReport
from .reporting import comparison_table, hit_miss_table


def save_comparison_figure(baseline: ExperimentReport, treated: ExperimentReport, path) -> Path:
    """Grouped bars of per-request server durations, baseline vs treated."""
    table = comparison_table(baseline, treated)
    seqs = [row[0] for row in table.rows]
    base_ms = [row[1] for row in table.rows]
    treat_ms = [row[2] for row in table.rows]

    fig, ax = plt.subplots(figsize=(7, 4))
    width = 0.4
    ax.bar([s - width / 2 for s in seqs], base_ms, width,
           label=baseline.config.label or "no-cache")
    ax.bar([s + width / 2 for s in seqs], treat_ms, width,
           label=treated.config.label or "cache")
    ax.set_xlabel("Request No")
    ax.set_ylabel("Server duration (ms)")
    ax.set_title(table.caption)
    ax.set_xticks(seqs)
    ax.legend()
    fig.tight_layout()

    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_hit_miss_figure(report: ExperimentReport, path) -> Path:
    """Bar chart of cache hit and miss counts for one run."""
    table = hit_miss_table(report)

    fig, ax = plt.subplots(figsize=(4, 4))
    bars = ax.bar(["hits", "misses"], [table.cache_hits, table.cache_misses],
                  color=["tab:green", "tab:red"])
    ax.bar_label(bars)
    ax.set_ylabel("Requests")
    ax.set_title(f"Cache outcomes over {table.total_requests} requests")
    fig.tight_layout()

    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
