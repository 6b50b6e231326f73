"""Matplotlib renderings of solve reports and isogeny graphs (files only, no display)."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_report(report, path: Path) -> Path:
    """Bar chart of nu per level; infinite levels drawn as hatched bars at the top."""
    rows = report.rows
    labels = [str(r.N) for r in rows]
    finite = [r.nu if r.nu is not None else 0 for r in rows]
    top = max([v for v in finite] + [1]) + 1
    fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(rows)), 3.5))
    for i, r in enumerate(rows):
        if r.nu is None:
            ax.bar(i, top, color="#dddddd", hatch="//", edgecolor="#888888")
        else:
            ax.bar(i, r.nu, color="#3a6ea5")
    ax.set_xticks(range(len(rows)), labels, rotation=60, fontsize=8)
    ax.set_ylabel("noncuspidal j-invariants")
    ax.set_xlabel("N (hatched: infinitely many)")
    ax.set_title(f"Cyclic isogenies over Q(sqrt {report.d}) [{report.status}]")
    ax.set_ylim(0, top + 0.5)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_isogeny_graph(graph, path: Path) -> Path:
    """Nodes on a circle, edges labelled by degree; node 0 is the seed."""
    n = len(graph.nodes)
    pos = [(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)) for k in range(n)] if n > 1 else [(0, 0)]
    fig, ax = plt.subplots(figsize=(6, 6))
    seen = set()
    for a, b, l, m in graph.edges:
        key = (min(a, b), max(a, b), l)
        if key in seen:
            continue
        seen.add(key)
        (x1, y1), (x2, y2) = pos[a], pos[b]
        if a == b:
            ax.add_patch(plt.Circle((x1 * 1.12, y1 * 1.12), 0.1, fill=False, color="#999999"))
            ax.text(x1 * 1.28, y1 * 1.28, str(l), fontsize=7, ha="center")
            continue
        ax.plot([x1, x2], [y1, y2], color="#999999", lw=1)
        ax.text((x1 + x2) / 2, (y1 + y2) / 2, str(l), fontsize=7, ha="center", color="#aa3333")
    for k, (x, y) in enumerate(pos):
        ax.plot(x, y, "o", color="#3a6ea5" if k else "#d08c00", ms=9)
        label = str(graph.nodes[k])
        if len(label) > 18:
            label = label[:15] + "..."
        ax.text(x, y - 0.12, label, fontsize=6, ha="center")
    degs = sorted(graph.cyclic_degrees)
    ax.set_title(f"isogeny graph over Q(sqrt {graph.d}); cyclic degrees {degs}", fontsize=8)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
