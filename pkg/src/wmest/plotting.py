"""Figure output: a dependency-free SVG scatter of the projected space, and
matplotlib report figures rendered next to the delimited outputs."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def write_scatter_svg(rows: Sequence[dict], path: str | Path,
                      color_by: str = "door_y",
                      title: str = "Embedding space (PCA)") -> None:
    """Scatter plot of projected environments, one <circle> per environment,
    colored by the given placement attribute."""
    width, height, margin = 640, 640, 60
    xs = [r["x"] for r in rows]
    ys = [r["y"] for r in rows]
    xmin, xmax = min(xs), max(xs)
    ymin, ymax = min(ys), max(ys)
    xspan = (xmax - xmin) or 1.0
    yspan = (ymax - ymin) or 1.0
    values = sorted({r[color_by] for r in rows})
    color = {v: PALETTE[i % len(PALETTE)] for i, v in enumerate(values)}

    def sx(x):
        return margin + (x - xmin) / xspan * (width - 2 * margin)

    def sy(y):
        # SVG y grows downward; flip so larger component-2 values plot higher
        return height - margin - (y - ymin) / yspan * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{width - 2 * margin}" '
        f'height="{height - 2 * margin}" fill="none" stroke="#333"/>',
        f'<text x="{width / 2:.0f}" y="{margin / 2:.0f}" '
        f'text-anchor="middle" font-size="16">{escape(title)}</text>',
    ]
    for i, v in enumerate(values):
        parts.append(
            f'<circle cx="{margin + 10}" cy="{margin + 18 + 16 * i}" r="5" '
            f'fill="{color[v]}"/>')
        parts.append(
            f'<text x="{margin + 20}" y="{margin + 22 + 16 * i}" '
            f'font-size="11">{escape(f"{color_by}={v}")}</text>')
    for r in rows:
        parts.append(
            f'<circle class="env" cx="{sx(r["x"]):.2f}" cy="{sy(r["y"]):.2f}" '
            f'r="4" fill="{color[r[color_by]]}" fill-opacity="0.8">'
            f'<title>env {r["env_id"]}</title></circle>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


def exp1_figure(rows: Sequence[dict], path: str | Path) -> None:
    """2x2 scatter panels of the projection, colored by each placement axis."""
    fig, axes = plt.subplots(2, 2, figsize=(10, 9), constrained_layout=True)
    attrs = ("key_x", "key_y", "door_x", "door_y")
    xs = [r["x"] for r in rows]
    ys = [r["y"] for r in rows]
    for ax, attr in zip(axes.flat, attrs):
        cs = [r[attr] for r in rows]
        sc = ax.scatter(xs, ys, c=cs, cmap="viridis", s=18)
        ax.set_title(f"colored by {attr}")
        ax.set_xlabel("component 1")
        ax.set_ylabel("component 2")
        fig.colorbar(sc, ax=ax, shrink=0.8)
    fig.savefig(path)
    plt.close(fig)


def updates_figure(summary: dict, path: str | Path, title: str) -> None:
    """Bar chart of mean updates with sample-std error bars."""
    methods = list(summary["mean_updates"])
    means = [summary["mean_updates"][m] for m in methods]
    stds = [summary["std_updates"][m] for m in methods]
    fig, ax = plt.subplots(figsize=(6, 4), constrained_layout=True)
    ax.bar(methods, means, yerr=stds, capsize=4,
           color=PALETTE[:len(methods)])
    ax.set_ylabel("environment updates")
    ax.set_title(title)
    ax.tick_params(axis="x", rotation=15)
    fig.savefig(path)
    plt.close(fig)


def rank_cumulative_figure(summary: dict, path: str | Path,
                           title: str) -> None:
    """Cumulative frequency of the optimal environment at orders 1..3."""
    fig, ax = plt.subplots(figsize=(6, 4), constrained_layout=True)
    if "levels" in summary:  # sample-count sweep
        for i, (n, level) in enumerate(sorted(summary["levels"].items(),
                                              key=lambda kv: -int(kv[0]))):
            orders = sorted(level["cumulative"], key=int)
            ax.plot([int(o) for o in orders],
                    [level["cumulative"][o] for o in orders],
                    marker="o", color=PALETTE[i % len(PALETTE)],
                    label=f"{n} samples")
    else:
        for i, method in enumerate(summary["cumulative"]):
            cum = summary["cumulative"][method]
            orders = sorted(cum, key=int)
            ax.plot([int(o) for o in orders], [cum[o] for o in orders],
                    marker="o", color=PALETTE[i], label=method)
    ax.set_xlabel("order of appearance")
    ax.set_ylabel("cumulative frequency")
    ax.set_title(title)
    ax.legend()
    fig.savefig(path)
    plt.close(fig)


def language_accuracy_figure(summary: dict, path: str | Path) -> None:
    levels = sorted(summary["levels"].items(), key=lambda kv: int(kv[0]))
    ns = [int(n) for n, _ in levels]
    top1 = [v["top1_accuracy"] for _, v in levels]
    top12 = [v["top12_accuracy"] for _, v in levels]
    fig, ax = plt.subplots(figsize=(6, 4), constrained_layout=True)
    ax.plot(ns, top1, marker="o", label="1st")
    if all(v is not None for v in top12):
        ax.plot(ns, top12, marker="s", label="1st and 2nd")
    ax.axhline(1 / 8, color="#999", linestyle="--", label="random floor")
    ax.set_xlabel("training pairs")
    ax.set_ylabel("accuracy")
    ax.set_ylim(0, 1)
    ax.set_title("Language explanation accuracy")
    ax.legend()
    fig.savefig(path)
    plt.close(fig)


def render_experiment_figures(name: str, summary: dict,
                              out_dir: str | Path) -> list[Path]:
    """Matplotlib figure(s) for one experiment summary; returns written paths."""
    out = Path(out_dir)
    written: list[Path] = []
    if name in ("exp3", "exp4", "exp6"):
        p = out / f"{name}_updates.png"
        updates_figure(summary, p, f"{name}: environment updates")
        written.append(p)
    elif name in ("exp2", "exp5"):
        p = out / f"{name}_cumulative.png"
        rank_cumulative_figure(summary, p,
                               f"{name}: optimal-environment order")
        written.append(p)
    elif name == "exp7":
        p = out / "exp7_accuracy.png"
        language_accuracy_figure(summary, p)
        written.append(p)
    return written


def load_summary(out_dir: str | Path, name: str) -> dict:
    with open(Path(out_dir) / f"{name}_summary.json") as f:
        return json.load(f)
