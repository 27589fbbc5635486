"""Report rendering: JSON, delimited level tables, and matplotlib figures."""
from __future__ import annotations

import csv
import json
from pathlib import Path

from .hierarchy import is_graylevel


def write_json(report, path):
    Path(path).write_text(json.dumps(report, indent=2, sort_keys=False) + "\n")


def write_levels_csv(report, path):
    """One row per cooperation level, most preferred first."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["preference_index", "level", "gray", "realizable",
                         "w_size", "parity_vertices", "solve_seconds"])
        for entry in report["levels"]:
            stats = entry.get("stats", {})
            writer.writerow([
                entry["preference_index"],
                entry["name"],
                int(entry["gray"]),
                int(entry["realizable"]),
                entry["w_size"],
                stats.get("parity_vertices", ""),
                stats.get("solve_seconds", ""),
            ])


def _matplotlib():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def levels_figure(report, path):
    """Horizontal bars of non-empty state counts per level; realizable levels
    are filled, the initial level is marked."""
    plt = _matplotlib()
    entries = list(reversed(report["levels"]))
    names = [e["name"] for e in entries]
    sizes = [e["w_size"] for e in entries]
    colors = [
        ("#4a7e4a" if e["realizable"] else "#b0b0b0") for e in entries
    ]
    edge = ["black" if e["gray"] else "none" for e in entries]
    fig, ax = plt.subplots(figsize=(7, 0.35 * len(entries) + 1.5))
    ax.barh(range(len(entries)), sizes, color=colors, edgecolor=edge)
    ax.set_yticks(range(len(entries)))
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xlabel("states with non-empty language")
    ax.set_title(
        f"cooperation levels ({report['ruleset']}), "
        f"initial: {report['initial_level']}"
    )
    for k, e in enumerate(entries):
        if e["name"] == report["initial_level"]:
            ax.annotate("initial", (sizes[k], k), xytext=(4, -3),
                        textcoords="offset points", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def hasse_figure(lattice, path):
    """Layered rendering of the Hasse diagram, stricter levels on top."""
    plt = _matplotlib()
    edges = lattice.hasse_edges()
    # layer = longest chain distance from the maximal elements
    layer = {lv: 0 for lv in lattice.levels}
    changed = True
    while changed:
        changed = False
        for upper, lower in edges:
            if layer[lower] < layer[upper] + 1:
                layer[lower] = layer[upper] + 1
                changed = True
    by_layer = {}
    for lv in lattice.levels:
        by_layer.setdefault(layer[lv], []).append(lv)
    pos = {}
    for depth, members in sorted(by_layer.items()):
        for k, lv in enumerate(members):
            pos[lv] = (k - (len(members) - 1) / 2, -depth)
    fig, ax = plt.subplots(figsize=(max(6, 2.2 * max(len(m) for m in by_layer.values())),
                                    1.1 * (max(by_layer) + 1) + 1))
    for upper, lower in edges:
        (x0, y0), (x1, y1) = pos[upper], pos[lower]
        ax.plot([x0, x1], [y0, y1], color="#888888", lw=1, zorder=1)
    for lv, (x, y) in pos.items():
        face = "#d9d9d9" if is_graylevel(lv) else "white"
        ax.annotate(
            lv.name, (x, y), ha="center", va="center", fontsize=8, zorder=2,
            bbox=dict(boxstyle="round,pad=0.3", facecolor=face, edgecolor="black"),
        )
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_synthesis_outputs(report, machine, out_dir, plot=True):
    """Write the machine, the JSON report, the level table, and the figure."""
    from .formats import render_mealy

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "machine": out / "machine.mealy",
        "report": out / "report.json",
        "levels_csv": out / "levels.csv",
    }
    paths["machine"].write_text(render_mealy(machine))
    report = dict(report, machine_file=str(paths["machine"]))
    write_json(report, paths["report"])
    write_levels_csv(report, paths["levels_csv"])
    if plot:
        paths["levels_png"] = out / "levels.png"
        levels_figure(report, paths["levels_png"])
    return paths
