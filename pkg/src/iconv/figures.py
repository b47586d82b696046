"""Optional plots written next to a run's report (``--figures DIR``)."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bits import popcount  # noqa: E402
from .topology import FiniteTopology  # noqa: E402
from .verdict import FAIL, Verdict  # noqa: E402

_COLOURS = {"pass": "#4c9a5b", "bounded-pass": "#7aa6c2", "fail": "#c8553d"}


def suite_chart(results: list[tuple[str, list[Verdict]]], directory: str, name: str = "suites.png") -> str:
    """Checks per suite, stacked by outcome."""
    os.makedirs(directory, exist_ok=True)
    labels = [sid for sid, _ in results]
    passed = [sum(v.checked - v.failures for v in vs) for _, vs in results]
    failed = [sum(v.failures for v in vs) for _, vs in results]
    status = ["fail" if any(v.status == FAIL for v in vs) else "pass" for _, vs in results]
    fig, ax = plt.subplots(figsize=(max(4, 0.7 * len(labels) + 2), 3.5))
    ax.bar(labels, passed, color=[_COLOURS[s] for s in status], label="passing checks")
    ax.bar(labels, failed, bottom=passed, color=_COLOURS["fail"], label="failures")
    ax.set_yscale("symlog")
    ax.set_ylabel("checks")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    path = os.path.join(directory, name)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def open_set_lattice(topology: FiniteTopology, directory: str, name: str = "opens.png") -> str:
    """Hasse diagram of the open sets, ranked by size."""
    os.makedirs(directory, exist_ok=True)
    opens = sorted(topology.opens, key=lambda m: (popcount(m), m))
    levels: dict[int, list[int]] = {}
    for m in opens:
        levels.setdefault(popcount(m), []).append(m)
    pos = {}
    for k, row in levels.items():
        for j, m in enumerate(row):
            pos[m] = (j - (len(row) - 1) / 2, k)
    fig, ax = plt.subplots(figsize=(4, 3.5))
    for a in opens:
        for b in opens:
            # covering pairs only
            if a != b and a & b == a and not any(c not in (a, b) and a & c == a and c & b == c for c in opens):
                ax.plot(*zip(pos[a], pos[b]), color="0.6", lw=1, zorder=1)
    for m, (x, y) in pos.items():
        ax.scatter([x], [y], s=30, color="#333333", zorder=2)
        ax.annotate(topology.render(m), (x, y), textcoords="offset points", xytext=(6, 4), fontsize=8)
    ax.set_axis_off()
    fig.tight_layout()
    path = os.path.join(directory, name)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
