"""Render action time series emitted by the hamsplit CLI as figures.

CSV schema expected (one optional leading '#' comment line):
    n,t,norm,max_drift,I_<a>,I_<b>,...
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

LOG_FLOOR = 1e-18
REQUIRED_COLUMNS = ("n", "t", "norm", "max_drift")


class SchemaError(ValueError):
    """CSV header does not match the expected action-series schema."""

    def __init__(self, missing: Sequence[str], path):
        self.missing = list(missing)
        super().__init__(
            f"{path}: missing required columns: {', '.join(self.missing)}")


@dataclass
class ActionSeries:
    """Parsed contents of one CSV: time axis plus one column per action."""

    path: Path
    t: np.ndarray
    actions: Dict[int, np.ndarray]     # mode -> I_a(t)

    @property
    def modes(self) -> List[int]:
        return sorted(self.actions)


@dataclass
class PlotSpec:
    csv_paths: List[Path]
    out: Path
    yscale: str = "log"                # "log" | "linear"
    modes: Optional[List[int]] = None  # None = all modes present
    title: Optional[str] = None

    def __post_init__(self):
        self.csv_paths = [Path(p) for p in self.csv_paths]
        self.out = Path(self.out)
        if not self.csv_paths:
            raise ValueError("at least one input CSV is required")
        if self.yscale not in ("log", "linear"):
            raise ValueError("yscale must be 'log' or 'linear'")
        if self.modes is not None and len(self.modes) == 0:
            raise ValueError("mode subset must not be empty")


def read_actions_csv(path) -> ActionSeries:
    path = Path(path)
    with open(path, newline="") as f:
        rows = [r for r in csv.reader(f) if r and not r[0].startswith("#")]
    if not rows:
        raise SchemaError(list(REQUIRED_COLUMNS), path)
    header, data = rows[0], rows[1:]
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise SchemaError(missing, path)
    cols = {name: i for i, name in enumerate(header)}
    t = np.array([float(r[cols["t"]]) for r in data])
    actions = {}
    for name, i in cols.items():
        if name.startswith("I_"):
            actions[int(name[2:])] = np.array([float(r[i]) for r in data])
    return ActionSeries(path=path, t=t, actions=actions)


def plot_actions(spec: PlotSpec) -> Path:
    """One panel per input CSV, one curve per selected action."""
    series = [read_actions_csv(p) for p in spec.csv_paths]
    n = len(series)
    fig, axes = plt.subplots(1, n, figsize=(5.0 * n, 4.0), sharey=True,
                             squeeze=False)
    for ax, s in zip(axes[0], series):
        modes = spec.modes if spec.modes is not None else s.modes
        bad = [a for a in modes if a not in s.actions]
        if bad:
            raise SchemaError([f"I_{a}" for a in bad], s.path)
        for a in sorted(modes):
            y = s.actions[a]
            if spec.yscale == "log":
                y = np.maximum(np.abs(y), LOG_FLOOR)
            ax.plot(s.t, y, linewidth=0.9, label=f"$I_{{{a}}}$")
        ax.set_yscale(spec.yscale)
        ax.set_xlabel("t")
        ax.set_title(s.path.stem)
        ax.grid(True, which="both", alpha=0.25)
    axes[0][0].set_ylabel("actions")
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    spec.out.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps the PNG byte-stable across re-renders
    fig.savefig(spec.out, dpi=100, metadata={"Software": "plotkit"})
    plt.close(fig)
    return spec.out
