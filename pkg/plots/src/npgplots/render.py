"""Chart rendering on the Agg backend (headless, file output only)."""

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .schema import read_rows
from .series import Series, build_series

# chart kind -> (x column, x axis label, title)
KINDS = {
    "reward-vs-iter": ("iteration", "iteration", "Mean return vs iteration"),
    "time-vs-reward": ("wall_clock_s", "training time (s)", "Mean return vs training time"),
    "noise-overlay": ("iteration", "iteration", "Mean return vs iteration by noise level"),
    "feature-compare": ("iteration", "iteration", "Mean return vs iteration by feature map"),
}


@dataclass(frozen=True)
class PlotSpec:
    """What to read, which chart to draw, where to write it."""

    inputs: tuple
    kind: str
    out: str
    agg: str = "per-seed"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown chart kind {self.kind!r} (choose from {sorted(KINDS)})")
        if self.agg not in ("per-seed", "median-band"):
            raise ValueError(f"unknown aggregation {self.agg!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV required")


def render(spec: PlotSpec) -> list[Series]:
    """Aggregate the input CSVs and write the chart; returns the plotted series.

    All reading and aggregation happens before the output file is touched,
    so a schema error or an empty input leaves no file behind.
    """
    rows = []
    for path in spec.inputs:
        rows.extend(read_rows(path))
    if not rows:
        raise ValueError(f"no data rows in {list(spec.inputs)}")
    x_field, x_label, title = KINDS[spec.kind]
    series = build_series(rows, x_field, spec.agg)

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for s in series:
        (line,) = ax.plot(s.xs, s.ys, label=s.label, linewidth=1.6)
        if s.lo is not None:
            ax.fill_between(s.xs, s.lo, s.hi, color=line.get_color(), alpha=0.2, linewidth=0)
    ax.set_xlabel(x_label)
    ax.set_ylabel("mean return")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(spec.out, dpi=150)
    plt.close(fig)
    return series


def dump_text(spec: PlotSpec, series: list[Series]) -> str:
    """Plotted series as text, one point per line, repr-exact values."""
    lines = [f"kind {spec.kind}", f"agg {spec.agg}"]
    for s in series:
        lines.append(f"series {s.label}")
        for i in range(len(s.xs)):
            point = [repr(s.xs[i]), repr(s.ys[i])]
            if s.lo is not None:
                point += [repr(s.lo[i]), repr(s.hi[i])]
            lines.append(" ".join(point))
    return "\n".join(lines) + "\n"
