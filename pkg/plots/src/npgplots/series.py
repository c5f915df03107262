"""Turning metrics rows into plotted series.

Series are grouped by (env, transform, zeta): that is one curve per noise
level in an overlay, one per transform in a feature comparison, and a single
curve for a plain run.  Aggregation is either one series per seed or a
median line with a min-max band across seeds.
"""

import statistics
from dataclasses import dataclass


@dataclass(frozen=True)
class Series:
    """One plotted line: points, optional shaded band, legend label."""

    label: str
    xs: tuple
    ys: tuple
    lo: tuple | None = None  # band bottom, median-band mode only
    hi: tuple | None = None


def group_label(env: str, transform: str, zeta: float) -> str:
    return f"{env}/{transform}/ζ={zeta!r}"


def _grouped(rows):
    """rows -> {(env, transform, zeta): {seed: {iteration: row}}}, sorted keys."""
    groups = {}
    for r in rows:
        key = (r["env"], r["transform"], r["zeta"])
        groups.setdefault(key, {}).setdefault(r["seed"], {})[r["iteration"]] = r
    return {k: groups[k] for k in sorted(groups)}


def _x_of(row, x_field):
    # iteration stays an integer so dumps read naturally; time is a float
    return row[x_field]


def build_series(rows, x_field: str, agg: str) -> list[Series]:
    """Aggregate rows into series; x_field is 'iteration' or 'wall_clock_s'."""
    if x_field not in ("iteration", "wall_clock_s"):
        raise ValueError(f"unknown x field {x_field!r}")
    if agg not in ("per-seed", "median-band"):
        raise ValueError(f"unknown aggregation {agg!r}")
    out = []
    for (env, transform, zeta), by_seed in _grouped(rows).items():
        label = group_label(env, transform, zeta)
        if agg == "per-seed":
            for seed in sorted(by_seed):
                curve = by_seed[seed]
                iters = sorted(curve)
                out.append(
                    Series(
                        label=f"{label}/seed={seed}",
                        xs=tuple(_x_of(curve[t], x_field) for t in iters),
                        ys=tuple(curve[t]["avg_return"] for t in iters),
                    )
                )
            continue
        # median across seeds per iteration; a seed with partial rows (a
        # diverged run) contributes only to the iterations it reached
        iters = sorted({t for curve in by_seed.values() for t in curve})
        xs, ys, lo, hi = [], [], [], []
        for t in iters:
            present = [curve[t] for curve in by_seed.values() if t in curve]
            returns = [r["avg_return"] for r in present]
            if x_field == "iteration":
                xs.append(t)
            else:
                xs.append(statistics.median(r["wall_clock_s"] for r in present))
            ys.append(statistics.median(returns))
            lo.append(min(returns))
            hi.append(max(returns))
        out.append(Series(label=label, xs=tuple(xs), ys=tuple(ys), lo=tuple(lo), hi=tuple(hi)))
    return out
