"""Experiment runner: seeded training runs, noise sweeps, CSV metrics, checkpoints.

Configs are flat ``key = value`` text (every parameter is a scalar or a
comma list), resolvable from a bundled preset name or a file path.  Each
run writes a metrics CSV with one row per actor iteration, a policy
checkpoint per seed, and an echo of the fully resolved config that
reproduces every non-timing column bit-exactly.
"""

from __future__ import annotations

import concurrent.futures
import csv
import statistics
import time
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .envs import make_env
from .features import make_feature_map
from .npg import DivergenceError, IterationRecord, NpgConfig, train
from .policy import save_checkpoint

CSV_COLUMNS = (
    "run_id",
    "env",
    "transform",
    "seed",
    "zeta",
    "iteration",
    "avg_return",
    "episodes_used",
    "env_steps_used",
    "wall_clock_s",
    "theta_norm",
    "w_hat_norm",
)

PRESETS = ("cartpole-paper", "acrobot-paper")

_ENV_DEFAULTS = {
    "cartpole": dict(transform="cartpole-aug7", iterations=25, critic_iters=150, eta=0.1, alpha=0.1),
    "acrobot": dict(transform="acrobot-aug7", iterations=60, critic_iters=80, eta=1.0, alpha=0.0001),
}


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""


@dataclass(frozen=True)
class ExperimentConfig:
    env: str
    transform: str
    iterations: int
    critic_iters: int
    eta: float
    alpha: float
    gamma: float = 0.95
    w_max: float = 1e12
    eval_episodes: int = 20
    noise: float = 0.0
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    out: str = "runs"
    workers: int = 1

    def npg_config(self) -> NpgConfig:
        return NpgConfig(
            iterations=self.iterations,
            critic_iters=self.critic_iters,
            eta=self.eta,
            alpha=self.alpha,
            gamma=self.gamma,
            w_max=self.w_max,
            eval_episodes=self.eval_episodes,
        )

    def to_text(self) -> str:
        lines = []
        for key in (
            "env", "transform", "iterations", "critic_iters", "eta", "alpha",
            "gamma", "w_max", "eval_episodes", "noise", "seeds", "out", "workers",
        ):
            value = getattr(self, key)
            if key == "seeds":
                value = ",".join(str(s) for s in value)
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"


def validate_config(config: ExperimentConfig) -> None:
    if config.env not in ("cartpole", "acrobot"):
        raise ConfigError(f"env: unknown environment {config.env!r}")
    try:
        make_feature_map(config.env, config.transform)
    except ValueError as exc:
        raise ConfigError(f"transform: {exc}") from None
    if not config.seeds:
        raise ConfigError("seeds: at least one seed required")
    if len(set(config.seeds)) != len(config.seeds):
        raise ConfigError(f"seeds: duplicate entries in {config.seeds}")
    if config.noise < 0.0:
        raise ConfigError(f"noise: must be >= 0, got {config.noise}")
    if config.workers < 1:
        raise ConfigError("workers: must be >= 1")
    try:
        config.npg_config()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


_INT_KEYS = ("iterations", "critic_iters", "eval_episodes", "workers")
_FLOAT_KEYS = ("eta", "alpha", "gamma", "w_max", "noise")


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse flat key = value lines (# starts a comment) into typed fields."""
    fields: dict = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw_line!r}")
        key, value = key.strip(), value.strip()
        try:
            if key in _INT_KEYS:
                fields[key] = int(value)
            elif key in _FLOAT_KEYS:
                fields[key] = float(value)
            elif key == "seeds":
                fields[key] = tuple(int(s) for s in value.split(",") if s.strip())
            elif key in ("env", "transform", "out"):
                fields[key] = value
            else:
                raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: {key}: cannot parse {value!r}") from None
    return fields


def load_config(name_or_path: str, overrides: dict | None = None) -> ExperimentConfig:
    """Load a config from a file path or a bundled preset name, then apply overrides."""
    path = Path(name_or_path)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
        source = str(path)
    elif name_or_path in PRESETS:
        text = resources.files("npglin").joinpath(f"presets/{name_or_path}.cfg").read_text("utf-8")
        source = name_or_path
    else:
        raise ConfigError(
            f"config: {name_or_path!r} is neither a file nor a preset {list(PRESETS)}"
        )
    fields = parse_config_text(text, source)
    fields.update(overrides or {})
    return config_from_fields(fields)


def config_from_fields(fields: dict) -> ExperimentConfig:
    """Build a validated config from parsed fields, filling per-env defaults."""
    env = fields.get("env")
    if env is None:
        raise ConfigError("env: required")
    merged = dict(_ENV_DEFAULTS.get(env, {}))
    merged.update(fields)
    try:
        config = ExperimentConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    validate_config(config)
    return config


def format_zeta(zeta: float) -> str:
    return repr(float(zeta))


def run_id_for(env: str, transform: str, zeta: float, seed: int) -> str:
    return f"{env}-{transform}-z{format_zeta(zeta)}-s{seed}"


def records_to_rows(config: ExperimentConfig, seed: int, records: list[IterationRecord]):
    rid = run_id_for(config.env, config.transform, config.noise, seed)
    for rec in records:
        yield (
            rid,
            config.env,
            config.transform,
            str(seed),
            format_zeta(config.noise),
            str(rec.iteration),
            repr(rec.avg_return),
            str(rec.episodes_used),
            str(rec.env_steps_used),
            repr(rec.wall_clock_s),
            repr(rec.theta_norm),
            repr(rec.w_hat_norm),
        )


def write_metrics_csv(path: Path, rows) -> None:
    """Write the metrics table: exact schema, UTF-8, LF line endings."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        writer.writerows(rows)


def read_metrics(path) -> list[dict]:
    """Read a metrics CSV back with typed fields."""
    out = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        missing = [c for c in CSV_COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        for row in reader:
            out.append(
                {
                    "run_id": row["run_id"],
                    "env": row["env"],
                    "transform": row["transform"],
                    "seed": int(row["seed"]),
                    "zeta": float(row["zeta"]),
                    "iteration": int(row["iteration"]),
                    "avg_return": float(row["avg_return"]),
                    "episodes_used": int(row["episodes_used"]),
                    "env_steps_used": int(row["env_steps_used"]),
                    "wall_clock_s": float(row["wall_clock_s"]),
                    "theta_norm": float(row["theta_norm"]),
                    "w_hat_norm": float(row["w_hat_norm"]),
                }
            )
    return out


@dataclass
class SeedOutcome:
    """What one (seed, zeta, transform) training execution produced."""

    seed: int
    records: list[IterationRecord]
    theta: object  # ndarray, or None when the run diverged
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass
class RunArtifact:
    """Files written for one run() invocation (or one sweep cell)."""

    metrics_csv: Path
    config_echo: Path
    checkpoints: dict[int, Path] = field(default_factory=dict)
    outcomes: list[SeedOutcome] = field(default_factory=list)

    @property
    def failed_seeds(self) -> list[int]:
        return [o.seed for o in self.outcomes if o.failed]

    @property
    def ok(self) -> bool:
        return not self.failed_seeds


def _execute_seed(config: ExperimentConfig, seed: int) -> SeedOutcome:
    env = make_env(config.env)
    fmap = make_feature_map(config.env, config.transform)
    try:
        result = train(env, fmap, config.npg_config(), seed, zeta=config.noise)
        return SeedOutcome(seed=seed, records=result.records, theta=result.theta)
    except DivergenceError as exc:
        return SeedOutcome(seed=seed, records=exc.records, theta=None, error=str(exc))


def _execute_seeds(config: ExperimentConfig, quiet: bool) -> list[SeedOutcome]:
    if config.workers > 1 and len(config.seeds) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(_execute_seed, [config] * len(config.seeds), config.seeds))
    else:
        outcomes = [_execute_seed(config, seed) for seed in config.seeds]
    if not quiet:
        for o in outcomes:
            rid = run_id_for(config.env, config.transform, config.noise, o.seed)
            if o.failed:
                print(f"  {rid}: FAILED ({o.error}); partial rows retained")
            else:
                final = o.records[-1].avg_return if o.records else float("nan")
                print(f"  {rid}: final return {final:g} over {len(o.records)} iterations")
    return outcomes


def _write_artifact(config: ExperimentConfig, base: str, outcomes: list[SeedOutcome]) -> RunArtifact:
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for o in outcomes:
        rows.extend(records_to_rows(config, o.seed, o.records))
    csv_path = out_dir / f"{base}.csv"
    write_metrics_csv(csv_path, rows)
    echo_path = out_dir / f"{base}.cfg"
    echo_path.write_text(config.to_text(), encoding="utf-8")
    artifact = RunArtifact(metrics_csv=csv_path, config_echo=echo_path, outcomes=outcomes)
    fmap = make_feature_map(config.env, config.transform)
    for o in outcomes:
        if o.theta is not None:
            ckpt = out_dir / f"{base}-s{o.seed}.ckpt"
            save_checkpoint(ckpt, o.theta, fmap)
            artifact.checkpoints[o.seed] = ckpt
    return artifact


def _print_summary(artifacts: list[RunArtifact], started: float, quiet: bool) -> None:
    if quiet:
        return
    finals = [
        o.records[-1].avg_return
        for a in artifacts
        for o in a.outcomes
        if not o.failed and o.records
    ]
    failures = sum(len(a.failed_seeds) for a in artifacts)
    total = sum(len(a.outcomes) for a in artifacts)
    median = statistics.median(finals) if finals else float("nan")
    elapsed = time.perf_counter() - started
    print(
        f"summary: {total - failures}/{total} runs ok, "
        f"final median return {median:g}, total wall-clock {elapsed:.1f}s"
    )


def run(config: ExperimentConfig, quiet: bool = False) -> RunArtifact:
    """Train every seed of the config; write one CSV, per-seed checkpoints, config echo."""
    validate_config(config)
    started = time.perf_counter()
    base = f"{config.env}-{config.transform}-z{format_zeta(config.noise)}"
    if not quiet:
        print(f"run {base}: seeds {list(config.seeds)}")
    outcomes = _execute_seeds(config, quiet)
    artifact = _write_artifact(config, base, outcomes)
    _print_summary([artifact], started, quiet)
    return artifact


def _single_seed_cells(config: ExperimentConfig, variants) -> list[ExperimentConfig]:
    return [replace(config, seeds=(seed,), **variant) for variant in variants for seed in config.seeds]


def _run_cells(config: ExperimentConfig, cells: list[ExperimentConfig], quiet: bool) -> list[RunArtifact]:
    started = time.perf_counter()
    artifacts = []
    if config.workers > 1:
        # one process per (variant, seed) cell; each owns its env and streams
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_execute_seed, cell, cell.seeds[0]) for cell in cells]
            outcome_lists = [[f.result()] for f in futures]
    else:
        outcome_lists = [[_execute_seed(cell, cell.seeds[0])] for cell in cells]
    for cell, outcomes in zip(cells, outcome_lists):
        if not quiet:
            o = outcomes[0]
            rid = run_id_for(cell.env, cell.transform, cell.noise, o.seed)
            status = f"FAILED ({o.error})" if o.failed else (
                f"final return {o.records[-1].avg_return:g}" if o.records else "no iterations"
            )
            print(f"  {rid}: {status}")
        base = run_id_for(cell.env, cell.transform, cell.noise, cell.seeds[0])
        artifacts.append(_write_artifact(cell, base, outcomes))
    _print_summary(artifacts, started, quiet)
    return artifacts


def sweep_noise(config: ExperimentConfig, zetas, quiet: bool = False) -> list[RunArtifact]:
    """One run per (zeta, seed) pair, each with its own CSV carrying the zeta column."""
    validate_config(config)
    zetas = [float(z) for z in zetas]
    if not zetas:
        raise ConfigError("grid: at least one noise level required")
    if any(z < 0.0 for z in zetas):
        raise ConfigError(f"grid: noise levels must be >= 0, got {zetas}")
    if len(set(zetas)) != len(zetas):
        raise ConfigError(f"grid: duplicate noise levels in {zetas}")
    if not quiet:
        print(f"noise sweep on {config.env}/{config.transform}: grid {zetas}, seeds {list(config.seeds)}")
    cells = _single_seed_cells(config, [{"noise": z} for z in zetas])
    return _run_cells(config, cells, quiet)


def compare_features(config: ExperimentConfig, transforms, quiet: bool = False) -> list[RunArtifact]:
    """One run per (transform, seed) pair, enabling feature-map ablation curves."""
    validate_config(config)
    transforms = list(transforms)
    if not transforms:
        raise ConfigError("transforms: at least one transform required")
    if len(set(transforms)) != len(transforms):
        raise ConfigError(f"transforms: duplicate entries in {transforms}")
    for t in transforms:
        try:
            make_feature_map(config.env, t)
        except ValueError as exc:
            raise ConfigError(f"transforms: {exc}") from None
    if not quiet:
        print(f"feature comparison on {config.env}: {transforms}, seeds {list(config.seeds)}")
    cells = _single_seed_cells(config, [{"transform": t} for t in transforms])
    return _run_cells(config, cells, quiet)
