"""Experiment configs, CSV artifacts, batch runners, and the CLI."""

import os

import numpy as np
import pytest

from npglin.cli import main as cli_main
from npglin.harness import (
    CSV_COLUMNS,
    ConfigError,
    ExperimentConfig,
    compare_features,
    config_from_fields,
    format_zeta,
    load_config,
    parse_config_text,
    read_metrics,
    records_to_rows,
    run,
    run_id_for,
    sweep_noise,
    validate_config,
    write_metrics_csv,
)

TINY = dict(
    env="cartpole",
    transform="raw",
    iterations=2,
    critic_iters=8,
    eta=0.05,
    alpha=0.05,
    eval_episodes=2,
    seeds=(0, 1),
)


def tiny_config(**overrides):
    return ExperimentConfig(**{**TINY, **overrides})


# ---------------------------------------------------------------- configs


def test_parse_config_text_types_and_comments():
    fields = parse_config_text(
        """
        # a comment line
        env = acrobot
        transform = acrobot-aug7   # trailing comment
        iterations = 60
        eta = 1.0
        seeds = 0,1,2
        """
    )
    assert fields["env"] == "acrobot"
    assert fields["transform"] == "acrobot-aug7"
    assert fields["iterations"] == 60
    assert fields["eta"] == 1.0
    assert fields["seeds"] == (0, 1, 2)


def test_parse_config_text_rejects_junk():
    with pytest.raises(ConfigError):
        parse_config_text("env cartpole\n")  # no equals sign
    with pytest.raises(ConfigError):
        parse_config_text("bogus_key = 3\n")
    with pytest.raises(ConfigError):
        parse_config_text("iterations = many\n")


def test_load_config_presets():
    cart = load_config("cartpole-paper")
    assert (cart.env, cart.transform) == ("cartpole", "cartpole-aug7")
    assert (cart.iterations, cart.critic_iters) == (25, 150)
    assert (cart.eta, cart.alpha, cart.gamma, cart.w_max) == (0.1, 0.1, 0.95, 1e12)
    acro = load_config("acrobot-paper")
    assert (acro.env, acro.transform) == ("acrobot", "acrobot-aug7")
    assert (acro.iterations, acro.critic_iters) == (60, 80)
    assert (acro.eta, acro.alpha) == (1.0, 0.0001)
    assert cart.seeds == acro.seeds == (0, 1, 2, 3, 4)


def test_load_config_unknown_name():
    with pytest.raises((ConfigError, FileNotFoundError)):
        load_config("no-such-preset")


def test_load_config_file_and_overrides(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text(tiny_config().to_text())
    cfg = load_config(str(path), {"noise": 0.3, "seeds": (7,)})
    assert cfg.noise == 0.3
    assert cfg.seeds == (7,)
    assert cfg.env == "cartpole"


def test_to_text_round_trip():
    cfg = tiny_config(noise=0.1, out="somewhere", workers=2)
    assert config_from_fields(parse_config_text(cfg.to_text())) == cfg


def test_validate_config_rejections():
    cases = [
        dict(env="pendulum"),
        dict(transform="acrobot-aug7"),  # wrong env for transform
        dict(seeds=()),
        dict(seeds=(1, 1)),
        dict(noise=-0.5),
        dict(workers=0),
        dict(iterations=-3),
        dict(gamma=1.5),
    ]
    for bad in cases:
        with pytest.raises(ConfigError):
            validate_config(tiny_config(**bad))


# ---------------------------------------------------------------- CSV layer


def test_run_id_formatting():
    assert run_id_for("cartpole", "cartpole-aug7", 0.0, 3) == "cartpole-cartpole-aug7-z0.0-s3"
    assert run_id_for("acrobot", "raw", 0.1, 0) == "acrobot-raw-z0.1-s0"
    assert format_zeta(10) == "10.0"


def test_csv_round_trip(tmp_path):
    from npglin.npg import IterationRecord

    cfg = tiny_config(noise=0.3)
    records = [
        IterationRecord(1, 21.350000000000001, 9, 240, 0.125, 1.5, 3.25),
        IterationRecord(2, 30.0, 11, 260, 0.25, 2.5, 4.0),
    ]
    path = tmp_path / "m.csv"
    write_metrics_csv(path, records_to_rows(cfg, 4, records))
    text = path.read_bytes()
    assert b"\r" not in text  # LF only
    assert text.decode("utf-8").splitlines()[0] == ",".join(CSV_COLUMNS)
    rows = read_metrics(path)
    assert len(rows) == 2
    assert rows[0]["run_id"] == "cartpole-raw-z0.3-s4"
    assert rows[0]["avg_return"] == 21.350000000000001  # repr survives the trip
    assert rows[1]["iteration"] == 2
    assert rows[0]["zeta"] == 0.3


def test_read_metrics_rejects_missing_columns(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("run_id,env\nx,y\n")
    with pytest.raises(ValueError):
        read_metrics(path)


# ---------------------------------------------------------------- runners


def test_run_artifact_layout(tmp_path):
    cfg = tiny_config(out=str(tmp_path / "exp"))
    artifact = run(cfg, quiet=True)
    assert artifact.ok
    assert artifact.failed_seeds == []
    assert os.path.exists(artifact.metrics_csv)
    assert os.path.exists(artifact.config_echo)
    rows = read_metrics(artifact.metrics_csv)
    assert len(rows) == 4  # 2 seeds x 2 iterations
    assert {r["seed"] for r in rows} == {0, 1}
    assert [r["iteration"] for r in rows if r["seed"] == 0] == [1, 2]
    # config echo parses back to the exact config
    assert config_from_fields(parse_config_text(open(artifact.config_echo).read())) == cfg
    # one loadable checkpoint per seed
    from npglin.policy import load_checkpoint

    assert sorted(artifact.checkpoints) == [0, 1]
    for seed, path in artifact.checkpoints.items():
        ckpt = load_checkpoint(path)
        assert ckpt.env_name == "cartpole"
        assert len(ckpt.theta) == 8


def _non_timing(rows):
    return [
        {k: v for k, v in row.items() if k != "wall_clock_s"}
        for row in rows
    ]


def test_run_repeatable_outside_timing(tmp_path):
    a = run(tiny_config(out=str(tmp_path / "a")), quiet=True)
    b = run(tiny_config(out=str(tmp_path / "b")), quiet=True)
    assert _non_timing(read_metrics(a.metrics_csv)) == _non_timing(read_metrics(b.metrics_csv))


def test_run_parallel_matches_serial(tmp_path):
    serial = run(tiny_config(out=str(tmp_path / "s"), workers=1), quiet=True)
    parallel = run(tiny_config(out=str(tmp_path / "p"), workers=2), quiet=True)
    assert _non_timing(read_metrics(serial.metrics_csv)) == _non_timing(
        read_metrics(parallel.metrics_csv)
    )


def test_sweep_noise_layout(tmp_path):
    cfg = tiny_config(out=str(tmp_path / "sweep"), seeds=(0,))
    artifacts = sweep_noise(cfg, [0.0, 0.5], quiet=True)
    assert len(artifacts) == 2  # one per (zeta, seed)
    zetas = []
    for art in artifacts:
        rows = read_metrics(art.metrics_csv)
        assert len({r["zeta"] for r in rows}) == 1
        zetas.append(rows[0]["zeta"])
    assert sorted(zetas) == [0.0, 0.5]


def test_sweep_noise_rejects_bad_grids(tmp_path):
    cfg = tiny_config(out=str(tmp_path / "x"))
    with pytest.raises(ConfigError):
        sweep_noise(cfg, [], quiet=True)
    with pytest.raises(ConfigError):
        sweep_noise(cfg, [0.1, 0.1], quiet=True)
    with pytest.raises(ConfigError):
        sweep_noise(cfg, [-1.0], quiet=True)


def test_compare_features_layout(tmp_path):
    cfg = tiny_config(out=str(tmp_path / "cmp"), seeds=(0,))
    artifacts = compare_features(cfg, ["raw", "cartpole-aug7"], quiet=True)
    assert len(artifacts) == 2
    transforms = set()
    for art in artifacts:
        rows = read_metrics(art.metrics_csv)
        transforms.update(r["transform"] for r in rows)
    assert transforms == {"raw", "cartpole-aug7"}


def test_compare_features_rejects_unknown_transform(tmp_path):
    cfg = tiny_config(out=str(tmp_path / "y"))
    with pytest.raises(ConfigError):
        compare_features(cfg, ["raw", "mystery"], quiet=True)


# ---------------------------------------------------------------- CLI


def _flags(out, **extra):
    base = {
        "--env": "cartpole",
        "--transform": "raw",
        "--iterations": "2",
        "--critic-iters": "8",
        "--eta": "0.05",
        "--alpha": "0.05",
        "--eval-episodes": "2",
        "--seed": "0",
        "--out": out,
        **extra,
    }
    return [item for pair in base.items() for item in pair]


def test_cli_train_and_eval(tmp_path, capsys):
    out = str(tmp_path / "cli")
    assert cli_main(["train", *_flags(out)]) == 0
    ckpt = next(p for p in os.listdir(out) if p.endswith("-s0.ckpt"))
    code = cli_main(["eval", "--checkpoint", os.path.join(out, ckpt), "--episodes", "2"])
    assert code == 0
    assert "mean return" in capsys.readouterr().out


def test_cli_config_error_exit_code(tmp_path, capsys):
    assert cli_main(["train", *_flags(str(tmp_path), **{"--env": "pendulum"})]) == 2
    assert "error:" in capsys.readouterr().err


def test_cli_sweep_noise(tmp_path):
    out = str(tmp_path / "sw")
    assert cli_main(["sweep-noise", *_flags(out), "--grid", "0,0.5"]) == 0
    csvs = [p for p in os.listdir(out) if p.endswith(".csv")]
    assert len(csvs) == 2


def test_cli_compare_features(tmp_path):
    out = str(tmp_path / "cf")
    code = cli_main(["compare-features", *_flags(out), "--transforms", "raw,cartpole-aug7"])
    assert code == 0
    csvs = [p for p in os.listdir(out) if p.endswith(".csv")]
    assert len(csvs) == 2


def test_cli_env_defaults_fill_in(tmp_path):
    # --env alone adopts that environment's bundled constants
    cfg_fields = {"env": "acrobot", "seeds": (0,)}
    from npglin.harness import config_from_fields

    cfg = config_from_fields(cfg_fields)
    assert cfg.transform == "acrobot-aug7"
    assert (cfg.iterations, cfg.critic_iters, cfg.eta, cfg.alpha) == (60, 80, 1.0, 0.0001)


def test_cli_missing_required_config_fields(capsys):
    # no --config, no --env: nothing to assemble a config from
    assert cli_main(["train"]) == 2
    assert "error:" in capsys.readouterr().err
