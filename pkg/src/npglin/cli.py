"""Command-line front end: train, eval, sweep-noise, compare-features."""

from __future__ import annotations

import argparse
import sys

from .envs import make_env
from .harness import (
    ConfigError,
    PRESETS,
    compare_features,
    config_from_fields,
    load_config,
    run,
    sweep_noise,
)
from .mdp import StreamBundle
from .npg import evaluate
from .policy import load_checkpoint


def _comma_ints(text: str) -> tuple[int, ...]:
    return tuple(int(s) for s in text.split(",") if s.strip())


def _comma_floats(text: str) -> list[float]:
    return [float(s) for s in text.split(",") if s.strip()]


def _comma_strs(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help=f"config file path or preset name {list(PRESETS)}")
    parser.add_argument("--env", help="cartpole or acrobot")
    parser.add_argument("--transform", help="raw, cartpole-aug7, or acrobot-aug7")
    parser.add_argument("--iterations", type=int, help="actor iterations")
    parser.add_argument("--critic-iters", dest="critic_iters", type=int, help="SGD steps per actor iteration")
    parser.add_argument("--eta", type=float, help="actor step size")
    parser.add_argument("--alpha", type=float, help="critic SGD step size")
    parser.add_argument("--gamma", type=float, help="continuation probability / discount")
    parser.add_argument("--w-max", dest="w_max", type=float, help="critic norm-ball radius")
    parser.add_argument("--eval-episodes", dest="eval_episodes", type=int, help="episodes per evaluation")
    parser.add_argument("--noise", type=float, help="observation noise level zeta")
    parser.add_argument("--seed", dest="seeds", type=_comma_ints, help="comma list of seeds")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--workers", type=int, help="parallel runs")


def _resolve_config(args: argparse.Namespace):
    keys = (
        "env", "transform", "iterations", "critic_iters", "eta", "alpha",
        "gamma", "w_max", "eval_episodes", "noise", "seeds", "out", "workers",
    )
    overrides = {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}
    if args.config:
        return load_config(args.config, overrides)
    return config_from_fields(overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="npglin",
        description="Natural policy gradient with linear function approximation "
        "on from-scratch cart-pole and acrobot benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train over the configured seeds")
    _add_config_flags(p_train)

    p_eval = sub.add_parser("eval", help="evaluate a saved policy checkpoint")
    p_eval.add_argument("--checkpoint", required=True)
    p_eval.add_argument("--episodes", type=int, default=20)
    p_eval.add_argument("--noise", type=float, default=0.0)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--cap", type=int, default=None, help="episode step cap")

    p_sweep = sub.add_parser("sweep-noise", help="one run per (noise level, seed)")
    _add_config_flags(p_sweep)
    p_sweep.add_argument(
        "--grid", type=_comma_floats, default=[0.0, 0.1, 0.3, 1.0, 3.0, 10.0],
        help="comma list of noise levels (default 0,0.1,0.3,1,3,10)",
    )

    p_cmp = sub.add_parser("compare-features", help="one run per (transform, seed)")
    _add_config_flags(p_cmp)
    p_cmp.add_argument("--transforms", type=_comma_strs, required=True, help="comma list of transforms")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            artifact = run(_resolve_config(args))
            return 0 if artifact.ok else 1
        if args.command == "eval":
            ckpt = load_checkpoint(args.checkpoint)
            env = make_env(ckpt.env_name)
            mean = evaluate(
                env,
                ckpt.theta,
                ckpt.feature_map(),
                episodes=args.episodes,
                streams=StreamBundle(args.seed, prefix="eval-"),
                zeta=args.noise,
                cap=args.cap,
            )
            print(f"mean return over {args.episodes} episodes: {mean:g}")
            return 0
        if args.command == "sweep-noise":
            artifacts = sweep_noise(_resolve_config(args), args.grid)
        else:
            artifacts = compare_features(_resolve_config(args), args.transforms)
        return 0 if all(a.ok for a in artifacts) else 1
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
