"""Natural policy gradient with linear function approximation on classic control."""

from .envs import Acrobot, CartPole, goal_height_reached, make_env
from .features import FeatureMap, augment_acrobot, augment_cartpole, make_feature_map
from .harness import (
    ConfigError,
    ExperimentConfig,
    RunArtifact,
    compare_features,
    load_config,
    read_metrics,
    run,
    sweep_noise,
)
from .mdp import Env, EnvSpec, StepOutcome, StreamBundle, labeled_stream, rollout_return
from .noise import perturb
from .npg import (
    DivergenceError,
    IterationRecord,
    NpgConfig,
    QSample,
    TrainResult,
    actor_update,
    critic_sgd_step,
    critic_solve,
    evaluate,
    sample_q,
    train,
)
from .policy import (
    PolicyCheckpoint,
    action_distribution,
    load_checkpoint,
    sample_action,
    save_checkpoint,
)

__all__ = [
    "Acrobot",
    "CartPole",
    "ConfigError",
    "DivergenceError",
    "Env",
    "EnvSpec",
    "ExperimentConfig",
    "FeatureMap",
    "IterationRecord",
    "NpgConfig",
    "PolicyCheckpoint",
    "QSample",
    "RunArtifact",
    "StepOutcome",
    "StreamBundle",
    "TrainResult",
    "action_distribution",
    "actor_update",
    "augment_acrobot",
    "augment_cartpole",
    "compare_features",
    "critic_sgd_step",
    "critic_solve",
    "evaluate",
    "goal_height_reached",
    "labeled_stream",
    "load_checkpoint",
    "load_config",
    "make_env",
    "make_feature_map",
    "perturb",
    "read_metrics",
    "rollout_return",
    "run",
    "sample_action",
    "sample_q",
    "save_checkpoint",
    "sweep_noise",
    "train",
]
__version__ = "0.1.0"
