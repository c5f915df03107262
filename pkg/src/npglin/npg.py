"""Natural policy gradient actor-critic with a Monte-Carlo linear critic.

One actor iteration:

  1. Critic: run N projected-SGD steps toward the least-squares fit of the
     policy's own features to sampled Q values,
         omega <- Proj_W( omega - 2 alpha (omega . phi - Qhat) phi ),
     each step fed by a fresh occupancy-measure sample (see sample_q), and
     average the post-update iterates into w_hat.
  2. Actor: theta <- theta + eta * w_hat.  For softmax policies that are
     linear in phi, the least-squares critic solution is the natural
     gradient direction, so no Fisher matrix is ever formed.

Discounting never touches the reward sums directly; it enters only through
the per-step continuation coins inside the sampler.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .features import FeatureMap
from .mdp import Env, StreamBundle, rollout_return
from .noise import make_observer
from .policy import action_distribution, sample_action


@dataclass(frozen=True)
class NpgConfig:
    """Hyperparameters of one training run."""

    iterations: int  # actor updates (T)
    critic_iters: int  # SGD steps per actor update (N)
    eta: float  # actor step size
    alpha: float  # critic SGD step size
    gamma: float = 0.95  # continuation probability / discount
    w_max: float = 1e12  # critic norm-ball radius
    eval_episodes: int = 20

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.critic_iters < 1:
            raise ValueError("critic_iters must be >= 1")
        if self.eta <= 0.0 or self.alpha <= 0.0:
            raise ValueError("step sizes must be > 0")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must be in (0, 1), got {self.gamma}")
        if self.w_max <= 0.0:
            raise ValueError("w_max must be > 0")
        if self.eval_episodes < 1:
            raise ValueError("eval_episodes must be >= 1")


@dataclass(frozen=True)
class QSample:
    """An occupancy-measure sample with its Monte-Carlo Q estimate."""

    state: np.ndarray  # raw observation the policy acted on (pre-augmentation)
    action: int
    q_hat: float
    accept_index: int  # timestep h at which the pair was accepted


@dataclass(frozen=True)
class IterationRecord:
    """Per-actor-iteration metrics row."""

    iteration: int
    avg_return: float
    episodes_used: int  # episodes started for training work this iteration
    env_steps_used: int  # env steps spent on training work this iteration
    wall_clock_s: float  # cumulative training time, evaluation excluded
    theta_norm: float
    w_hat_norm: float


@dataclass
class TrainResult:
    theta: np.ndarray
    records: list[IterationRecord] = field(default_factory=list)


class DivergenceError(RuntimeError):
    """Training produced non-finite parameters; partial records attached."""

    def __init__(self, message: str, iteration: int, records: list[IterationRecord]):
        super().__init__(message)
        self.iteration = iteration
        self.records = records


def sample_q(env: Env, select, gamma: float, reset_rng, coin_rng, observe=None) -> QSample:
    """Draw (s, a) from the discounted visitation measure with an unbiased Q estimate.

    Phase A starts an episode (first action from the current policy) and at
    each timestep keeps going with probability gamma, else accepts the
    current pair.  Episode termination during phase A restarts the
    environment while the acceptance clock keeps ticking.  Phase B executes
    the accepted action, then continues under the policy with termination
    probability 1 - gamma per subsequent step; the undiscounted reward sum
    from the accepted step on is the Q estimate.  Reaching a terminal state
    ends phase B immediately with the partial sum.
    """
    obs = env.reset(reset_rng)
    if observe is not None:
        obs = observe(obs)
    action = select(obs)
    h = 0
    while coin_rng.random() < gamma:  # continue with probability gamma
        outcome = env.step(action)
        if outcome.done:
            obs = env.reset(reset_rng)
        else:
            obs = outcome.next_state
        if observe is not None:
            obs = observe(obs)
        action = select(obs)
        h += 1
    accepted_obs, accepted_action = obs, action
    outcome = env.step(action)
    total = outcome.reward
    while not outcome.done and coin_rng.random() < gamma:
        obs = outcome.next_state
        if observe is not None:
            obs = observe(obs)
        outcome = env.step(select(obs))
        total += outcome.reward
    return QSample(accepted_obs, accepted_action, total, h)


def critic_sgd_step(
    omega: np.ndarray, phi_sa: np.ndarray, q_hat: float, alpha: float, w_max: float
) -> np.ndarray:
    """One projected least-squares SGD step on the critic weights.

    Applies omega - 2 alpha (omega . phi - qhat) phi, then projects onto the
    Euclidean ball of radius w_max by rescaling when the norm exceeds it.
    """
    if not (np.all(np.isfinite(omega)) and np.all(np.isfinite(phi_sa)) and math.isfinite(q_hat)):
        raise ValueError("non-finite critic inputs")
    residual = float(omega @ phi_sa) - q_hat
    out = omega - (2.0 * alpha * residual) * phi_sa
    norm = float(np.linalg.norm(out))
    if math.isinf(norm):
        # entries finite but the sum of squares overflowed: rescale through
        # the max-magnitude entry so the projection still lands on the ball
        scale = float(np.max(np.abs(out)))
        if math.isfinite(scale):
            unit = out / scale
            return unit * (w_max / float(np.linalg.norm(unit)))
        return out  # genuinely non-finite; the next step's validation trips
    if norm > w_max:
        out *= w_max / norm
    return out


def critic_solve(draw, dim: int, critic_iters: int, alpha: float, w_max: float, omega_hook=None):
    """Run the critic's SGD loop and return the averaged post-update iterate.

    draw() supplies one (phi, q_hat) pair per step; the trainer wires it to
    the live occupancy sampler, tests may replay a frozen dataset.
    omega_hook, when given, sees every post-step iterate.
    """
    omega = np.zeros(dim)
    acc = np.zeros(dim)
    for _ in range(critic_iters):
        phi_sa, q_hat = draw()
        omega = critic_sgd_step(omega, phi_sa, q_hat, alpha, w_max)
        if omega_hook is not None:
            omega_hook(omega)
        acc += omega
    return acc / critic_iters


def actor_update(theta: np.ndarray, w_hat: np.ndarray, eta: float) -> np.ndarray:
    """Natural gradient ascent step on the policy parameters."""
    return theta + eta * w_hat


def evaluate(
    env: Env,
    theta: np.ndarray,
    fmap: FeatureMap,
    episodes: int,
    streams: StreamBundle,
    zeta: float = 0.0,
    cap: int | None = None,
) -> float:
    """Mean undiscounted return over fresh episodes, actions sampled from the policy."""
    if episodes < 1:
        raise ValueError("episodes must be >= 1")
    observe = make_observer(zeta, streams.noise)

    def select(obs):
        return sample_action(action_distribution(theta, fmap, fmap.augment(obs)), streams.policy)

    total = 0.0
    for _ in range(episodes):
        total += rollout_return(env, select, streams.reset, cap=cap, observe=observe)
    return total / episodes


def train(
    env: Env,
    fmap: FeatureMap,
    cfg: NpgConfig,
    seed: int,
    zeta: float = 0.0,
    omega_hook=None,
) -> TrainResult:
    """Full actor-critic run from theta = 0; one IterationRecord per actor update.

    Wall-clock time is accumulated around sampler + critic + actor work
    only, so the timing column is comparable across machines that evaluate
    with different episode counts.  Raises DivergenceError if theta or
    w_hat goes non-finite.
    """
    streams = StreamBundle(seed)
    eval_streams = StreamBundle(seed, prefix="eval-")
    observe = make_observer(zeta, streams.noise)
    dim = fmap.total_dim
    theta = np.zeros(dim)
    records: list[IterationRecord] = []
    elapsed = 0.0

    for t in range(1, cfg.iterations + 1):
        steps_before = env.steps_taken
        episodes_before = env.episodes_started
        started = time.perf_counter()

        current = theta

        def select(obs, _theta=current):
            psi = fmap.augment(obs)
            return sample_action(action_distribution(_theta, fmap, psi), streams.policy)

        def draw():
            qs = sample_q(env, select, cfg.gamma, streams.reset, streams.coins, observe)
            psi = fmap.augment(qs.state)
            return fmap.phi(psi, qs.action), qs.q_hat

        try:
            w_hat = critic_solve(draw, dim, cfg.critic_iters, cfg.alpha, cfg.w_max, omega_hook)
        except ValueError as exc:
            # an overflowed iterate trips the critic's own input validation
            raise DivergenceError(
                f"critic diverged at iteration {t}: {exc}", t, records
            ) from exc
        theta = actor_update(theta, w_hat, cfg.eta)

        elapsed += time.perf_counter() - started
        # snapshot sample costs before evaluation episodes touch the env
        episodes_used = env.episodes_started - episodes_before
        env_steps_used = env.steps_taken - steps_before
        if not np.all(np.isfinite(w_hat)) or not np.all(np.isfinite(theta)):
            raise DivergenceError(
                f"non-finite parameters at iteration {t}", t, records
            )

        avg_return = evaluate(env, theta, fmap, cfg.eval_episodes, eval_streams, zeta)
        records.append(
            IterationRecord(
                iteration=t,
                avg_return=avg_return,
                episodes_used=episodes_used,
                env_steps_used=env_steps_used,
                wall_clock_s=elapsed,
                theta_norm=float(np.linalg.norm(theta)),
                w_hat_norm=float(np.linalg.norm(w_hat)),
            )
        )
    return TrainResult(theta=theta, records=records)
