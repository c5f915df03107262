"""Episodic MDP abstraction: environment base class, rollouts, seeded RNG streams.

Environments are single-threaded state machines with discrete actions.  All
randomness flows through named streams derived from one root seed, so that
toggling one component (say, observation noise) never disturbs the random
sequence another component sees.
"""

from __future__ import annotations

import hashlib
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np


def labeled_stream(seed: int, label: str) -> np.random.Generator:
    """Return a PCG64 generator determined by (seed, label).

    The same (seed, label) pair yields the same sequence on every platform:
    the label is folded in through SHA-256, not Python's salted hash().
    """
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    words = [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]
    seq = np.random.SeedSequence([int(seed)] + words)
    return np.random.Generator(np.random.PCG64(seq))


class StreamBundle:
    """The named streams one training or evaluation run draws from."""

    def __init__(self, seed: int, prefix: str = ""):
        self.seed = int(seed)
        self.prefix = prefix
        self.reset = labeled_stream(seed, prefix + "reset")
        self.policy = labeled_stream(seed, prefix + "policy-sampling")
        self.coins = labeled_stream(seed, prefix + "sampler-coins")
        self.noise = labeled_stream(seed, prefix + "noise")


@dataclass(frozen=True)
class EnvSpec:
    """Static facts about an environment instance."""

    name: str
    raw_state_dim: int
    action_count: int
    max_episode_steps: int
    min_return: float
    max_return: float

    def __post_init__(self):
        if self.action_count < 2:
            raise ValueError(f"action_count must be >= 2, got {self.action_count}")
        if self.max_episode_steps < 1:
            raise ValueError("max_episode_steps must be >= 1")


@dataclass(frozen=True)
class StepOutcome:
    next_state: np.ndarray
    reward: float
    done: bool


class Env(ABC):
    """Episodic environment with deterministic dynamics and randomized reset.

    Stepping a finished episode is a programming error and raises; callers
    must observe ``done`` and reset.  Instances also keep cumulative
    ``episodes_started`` / ``steps_taken`` counters for sample-cost metrics.
    """

    spec: EnvSpec

    def __init__(self):
        self._steps_this_episode = 0
        self._done = True  # no episode until the first reset
        self.episodes_started = 0
        self.steps_taken = 0

    @abstractmethod
    def _reset_state(self, rng: np.random.Generator) -> np.ndarray:
        """Draw an initial internal state; return its observation."""

    @abstractmethod
    def _step_state(self, action: int) -> StepOutcome:
        """Advance the internal state by one action; no bookkeeping."""

    def reset(self, rng: np.random.Generator) -> np.ndarray:
        obs = self._reset_state(rng)
        self._steps_this_episode = 0
        self._done = False
        self.episodes_started += 1
        return obs

    def step(self, action: int) -> StepOutcome:
        if self._done:
            raise RuntimeError("step() on a finished episode; call reset() first")
        if not 0 <= action < self.spec.action_count:
            raise ValueError(f"action {action} outside [0, {self.spec.action_count})")
        outcome = self._step_state(action)
        self._steps_this_episode += 1
        self.steps_taken += 1
        done = outcome.done or self._steps_this_episode >= self.spec.max_episode_steps
        if done:
            self._done = True
            if not outcome.done:
                outcome = StepOutcome(outcome.next_state, outcome.reward, True)
        return outcome

    @property
    def done(self) -> bool:
        return self._done

    @property
    def steps_this_episode(self) -> int:
        return self._steps_this_episode


def rollout_return(env, select_action, rng, cap=None, observe=None) -> float:
    """Run one episode, return the undiscounted reward sum.

    select_action maps an observation to an action index; observe, when
    given, transforms each raw observation before the policy sees it
    (observation noise hooks in here -- the true dynamics are untouched).
    """
    if cap is None:
        cap = env.spec.max_episode_steps
    if not 0 <= cap <= env.spec.max_episode_steps:
        raise ValueError(f"cap {cap} outside [0, {env.spec.max_episode_steps}]")
    obs = env.reset(rng)
    total = 0.0
    for _ in range(cap):
        if observe is not None:
            obs = observe(obs)
        outcome = env.step(select_action(obs))
        total += outcome.reward
        if outcome.done:
            break
        obs = outcome.next_state
    return total
