"""From-scratch classic-control benchmarks: cart-pole balancing and acrobot swing-up.

Both use the canonical published constants so results are comparable with
the usual baselines.  CartPole integrates with explicit Euler (tau = 0.02 s),
Acrobot with a single RK4 step per 0.2 s control interval; the integrator
choice is a fixed property of each benchmark, not a knob.
"""

from __future__ import annotations

import math

import numpy as np

from .mdp import Env, EnvSpec, StepOutcome


class CartPole(Env):
    """Balance a pole on a force-actuated cart.

    Actions: 0 pushes left, 1 pushes right.  Reward is 1.0 on every step.
    The episode ends when the cart moves past +-2.4 m, the pole tilts past
    the 12-degree threshold, or 200 steps pass.
    """

    GRAVITY = 9.8
    MASS_CART = 1.0
    MASS_POLE = 0.1
    TOTAL_MASS = MASS_CART + MASS_POLE
    HALF_POLE = 0.5  # distance from pivot to pole center of mass (m)
    POLE_MASS_LENGTH = MASS_POLE * HALF_POLE
    FORCE_MAG = 10.0
    TAU = 0.02  # Euler step (s)
    THETA_THRESHOLD = 12.0 * 2.0 * math.pi / 360.0
    X_THRESHOLD = 2.4
    RESET_BOUND = 0.05

    def __init__(self):
        super().__init__()
        self.spec = EnvSpec(
            name="cartpole",
            raw_state_dim=4,
            action_count=2,
            max_episode_steps=200,
            min_return=0.0,
            max_return=200.0,
        )
        self.x = self.x_dot = self.theta = self.theta_dot = 0.0

    def _reset_state(self, rng: np.random.Generator) -> np.ndarray:
        self.x, self.x_dot, self.theta, self.theta_dot = rng.uniform(
            -self.RESET_BOUND, self.RESET_BOUND, size=4
        )
        return self._observation()

    def set_state(self, x, x_dot, theta, theta_dot):
        """Place the cart-pole in a chosen state and begin a fresh episode (testing hook)."""
        self.x, self.x_dot, self.theta, self.theta_dot = x, x_dot, theta, theta_dot
        self._steps_this_episode = 0
        self._done = False
        self.episodes_started += 1
        return self._observation()

    def _observation(self) -> np.ndarray:
        return np.array([self.x, self.x_dot, self.theta, self.theta_dot])

    def accelerations(self, x_dot, theta, theta_dot, force):
        """Cart and pole accelerations for the classic pole-on-a-cart equations."""
        cos_t = math.cos(theta)
        sin_t = math.sin(theta)
        tmp = (force + self.POLE_MASS_LENGTH * theta_dot**2 * sin_t) / self.TOTAL_MASS
        theta_acc = (self.GRAVITY * sin_t - cos_t * tmp) / (
            self.HALF_POLE * (4.0 / 3.0 - self.MASS_POLE * cos_t**2 / self.TOTAL_MASS)
        )
        x_acc = tmp - self.POLE_MASS_LENGTH * theta_acc * cos_t / self.TOTAL_MASS
        return x_acc, theta_acc

    def _step_state(self, action: int) -> StepOutcome:
        force = self.FORCE_MAG if action == 1 else -self.FORCE_MAG
        x_acc, theta_acc = self.accelerations(self.x_dot, self.theta, self.theta_dot, force)
        # explicit Euler: positions advance on the old velocities
        self.x += self.TAU * self.x_dot
        self.x_dot += self.TAU * x_acc
        self.theta += self.TAU * self.theta_dot
        self.theta_dot += self.TAU * theta_acc
        # sitting exactly on a threshold is still in bounds
        done = abs(self.x) > self.X_THRESHOLD or abs(self.theta) > self.THETA_THRESHOLD
        return StepOutcome(self._observation(), 1.0, done)


def goal_height_reached(theta1: float, theta2: float) -> bool:
    """Acrobot goal: free end of the second link above one link-length over the pivot."""
    return -math.cos(theta1) - math.cos(theta1 + theta2) > 1.0


class Acrobot(Env):
    """Two-link underactuated pendulum; torque at the middle joint.

    Actions: 0 applies torque -1, 1 none, 2 torque +1.  Reward is -1.0 per
    step while the tip is below the goal height and 0.0 on the step that
    reaches it; 500 steps cap the episode.  Observations are
    (cos t1, sin t1, cos t2, sin t2, w1, w2) with t1 = 0 hanging straight down
    and t2 relative to the first link.
    """

    M1 = M2 = 1.0  # link masses
    L1 = 1.0  # first link length
    LC1 = LC2 = 0.5  # centers of mass
    I1 = I2 = 1.0  # link moments of inertia
    GRAVITY = 9.8
    DT = 0.2  # control interval, one RK4 step (s)
    MAX_VEL_1 = 4.0 * math.pi
    MAX_VEL_2 = 9.0 * math.pi
    RESET_BOUND = 0.1
    TORQUES = (-1.0, 0.0, 1.0)

    def __init__(self):
        super().__init__()
        self.spec = EnvSpec(
            name="acrobot",
            raw_state_dim=6,
            action_count=3,
            max_episode_steps=500,
            min_return=-500.0,
            max_return=0.0,
        )
        self.theta1 = self.theta2 = self.omega1 = self.omega2 = 0.0

    def _reset_state(self, rng: np.random.Generator) -> np.ndarray:
        self.theta1, self.theta2, self.omega1, self.omega2 = rng.uniform(
            -self.RESET_BOUND, self.RESET_BOUND, size=4
        )
        return self._observation()

    def set_state(self, theta1, theta2, omega1, omega2):
        """Place the acrobot in a chosen state and begin a fresh episode (testing hook)."""
        self.theta1, self.theta2, self.omega1, self.omega2 = theta1, theta2, omega1, omega2
        self._steps_this_episode = 0
        self._done = False
        self.episodes_started += 1
        return self._observation()

    def _observation(self) -> np.ndarray:
        return np.array(
            [
                math.cos(self.theta1),
                math.sin(self.theta1),
                math.cos(self.theta2),
                math.sin(self.theta2),
                self.omega1,
                self.omega2,
            ]
        )

    def accelerations(self, theta1, theta2, omega1, omega2, torque):
        """Joint accelerations of the standard two-link acrobot."""
        m1, m2 = self.M1, self.M2
        l1, lc1, lc2 = self.L1, self.LC1, self.LC2
        i1, i2, g = self.I1, self.I2, self.GRAVITY
        cos2 = math.cos(theta2)
        sin2 = math.sin(theta2)
        d1 = m1 * lc1**2 + m2 * (l1**2 + lc2**2 + 2.0 * l1 * lc2 * cos2) + i1 + i2
        d2 = m2 * (lc2**2 + l1 * lc2 * cos2) + i2
        phi2 = m2 * lc2 * g * math.cos(theta1 + theta2 - math.pi / 2.0)
        phi1 = (
            -m2 * l1 * lc2 * omega2**2 * sin2
            - 2.0 * m2 * l1 * lc2 * omega2 * omega1 * sin2
            + (m1 * lc1 + m2 * l1) * g * math.cos(theta1 - math.pi / 2.0)
            + phi2
        )
        acc2 = (
            torque + d2 / d1 * phi1 - m2 * l1 * lc2 * omega1**2 * sin2 - phi2
        ) / (m2 * lc2**2 + i2 - d2**2 / d1)
        acc1 = -(d2 * acc2 + phi1) / d1
        return acc1, acc2

    def _derivative(self, state, torque):
        theta1, theta2, omega1, omega2 = state
        acc1, acc2 = self.accelerations(theta1, theta2, omega1, omega2, torque)
        return (omega1, omega2, acc1, acc2)

    def _step_state(self, action: int) -> StepOutcome:
        torque = self.TORQUES[action]
        y = (self.theta1, self.theta2, self.omega1, self.omega2)
        h = self.DT
        k1 = self._derivative(y, torque)
        k2 = self._derivative(tuple(y[i] + 0.5 * h * k1[i] for i in range(4)), torque)
        k3 = self._derivative(tuple(y[i] + 0.5 * h * k2[i] for i in range(4)), torque)
        k4 = self._derivative(tuple(y[i] + h * k3[i] for i in range(4)), torque)
        theta1, theta2, omega1, omega2 = (
            y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) for i in range(4)
        )
        self.theta1 = _wrap_pi(theta1)
        self.theta2 = _wrap_pi(theta2)
        self.omega1 = min(max(omega1, -self.MAX_VEL_1), self.MAX_VEL_1)
        self.omega2 = min(max(omega2, -self.MAX_VEL_2), self.MAX_VEL_2)
        reached = goal_height_reached(self.theta1, self.theta2)
        reward = 0.0 if reached else -1.0
        return StepOutcome(self._observation(), reward, reached)


def _wrap_pi(angle: float) -> float:
    """Wrap an angle to [-pi, pi)."""
    wrapped = math.fmod(angle + math.pi, 2.0 * math.pi)
    if wrapped < 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


def make_env(name: str) -> Env:
    """Construct an environment by its config-file name."""
    if name == "cartpole":
        return CartPole()
    if name == "acrobot":
        return Acrobot()
    raise ValueError(f"unknown env {name!r} (expected 'cartpole' or 'acrobot')")
