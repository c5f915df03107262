"""State augmentation and the block one-hot state-action feature map.

The policy is linear in features phi(s, a) of length action_count * d:
the (possibly augmented) state vector psi(s) written into the block of
positions selected by the action, zeros elsewhere.  Flat vectors and the
equivalent block-diagonal matrix picture give identical inner products,
so the mostly-zero matrix is never materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TRANSFORMS = ("raw", "cartpole-aug7", "acrobot-aug7")

# which transforms apply to which environment, and the resulting psi dimension
_TRANSFORM_DIMS = {
    ("cartpole", "raw"): 4,
    ("cartpole", "cartpole-aug7"): 7,
    ("acrobot", "raw"): 6,
    ("acrobot", "acrobot-aug7"): 7,
}


def augment_cartpole(raw: np.ndarray) -> np.ndarray:
    """(x, xdot, theta, thetadot) -> (x, xdot, sin th, cos th, thdot, sin thdot, cos thdot)."""
    if len(raw) != 4:
        raise ValueError(f"expected 4 entries, got {len(raw)}")
    if not np.all(np.isfinite(raw)):
        raise ValueError("non-finite state")
    x, x_dot, theta, theta_dot = raw
    return np.array(
        [
            x,
            x_dot,
            math.sin(theta),
            math.cos(theta),
            theta_dot,
            math.sin(theta_dot),
            math.cos(theta_dot),
        ]
    )


def augment_acrobot(raw: np.ndarray) -> np.ndarray:
    """Append sin(w2 - w1), the sine of the angular velocity between the joints."""
    if len(raw) != 6:
        raise ValueError(f"expected 6 entries, got {len(raw)}")
    if not np.all(np.isfinite(raw)):
        raise ValueError("non-finite state")
    out = np.empty(7)
    out[:6] = raw
    out[6] = math.sin(raw[5] - raw[4])
    return out


@dataclass(frozen=True)
class FeatureMap:
    """Named state transform plus the dimensions of the joint feature space."""

    env_name: str
    transform: str
    state_dim: int  # d, after the transform
    action_count: int

    @property
    def total_dim(self) -> int:
        return self.action_count * self.state_dim

    def augment(self, raw: np.ndarray) -> np.ndarray:
        if self.transform == "raw":
            if len(raw) != self.state_dim:
                raise ValueError(f"expected {self.state_dim} entries, got {len(raw)}")
            if not np.all(np.isfinite(raw)):
                raise ValueError("non-finite state")
            return np.asarray(raw, dtype=float)
        if self.transform == "cartpole-aug7":
            return augment_cartpole(raw)
        return augment_acrobot(raw)

    def phi(self, psi: np.ndarray, action: int) -> np.ndarray:
        """Block one-hot feature vector: psi placed in action's slice, zeros elsewhere."""
        if len(psi) != self.state_dim:
            raise ValueError(f"psi has {len(psi)} entries, expected {self.state_dim}")
        if not 0 <= action < self.action_count:
            raise ValueError(f"action {action} outside [0, {self.action_count})")
        out = np.zeros(self.total_dim)
        out[action * self.state_dim : (action + 1) * self.state_dim] = psi
        return out


def make_feature_map(env_name: str, transform: str) -> FeatureMap:
    """Build the feature map for an environment, validating compatibility."""
    try:
        state_dim = _TRANSFORM_DIMS[(env_name, transform)]
    except KeyError:
        valid = sorted(t for (e, t) in _TRANSFORM_DIMS if e == env_name)
        if not valid:
            raise ValueError(f"unknown env {env_name!r}") from None
        raise ValueError(
            f"transform {transform!r} not valid for env {env_name!r} (choose from {valid})"
        ) from None
    action_count = 2 if env_name == "cartpole" else 3
    return FeatureMap(env_name, transform, state_dim, action_count)
