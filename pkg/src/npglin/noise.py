"""Multiplicative observation noise for robustness runs.

Each observed state element is scaled by its own Uniform(1 - zeta, 1 + zeta)
draw before the policy sees it; the environment's true state is untouched.
Noise is applied to raw observations, ahead of feature augmentation, so
trig features are computed from the perturbed readings.  zeta >= 1 is
allowed and flips signs with some probability.
"""

from __future__ import annotations

import numpy as np


def perturb(raw: np.ndarray, zeta: float, rng: np.random.Generator) -> np.ndarray:
    """Scale every element by an independent Uniform(1 - zeta, 1 + zeta) factor.

    zeta = 0 is a bit-exact identity and consumes no random draws.
    """
    if zeta < 0.0:
        raise ValueError(f"noise level must be >= 0, got {zeta}")
    if zeta == 0.0:
        return raw
    return raw * rng.uniform(1.0 - zeta, 1.0 + zeta, size=len(raw))


def make_observer(zeta: float, rng: np.random.Generator):
    """Observation hook for rollouts: None when noise is off, else perturb."""
    if zeta == 0.0:
        return None
    return lambda raw: perturb(raw, zeta, rng)
