"""Log-linear softmax policy over the block one-hot features.

With phi(s, a) the block one-hot embedding, the logit of action a is the
inner product of psi(s) with theta's a-th block, so the full distribution
falls out of one small matrix-vector product.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .features import FeatureMap, make_feature_map


def logits(theta: np.ndarray, fmap: FeatureMap, psi: np.ndarray) -> np.ndarray:
    """Per-action scores phi(s, a) . theta for all actions at once."""
    if len(theta) != fmap.total_dim:
        raise ValueError(f"theta has {len(theta)} entries, expected {fmap.total_dim}")
    if len(psi) != fmap.state_dim:
        raise ValueError(f"psi has {len(psi)} entries, expected {fmap.state_dim}")
    return theta.reshape(fmap.action_count, fmap.state_dim) @ psi


def action_distribution(theta: np.ndarray, fmap: FeatureMap, psi: np.ndarray) -> np.ndarray:
    """Softmax over the per-action logits, computed with max subtraction.

    The shift keeps exp() in range however large the logits grow over
    training; softmax is invariant to it.
    """
    scores = logits(theta, fmap, psi)
    if not np.all(np.isfinite(scores)):
        raise ValueError(f"non-finite logits: {scores}")
    scores = scores - scores.max()
    np.exp(scores, out=scores)
    return scores / scores.sum()


def sample_action(p: np.ndarray, rng: np.random.Generator) -> int:
    """Draw an action index by inverse CDF on a single uniform."""
    total = float(np.sum(p))
    if abs(total - 1.0) > 1e-9 or np.any(np.asarray(p) < 0.0):
        raise ValueError(f"malformed probability vector {p}")
    u = rng.random()
    acc = 0.0
    last = len(p) - 1
    for a in range(last):
        acc += p[a]
        if u < acc:
            return a
    return last


@dataclass(frozen=True)
class PolicyCheckpoint:
    env_name: str
    transform: str
    state_dim: int
    action_count: int
    theta: np.ndarray

    def feature_map(self) -> FeatureMap:
        return make_feature_map(self.env_name, self.transform)


def save_checkpoint(path, theta: np.ndarray, fmap: FeatureMap) -> None:
    """Write theta and its feature-map identity as name = value lines.

    Floats are stored with repr precision, so a load reproduces theta
    bit-exactly and evaluation can rerun without retraining.
    """
    lines = [
        "format = npglin-policy-1",
        f"env = {fmap.env_name}",
        f"transform = {fmap.transform}",
        f"state_dim = {fmap.state_dim}",
        f"action_count = {fmap.action_count}",
        "theta = " + " ".join(repr(float(v)) for v in theta),
        "",
    ]
    Path(path).write_text("\n".join(lines), encoding="utf-8")


def load_checkpoint(path) -> PolicyCheckpoint:
    fields = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    if fields.get("format") != "npglin-policy-1":
        raise ValueError(f"{path}: not a policy checkpoint")
    theta = np.array([float(v) for v in fields["theta"].split()])
    ckpt = PolicyCheckpoint(
        env_name=fields["env"],
        transform=fields["transform"],
        state_dim=int(fields["state_dim"]),
        action_count=int(fields["action_count"]),
        theta=theta,
    )
    if len(theta) != ckpt.state_dim * ckpt.action_count:
        raise ValueError(f"{path}: theta length {len(theta)} does not match dimensions")
    return ckpt
