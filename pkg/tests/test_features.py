"""State transforms and the block one-hot feature map."""

import math

import numpy as np
import pytest

from npglin.features import (
    FeatureMap,
    augment_acrobot,
    augment_cartpole,
    make_feature_map,
)


def test_augment_cartpole_values():
    raw = np.array([0.3, -1.2, 0.2, 0.8])
    psi = augment_cartpole(raw)
    expected = [0.3, -1.2, math.sin(0.2), math.cos(0.2), 0.8, math.sin(0.8), math.cos(0.8)]
    np.testing.assert_allclose(psi, expected, rtol=1e-15)


def test_augment_acrobot_values():
    raw = np.array([0.9, 0.1, -0.4, 0.3, 1.5, -2.0])
    psi = augment_acrobot(raw)
    np.testing.assert_allclose(psi[:6], raw, rtol=0)
    assert psi[6] == pytest.approx(math.sin(-2.0 - 1.5), rel=1e-15)


def test_augment_rejects_bad_input():
    with pytest.raises(ValueError):
        augment_cartpole(np.zeros(3))
    with pytest.raises(ValueError):
        augment_acrobot(np.zeros(7))
    with pytest.raises(ValueError):
        augment_cartpole(np.array([0.0, np.nan, 0.0, 0.0]))
    with pytest.raises(ValueError):
        augment_acrobot(np.array([0.0, np.inf, 0.0, 0.0, 0.0, 0.0]))


def test_make_feature_map_dimensions():
    table = {
        ("cartpole", "raw"): (4, 2, 8),
        ("cartpole", "cartpole-aug7"): (7, 2, 14),
        ("acrobot", "raw"): (6, 3, 18),
        ("acrobot", "acrobot-aug7"): (7, 3, 21),
    }
    for (env_name, transform), (d, actions, total) in table.items():
        fmap = make_feature_map(env_name, transform)
        assert fmap.state_dim == d
        assert fmap.action_count == actions
        assert fmap.total_dim == total


def test_make_feature_map_rejects_mismatches():
    with pytest.raises(ValueError):
        make_feature_map("cartpole", "acrobot-aug7")
    with pytest.raises(ValueError):
        make_feature_map("acrobot", "cartpole-aug7")
    with pytest.raises(ValueError):
        make_feature_map("pendulum", "raw")


def test_raw_transform_passthrough():
    fmap = make_feature_map("acrobot", "raw")
    raw = np.arange(6, dtype=float)
    np.testing.assert_array_equal(fmap.augment(raw), raw)
    with pytest.raises(ValueError):
        fmap.augment(np.zeros(7))


def test_phi_block_structure():
    fmap = make_feature_map("acrobot", "acrobot-aug7")
    psi = np.arange(1.0, 8.0)
    for action in range(3):
        vec = fmap.phi(psi, action)
        assert vec.shape == (21,)
        block = vec[action * 7 : (action + 1) * 7]
        np.testing.assert_array_equal(block, psi)
        # everything outside the action's block is zero
        assert np.count_nonzero(vec) == np.count_nonzero(psi)
        assert vec.sum() == psi.sum()


def test_phi_blocks_orthogonal_across_actions():
    fmap = make_feature_map("cartpole", "cartpole-aug7")
    psi = np.random.default_rng(2).normal(size=7)
    assert float(fmap.phi(psi, 0) @ fmap.phi(psi, 1)) == 0.0


def test_phi_validates_inputs():
    fmap = make_feature_map("cartpole", "raw")
    with pytest.raises(ValueError):
        fmap.phi(np.zeros(5), 0)
    with pytest.raises(ValueError):
        fmap.phi(np.zeros(4), 2)


def test_feature_map_is_frozen():
    fmap = make_feature_map("cartpole", "raw")
    with pytest.raises(Exception):
        fmap.state_dim = 9
