import math

import numpy as np
import pytest

from duplexsec.channel import (
    SystemConfig,
    path_loss,
    sample_channel_pair,
    sample_channel_set,
    trial_rng,
)


def test_path_loss_unit_distance():
    assert path_loss((0.0, 0.0), (0.0, 1.0), 3.0) == 1.0
    assert path_loss((2.0, 3.0), (2.0, 4.0), 7.5) == 1.0


def test_path_loss_diagonal():
    # r = sqrt(2), alpha = 3 -> 2^(-1.5)
    beta = path_loss((0.0, 0.0), (1.0, 1.0), 3.0)
    assert beta == pytest.approx(0.3535533905932738, rel=1e-12)


def test_path_loss_zero_distance():
    with pytest.raises(ValueError, match="zero distance"):
        path_loss((1.0, 1.0), (1.0, 1.0), 3.0)


def test_channel_variance_matches_beta():
    rng = trial_rng(7, 0)
    h, _ = sample_channel_pair(rng, 1, 10 ** 5, 1.0, 0.0)
    var = np.mean(np.abs(h) ** 2)
    assert abs(var - 1.0) < 0.02


def test_error_variance_matches_sigma2_delta():
    rng = trial_rng(7, 1)
    h, hhat = sample_channel_pair(rng, 1, 10 ** 5, 1.0, 0.1)
    var = np.mean(np.abs(h - hhat) ** 2)
    assert abs(var - 0.1) < 0.1 * 0.02


def test_zero_error_gives_exact_estimate():
    rng = trial_rng(3, 0)
    h, hhat = sample_channel_pair(rng, 4, 4, 0.5, 0.0)
    assert np.array_equal(h, hhat)


def test_noisy_estimate_warns():
    rng = trial_rng(3, 1)
    with pytest.warns(UserWarning, match="noisier"):
        sample_channel_pair(rng, 2, 2, 0.1, 0.1)


def test_channel_set_shapes():
    cfg = SystemConfig()
    ch = sample_channel_set(cfg, trial_rng(cfg.seed, 0))
    assert ch.h_ba.shape == (4, 4)
    assert ch.h_ab.shape == (4, 4)
    assert ch.h_ea.shape == (8, 4)
    assert ch.h_eb.shape == (8, 4)
    assert ch.g_a.shape == (4, 4)
    assert ch.g_b.shape == (4, 4)


def test_reciprocity_exact():
    cfg = SystemConfig()
    ch = sample_channel_set(cfg, trial_rng(1, 5))
    assert np.array_equal(ch.h_ab, ch.h_ba.conj().T)


def test_estimates_not_reciprocal():
    cfg = SystemConfig()
    ch = sample_channel_set(cfg, trial_rng(1, 5))
    assert not np.allclose(ch.hhat_ab, ch.hhat_ba.conj().T)


def test_estimation_split_consistent():
    cfg = SystemConfig()
    ch = sample_channel_set(cfg, trial_rng(2, 3))
    # h = hhat + delta by construction, so the residual is the drawn error
    delta = ch.h_ba - ch.hhat_ba
    assert np.allclose(ch.hhat_ba + delta, ch.h_ba)


def test_zero_eta_zeroes_si_channels():
    cfg = SystemConfig(eta=0.0)
    ch = sample_channel_set(cfg, trial_rng(0, 0))
    assert np.all(ch.g_a == 0)
    assert np.all(ch.g_b == 0)


def test_same_substream_is_bit_identical():
    cfg = SystemConfig()
    ch1 = sample_channel_set(cfg, trial_rng(42, 17))
    ch2 = sample_channel_set(cfg, trial_rng(42, 17))
    for name in ("h_ba", "h_ab", "hhat_ba", "hhat_ab", "h_ea", "h_eb", "g_a", "g_b"):
        assert np.array_equal(getattr(ch1, name), getattr(ch2, name))


def test_distinct_trials_differ():
    cfg = SystemConfig()
    ch1 = sample_channel_set(cfg, trial_rng(42, 0))
    ch2 = sample_channel_set(cfg, trial_rng(42, 1))
    assert not np.allclose(ch1.h_ba, ch2.h_ba)


def test_common_randomness_across_eta():
    # same substream, different eta: SI channels are scaled copies
    base = SystemConfig(eta=1.0)
    quad = SystemConfig(eta=4.0)
    ch1 = sample_channel_set(base, trial_rng(9, 4))
    ch2 = sample_channel_set(quad, trial_rng(9, 4))
    assert np.allclose(ch2.g_a, 2.0 * ch1.g_a)
    assert np.array_equal(ch1.h_ba, ch2.h_ba)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n_alice": 3},  # < 2b
        {"b": 3},  # 2b exceeds n_alice
        {"alpha": 0.0},
        {"p_alice": 0.0},
        {"sigma2": 0.0},
        {"eta": -0.1},
        {"sigma2_delta_ba": -1e-9},
        {"theta": 2},
        {"kappa_a": -0.1},
        {"kappa_b": 4.5},  # > 2b
        {"trials": 0},
        {"pos_eve": (0.0, 1.0)},  # coincides with Bob
    ],
)
def test_config_validation_rejects(kwargs):
    with pytest.raises(ValueError):
        SystemConfig(**kwargs)


def test_default_geometry_betas():
    cfg = SystemConfig()
    assert cfg.beta_ba == 1.0
    assert cfg.beta_ab == 1.0
    assert cfg.beta_ea == pytest.approx(2.0 ** -1.5, rel=1e-12)
    # Bob (0,1) to Eve (1,1) is unit distance
    assert cfg.beta_eb == 1.0


def test_far_eve_betas():
    cfg = SystemConfig(pos_eve=(0.5, 5.0))
    # 1/(25.25 * sqrt(25.25)) and 1/(16.25 * sqrt(16.25))
    assert cfg.beta_ea == pytest.approx(7.8814827e-3, rel=1e-6)
    assert cfg.beta_eb == pytest.approx(1.5265817e-2, rel=1e-6)
