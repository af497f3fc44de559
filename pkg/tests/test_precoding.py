import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from duplexsec.channel import SystemConfig, sample_channel_set, trial_rng
from duplexsec.precoding import (
    build_precoder,
    build_precoder_set,
    kappa_to_chordal,
    measure_kappa,
    synthesize_eve_precoder,
)


def _random_estimate(seed, rows=4, cols=4):
    rng = trial_rng(seed, 0)
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def test_identity_channel_precoder():
    v, v_null = build_precoder(np.eye(4, dtype=complex), 2)
    assert np.linalg.norm(v.conj().T @ v - np.eye(2)) < 1e-10
    # columns live inside the identity's column space trivially
    assert v.shape == (4, 2) and v_null.shape == (4, 2)


def test_orthonormality_random():
    hhat = _random_estimate(11)
    v, v_null = build_precoder(hhat, 2)
    assert np.linalg.norm(v.conj().T @ v - np.eye(2)) < 1e-10
    assert np.linalg.norm(v_null.conj().T @ v_null - np.eye(2)) < 1e-10
    assert np.linalg.norm(v.conj().T @ v_null) < 1e-10


def test_precoder_picks_leading_singular_vectors():
    # assemble hhat with a known SVD and check ||hhat v_k|| = sigma_k
    rng = trial_rng(5, 0)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    q1, _ = np.linalg.qr(a)
    b2 = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    q2, _ = np.linalg.qr(b2)
    sigma = np.array([3.0, 2.0, 1.0, 0.5])
    hhat = (q1 * sigma) @ q2.conj().T
    v, _ = build_precoder(hhat, 2)
    gains = np.linalg.norm(hhat @ v, axis=0)
    assert np.allclose(gains, [3.0, 2.0], atol=1e-10)


def test_sign_fix_deterministic():
    hhat = _random_estimate(12)
    v1, n1 = build_precoder(hhat, 2)
    v2, n2 = build_precoder(hhat.copy(), 2)
    assert np.array_equal(v1, v2)
    assert np.array_equal(n1, n2)
    # the pivot entry of each column is real positive
    for col in np.concatenate([v1, n1], axis=1).T:
        piv = col[np.argmax(np.abs(col))]
        assert piv.imag == pytest.approx(0.0, abs=1e-14)
        assert piv.real > 0


def test_stream_count_bound():
    with pytest.raises(ValueError, match="stream count"):
        build_precoder(np.eye(3, dtype=complex), 4)


def test_chordal_endpoints():
    assert kappa_to_chordal(0.0, 2) == 0.0
    assert kappa_to_chordal(4.0, 2) == pytest.approx(2.0)


def test_chordal_hand_value():
    # b=2, kappa=0.1: 2*(1 - 0.975^2) = 0.09875
    assert kappa_to_chordal(0.1, 2) == pytest.approx(0.09875, rel=1e-12)


def test_chordal_range_error():
    with pytest.raises(ValueError):
        kappa_to_chordal(-0.01, 2)
    with pytest.raises(ValueError):
        kappa_to_chordal(4.01, 2)


def test_synthesis_kappa_zero_is_exact():
    hhat = _random_estimate(13)
    v, v_null = build_precoder(hhat, 2)
    vhat = synthesize_eve_precoder(v, v_null, 0.0)
    assert np.allclose(vhat, v, atol=1e-14)


def test_synthesis_kappa_max_is_orthogonal():
    hhat = _random_estimate(14)
    v, v_null = build_precoder(hhat, 2)
    vhat = synthesize_eve_precoder(v, v_null, 4.0)
    assert np.linalg.norm(vhat.conj().T @ v) < 1e-10


def test_synthesis_trace_identity():
    # tr Re{Vhat^H V} = b (1 - kappa/2b) = 1.95 at kappa=0.1, b=2
    hhat = _random_estimate(15)
    v, v_null = build_precoder(hhat, 2)
    vhat = synthesize_eve_precoder(v, v_null, 0.1)
    assert np.trace(vhat.conj().T @ v).real == pytest.approx(1.95, abs=1e-10)


def test_synthesis_orthonormal():
    hhat = _random_estimate(16)
    v, v_null = build_precoder(hhat, 2)
    for kappa in (0.0, 0.3, 1.7, 4.0):
        vhat = synthesize_eve_precoder(v, v_null, kappa)
        assert np.linalg.norm(vhat.conj().T @ vhat - np.eye(2)) < 1e-10


def test_insufficient_null_space():
    hhat = _random_estimate(17, rows=4, cols=3)
    v, v_null = build_precoder(hhat, 2)  # null space has 1 column
    with pytest.raises(ValueError, match="insufficient null space"):
        synthesize_eve_precoder(v, v_null, 0.5)


def test_measure_kappa_extremes():
    hhat = _random_estimate(18)
    v, v_null = build_precoder(hhat, 2)
    assert measure_kappa(v, v) == pytest.approx(0.0, abs=1e-12)
    assert measure_kappa(v_null[:, :2], v) == pytest.approx(4.0, abs=1e-10)


@settings(deadline=None, max_examples=40)
@given(
    kappa=st.floats(min_value=0.0, max_value=4.0, allow_nan=False),
    seed=st.integers(min_value=0, max_value=10 ** 6),
)
def test_round_trip_property(kappa, seed):
    hhat = _random_estimate(seed)
    v, v_null = build_precoder(hhat, 2)
    vhat = synthesize_eve_precoder(v, v_null, kappa)
    assert measure_kappa(vhat, v) == pytest.approx(kappa, abs=1e-8)


def test_chordal_identity_on_synthesized():
    # tr((V^H Vhat)(Vhat^H V)) = b - d
    hhat = _random_estimate(19)
    v, v_null = build_precoder(hhat, 2)
    for kappa in (0.0, 0.1, 0.5, 1.0, 4.0):
        vhat = synthesize_eve_precoder(v, v_null, kappa)
        m = v.conj().T @ vhat
        lhs = np.trace(m @ m.conj().T).real
        assert lhs == pytest.approx(2.0 - kappa_to_chordal(kappa, 2), abs=1e-8)


def test_precoder_set_shapes_and_kappas():
    cfg = SystemConfig(kappa_a=0.1, kappa_b=0.7)
    ch = sample_channel_set(cfg, trial_rng(cfg.seed, 0))
    pre = build_precoder_set(ch, cfg)
    assert pre.v_a.shape == (4, 2) and pre.v_a_null.shape == (4, 2)
    assert pre.v_b.shape == (4, 2) and pre.v_b_null.shape == (4, 2)
    assert measure_kappa(pre.vhat_ae, pre.v_a) == pytest.approx(0.1, abs=1e-8)
    assert measure_kappa(pre.vhat_be, pre.v_b) == pytest.approx(0.7, abs=1e-8)
