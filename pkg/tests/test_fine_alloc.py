"""Fine allocation policies: budgets, shapes, optimality directions."""

from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from duplexsec.channel import SystemConfig, sample_channel_set, trial_rng
from duplexsec.fine_alloc import (
    allocate_fine,
    an_eigen_inverse,
    an_min_stream,
    equal_allocation,
    known_an_uniform,
    signal_proportional_allocation,
)
from duplexsec.precoding import build_precoder, build_precoder_set

CFG = SystemConfig()
P = 10.0**2.5


def draw(trial=7, cfg=CFG):
    ch = sample_channel_set(cfg, trial_rng(cfg.seed, trial))
    return ch, build_precoder_set(ch, cfg)


def node_budgets(alloc):
    a = alloc.p_s_a.sum() + alloc.p_w_a.sum() + alloc.p_wn_a.sum()
    b = alloc.p_s_b.sum() + alloc.p_w_b.sum() + alloc.p_wn_b.sum()
    return float(a), float(b)


def orthonormal_columns(n, b, seed=0):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, _ = np.linalg.qr(m)
    return q[:, :b]


def received_signal_power(hhat, v, p_s):
    hv = hhat @ v
    return float(np.einsum("ij,j,ij->", hv.conj(), p_s, hv).real)


def test_equal_allocation_gamma_one_silences_an():
    alloc = equal_allocation(CFG, 1.0, 1.0)
    assert np.all(alloc.p_w_a == 0.0) and np.all(alloc.p_wn_a == 0.0)
    assert np.all(alloc.p_w_b == 0.0) and np.all(alloc.p_wn_b == 0.0)


def test_equal_allocation_reference_values():
    alloc = equal_allocation(CFG, 0.8, 0.8)
    np.testing.assert_allclose(alloc.p_s_a, np.full(2, 0.4 * P), rtol=1e-12)
    np.testing.assert_allclose(alloc.p_w_a, np.full(2, 0.05 * P), rtol=1e-12)
    np.testing.assert_allclose(alloc.p_wn_a, np.full(2, 0.05 * P), rtol=1e-12)


def test_equal_allocation_budget_exact():
    alloc = equal_allocation(CFG, 0.37, 0.81)
    a, b = node_budgets(alloc)
    assert a == pytest.approx(CFG.p_alice, abs=1e-9)
    assert b == pytest.approx(CFG.p_bob, abs=1e-9)


def test_proportional_equal_gain_channel_splits_equally():
    v = orthonormal_columns(4, 2, seed=1)
    p_s = signal_proportional_allocation(2.0 * np.eye(4), v, 0.6, P)
    np.testing.assert_allclose(p_s, np.full(2, 0.3 * P), rtol=1e-12)


def test_proportional_rank_one_concentrates():
    v = orthonormal_columns(4, 2, seed=2)
    u = orthonormal_columns(4, 1, seed=3)[:, 0]
    hhat = np.outer(u, v[:, 0].conj())
    p_s = signal_proportional_allocation(hhat, v, 0.5, P)
    np.testing.assert_allclose(p_s, [0.5 * P, 0.0], atol=1e-12 * P)


def test_proportional_beats_equal_split():
    for trial in range(100):
        ch, pre = draw(trial)
        p_s = signal_proportional_allocation(ch.hhat_ba, pre.v_a, 0.7, P)
        equal = np.full(2, 0.7 * P / 2)
        assert received_signal_power(ch.hhat_ba, pre.v_a, p_s) >= received_signal_power(
            ch.hhat_ba, pre.v_a, equal
        ) - 1e-9


def test_proportional_zero_trace_falls_back():
    v = orthonormal_columns(4, 2, seed=4)
    with pytest.warns(UserWarning, match="zero trace"):
        p_s = signal_proportional_allocation(np.zeros((4, 4)), v, 0.6, P)
    np.testing.assert_allclose(p_s, np.full(2, 0.3 * P), rtol=1e-12)


def test_min_stream_is_one_hot():
    ch, pre = draw(11)
    p_w, p_wn = an_min_stream(ch.hhat_ba, pre.v_a, pre.v_a_null, 0.4, P)
    merged = np.concatenate([p_w, p_wn])
    assert np.count_nonzero(merged) == 1
    assert merged.sum() == pytest.approx(0.6 * P, rel=1e-12)


def test_min_stream_leak_no_worse_than_uniform():
    for trial in range(100):
        ch, pre = draw(trial)
        gamma = 0.4
        p_w, p_wn = an_min_stream(ch.hhat_ba, pre.v_a, pre.v_a_null, gamma, P)
        leak = received_signal_power(ch.hhat_ba, pre.v_a, p_w) + received_signal_power(
            ch.hhat_ba, pre.v_a_null, p_wn
        )
        u_w, u_wn = known_an_uniform(gamma, P, CFG.b, CFG.null_dim_alice)
        uniform_leak = received_signal_power(
            ch.hhat_ba, pre.v_a, u_w
        ) + received_signal_power(ch.hhat_ba, pre.v_a_null, u_wn)
        assert leak <= uniform_leak + 1e-9


def test_min_stream_tie_prefers_first_null_stream():
    eye = np.eye(4, dtype=complex)
    p_w, p_wn = an_min_stream(np.eye(4), eye[:, :2], eye[:, 2:], 0.4, P)
    assert np.all(p_w == 0.0)
    assert p_wn[0] == pytest.approx(0.6 * P, rel=1e-12)
    assert np.all(p_wn[1:] == 0.0)


def test_eigen_inverse_isotropic_splits_equally():
    v = orthonormal_columns(4, 2, seed=6)
    q = orthonormal_columns(4, 4, seed=7)
    p_w, p_wn = an_eigen_inverse(3.0 * q, v, 0.4, P, 0.8)
    np.testing.assert_allclose(p_w, np.full(2, 0.8 * 0.6 * P / 2), rtol=1e-9)
    np.testing.assert_allclose(p_wn, np.full(2, 0.2 * 0.6 * P / 2), rtol=1e-9)


def test_eigen_inverse_known_eigenvalue_ratio():
    v = np.eye(4, dtype=complex)[:, :2]
    hhat = np.diag([2.0, 1.0, 3.0, 4.0]).astype(complex)
    gamma = 0.5
    p_w, p_wn = an_eigen_inverse(hhat, v, gamma, P, 1.0)
    np.testing.assert_allclose(p_w, np.array([0.2, 0.8]) * 0.5 * P, rtol=1e-12)
    assert np.all(p_wn == 0.0)


def test_eigen_inverse_xi_endpoints():
    ch, pre = draw(13)
    zero_sig, full_null = an_eigen_inverse(ch.hhat_ba, pre.v_a, 0.4, P, 0.0)
    assert np.all(zero_sig == 0.0)
    np.testing.assert_allclose(full_null, np.full(2, 0.6 * P / 2), rtol=1e-12)
    full_sig, zero_null = an_eigen_inverse(ch.hhat_ba, pre.v_a, 0.4, P, 1.0)
    assert np.all(zero_null == 0.0)
    assert full_sig.sum() == pytest.approx(0.6 * P, rel=1e-12)


def test_eigen_inverse_rank_deficient_warns():
    v = orthonormal_columns(4, 2, seed=8)
    u = orthonormal_columns(4, 1, seed=9)[:, 0]
    hhat = np.outer(u, v[:, 0].conj())
    with pytest.warns(UserWarning, match="floored"):
        an_eigen_inverse(hhat, v, 0.4, P, 0.5)


def test_known_an_uniform_matches_equal_allocation():
    gamma = 0.3
    p_w, p_wn = known_an_uniform(gamma, CFG.p_alice, CFG.b, CFG.null_dim_alice)
    ref = equal_allocation(CFG, gamma, gamma)
    np.testing.assert_array_equal(p_w, ref.p_w_a)
    np.testing.assert_array_equal(p_wn, ref.p_wn_a)


def test_known_an_uniform_xi_override():
    p_w, p_wn = known_an_uniform(0.5, P, 2, 2, xi_i=0.9)
    np.testing.assert_allclose(p_w, np.full(2, 0.9 * 0.5 * P / 2), rtol=1e-12)
    np.testing.assert_allclose(p_wn, np.full(2, 0.1 * 0.5 * P / 2), rtol=1e-12)


@settings(deadline=None, max_examples=60)
@given(
    gamma_a=st.floats(0.0, 1.0),
    gamma_b=st.floats(0.0, 1.0),
    xi=st.floats(0.0, 1.0),
    signal=st.sampled_from(["equal", "proportional"]),
    an=st.sampled_from(["uniform", "min_stream", "eigen_inverse"]),
)
def test_compose_budget_identity_and_nonnegativity(gamma_a, gamma_b, xi, signal, an):
    ch, pre = draw(3)
    alloc = allocate_fine(
        CFG, ch, pre, gamma_a, gamma_b, signal=signal, an=an, xi_a=xi, xi_b=xi
    )
    a, b = node_budgets(alloc)
    assert a == pytest.approx(CFG.p_alice, abs=1e-9)
    assert b == pytest.approx(CFG.p_bob, abs=1e-9)
    for vec in (alloc.p_s_a, alloc.p_w_a, alloc.p_wn_a, alloc.p_s_b, alloc.p_w_b, alloc.p_wn_b):
        assert np.all(vec >= 0.0)
    assert alloc.gamma_a == gamma_a and alloc.gamma_b == gamma_b


def test_compose_records_realized_xi():
    ch, pre = draw(9)
    eig = allocate_fine(
        CFG, ch, pre, 0.5, 0.5, signal="proportional", an="eigen_inverse",
        xi_a=0.7, xi_b=0.7,
    )
    assert eig.xi_a == pytest.approx(0.7, abs=1e-12)
    assert eig.xi_b == pytest.approx(0.7, abs=1e-12)
    one_hot = allocate_fine(CFG, ch, pre, 0.5, 0.5, an="min_stream")
    assert one_hot.xi_a == (1.0 if one_hot.p_w_a.sum() > 0.0 else 0.0)
    assert one_hot.xi_b == (1.0 if one_hot.p_w_b.sum() > 0.0 else 0.0)


def test_compose_ignores_eve_channels():
    ch, pre = draw(21)
    blinded = replace(ch, h_ea=np.zeros_like(ch.h_ea), h_eb=np.zeros_like(ch.h_eb))
    a = allocate_fine(CFG, ch, pre, 0.6, 0.4, signal="proportional", an="eigen_inverse")
    b = allocate_fine(CFG, blinded, pre, 0.6, 0.4, signal="proportional", an="eigen_inverse")
    for name in ("p_s_a", "p_w_a", "p_wn_a", "p_s_b", "p_w_b", "p_wn_b"):
        np.testing.assert_array_equal(getattr(a, name), getattr(b, name))


def test_compose_rejects_unknown_policies():
    ch, pre = draw(2)
    with pytest.raises(ValueError, match="signal policy"):
        allocate_fine(CFG, ch, pre, 0.5, 0.5, signal="waterfill")
    with pytest.raises(ValueError, match="an policy"):
        allocate_fine(CFG, ch, pre, 0.5, 0.5, an="none")
