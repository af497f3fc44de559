"""Exact instantaneous rates for one channel draw and power allocation.

The legitimate receivers decode through the channel estimates; estimation
error enters as an extra white term sigma2_delta * P on the noise floor.
The eavesdropper knows her own channels perfectly and subtracts the
signal part of what she overhears using her (possibly mismatched)
precoder copies; the residual forms her interference covariance.
"""

import math
from dataclasses import dataclass

import numpy as np

_LN2 = math.log(2.0)

# Diagnostic counter: how many eavesdropper covariances needed eigenvalue
# flooring before inversion (rounding can leave a tiny negative eigenvalue
# when the mismatch residual is nearly rank deficient).
_pd_floor_events = 0


def pd_floor_count():
    return _pd_floor_events


def reset_pd_floor_count():
    global _pd_floor_events
    _pd_floor_events = 0


@dataclass
class PowerAllocation:
    """Per-stream diagonal powers for both nodes.

    ``p_s_*`` are the signal powers (length b), ``p_w_*`` the signal-space
    artificial noise (length b), ``p_wn_*`` the null-space artificial
    noise (length N_i - b). ``gamma_*`` is the signal fraction of the
    budget, ``xi_*`` the share of the AN budget placed in the signal
    space.
    """

    p_s_a: np.ndarray
    p_w_a: np.ndarray
    p_wn_a: np.ndarray
    p_s_b: np.ndarray
    p_w_b: np.ndarray
    p_wn_b: np.ndarray
    gamma_a: float
    gamma_b: float
    xi_a: float
    xi_b: float


@dataclass
class RateReport:
    """Instantaneous rates in bits per channel use."""

    r_ba: float
    r_ab: float
    r_ea: float
    r_eb: float
    r_sa: float
    r_sb: float
    sum_secrecy: float


def logdet_identity_plus(s, c):
    """log2 det(I + S C^-1) for Hermitian PSD S and PD C.

    Evaluated as logdet(C + S) - logdet(C) through Cholesky factors,
    which keeps the difference stable for ill-conditioned C.
    """
    try:
        lc = np.linalg.cholesky(c)
        lcs = np.linalg.cholesky(c + s)
    except np.linalg.LinAlgError:
        raise ValueError("covariance not PD") from None
    val = 2.0 * (np.sum(np.log(np.abs(np.diag(lcs)))) - np.sum(np.log(np.abs(np.diag(lc)))))
    return max(val / _LN2, 0.0)


def _hermitize(c):
    return 0.5 * (c + c.conj().T)


def ensure_positive_definite(c):
    """Floor tiny or negative eigenvalues of a Hermitian matrix.

    The floor is 1e-12 * tr(C)/N. Returns C unchanged when no eigenvalue
    is below it; otherwise reconstructs from clipped eigenvalues and
    increments the diagnostic counter.
    """
    global _pd_floor_events
    n = c.shape[0]
    floor = 1e-12 * np.trace(c).real / n
    w = np.linalg.eigvalsh(c)
    if w[0] >= floor:
        return c
    w2, q = np.linalg.eigh(c)
    w2 = np.maximum(w2, floor)
    _pd_floor_events += 1
    return _hermitize((q * w2) @ q.conj().T)


def transmit_covariance(v, v_null, p_s, p_w, p_wn):
    """T = V diag(p_s + p_w) V^H + V_null diag(p_wn) V_null^H."""
    t = (v * (p_s + p_w)) @ v.conj().T + (v_null * p_wn) @ v_null.conj().T
    return _hermitize(t)


def _node_pieces(ch, pre, alloc, cfg, direction):
    """Channel/precoder/power pieces for one legitimate direction.

    ``"ba"`` is the link received at Bob carrying Alice's streams (the
    quantities subscripted BA); ``"ab"`` is the mirror.
    """
    if direction == "ba":
        return dict(
            hhat=ch.hhat_ba,
            g_rx=ch.g_b,
            v_tx=pre.v_a,
            vnull_tx=pre.v_a_null,
            p_s=alloc.p_s_a,
            p_w=alloc.p_w_a,
            p_wn=alloc.p_wn_a,
            n_rx=cfg.n_bob,
            sigma2_delta=cfg.sigma2_delta_ba,
            p_budget_tx=cfg.p_alice,
            t_rx=transmit_covariance(pre.v_b, pre.v_b_null, alloc.p_s_b, alloc.p_w_b, alloc.p_wn_b),
        )
    if direction == "ab":
        return dict(
            hhat=ch.hhat_ab,
            g_rx=ch.g_a,
            v_tx=pre.v_b,
            vnull_tx=pre.v_b_null,
            p_s=alloc.p_s_b,
            p_w=alloc.p_w_b,
            p_wn=alloc.p_wn_b,
            n_rx=cfg.n_alice,
            sigma2_delta=cfg.sigma2_delta_ab,
            p_budget_tx=cfg.p_bob,
            t_rx=transmit_covariance(pre.v_a, pre.v_a_null, alloc.p_s_a, alloc.p_w_a, alloc.p_wn_a),
        )
    raise ValueError(f"unknown direction {direction!r}")


def covariance_legitimate(ch, pre, alloc, cfg, direction):
    """Interference-plus-noise covariance at a legitimate receiver.

    Self-interference of the receiver's own transmission, the peer's
    artificial noise when unknown (theta = 1), and the white floor
    sigma2_delta * P + sigma2. The error term uses the full budget P of
    the transmitter regardless of allocator slack.
    """
    p = _node_pieces(ch, pre, alloc, cfg, direction)
    c = p["g_rx"] @ p["t_rx"] @ p["g_rx"].conj().T
    if cfg.theta:
        an = (p["v_tx"] * p["p_w"]) @ p["v_tx"].conj().T
        an = an + (p["vnull_tx"] * p["p_wn"]) @ p["vnull_tx"].conj().T
        c = c + p["hhat"] @ an @ p["hhat"].conj().T
    c = c + (p["sigma2_delta"] * p["p_budget_tx"] + cfg.sigma2) * np.eye(p["n_rx"])
    return _hermitize(c)


def rate_legitimate(ch, pre, alloc, cfg, direction):
    """log2 det of the signal-over-covariance form for one direction."""
    p = _node_pieces(ch, pre, alloc, cfg, direction)
    hv = p["hhat"] @ p["v_tx"]
    s = _hermitize((hv * p["p_s"]) @ hv.conj().T)
    return logdet_identity_plus(s, covariance_legitimate(ch, pre, alloc, cfg, direction))


def covariance_eve(ch, pre, alloc, cfg):
    """Eve's interference covariance after cancelling her signal estimate.

    Eve reconstructs the signal part of what she overhears with her own
    precoder copies and subtracts it; with T_E = BD(T_A, T_B) that removes
    the Vhat_E P_sE Vhat_E^H slice of the transmit covariance. What the
    subtraction cannot touch is the part of the true signal that rides
    outside her assumed subspace, so the residual seen through the channel
    is (V - Vhat_E) P_sE (V - Vhat_E)^H plus the untouched artificial
    noise. At kappa = 0 the difference term vanishes and only the AN and
    thermal noise remain; at kappa > 0 the leaked signal acts as extra
    interference (per stream its trace is kappa * p_s, matching the
    large-scale coefficient beta * (gamma * kappa + 1 - gamma) * P used by
    the ergodic approximation). A tiny eigenvalue floor guards the
    inversion when the residual is nearly rank deficient.
    """
    h_e = np.concatenate([ch.h_ea, ch.h_eb], axis=1)
    n_a, n_b = cfg.n_alice, cfg.n_bob
    inner = np.zeros((n_a + n_b, n_a + n_b), dtype=complex)
    inner[:n_a, :n_a] = transmit_covariance(
        pre.v_a, pre.v_a_null, np.zeros(cfg.b), alloc.p_w_a, alloc.p_wn_a
    )
    inner[n_a:, n_a:] = transmit_covariance(
        pre.v_b, pre.v_b_null, np.zeros(cfg.b), alloc.p_w_b, alloc.p_wn_b
    )
    delta = np.zeros((n_a + n_b, 2 * cfg.b), dtype=complex)
    delta[:n_a, : cfg.b] = pre.v_a - pre.vhat_ae
    delta[n_a:, cfg.b :] = pre.v_b - pre.vhat_be
    p_se = np.concatenate([alloc.p_s_a, alloc.p_s_b])
    inner = _hermitize(inner + (delta * p_se) @ delta.conj().T)
    c = h_e @ inner @ h_e.conj().T + cfg.sigma2 * np.eye(cfg.n_eve)
    return ensure_positive_definite(_hermitize(c))


def _eve_signal(h_ei, vhat, p_s):
    hv = h_ei @ vhat
    return _hermitize((hv * p_s) @ hv.conj().T)


def rate_eve(ch, pre, alloc, cfg):
    """Eve's rates for the two decoding stages.

    She decodes one transmitter against C_E and the other against
    C_E plus the first signal; the sum is order-invariant.
    """
    c_e = covariance_eve(ch, pre, alloc, cfg)
    s_a = _eve_signal(ch.h_ea, pre.vhat_ae, alloc.p_s_a)
    s_b = _eve_signal(ch.h_eb, pre.vhat_be, alloc.p_s_b)
    r_ea = logdet_identity_plus(s_a, c_e)
    r_eb = logdet_identity_plus(s_b, c_e + s_a)
    return r_ea, r_eb


def secrecy_rates(r_ba, r_ab, r_ea, r_eb):
    """Clamped per-link secrecy rates and their sum."""
    r_sa = max(0.0, r_ba - r_ea)
    r_sb = max(0.0, r_ab - r_eb)
    return r_sa, r_sb, r_sa + r_sb


def rate_report(ch, pre, alloc, cfg):
    """All instantaneous rates for one draw."""
    r_ba = rate_legitimate(ch, pre, alloc, cfg, "ba")
    r_ab = rate_legitimate(ch, pre, alloc, cfg, "ab")
    r_ea, r_eb = rate_eve(ch, pre, alloc, cfg)
    r_sa, r_sb, total = secrecy_rates(r_ba, r_ab, r_ea, r_eb)
    return RateReport(r_ba, r_ab, r_ea, r_eb, r_sa, r_sb, total)
