"""Per-stream power shaping on top of the coarse budget split.

The coarse step fixes two scalars per node: signal budget gamma * P and
AN budget (1 - gamma) * P. The policies here spread those over the b
signal streams and the N - b null streams using only the legitimate
channel estimates, so nothing Eve-specific can leak into the shaping.

All policies return plain per-stream vectors; ``allocate_fine`` composes
them into the PowerAllocation consumed by the exact rate computations.
"""

import warnings

import numpy as np

from .rates import PowerAllocation

_EIG_FLOOR = 1e-12


def _gram_diag(hhat, basis):
    """diag(basis^H hhat^H hhat basis), real nonnegative."""
    hb = hhat @ basis
    return np.einsum("ij,ij->j", hb.conj(), hb).real


def equal_allocation(cfg, gamma_a, gamma_b):
    """Uniform power inside each class, the no-tuning baseline."""
    parts = []
    for gamma, p, n_null in (
        (gamma_a, cfg.p_alice, cfg.null_dim_alice),
        (gamma_b, cfg.p_bob, cfg.null_dim_bob),
    ):
        parts.append(
            (
                np.full(cfg.b, gamma * p / cfg.b),
                np.full(cfg.b, (1.0 - gamma) * p / (2.0 * cfg.b)),
                np.full(n_null, (1.0 - gamma) * p / (2.0 * n_null)),
            )
        )
    (p_s_a, p_w_a, p_wn_a), (p_s_b, p_w_b, p_wn_b) = parts
    return PowerAllocation(
        p_s_a, p_w_a, p_wn_a, p_s_b, p_w_b, p_wn_b, gamma_a, gamma_b, 0.5, 0.5
    )


def signal_proportional_allocation(hhat_ji, v_i, gamma_i, p_i):
    """Signal power proportional to each stream's effective channel gain.

    Maximizes the received desired-signal power under the trace budget;
    a channel estimate with no energy through the precoder (zero-trace
    Gram) degrades to the equal split, with a warning as the flag.
    """
    b = v_i.shape[1]
    d = _gram_diag(hhat_ji, v_i)
    total = float(d.sum())
    if total <= 0.0:
        warnings.warn("signal gram matrix has zero trace; splitting equally")
        return np.full(b, gamma_i * p_i / b)
    return gamma_i * p_i * d / total


def an_min_stream(hhat_ji, v_i, v_null_i, gamma_i, p_i):
    """Entire AN budget on the stream the peer receives most weakly.

    The leaked-power objective is linear in the per-stream powers, so its
    minimum over the budget simplex sits on a vertex: one-hot allocation
    at the smallest entry of p0 = [null-stream gains; signal-stream
    gains], first index on ties.
    """
    b = v_i.shape[1]
    n_null = v_null_i.shape[1]
    p0 = np.concatenate([_gram_diag(hhat_ji, v_null_i), _gram_diag(hhat_ji, v_i)])
    k = int(np.argmin(p0))
    p_w = np.zeros(b)
    p_wn = np.zeros(n_null)
    if k < n_null:
        p_wn[k] = (1.0 - gamma_i) * p_i
    else:
        p_w[k - n_null] = (1.0 - gamma_i) * p_i
    return p_w, p_wn


def an_eigen_inverse(hhat_ji, v_i, gamma_i, p_i, xi_i):
    """Signal-space AN weighted by inverse eigenvalues of the stream Gram.

    The share xi_i of the AN budget goes into the signal space, split
    across streams as (1/lambda_k) / sum(1/lambda); eigenvalues are taken
    in descending order to match the stream convention (strongest stream
    first, so it receives the least noise). The remaining budget is spread
    uniformly over the null space. Near-zero eigenvalues are floored at
    1e-12 and flagged, since the inverse weighting is meaningless for a
    dead stream.
    """
    n_tx = hhat_ji.shape[1]
    b = v_i.shape[1]
    n_null = n_tx - b
    hv = hhat_ji @ v_i
    lam = np.linalg.eigvalsh(hv.conj().T @ hv)[::-1]
    if lam[-1] < _EIG_FLOOR:
        warnings.warn("stream gram eigenvalue floored; inverse weighting degenerate")
        lam = np.maximum(lam, _EIG_FLOOR)
    inv = 1.0 / lam
    p_w = xi_i * (1.0 - gamma_i) * p_i * inv / inv.sum()
    p_wn = np.full(n_null, (1.0 - xi_i) * (1.0 - gamma_i) * p_i / n_null)
    return p_w, p_wn


def known_an_uniform(gamma_i, p_i, b, n_null, xi_i=None):
    """Uniform AN, halved across the two classes unless xi says otherwise."""
    xi = 0.5 if xi_i is None else xi_i
    p_w = np.full(b, xi * (1.0 - gamma_i) * p_i / b)
    p_wn = np.full(n_null, (1.0 - xi) * (1.0 - gamma_i) * p_i / n_null)
    return p_w, p_wn


def _realized_xi(p_w, gamma_i, p_i, fallback):
    an_budget = (1.0 - gamma_i) * p_i
    if an_budget <= 0.0:
        return fallback
    return float(p_w.sum()) / an_budget


def allocate_fine(cfg, ch, pre, gamma_a, gamma_b, signal="equal", an="uniform",
                  xi_a=None, xi_b=None):
    """Compose one signal policy and one AN policy into a PowerAllocation.

    signal: "equal" or "proportional"; an: "uniform", "min_stream" or
    "eigen_inverse". xi_* is the signal-space share of the AN budget where
    the policy uses one (uniform and eigen_inverse; min_stream decides the
    split itself). The stored xi is the realized share, so a min_stream
    outcome reports 0 or 1 depending on where the single stream landed.
    """
    if signal not in ("equal", "proportional"):
        raise ValueError(f"unknown signal policy: {signal!r}")
    if an not in ("uniform", "min_stream", "eigen_inverse"):
        raise ValueError(f"unknown an policy: {an!r}")
    out = []
    for gamma, p, n_null, hhat, v, v_null, xi in (
        (gamma_a, cfg.p_alice, cfg.null_dim_alice, ch.hhat_ba, pre.v_a, pre.v_a_null, xi_a),
        (gamma_b, cfg.p_bob, cfg.null_dim_bob, ch.hhat_ab, pre.v_b, pre.v_b_null, xi_b),
    ):
        if signal == "equal":
            p_s = np.full(cfg.b, gamma * p / cfg.b)
        else:
            p_s = signal_proportional_allocation(hhat, v, gamma, p)
        if an == "uniform":
            p_w, p_wn = known_an_uniform(gamma, p, cfg.b, n_null, xi)
        elif an == "min_stream":
            p_w, p_wn = an_min_stream(hhat, v, v_null, gamma, p)
        else:
            p_w, p_wn = an_eigen_inverse(hhat, v, gamma, p, 0.5 if xi is None else xi)
        fallback = 0.5 if xi is None else float(xi)
        out.append((p_s, p_w, p_wn, gamma, _realized_xi(p_w, gamma, p, fallback)))
    (p_s_a, p_w_a, p_wn_a, ga, xa), (p_s_b, p_w_b, p_wn_b, gb, xb) = out
    return PowerAllocation(
        p_s_a, p_w_a, p_wn_a, p_s_b, p_w_b, p_wn_b, ga, gb, xa, xb
    )
