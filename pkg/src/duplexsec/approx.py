"""Ergodic rate approximations and secrecy-region tools.

Everything in this module lives on the large-scale side of the two-step
allocation: path losses, power budgets and Eve's precoder mismatch norms
enter, the per-draw channel matrices do not. Each interference-plus-noise
scalar is affine in the signal fractions u = (gamma_a, gamma_b), which is
what makes the coarse optimization and the region analysis tractable.

The rate functions broadcast over numpy arrays of gamma values, so a whole
secrecy-region grid can be evaluated in one call.
"""

import math
from typing import NamedTuple

import numpy as np


class CoarseCoefficients(NamedTuple):
    """Affine pieces of the three noise scalars, c = a * u + g.

    ``a_ba``/``a_ab`` multiply the own-link gamma (zero when the AN is
    known and subtracted at the legitimate receiver), ``a_e`` is the
    2-vector acting on (gamma_a, gamma_b) at Eve. All in linear power.
    """

    a_ba: float
    g_ba: float
    a_ab: float
    g_ab: float
    a_e: np.ndarray
    g_e: float


class ApproxRates(NamedTuple):
    r_ba: float
    r_ab: float
    r_ea: float
    r_eb: float


class NoEveGamma(NamedTuple):
    gamma_a: float
    gamma_b: float
    clamped_a: bool
    clamped_b: bool


def coarse_coefficients(cfg):
    """Affine coefficients of c_BA, c_AB, c_E in the signal fractions.

    The AN power is aggregated: P_w + P_wn = (1 - gamma) * P, so the split
    between signal-space and null-space noise never reaches this layer.
    At Eve the signal leaks with weight kappa and the AN arrives whole,
    hence the (kappa - 1) entries of a_e.
    """
    a_ba = -cfg.theta * cfg.beta_ba * cfg.p_alice
    g_ba = (
        cfg.p_bob * cfg.eta
        + cfg.theta * cfg.beta_ba * cfg.p_alice
        + cfg.sigma2_delta_ba * cfg.p_alice
        + cfg.sigma2
    )
    a_ab = -cfg.theta * cfg.beta_ab * cfg.p_bob
    g_ab = (
        cfg.p_alice * cfg.eta
        + cfg.theta * cfg.beta_ab * cfg.p_bob
        + cfg.sigma2_delta_ab * cfg.p_bob
        + cfg.sigma2
    )
    a_e = np.array(
        [
            cfg.beta_ea * (cfg.kappa_a - 1.0) * cfg.p_alice,
            cfg.beta_eb * (cfg.kappa_b - 1.0) * cfg.p_bob,
        ]
    )
    g_e = cfg.beta_ea * cfg.p_alice + cfg.beta_eb * cfg.p_bob + cfg.sigma2
    return CoarseCoefficients(a_ba, g_ba, a_ab, g_ab, a_e, g_e)


def noise_scalars(cfg, gamma_a, gamma_b):
    """The three per-antenna noise scalars at the given signal fractions."""
    co = coarse_coefficients(cfg)
    c_ba = co.a_ba * gamma_a + co.g_ba
    c_ab = co.a_ab * gamma_b + co.g_ab
    c_e = co.a_e[0] * gamma_a + co.a_e[1] * gamma_b + co.g_e
    return c_ba, c_ab, c_e


def ergodic_rate_approx(cfg, gamma_a, gamma_b):
    """The four tilde rates at signal fractions (gamma_a, gamma_b).

    Accepts scalars or broadcastable arrays in [0, 1].
    """
    gamma_a = np.asarray(gamma_a, dtype=float)
    gamma_b = np.asarray(gamma_b, dtype=float)
    c_ba, c_ab, c_e = noise_scalars(cfg, gamma_a, gamma_b)
    b = cfg.b
    r_ba = b * np.log2(1.0 + cfg.n_bob * cfg.beta_ba * gamma_a * cfg.p_alice / (b * c_ba))
    r_ab = b * np.log2(1.0 + cfg.n_alice * cfg.beta_ab * gamma_b * cfg.p_bob / (b * c_ab))
    r_ea = b * np.log2(1.0 + cfg.n_eve * cfg.beta_ea * gamma_a * cfg.p_alice / (b * c_e))
    r_eb = b * np.log2(1.0 + cfg.n_eve * cfg.beta_eb * gamma_b * cfg.p_bob / (b * c_e))
    if r_ba.ndim == 0:
        return ApproxRates(float(r_ba), float(r_ab), float(r_ea), float(r_eb))
    return ApproxRates(r_ba, r_ab, r_ea, r_eb)


def no_eve_gamma(cfg, t_a, t_b):
    """Closed-form signal fractions meeting rate targets with no eavesdropper.

    Inverts r = b log2(1 + n gamma / (b (a gamma + g))) for gamma, one link
    at a time. A target beyond the gamma = 1 rate is clamped and flagged.
    """
    co = coarse_coefficients(cfg)
    links = (
        (t_a, co.a_ba, co.g_ba, cfg.n_bob * cfg.beta_ba * cfg.p_alice),
        (t_b, co.a_ab, co.g_ab, cfg.n_alice * cfg.beta_ab * cfg.p_bob),
    )
    gammas = []
    flags = []
    for t, a, g, n in links:
        tbar = 2.0 ** (t / cfg.b)
        denom = a * (1.0 - tbar) + n / cfg.b
        if denom <= 0.0:
            raise ValueError("target rate unachievable")
        gamma = g * (tbar - 1.0) / denom
        gammas.append(min(gamma, 1.0))
        flags.append(gamma > 1.0)
    return NoEveGamma(gammas[0], gammas[1], flags[0], flags[1])


def zero_secrecy_boundary(cfg, u):
    """Linear residuals whose zero crossings trace the t = 0 secrecy border.

    res_a has the sign of R~_BA - R~_EA for gamma_a > 0 (both rates share
    the b log2(1 + n gamma / (b c)) shape, so comparing them reduces to
    comparing n_BA c_E against n_EA c_BA). Positive residual means positive
    approximate secrecy on that link. Broadcasts over grids of u.
    """
    gamma_a = np.asarray(u[0], dtype=float)
    gamma_b = np.asarray(u[1], dtype=float)
    c_ba, c_ab, c_e = noise_scalars(cfg, gamma_a, gamma_b)
    res_a = (
        cfg.n_bob * cfg.beta_ba * cfg.p_alice / cfg.b * c_e
        - cfg.n_eve * cfg.beta_ea * cfg.p_alice / cfg.b * c_ba
    )
    res_b = (
        cfg.n_alice * cfg.beta_ab * cfg.p_bob / cfg.b * c_e
        - cfg.n_eve * cfg.beta_eb * cfg.p_bob / cfg.b * c_ab
    )
    return res_a, res_b


def quadratic_constraint_residual(cfg, u, t_a, t_b):
    """Bivariate quadratic residuals of the secrecy-target constraints.

    q_a >= 0 iff R~_BA - R~_EA >= t_a (same for the b side). Evaluated as
    the difference of the two affine products,

        q = c_E (b c_ji + n_ji gamma_i) - tbar c_ji (b c_E + n_Ei gamma_i),

    which is the expanded matrix form times b and therefore sign-identical.
    At t = 0 it collapses to gamma_i * b times the boundary residual.
    """
    gamma_a = np.asarray(u[0], dtype=float)
    gamma_b = np.asarray(u[1], dtype=float)
    c_ba, c_ab, c_e = noise_scalars(cfg, gamma_a, gamma_b)
    b = cfg.b
    tbar_a = 2.0 ** (t_a / b)
    tbar_b = 2.0 ** (t_b / b)
    n_ba = cfg.n_bob * cfg.beta_ba * cfg.p_alice
    n_ab = cfg.n_alice * cfg.beta_ab * cfg.p_bob
    n_ea = cfg.n_eve * cfg.beta_ea * cfg.p_alice
    n_eb = cfg.n_eve * cfg.beta_eb * cfg.p_bob
    q_a = c_e * (b * c_ba + n_ba * gamma_a) - tbar_a * c_ba * (b * c_e + n_ea * gamma_a)
    q_b = c_e * (b * c_ab + n_ab * gamma_b) - tbar_b * c_ab * (b * c_e + n_eb * gamma_b)
    return q_a, q_b


def high_snr_limits(cfg):
    """Limits of R~_BA and R~_EA when both budgets scale up at fixed ratio.

    With gamma = 1 and P_A, P_B -> infinity holding rho = P_B / P_A, the
    noise scalars grow linearly in power and the SNR terms converge:

        R~_BA -> b log2(1 + N_B beta_BA / (b (eta rho + sigma2_delta_BA)))
        R~_EA -> b log2(1 + N_E beta_EA / (b (beta_EA kappa_A
                                             + beta_EB kappa_B rho)))

    The finite constant inside the log is kept; dropping it would not match
    the finite-power approximation even at 60 dB. A vanishing legitimate
    denominator (no self-interference and perfect estimation) returns
    math.inf for that link.
    """
    rho = cfg.p_bob / cfg.p_alice
    denom_e = cfg.beta_ea * cfg.kappa_a + cfg.beta_eb * cfg.kappa_b * rho
    if denom_e <= 0.0:
        raise ValueError("Eve limit unbounded")
    r_ea = cfg.b * math.log2(1.0 + cfg.n_eve * cfg.beta_ea / (cfg.b * denom_e))
    denom_ba = cfg.eta * rho + cfg.sigma2_delta_ba
    if denom_ba <= 0.0:
        r_ba = math.inf
    else:
        r_ba = cfg.b * math.log2(1.0 + cfg.n_bob * cfg.beta_ba / (cfg.b * denom_ba))
    return r_ba, r_ea
