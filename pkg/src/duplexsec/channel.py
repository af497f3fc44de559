"""Channel sampling for the two-way full-duplex wiretap model.

Every link is flat Rayleigh: matrix entries are i.i.d. CN(0, beta) with
beta = r^(-alpha) given by the node geometry. CN(0, v) means real and
imaginary parts are independent N(0, v/2), so E|h|^2 = v. A draw covers
the reciprocal legitimate link, its two (independently erred) estimates,
the eavesdropper links, and the residual self-interference channels left
after cancellation.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SystemConfig:
    """All scalar parameters of one simulation setup.

    Power and variance fields are linear scale. ``theta`` says whether the
    peers know each other's artificial noise (0 = known, can be subtracted;
    1 = unknown). ``kappa_a``/``kappa_b`` are the squared Frobenius mismatch
    of the eavesdropper's precoder copies, in [0, 2b].
    """

    n_alice: int = 4
    n_bob: int = 4
    n_eve: int = 8
    b: int = 2
    pos_alice: tuple = (0.0, 0.0)
    pos_bob: tuple = (0.0, 1.0)
    pos_eve: tuple = (1.0, 1.0)
    alpha: float = 3.0
    p_alice: float = 10.0 ** 2.5
    p_bob: float = 10.0 ** 2.5
    sigma2: float = 1.0
    eta: float = 1.0
    sigma2_delta_ba: float = 0.1
    sigma2_delta_ab: float = 0.1
    theta: int = 1
    kappa_a: float = 0.0
    kappa_b: float = 0.0
    trials: int = 100
    seed: int = 0

    def __post_init__(self):
        for name in ("n_alice", "n_bob", "n_eve", "b"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if self.n_alice < 2 * self.b or self.n_bob < 2 * self.b:
            raise ValueError(
                "n_alice and n_bob must be >= 2b so the precoder null space "
                "holds at least b columns"
            )
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.p_alice <= 0 or self.p_bob <= 0:
            raise ValueError("power budgets must be positive")
        if self.sigma2 <= 0:
            raise ValueError("sigma2 must be positive")
        if self.eta < 0:
            raise ValueError("eta must be nonnegative")
        if self.sigma2_delta_ba < 0 or self.sigma2_delta_ab < 0:
            raise ValueError("estimation error variances must be nonnegative")
        if self.theta not in (0, 1):
            raise ValueError("theta must be 0 or 1")
        for name in ("kappa_a", "kappa_b"):
            k = getattr(self, name)
            if not 0 <= k <= 2 * self.b:
                raise ValueError(f"{name} must lie in [0, 2b], got {k!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        for p, q in (
            (self.pos_alice, self.pos_bob),
            (self.pos_alice, self.pos_eve),
            (self.pos_bob, self.pos_eve),
        ):
            if tuple(p) == tuple(q):
                raise ValueError("node positions must be pairwise distinct")

    # path-loss coefficients of the four links
    @property
    def beta_ba(self):
        """Large-scale gain of the legitimate link (receiver Bob)."""
        return path_loss(self.pos_alice, self.pos_bob, self.alpha)

    @property
    def beta_ab(self):
        """Same distance as beta_ba; kept separate for readability."""
        return path_loss(self.pos_bob, self.pos_alice, self.alpha)

    @property
    def beta_ea(self):
        return path_loss(self.pos_alice, self.pos_eve, self.alpha)

    @property
    def beta_eb(self):
        return path_loss(self.pos_bob, self.pos_eve, self.alpha)

    @property
    def null_dim_alice(self):
        return self.n_alice - self.b

    @property
    def null_dim_bob(self):
        return self.n_bob - self.b


@dataclass
class ChannelSet:
    """One Monte Carlo draw of every channel matrix.

    ``h_ab`` is the exact conjugate transpose of ``h_ba`` (reciprocity).
    The estimates carry independent error matrices, so ``hhat_ab`` is not
    the conjugate transpose of ``hhat_ba`` in general.
    """

    h_ba: np.ndarray
    h_ab: np.ndarray
    hhat_ba: np.ndarray
    hhat_ab: np.ndarray
    h_ea: np.ndarray
    h_eb: np.ndarray
    g_a: np.ndarray
    g_b: np.ndarray


def path_loss(pos_i, pos_j, alpha):
    """Return r^(-alpha) for the Euclidean distance r between two points."""
    r = math.dist(pos_i, pos_j)
    if r == 0:
        raise ValueError("zero distance between nodes")
    return r ** (-alpha)


def trial_rng(seed, trial):
    """Counter-based substream for one Monte Carlo trial.

    Derived from (seed, trial index) so trials reproduce independently of
    execution order.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trial,))
    return np.random.Generator(np.random.Philox(ss))


def _complex_normal(rng, rows, cols):
    """Unit-variance circular complex Gaussian matrix."""
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return (re + 1j * im) / math.sqrt(2.0)


def sample_channel_pair(rng, rows, cols, beta, sigma2_delta):
    """Draw a channel matrix and its estimate, H = Hhat + Delta.

    Entries of H are CN(0, beta); the error matrix Delta is CN(0,
    sigma2_delta) per entry, independent of H.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if sigma2_delta < 0:
        raise ValueError("sigma2_delta must be nonnegative")
    if sigma2_delta >= beta:
        warnings.warn(
            "estimation error variance is not smaller than the channel "
            "variance; the estimate is noisier than the channel",
            stacklevel=2,
        )
    h = math.sqrt(beta) * _complex_normal(rng, rows, cols)
    delta = math.sqrt(sigma2_delta) * _complex_normal(rng, rows, cols)
    return h, h - delta


def sample_channel_set(cfg, rng):
    """Draw every channel matrix for one trial.

    Unit normals are drawn in a fixed order and scaled afterwards, so two
    configs differing only in geometry, eta, or error variances see the
    same underlying randomness from the same substream (paired sweeps).
    """
    h_ba, hhat_ba = sample_channel_pair(
        rng, cfg.n_bob, cfg.n_alice, cfg.beta_ba, cfg.sigma2_delta_ba
    )
    h_ab = h_ba.conj().T
    delta_ab = math.sqrt(cfg.sigma2_delta_ab) * _complex_normal(rng, cfg.n_alice, cfg.n_bob)
    hhat_ab = h_ab - delta_ab
    h_ea = math.sqrt(cfg.beta_ea) * _complex_normal(rng, cfg.n_eve, cfg.n_alice)
    h_eb = math.sqrt(cfg.beta_eb) * _complex_normal(rng, cfg.n_eve, cfg.n_bob)
    g_a = math.sqrt(cfg.eta) * _complex_normal(rng, cfg.n_alice, cfg.n_alice)
    g_b = math.sqrt(cfg.eta) * _complex_normal(rng, cfg.n_bob, cfg.n_bob)
    return ChannelSet(h_ba, h_ab, hhat_ba, hhat_ab, h_ea, h_eb, g_a, g_b)
