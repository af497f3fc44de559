"""Precoder construction and the eavesdropper's imperfect copies.

Each node transmits its b data streams through the top right singular
vectors of the peer's channel estimate and injects null-space artificial
noise through the remaining ones. The eavesdropper holds copies of the
legitimate precoders at a prescribed squared-Frobenius mismatch kappa,
synthesized along the chordal-distance decomposition
Vhat = V sqrt(1 - d/b) + N sqrt(d/b).
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class PrecoderSet:
    """Signal precoders, null-space complements, and Eve's copies."""

    v_a: np.ndarray
    v_a_null: np.ndarray
    v_b: np.ndarray
    v_b_null: np.ndarray
    vhat_ae: np.ndarray
    vhat_be: np.ndarray


def _fix_column_signs(v):
    """Rotate each column so its largest-magnitude entry is real positive.

    Makes the SVD output deterministic across runs and BLAS builds.
    """
    v = v.copy()
    for k in range(v.shape[1]):
        idx = np.argmax(np.abs(v[:, k]))
        pivot = v[idx, k]
        mag = abs(pivot)
        if mag > 0:
            v[:, k] *= pivot.conj() / mag
    return v


def build_precoder(hhat, b):
    """Split the right singular vectors of an estimate into (V, V_null).

    V holds the b vectors of largest singular value, the complement the
    rest. Both are orthonormal; columns carry a deterministic sign fix.
    """
    rows, cols = hhat.shape
    if b > min(rows, cols):
        raise ValueError("stream count b exceeds the channel rank bound")
    _, _, vh = np.linalg.svd(hhat, full_matrices=True)
    v_full = _fix_column_signs(vh.conj().T)
    return v_full[:, :b], v_full[:, b:]


def kappa_to_chordal(kappa, b):
    """Map the mismatch norm kappa in [0, 2b] to a chordal distance in [0, b]."""
    if not 0 <= kappa <= 2 * b:
        raise ValueError("kappa must lie in [0, 2b]")
    return b * (1.0 - (1.0 - kappa / (2.0 * b)) ** 2)


def synthesize_eve_precoder(v, v_null, kappa, rng=None):
    """Build Eve's copy of a precoder at mismatch kappa.

    The null-space component N is the first b columns of v_null; the
    choice is deterministic (any orthonormal N with V^H N = 0 yields the
    same kappa), so ``rng`` is accepted for interface compatibility and
    unused.
    """
    b = v.shape[1]
    if v_null.shape[1] < b:
        raise ValueError("insufficient null space: need at least b columns")
    d = kappa_to_chordal(kappa, b)
    n = v_null[:, :b]
    return v * np.sqrt(1.0 - d / b) + n * np.sqrt(d / b)


def measure_kappa(vhat, v):
    """Squared Frobenius norm of (V - Vhat) for orthonormal frames."""
    b = v.shape[1]
    return float(2.0 * b - 2.0 * np.trace(vhat.conj().T @ v).real)


def build_precoder_set(ch, cfg):
    """Precoders for both nodes plus Eve's copies at the configured kappas."""
    v_a, v_a_null = build_precoder(ch.hhat_ba, cfg.b)
    v_b, v_b_null = build_precoder(ch.hhat_ab, cfg.b)
    vhat_ae = synthesize_eve_precoder(v_a, v_a_null, cfg.kappa_a)
    vhat_be = synthesize_eve_precoder(v_b, v_b_null, cfg.kappa_b)
    return PrecoderSet(v_a, v_a_null, v_b, v_b_null, vhat_ae, vhat_be)
