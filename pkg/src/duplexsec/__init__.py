"""Secrecy-rate simulation for two-way full-duplex MIMO links.

Two multi-antenna nodes exchange data in band while a multi-antenna
eavesdropper listens. Both nodes inject artificial noise in the signal
space and in its null space. The package samples channels, builds
precoders, evaluates exact and approximate rates, allocates power in two
steps (scalar fractions, then per-stream diagonals), and reproduces the
reference experiment sweeps as CSV tables.
"""

from duplexsec.channel import SystemConfig, ChannelSet, path_loss, sample_channel_set, trial_rng
from duplexsec.precoding import PrecoderSet, build_precoder, build_precoder_set, measure_kappa
from duplexsec.rates import PowerAllocation, RateReport, rate_report

__all__ = [
    "SystemConfig",
    "ChannelSet",
    "path_loss",
    "sample_channel_set",
    "trial_rng",
    "PrecoderSet",
    "build_precoder",
    "build_precoder_set",
    "measure_kappa",
    "PowerAllocation",
    "RateReport",
    "rate_report",
]

__version__ = "0.1.0"
