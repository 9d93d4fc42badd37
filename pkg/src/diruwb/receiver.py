"""Waveform-level transmit/receive path for one block.

This is the check path for the kernel model: synthesize the received
waveform as superposed channel responses, optionally add white Gaussian
noise, and demodulate with the delay-and-correlate front end. On a shared
grid the noiseless output matches :func:`diruwb.model.model_decision`
exactly (both paths are the same trapezoid sums, reassociated).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .grid import SampledSignal, lag_product_cumint, window_sum_indices
from .model import SystemConfig

# a received block is just a sampled signal; the alias marks intent
ReceivedBlock = SampledSignal


@dataclass(frozen=True)
class NoiseSpec:
    """One-sided noise level n0; sampled AWGN has variance n0 / (2 dt)."""

    n0: float

    def __post_init__(self):
        if not np.isfinite(self.n0) or self.n0 < 0:
            raise ValueError("n0 must be finite and >= 0")


def synth_rx_waveform(
    a: np.ndarray, g: SampledSignal, config: SystemConfig
) -> ReceivedBlock:
    """Noiseless received block: sum_p a[p] * g(t - t_p)."""
    a = np.asarray(a, dtype=float)
    if a.shape != (config.n_pulses,):
        raise ValueError("amplitude vector length must equal n_pulses")
    if abs(g.dt - config.dt) > 1e-15 * max(g.dt, config.dt):
        raise ValueError("response and config use different grid steps")
    starts = config.pulse_time_samples()
    m = len(g.samples)
    total = int(starts.max()) + m
    r = np.zeros(total)
    for amp, k0 in zip(a, starts):
        r[k0 : k0 + m] += amp * g.samples
    return ReceivedBlock(r, config.dt, t0=g.t0)


def add_noise(
    block: ReceivedBlock, noise: NoiseSpec, rng: np.random.Generator | int
) -> ReceivedBlock:
    """Add sampled white Gaussian noise with variance n0 / (2 dt)."""
    if noise.n0 == 0.0:
        return block
    rng = np.random.default_rng(rng)
    sigma = float(np.sqrt(noise.n0 / (2.0 * block.dt)))
    samples = block.samples + rng.normal(0.0, sigma, size=len(block.samples))
    return ReceivedBlock(samples, block.dt, t0=block.t0)


def acr_demod(block: ReceivedBlock, config: SystemConfig) -> np.ndarray:
    """Delay-and-correlate decision variables for one block.

    y_i[n] integrates r(t) * r(t + D_i) over [t_i[n], t_i[n] + T_I] with
    the trapezoid rule (windows past the block edge read zeros), and
    z[n] = sum_i b_i y_i[n].
    """
    x = block.samples
    n = len(x)
    C = lag_product_cumint(x, config.lag_samples, block.dt)
    starts = config.pulse_time_samples().reshape(
        config.n_symbols, config.pulses_per_symbol
    )
    lo = starts - block.start_index
    lo_col, hi_col = window_sum_indices(lo, lo + config.window_samples, n)
    i_idx = np.arange(config.pulses_per_symbol)[None, :]
    y = C[i_idx, hi_col] - C[i_idx, lo_col]
    b = np.asarray(config.amplitude_code, dtype=float)
    return y @ b


def ebn0_to_n0(ebn0_db: float, g: SampledSignal, config: SystemConfig) -> float:
    """Noise level n0 for a target Eb/N0 in dB.

    The per-bit energy is E_b = N_p * E_g with E_g the trapezoid energy of
    the sampled response g (one transmitted symbol carries N_p responses).
    """
    if not np.isfinite(ebn0_db):
        raise ValueError("ebn0_db must be finite")
    e_b = config.pulses_per_symbol * g.energy()
    return e_b * 10.0 ** (-ebn0_db / 10.0)


# -- waveform dump ---------------------------------------------------------

_DUMP_MAGIC = "diruwb-waveform-v1"


def dump_waveform(block: ReceivedBlock, path) -> None:
    """Binary float dump with a one-line ASCII header (dt, t0, count)."""
    header = f"{_DUMP_MAGIC} dt={block.dt:.17g} t0={block.t0:.17g} n={len(block)}\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(struct.pack(f"<{len(block)}d", *block.samples.tolist()))


def load_waveform(path) -> ReceivedBlock:
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").strip()
        fields = header.split()
        if not fields or fields[0] != _DUMP_MAGIC:
            raise ValueError("not a waveform dump")
        kv = dict(f.split("=", 1) for f in fields[1:])
        count = int(kv["n"])
        raw = fh.read(8 * count)
        if len(raw) != 8 * count:
            raise ValueError("truncated waveform dump")
        samples = np.array(struct.unpack(f"<{count}d", raw))
    return ReceivedBlock(samples, float(kv["dt"]), t0=float(kv["t0"]))
