"""Second-derivative Gaussian monocycle and its sampled, causal form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import SampledSignal, snap_index


@dataclass(frozen=True)
class PulseSpec:
    """Transmit pulse shape and sampling grid.

    Args:
        tau_m: monocycle shape parameter in seconds.
        support_half_width: truncation radius in seconds; the pulse is
            treated as exactly zero outside ``[-support_half_width,
            +support_half_width]``. Must be at least ``3 * tau_m``.
        dt: sampling step in seconds; must be at most ``tau_m / 10``.
    """

    tau_m: float = 0.2877e-9
    support_half_width: float = 1.0e-9
    dt: float = 10e-12

    def __post_init__(self):
        if not self.tau_m > 0:
            raise ValueError("tau_m must be positive")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.dt > self.tau_m / 10:
            raise ValueError("dt must be <= tau_m / 10")
        if self.support_half_width < 3 * self.tau_m:
            raise ValueError("support_half_width must be >= 3 * tau_m")

    @property
    def half_width_samples(self) -> int:
        return snap_index(self.support_half_width, self.dt)


def monocycle(t: np.ndarray | float, spec: PulseSpec) -> np.ndarray | float:
    """Second-derivative Gaussian monocycle, truncated to the pulse support.

    w(t) = [1 - 4*pi*(t/tau_m)^2] * exp(-2*pi*(t/tau_m)^2), and exactly 0
    for |t| > support_half_width.
    """
    t_arr = np.asarray(t, dtype=float)
    x2 = (t_arr / spec.tau_m) ** 2
    w = (1.0 - 4.0 * np.pi * x2) * np.exp(-2.0 * np.pi * x2)
    w = np.where(np.abs(t_arr) > spec.support_half_width, 0.0, w)
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(w)
    return w


def sample_pulse(spec: PulseSpec) -> SampledSignal:
    """Sampled transmit pulse in causal form.

    The pulse placed at time t occupies [t, t + 2 * support_half_width]:
    sample k holds ``monocycle(k * dt - support_half_width)``. Integration
    windows that start at a pulse's nominal time therefore see the whole
    pulse, not half of it.
    """
    half = spec.half_width_samples
    t_local = spec.dt * np.arange(2 * half + 1) - half * spec.dt
    return SampledSignal(monocycle(t_local, spec), spec.dt, t0=0.0)
