"""Single-cluster dense-multipath channel: Poisson arrivals, Rayleigh gains.

Path delays form a Poisson process on [0, max_delay_spread] with a fixed
mean inter-arrival gap; path amplitudes are Rayleigh draws whose mean
follows an exponential decay profile, with equiprobable +-1 signs. The
flat (no-ISI) sentinel is max_delay_spread == 0, which yields the single
tap (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .grid import SampledSignal, snap_index
from .pulse import PulseSpec, monocycle

# resampling cap for the (astronomically unlikely at sane parameters) case
# of repeated empty Poisson draws
_MAX_DRAW_ATTEMPTS = 1000


@dataclass(frozen=True)
class SVChannelParams:
    """Channel statistics.

    Args:
        mean_arrival_interval: expected gap between path delays (seconds).
        decay_constant: amplitude-decay time constant (seconds).
        max_delay_spread: delay-spread truncation L (seconds); 0 selects
            the flat/no-ISI sentinel channel with taps [(0, 1)].
        random_tap_signs: when True each tap amplitude gets an
            equiprobable +-1 sign; set False for all-positive gains.
    """

    mean_arrival_interval: float = 10e-9
    decay_constant: float = 20e-9
    max_delay_spread: float = 30e-9
    random_tap_signs: bool = True

    def __post_init__(self):
        if not self.mean_arrival_interval > 0:
            raise ValueError("mean_arrival_interval must be positive")
        if not self.decay_constant > 0:
            raise ValueError("decay_constant must be positive")
        if self.max_delay_spread < 0:
            raise ValueError("max_delay_spread must be >= 0")


@dataclass(frozen=True)
class ChannelRealization:
    """One channel draw: taps, and optionally the sampled response g(t).

    ``sampled_response`` stays None until :func:`synth_response` (or
    :func:`attach_response`) is used; drawing taps does not need a pulse.
    """

    taps: list[tuple[float, float]]
    sampled_response: SampledSignal | None = None

    def __post_init__(self):
        if len(self.taps) == 0:
            raise ValueError("a channel realization needs at least one tap")
        delays = [d for d, _ in self.taps]
        if any(d < 0 for d in delays):
            raise ValueError("tap delays must be >= 0")
        if any(b <= a for a, b in zip(delays, delays[1:])):
            raise ValueError("tap delays must be sorted ascending")

    @property
    def max_delay(self) -> float:
        return self.taps[-1][0]


def rayleigh_mean_scale(delay: float, decay_constant: float) -> float:
    """Rayleigh scale whose mean equals exp(-delay / decay_constant).

    A Rayleigh variable with scale sigma has mean sigma * sqrt(pi / 2), so
    sigma = exp(-delay / decay_constant) * sqrt(2 / pi).
    """
    return math.exp(-delay / decay_constant) * math.sqrt(2.0 / math.pi)


def draw_channel(
    params: SVChannelParams, rng: np.random.Generator | int
) -> ChannelRealization:
    """Draw one channel realization; deterministic for a given seed.

    Delays are a Poisson-process sample on [0, max_delay_spread] (gaps are
    iid exponentials with the configured mean); empty draws are resampled
    so that every realization carries at least one path. Delays are then
    re-origined on the first arrival: the receiver clock is assumed locked
    to the earliest path, so the first tap sits at delay 0 and the decay
    profile runs over excess delay. Amplitudes are Rayleigh with mean
    exp(-delay / decay_constant), optionally signed.
    """
    rng = np.random.default_rng(rng)
    if params.max_delay_spread == 0.0:
        return ChannelRealization(taps=[(0.0, 1.0)])

    for _ in range(_MAX_DRAW_ATTEMPTS):
        delays: list[float] = []
        t = rng.exponential(params.mean_arrival_interval)
        while t <= params.max_delay_spread:
            delays.append(t)
            t += rng.exponential(params.mean_arrival_interval)
        if delays:
            break
    else:
        raise RuntimeError("no path arrivals after repeated draws")

    delay_arr = np.array(delays)
    delay_arr -= delay_arr[0]
    scales = np.exp(-delay_arr / params.decay_constant) * math.sqrt(2.0 / math.pi)
    amps = rng.rayleigh(scale=scales)
    if params.random_tap_signs:
        amps = amps * (2 * rng.integers(0, 2, size=len(amps)) - 1)
    return ChannelRealization(taps=list(zip(delay_arr.tolist(), amps.tolist())))


def synth_response(
    realization: ChannelRealization, spec: PulseSpec
) -> SampledSignal:
    """Sampled end-to-end response g(t): superposed, scaled pulses.

    Returns a causal signal starting at t=0 that covers the last tap delay
    plus the full pulse support. Tap delays need not sit on the grid; the
    monocycle is evaluated exactly at each needed sample time.
    """
    dt = spec.dt
    width = 2 * spec.half_width_samples  # samples spanned by one pulse
    n = int(math.ceil(realization.max_delay / dt)) + width + 1
    g = np.zeros(n)
    t_grid = dt * np.arange(n)
    half = spec.support_half_width
    for delay, amp in realization.taps:
        k0 = max(0, int(math.floor(delay / dt)))
        k1 = min(n, k0 + width + 2)
        g[k0:k1] += amp * monocycle(t_grid[k0:k1] - delay - half, spec)
    return SampledSignal(g, dt, t0=0.0)


def attach_response(
    realization: ChannelRealization, spec: PulseSpec
) -> ChannelRealization:
    """Copy of the realization with its sampled response filled in."""
    return replace(realization, sampled_response=synth_response(realization, spec))


def autocorr_integral(
    g: SampledSignal, t1: float, t2: float, tau: float
) -> float:
    """Windowed autocorrelation integral of g at lag tau over [t1, t2].

    Trapezoid quadrature of g(t) * g(t + tau) on the shared grid; t1, t2
    and tau are snapped to the nearest grid point, and g reads as zero
    outside its sampled support.
    """
    if t2 < t1:
        raise ValueError("t2 must be >= t1")
    dt = g.dt
    lag = snap_index(tau, dt)
    x = g.samples
    n = len(x)
    if abs(lag) >= n:
        return 0.0
    # product sample k corresponds to time t0 + k*dt
    lo = snap_index(t1, dt) - g.start_index
    hi = snap_index(t2, dt) - g.start_index
    lo = max(lo, -1)
    hi = min(hi, n)
    if hi <= lo:
        return 0.0
    if lag >= 0:
        prod = np.zeros(n)
        prod[: n - lag] = x[: n - lag] * x[lag:]
    else:
        prod = np.zeros(n)
        prod[-lag:] = x[-lag:] * x[: n + lag]
    padded = np.concatenate([[0.0], prod, [0.0]])
    # knot i of padded <-> product sample i-1
    seg = padded[lo + 1 : hi + 2]
    return float(np.trapezoid(seg, dx=dt))


def taps_to_text(realization: ChannelRealization) -> str:
    """Serialize taps as one "delay_ns amplitude" pair per line."""
    lines = [
        f"{delay * 1e9:.17g} {amp:.17g}" for delay, amp in realization.taps
    ]
    return "\n".join(lines) + "\n"


def taps_from_text(text: str) -> ChannelRealization:
    """Parse the tap-list format written by :func:`taps_to_text`."""
    taps: list[tuple[float, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"line {lineno}: expected 'delay_ns amplitude'")
        taps.append((float(fields[0]) * 1e-9, float(fields[1])))
    return ChannelRealization(taps=taps)
