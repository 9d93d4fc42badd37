"""Uniform-grid sampled signals and trapezoid quadrature helpers.

Every waveform in this package lives on one uniform grid with step ``dt``
(seconds). Window edges and correlation lags are snapped to integer
multiples of ``dt``; with that convention a windowed integral of a product
of superposed pulses decomposes exactly into per-pulse-pair integrals, so
the receiver model and a direct waveform simulation agree to round-off.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def snap_index(t: float, dt: float) -> int:
    """Nearest grid index of a time value (``round(t / dt)``)."""
    return int(round(t / dt))


def trapezoid(y: np.ndarray, dx: float) -> float:
    """Trapezoid integral of uniformly sampled values."""
    return float(np.trapezoid(y, dx=dx))


@dataclass(frozen=True)
class SampledSignal:
    """Real signal sampled on the uniform grid; zero outside its samples.

    Args:
        samples: 1-D real array, sample k lives at ``t0 + k * dt``.
        dt: grid step in seconds.
        t0: time of sample 0 in seconds; must itself sit on the grid.
    """

    samples: np.ndarray
    dt: float
    t0: float = 0.0

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or len(samples) == 0:
            raise ValueError("samples must be a nonempty 1-D array")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def start_index(self) -> int:
        return snap_index(self.t0, self.dt)

    @property
    def duration(self) -> float:
        return (len(self.samples) - 1) * self.dt

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.samples))

    def energy(self) -> float:
        """Trapezoid integral of the squared samples."""
        return trapezoid(self.samples**2, self.dt)


def lag_product_cumint(
    x: np.ndarray, lags: np.ndarray, dt: float
) -> np.ndarray:
    """Cumulative trapezoid integrals of the lag products ``x[k] * x[k+lag]``.

    For each integer lag ``m`` the product sequence ``p[k] = x[k] * x[k+m]``
    (zero wherever either index leaves the array) is padded with one zero
    sample on each side and integrated cumulatively with the trapezoid rule.

    Args:
        x: 1-D sample array of length n.
        lags: integer lag array of length L.
        dt: grid step.

    Returns:
        Array ``C`` of shape (L, n + 2). ``C[j, i]`` is the trapezoid
        integral of ``p`` for ``lags[j]`` over sample indices [-1, i - 1].
        Windows clipped to the padded range pick up exact zeros, so
        ``C[j, hi] - C[j, lo]`` is the exact trapezoid value for any
        window once ``lo``/``hi`` are clipped with :func:`window_sum_indices`.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    lags = np.asarray(lags, dtype=int)
    padded = np.zeros((len(lags), n + 2))
    for j, m in enumerate(lags):
        if m >= n or m <= -n:
            continue
        if m >= 0:
            padded[j, 1 : n + 1 - m] = x[: n - m] * x[m:]
        else:
            padded[j, 1 - m : n + 1] = x[-m:] * x[: n + m]
    # trapezoid cumulative over the padded knots: C[i] integrates up to knot i
    C = np.empty((len(lags), n + 2))
    C[:, 0] = 0.0
    np.cumsum((padded[:, :-1] + padded[:, 1:]) * (0.5 * dt), axis=1, out=C[:, 1:])
    return C


def window_sum_indices(
    lo: np.ndarray | int, hi: np.ndarray | int, n: int
) -> tuple[np.ndarray, np.ndarray]:
    """Map product-sample window edges onto cumulative-array columns.

    ``lo``/``hi`` are window edges in product-sample indices (sample k of
    the un-padded product). Returns column indices into the (n + 2)-wide
    cumulative array from :func:`lag_product_cumint` such that
    ``C[..., hi_col] - C[..., lo_col]`` is the window's trapezoid integral.
    """
    lo_col = np.clip(np.asarray(lo, dtype=int), -1, n) + 1
    hi_col = np.clip(np.asarray(hi, dtype=int), -1, n) + 1
    return lo_col, hi_col
