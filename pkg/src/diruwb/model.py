"""Block system model: timing, differential encoding, Volterra kernels.

A block carries N_b symbols of N_p pulses each. Pulse i of symbol n is
transmitted at t_i[n] = n * T_s + c_i, where the offsets c_i derive from
the delay-hopping code D (c_0 = 0, c_{i+1} = c_i + D_i, and the wrap
identity sum(D) = T_s). The delay-and-correlate receiver integrates
r(t) * r(t + D_i) over [t_i[n], t_i[n] + T_I], which makes every decision
variable an exact second-order form of the transmitted amplitude vector:

    z[n] = a^T B[n] a,   B[n] = sum_i b_i A_i[n],

where entry (n'N_p + i', n''N_p + i'') of A_i[n] is the windowed
autocorrelation integral of the channel response g at window start
t_i[n] - t_{i'}[n'] (length T_I) and lag t_{i'}[n'] - t_{i''}[n''] + D_i.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .grid import SampledSignal, lag_product_cumint, snap_index, window_sum_indices

# wrap-identity tolerance for sum(D) == T_s, in seconds
_WRAP_TOL = 1e-12


def derive_pulse_offsets(hopping_code, symbol_duration: float) -> np.ndarray:
    """Pulse offsets c from the delay-hopping code D.

    c_0 = 0 and c_{i+1} = c_i + D_i; the final entry wraps across the
    symbol boundary, so the code must satisfy sum(D) == symbol_duration.
    """
    d = np.asarray(hopping_code, dtype=float)
    if d.ndim != 1 or len(d) < 2:
        raise ValueError("hopping code needs at least two entries")
    if np.any(d <= 0):
        raise ValueError("hopping code entries must be positive")
    if abs(float(d.sum()) - symbol_duration) > _WRAP_TOL:
        raise ValueError(
            "hopping code must wrap: sum(D) == symbol_duration within 1e-12 s"
        )
    c = np.concatenate([[0.0], np.cumsum(d[:-1])])
    return c


@dataclass(frozen=True)
class SystemConfig:
    """Block, code, and timing parameters (times in seconds).

    pulse_offsets is derived from hopping_code; all pulse times, lags and
    window lengths are snapped to the sampling grid dt.
    """

    n_symbols: int = 10
    pulses_per_symbol: int = 4
    symbol_duration: float = 8e-9
    integration_time: float = 8e-9
    amplitude_code: tuple = (-1, -1, 1, 1)
    hopping_code: tuple = (1.7e-9, 1.9e-9, 2.1e-9, 2.3e-9)
    dt: float = 10e-12
    pulse_offsets: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_symbols < 1:
            raise ValueError("n_symbols must be >= 1")
        if self.pulses_per_symbol < 2 or self.pulses_per_symbol % 2 != 0:
            raise ValueError("pulses_per_symbol must be even and >= 2")
        if len(self.amplitude_code) != self.pulses_per_symbol:
            raise ValueError("amplitude_code length must equal pulses_per_symbol")
        if any(b not in (-1, 1) for b in self.amplitude_code):
            raise ValueError("amplitude_code entries must be +-1")
        if len(self.hopping_code) != self.pulses_per_symbol:
            raise ValueError("hopping_code length must equal pulses_per_symbol")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.integration_time > 0:
            raise ValueError("integration_time must be positive")
        offsets = derive_pulse_offsets(self.hopping_code, self.symbol_duration)
        if offsets[-1] >= self.symbol_duration:
            raise ValueError("pulse offsets must stay inside one symbol")
        object.__setattr__(self, "pulse_offsets", offsets)

    # -- grid-index views -------------------------------------------------

    @property
    def n_pulses(self) -> int:
        return self.n_symbols * self.pulses_per_symbol

    @property
    def symbol_samples(self) -> int:
        return snap_index(self.symbol_duration, self.dt)

    @property
    def window_samples(self) -> int:
        return snap_index(self.integration_time, self.dt)

    @property
    def offset_samples(self) -> np.ndarray:
        return np.array([snap_index(c, self.dt) for c in self.pulse_offsets])

    @property
    def lag_samples(self) -> np.ndarray:
        return np.array([snap_index(d, self.dt) for d in self.hopping_code])

    def pulse_time_samples(self) -> np.ndarray:
        """Grid index of every pulse time, symbol-major: n * N_p + i."""
        sym = self.symbol_samples * np.arange(self.n_symbols)
        return (sym[:, None] + self.offset_samples[None, :]).reshape(-1)

    def pulse_times(self) -> np.ndarray:
        return self.pulse_time_samples() * self.dt


@dataclass(frozen=True)
class CodeMatrices:
    """Affine re-encoding a = Q (r + P d) of the differential code.

    Q is diagonal with entry k (0-based) equal to the running product of
    amplitude-code values b_0 ... b_{k-1} (indices mod N_p); s alternates
    0,1 within a symbol, P = I_{N_b} (x) s places one data symbol per
    block of N_p pulses, and r = 1 (x) (1 - s) fills the even positions.
    """

    Q: np.ndarray
    P: np.ndarray
    r: np.ndarray
    s: np.ndarray

    @property
    def q_diag(self) -> np.ndarray:
        return np.diagonal(self.Q)


def build_code_matrices(config: SystemConfig) -> CodeMatrices:
    n_p = config.pulses_per_symbol
    n_b = config.n_symbols
    b = np.asarray(config.amplitude_code, dtype=float)
    k = config.n_pulses
    q = np.ones(k)
    for idx in range(1, k):
        q[idx] = q[idx - 1] * b[(idx - 1) % n_p]
    s = np.tile([0.0, 1.0], n_p // 2)
    p = np.kron(np.eye(n_b), s[:, None])
    r = np.tile(1.0 - s, n_b)
    return CodeMatrices(Q=np.diag(q), P=p, r=r, s=s)


def encode_recursive(d: np.ndarray, config: SystemConfig) -> np.ndarray:
    """Differential pulse amplitudes from data, by the defining recursion.

    a_0[0] = +1; within a symbol a_i[n] = a_{i-1}[n] * d[n] * b_{i-1};
    across the boundary a_0[n] = a_{N_p-1}[n-1] * d[n-1] * b_{N_p-1}.
    """
    d = np.asarray(d)
    if d.shape != (config.n_symbols,):
        raise ValueError("d must have one entry per symbol")
    if any(v not in (-1, 1) for v in d.tolist()):
        raise ValueError("data symbols must be +-1")
    n_p = config.pulses_per_symbol
    b = config.amplitude_code
    a = np.empty(config.n_pulses, dtype=int)
    a[0] = 1
    for n in range(config.n_symbols):
        if n > 0:
            a[n * n_p] = a[n * n_p - 1] * d[n - 1] * b[n_p - 1]
        for i in range(1, n_p):
            a[n * n_p + i] = a[n * n_p + i - 1] * d[n] * b[i - 1]
    return a


def encode_affine(d: np.ndarray, codes: CodeMatrices) -> np.ndarray:
    """Differential pulse amplitudes via the affine form Q (r + P d)."""
    d = np.asarray(d, dtype=float)
    a = codes.q_diag * (codes.r + codes.P @ d)
    return np.rint(a).astype(int)


@dataclass(frozen=True)
class VolterraModel:
    """Per-symbol second-order kernels: z[n] = a^T B[n] a."""

    B: np.ndarray  # (n_symbols, n_pulses, n_pulses)
    codes: CodeMatrices
    config: SystemConfig

    def __post_init__(self):
        k = self.config.n_pulses
        if self.B.shape != (self.config.n_symbols, k, k):
            raise ValueError("kernel tensor shape does not match the config")


def _window_table(g: SampledSignal, config: SystemConfig):
    """Shared lookup for all pulse-pair window integrals.

    Returns (uniq_starts, uniq_lags, F) where F[j, r] is the trapezoid
    integral of g(t) * g(t + uniq_lags[j] * dt) over the window
    [uniq_starts[r], uniq_starts[r] + T_I] (grid indices, g's time axis).
    Lags outside g's support map to the final all-zero row of F.
    """
    times = config.pulse_time_samples()
    d_t = times[:, None] - times[None, :]
    uniq_starts = np.unique(d_t)
    lag_all = d_t[None, :, :] + config.lag_samples[:, None, None]
    uniq_lags = np.unique(lag_all)

    x = g.samples
    n = len(x)
    dt = g.dt
    in_range = np.abs(uniq_lags) < n
    active = uniq_lags[in_range]

    k_i = config.window_samples
    lo = uniq_starts - g.start_index
    lo_col, hi_col = window_sum_indices(lo, lo + k_i, n)

    F = np.zeros((len(uniq_lags) + 1, len(uniq_starts)))
    # chunk the lag axis: the cumulative table is (chunk, n + 2) floats
    chunk = max(1, int(4e6 // max(n, 1)))
    rows = np.flatnonzero(in_range)
    for start in range(0, len(active), chunk):
        sel = slice(start, start + chunk)
        C = lag_product_cumint(x, active[sel], dt)
        F[rows[sel], :] = C[:, hi_col] - C[:, lo_col]
    return uniq_starts, uniq_lags, F


def build_kernels(g: SampledSignal, config: SystemConfig) -> np.ndarray:
    """Pulse-pair kernel matrices A_i[n], shape (N_b, N_p, K, K), K = N_b*N_p.

    A[n, i, p', p''] is the windowed autocorrelation of g with window start
    t_i[n] - t[p'], window length T_I, and lag t[p'] - t[p''] + D_i. Entries
    whose window or lag misses g's support are exactly zero.
    """
    if abs(g.dt - config.dt) > 1e-15 * max(g.dt, config.dt):
        raise ValueError("response and config use different grid steps")
    times = config.pulse_time_samples()
    k = config.n_pulses
    d_t = times[:, None] - times[None, :]

    uniq_starts, uniq_lags, F = _window_table(g, config)

    # column index per window start: A's row p' for target pulse (n, i)
    # has start t[n*N_p+i] - t[p'] = d_t[target, p']
    start_col = np.searchsorted(uniq_starts, d_t)  # (K, K): [target, p']
    # row index per lag; out-of-support lags hit the zero row of F
    n = len(g.samples)
    lag_row_per_i = np.empty((config.pulses_per_symbol, k, k), dtype=int)
    for i, m in enumerate(config.lag_samples):
        lags = d_t + m
        row = np.searchsorted(uniq_lags, lags)
        row[np.abs(lags) >= n] = len(uniq_lags)
        lag_row_per_i[i] = row

    # gather: A[n, i, p', p''] = F[lag_row_per_i[i, p', p''],
    #                              start_col[n * N_p + i, p']]
    start_by_target = start_col.reshape(
        config.n_symbols, config.pulses_per_symbol, k
    )
    A = F[lag_row_per_i[None, :, :, :], start_by_target[:, :, :, None]]
    return A


def build_volterra(g: SampledSignal, config: SystemConfig) -> VolterraModel:
    """Assemble the per-symbol kernels B[n] = sum_i b_i A_i[n]."""
    kernels = build_kernels(g, config)
    b = np.asarray(config.amplitude_code, dtype=float)
    B = np.einsum("i,nipq->npq", b, kernels)
    return VolterraModel(B=B, codes=build_code_matrices(config), config=config)


def model_decision(a: np.ndarray, model: VolterraModel) -> np.ndarray:
    """Noiseless decision variables z[n] = a^T B[n] a."""
    a = np.asarray(a, dtype=float)
    if a.shape != (model.config.n_pulses,):
        raise ValueError("amplitude vector length must equal n_pulses")
    return np.einsum("p,npq,q->n", a, model.B, a)


# -- kernel bundle serialization ------------------------------------------


def dump_model_bundle(model: VolterraModel) -> str:
    """Self-describing text bundle: header, then row-major kernel matrices."""
    buf = io.StringIO()
    cfg = model.config
    buf.write(f"{cfg.n_symbols} {cfg.pulses_per_symbol} {cfg.dt:.17g}\n")
    for n in range(cfg.n_symbols):
        for row in model.B[n]:
            buf.write(" ".join(f"{v:.17g}" for v in row))
            buf.write("\n")
    return buf.getvalue()


@dataclass(frozen=True)
class ModelBundle:
    """Parsed kernel bundle (header fields plus the kernel tensor)."""

    n_symbols: int
    pulses_per_symbol: int
    dt: float
    B: np.ndarray


def parse_model_bundle(text: str) -> ModelBundle:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty bundle")
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError("bundle header must be 'n_symbols pulses_per_symbol dt'")
    n_b, n_p, dt = int(head[0]), int(head[1]), float(head[2])
    k = n_b * n_p
    if len(lines) != 1 + n_b * k:
        raise ValueError("bundle row count does not match the header")
    data = np.array(
        [[float(v) for v in ln.split()] for ln in lines[1:]], dtype=float
    )
    if data.shape != (n_b * k, k):
        raise ValueError("bundle matrix shape does not match the header")
    return ModelBundle(n_b, n_p, dt, data.reshape(n_b, k, k))


def save_model_bundle(model: VolterraModel, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dump_model_bundle(model))


def load_model_bundle(path) -> ModelBundle:
    with open(path, "r", encoding="ascii") as fh:
        return parse_model_bundle(fh.read())
