"""Monte Carlo bit-error-rate campaigns over delay-spread scenarios.

Each block trial draws a fresh channel (or reuses a pinned one), encodes
random data, runs the waveform path at the requested Eb/N0, and decodes
with every enabled decoder from one shared decision vector. Per-trial
randomness is derived from (master_seed, scenario, grid index, block
index), so results are reproducible bit for bit and independent of how
many other trials run.
"""

from __future__ import annotations

import math
import time
import zlib
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import ChannelRealization, SVChannelParams, draw_channel, synth_response
from .decoder import DecodingProblem, decode_exhaustive, decode_sdp
from .model import SystemConfig, build_volterra, encode_affine
from .pulse import PulseSpec
from .receiver import NoiseSpec, acr_demod, add_noise, ebn0_to_n0, synth_rx_waveform
from .sdp import SolverSettings

CSV_HEADER = "scenario,decoder,ebn0_db,bit_errors,bits,ber,agreement,wall_time_s"

DECODER_ORDER = ("exhaustive", "sdp_sign", "sdp_randomized")

SCENARIOS: dict[str, SVChannelParams] = {
    "severe": SVChannelParams(max_delay_spread=200e-9),
    "mild": SVChannelParams(max_delay_spread=30e-9),
    "flat": SVChannelParams(max_delay_spread=0.0),
}


@dataclass(frozen=True)
class CampaignConfig:
    """One scenario's sweep definition.

    ebn0_grid_db entries may be +inf for exact noiseless points. With
    pin_channel=True a single realization (drawn from the campaign's
    channel stream) is reused for every block. include_timing_in_csv
    defaults to False so a fixed master seed reproduces the CSV byte for
    byte; measured times always appear in the records and the report.
    """

    system: SystemConfig = field(default_factory=SystemConfig)
    channel: SVChannelParams = field(default_factory=lambda: SCENARIOS["mild"])
    pulse: PulseSpec = field(default_factory=PulseSpec)
    scenario_name: str = "mild"
    ebn0_grid_db: tuple = tuple(float(v) for v in range(0, 21, 2))
    blocks_per_point: int = 10_000
    master_seed: int = 0
    decoders: tuple = ("exhaustive", "sdp_sign")
    output_path: str = "ber_results.csv"
    pin_channel: bool = False
    rounding_trials: int = 32
    solver: SolverSettings = field(default_factory=SolverSettings)
    include_timing_in_csv: bool = False

    def __post_init__(self):
        if self.blocks_per_point < 1:
            raise ValueError("blocks_per_point must be >= 1")
        if len(self.ebn0_grid_db) == 0:
            raise ValueError("ebn0_grid_db must not be empty")
        if any((not math.isfinite(v)) and v != math.inf for v in self.ebn0_grid_db):
            raise ValueError("ebn0 grid entries must be finite or +inf")
        if len(self.decoders) == 0:
            raise ValueError("at least one decoder must be enabled")
        for name in self.decoders:
            if name not in DECODER_ORDER:
                raise ValueError(f"unknown decoder '{name}'")
        if abs(self.pulse.dt - self.system.dt) > 1e-15 * self.system.dt:
            raise ValueError("pulse and system must share the sampling step")


@dataclass(frozen=True)
class BerRecord:
    scenario: str
    decoder: str
    ebn0_db: float
    bit_errors: int
    bits: int
    ber: float
    agreement_with_baseline: float
    wall_time: float


@dataclass(frozen=True)
class TrialResult:
    """One decoded block: shared decision vector, per-decoder choices."""

    d_true: np.ndarray
    z: np.ndarray
    decisions: dict
    decode_seconds: dict


def trial_seed_sequence(
    master_seed: int, scenario_name: str, grid_index: int, block_index: int
) -> np.random.SeedSequence:
    """Per-trial seed stream: (master, scenario tag, grid, block)."""
    tag = zlib.crc32(scenario_name.encode("utf-8"))
    return np.random.SeedSequence([master_seed, tag, grid_index, block_index])


def run_block_trial(
    config: CampaignConfig,
    ebn0_db: float | None,
    seed,
    pinned: ChannelRealization | None = None,
) -> TrialResult:
    """Simulate and decode one block.

    ``seed`` is anything accepted by numpy's SeedSequence (int or list of
    ints). ``ebn0_db`` of None or +inf selects the exact noiseless path.
    """
    seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rng_channel, rng_data, rng_noise, rng_round = [
        np.random.default_rng(s) for s in seq.spawn(4)
    ]
    system = config.system

    realization = pinned if pinned is not None else draw_channel(config.channel, rng_channel)
    g = synth_response(realization, config.pulse)
    d_true = 2 * rng_data.integers(0, 2, size=system.n_symbols) - 1

    # model and waveform share the response and the grid
    model = build_volterra(g, system)
    a = encode_affine(d_true, model.codes)
    waveform = synth_rx_waveform(a, g, system)
    if ebn0_db is None or ebn0_db == math.inf:
        n0 = 0.0
    else:
        n0 = ebn0_to_n0(ebn0_db, g, system)
    noisy = add_noise(waveform, NoiseSpec(n0), rng_noise)
    z = acr_demod(noisy, system)
    prob = DecodingProblem(z=z, model=model)

    decisions: dict[str, np.ndarray] = {}
    seconds: dict[str, float] = {}
    for name in DECODER_ORDER:
        if name not in config.decoders:
            continue
        start = time.perf_counter()
        if name == "exhaustive":
            result = decode_exhaustive(prob)
        elif name == "sdp_sign":
            result = decode_sdp(prob, settings=config.solver, rounding="sign")
        else:
            result = decode_sdp(
                prob,
                settings=config.solver,
                rounding="randomized",
                trials=config.rounding_trials,
                rng=rng_round,
            )
        seconds[name] = time.perf_counter() - start
        decisions[name] = result.d_hat
    return TrialResult(d_true=d_true, z=z, decisions=decisions, decode_seconds=seconds)


def _baseline_decoder(decoders) -> str:
    for name in DECODER_ORDER:
        if name in decoders:
            return name
    raise ValueError("no decoder enabled")


def run_campaign(config: CampaignConfig) -> list[BerRecord]:
    """Run the full sweep, write the CSV, and return the records."""
    pinned = None
    if config.pin_channel:
        seq = np.random.SeedSequence(
            [config.master_seed, zlib.crc32(config.scenario_name.encode("utf-8"))]
        )
        pinned = draw_channel(config.channel, np.random.default_rng(seq))

    baseline = _baseline_decoder(config.decoders)
    active = [name for name in DECODER_ORDER if name in config.decoders]
    records: list[BerRecord] = []
    for grid_index, ebn0_db in enumerate(config.ebn0_grid_db):
        errors = {name: 0 for name in active}
        agree = {name: 0 for name in active}
        seconds = {name: 0.0 for name in active}
        bits = 0
        for block_index in range(config.blocks_per_point):
            seq = trial_seed_sequence(
                config.master_seed, config.scenario_name, grid_index, block_index
            )
            trial = run_block_trial(config, ebn0_db, seq, pinned=pinned)
            bits += len(trial.d_true)
            base_hat = trial.decisions[baseline]
            for name in active:
                d_hat = trial.decisions[name]
                errors[name] += int(np.sum(d_hat != trial.d_true))
                agree[name] += int(np.sum(d_hat == base_hat))
                seconds[name] += trial.decode_seconds[name]
        for name in active:
            records.append(
                BerRecord(
                    scenario=config.scenario_name,
                    decoder=name,
                    ebn0_db=float(ebn0_db),
                    bit_errors=errors[name],
                    bits=bits,
                    ber=errors[name] / bits,
                    agreement_with_baseline=agree[name] / bits,
                    wall_time=seconds[name],
                )
            )

    records.sort(key=lambda r: (r.scenario, r.decoder, r.ebn0_db))
    write_csv(records, config.output_path, include_timing=config.include_timing_in_csv)
    return records


def _format_float(value: float) -> str:
    if value == math.inf:
        return "inf"
    return f"{value:.12g}"


def write_csv(records, path, include_timing: bool = False) -> None:
    lines = [CSV_HEADER]
    for r in records:
        wall = r.wall_time if include_timing else 0.0
        lines.append(
            ",".join(
                [
                    r.scenario,
                    r.decoder,
                    _format_float(r.ebn0_db),
                    str(r.bit_errors),
                    str(r.bits),
                    _format_float(r.ber),
                    _format_float(r.agreement_with_baseline),
                    _format_float(wall),
                ]
            )
        )
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def scenario_config(name: str, **overrides) -> CampaignConfig:
    """CampaignConfig preset for a named delay-spread scenario."""
    if name not in SCENARIOS:
        raise ValueError(f"unknown scenario '{name}', expected one of {sorted(SCENARIOS)}")
    base = dict(scenario_name=name, channel=SCENARIOS[name])
    base.update(overrides)
    return CampaignConfig(**base)


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got '{raw}'")


def _parse_floats(raw: str) -> tuple:
    parts = [p for p in raw.replace(",", " ").split() if p]
    return tuple(float(p) for p in parts)


def parse_campaign_config(text: str) -> CampaignConfig:
    """Parse ``key = value`` lines into a CampaignConfig.

    Blank lines and ``#`` comments are skipped. Unknown keys are an
    error: a typo should fail loudly, not silently fall back to the
    default. Time-valued keys carry an explicit unit suffix.
    """
    entries: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"line {lineno}: expected key = value, got '{line.strip()}'")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key in entries:
            raise ValueError(f"line {lineno}: duplicate key '{key}'")
        entries[key] = value.strip()

    scenario = entries.pop("scenario", "mild")
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario '{scenario}'")
    channel = SCENARIOS[scenario]
    system_kw: dict = {}
    pulse_kw: dict = {}
    channel_kw: dict = {}
    campaign_kw: dict = {}

    handlers = {
        "n_symbols": lambda v: system_kw.update(n_symbols=int(v)),
        "pulses_per_symbol": lambda v: system_kw.update(pulses_per_symbol=int(v)),
        "symbol_duration_ns": lambda v: system_kw.update(symbol_duration=float(v) * 1e-9),
        "integration_time_ns": lambda v: system_kw.update(integration_time=float(v) * 1e-9),
        "amplitude_code": lambda v: system_kw.update(
            amplitude_code=tuple(int(p) for p in v.replace(",", " ").split())
        ),
        "hopping_code_ns": lambda v: system_kw.update(
            hopping_code=tuple(x * 1e-9 for x in _parse_floats(v))
        ),
        "dt_ps": lambda v: (
            system_kw.update(dt=float(v) * 1e-12),
            pulse_kw.update(dt=float(v) * 1e-12),
        ),
        "tau_m_ns": lambda v: pulse_kw.update(tau_m=float(v) * 1e-9),
        "pulse_half_width_ns": lambda v: pulse_kw.update(
            support_half_width=float(v) * 1e-9
        ),
        "mean_arrival_interval_ns": lambda v: channel_kw.update(
            mean_arrival_interval=float(v) * 1e-9
        ),
        "decay_constant_ns": lambda v: channel_kw.update(decay_constant=float(v) * 1e-9),
        "max_delay_spread_ns": lambda v: channel_kw.update(
            max_delay_spread=float(v) * 1e-9
        ),
        "random_tap_signs": lambda v: channel_kw.update(random_tap_signs=_parse_bool(v)),
        "ebn0_grid_db": lambda v: campaign_kw.update(ebn0_grid_db=_parse_floats(v)),
        "blocks_per_point": lambda v: campaign_kw.update(blocks_per_point=int(v)),
        "master_seed": lambda v: campaign_kw.update(master_seed=int(v)),
        "decoders": lambda v: campaign_kw.update(
            decoders=tuple(p for p in v.replace(",", " ").split() if p)
        ),
        "output_path": lambda v: campaign_kw.update(output_path=v),
        "pin_channel": lambda v: campaign_kw.update(pin_channel=_parse_bool(v)),
        "rounding_trials": lambda v: campaign_kw.update(rounding_trials=int(v)),
        "include_timing_in_csv": lambda v: campaign_kw.update(
            include_timing_in_csv=_parse_bool(v)
        ),
        "feas_tol": lambda v: campaign_kw.setdefault("_solver", {}).update(
            feas_tol=float(v)
        ),
        "gap_tol": lambda v: campaign_kw.setdefault("_solver", {}).update(
            gap_tol=float(v)
        ),
        "max_iterations": lambda v: campaign_kw.setdefault("_solver", {}).update(
            max_iterations=int(v)
        ),
    }
    for key, value in entries.items():
        if key not in handlers:
            raise ValueError(f"unknown config key '{key}'")
        handlers[key](value)

    solver_kw = campaign_kw.pop("_solver", {})
    return CampaignConfig(
        system=SystemConfig(**system_kw),
        channel=replace(channel, **channel_kw) if channel_kw else channel,
        pulse=PulseSpec(**pulse_kw),
        scenario_name=scenario,
        solver=SolverSettings(**solver_kw),
        **campaign_kw,
    )


def load_campaign_config(path: str) -> CampaignConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_campaign_config(fh.read())


def emit_report(records) -> str:
    """Human-readable summary table, one row per (decoder, grid point)."""
    if not records:
        raise ValueError("no records to report")
    ordered = sorted(records, key=lambda r: (r.scenario, r.decoder, r.ebn0_db))
    lines = []
    current = None
    header = (
        f"{'ebn0_db':>8}  {'decoder':<14}  {'ber':>12}  "
        f"{'errors/bits':>16}  {'agreement':>9}  {'wall_s':>9}"
    )
    for r in ordered:
        if r.scenario != current:
            current = r.scenario
            lines.append(f"scenario: {current}")
            lines.append(header)
        lines.append(
            f"{_format_float(r.ebn0_db):>8}  {r.decoder:<14}  {r.ber:>12.3e}  "
            f"{r.bit_errors:>7d}/{r.bits:<8d}  {r.agreement_with_baseline:>9.4f}  "
            f"{r.wall_time:>9.2f}"
        )
    return "\n".join(lines) + "\n"
