"""Differential impulse-radio UWB block decoding.

Quadratic receiver model for differentially encoded multi-pulse symbols
under inter-symbol interference, an exhaustive nearest-neighbor decoder,
a semidefinite relaxation decoder with its own interior-point solver,
and a Monte Carlo BER campaign harness.
"""

from .channel import (
    ChannelRealization,
    SVChannelParams,
    attach_response,
    autocorr_integral,
    draw_channel,
    synth_response,
    taps_from_text,
    taps_to_text,
)
from .decoder import (
    DecodeResult,
    DecodingProblem,
    LiftedInstance,
    decode_exhaustive,
    decode_sdp,
    lift_candidate,
    lift_to_sdp,
    nn_objective,
    round_randomized,
    round_sign,
)
from .grid import SampledSignal, snap_index
from .model import (
    CodeMatrices,
    ModelBundle,
    SystemConfig,
    VolterraModel,
    build_code_matrices,
    build_kernels,
    build_volterra,
    derive_pulse_offsets,
    encode_affine,
    encode_recursive,
    load_model_bundle,
    model_decision,
    save_model_bundle,
)
from .pulse import PulseSpec, monocycle, sample_pulse
from .receiver import (
    NoiseSpec,
    acr_demod,
    add_noise,
    ebn0_to_n0,
    load_waveform,
    dump_waveform,
    synth_rx_waveform,
)
from .sdp import (
    SdpProblem,
    SdpSolution,
    SolutionReport,
    SolverSettings,
    check_solution,
    load_problem,
    save_problem,
    solve_sdp,
)
from .sim import (
    CSV_HEADER,
    SCENARIOS,
    BerRecord,
    CampaignConfig,
    TrialResult,
    emit_report,
    load_campaign_config,
    parse_campaign_config,
    run_block_trial,
    run_campaign,
    scenario_config,
    trial_seed_sequence,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BerRecord",
    "CampaignConfig",
    "CSV_HEADER",
    "ChannelRealization",
    "CodeMatrices",
    "DecodeResult",
    "DecodingProblem",
    "LiftedInstance",
    "ModelBundle",
    "NoiseSpec",
    "PulseSpec",
    "SCENARIOS",
    "SampledSignal",
    "SdpProblem",
    "SdpSolution",
    "SolutionReport",
    "SolverSettings",
    "SVChannelParams",
    "SystemConfig",
    "TrialResult",
    "VolterraModel",
    "acr_demod",
    "add_noise",
    "attach_response",
    "autocorr_integral",
    "build_code_matrices",
    "build_kernels",
    "build_volterra",
    "check_solution",
    "decode_exhaustive",
    "decode_sdp",
    "derive_pulse_offsets",
    "draw_channel",
    "dump_waveform",
    "ebn0_to_n0",
    "emit_report",
    "encode_affine",
    "encode_recursive",
    "lift_candidate",
    "lift_to_sdp",
    "load_campaign_config",
    "load_model_bundle",
    "load_problem",
    "load_waveform",
    "model_decision",
    "monocycle",
    "nn_objective",
    "parse_campaign_config",
    "round_randomized",
    "round_sign",
    "run_block_trial",
    "run_campaign",
    "sample_pulse",
    "save_model_bundle",
    "save_problem",
    "scenario_config",
    "snap_index",
    "solve_sdp",
    "synth_response",
    "synth_rx_waveform",
    "taps_from_text",
    "taps_to_text",
    "trial_seed_sequence",
    "write_csv",
]
