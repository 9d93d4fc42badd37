"""Command line front end for BER campaigns.

Exit codes: 0 on success, 2 for configuration or I/O problems, 3 when a
decode fails at runtime (for example an SDP solve that diverges).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .sim import (
    SCENARIOS,
    emit_report,
    load_campaign_config,
    run_campaign,
    scenario_config,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diruwb-sim",
        description=(
            "Monte Carlo BER sweeps for differential impulse-radio blocks, "
            "comparing relaxation-based decoding against exhaustive search."
        ),
    )
    parser.add_argument(
        "--config",
        help="campaign config file (key = value lines); other flags override it",
    )
    parser.add_argument(
        "--scenario",
        choices=sorted(SCENARIOS),
        help="delay-spread preset to simulate",
    )
    parser.add_argument("--seed", type=int, help="master seed for the campaign")
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument(
        "--decoders",
        help="comma-separated decoder list: exhaustive, sdp_sign, sdp_randomized",
    )
    parser.add_argument(
        "--blocks", type=int, help="blocks to simulate per grid point"
    )
    parser.add_argument(
        "--grid",
        help="comma-separated Eb/N0 grid in dB ('inf' for the noiseless point)",
    )
    parser.add_argument(
        "--quiet", action="store_true", help="suppress the summary table on stdout"
    )
    return parser


def config_from_args(args) -> "CampaignConfig":
    if args.config is not None:
        config = load_campaign_config(args.config)
        if args.scenario is not None and args.scenario != config.scenario_name:
            config = replace(
                config,
                scenario_name=args.scenario,
                channel=SCENARIOS[args.scenario],
            )
    else:
        config = scenario_config(args.scenario if args.scenario else "mild")

    updates = {}
    if args.seed is not None:
        updates["master_seed"] = args.seed
    if args.out is not None:
        updates["output_path"] = args.out
    if args.decoders is not None:
        names = tuple(p for p in args.decoders.replace(",", " ").split() if p)
        updates["decoders"] = names
    if args.blocks is not None:
        updates["blocks_per_point"] = args.blocks
    if args.grid is not None:
        parts = [p for p in args.grid.replace(",", " ").split() if p]
        updates["ebn0_grid_db"] = tuple(float(p) for p in parts)
    return replace(config, **updates) if updates else config


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        records = run_campaign(config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"decode failed: {exc}", file=sys.stderr)
        return 3
    if not args.quiet:
        print(emit_report(records), end="")
        print(f"wrote {config.output_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
