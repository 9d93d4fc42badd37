"""Small bit-error-rate sweep comparing the decoders.

Runs a reduced campaign (300 blocks per point instead of 10^4) on the
30 ns scenario, prints the summary table, and plots BER against Eb/N0
for the exhaustive baseline and the sign-rounded relaxation. Expect a
few minutes of runtime.

Run:  python demos/ber_sweep_small.py
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from diruwb import emit_report, run_campaign, scenario_config

OUT = pathlib.Path(__file__).resolve().parent

config = scenario_config(
    "mild",
    ebn0_grid_db=(4.0, 8.0, 12.0, 16.0, 20.0),
    blocks_per_point=300,
    decoders=("exhaustive", "sdp_sign"),
    output_path=str(OUT / "ber_small.csv"),
)
records = run_campaign(config)
print(emit_report(records), end="")
print(f"wrote {config.output_path}")

fig, ax = plt.subplots(figsize=(6, 4))
for decoder, marker in (("exhaustive", "o"), ("sdp_sign", "s")):
    points = sorted(
        (r.ebn0_db, r.ber) for r in records if r.decoder == decoder
    )
    ax.semilogy([p[0] for p in points], [p[1] for p in points], marker=marker, label=decoder)
ax.set_xlabel("Eb/N0 (dB)")
ax.set_ylabel("BER")
ax.set_title("30 ns delay spread, 300 blocks per point")
ax.grid(True, which="both", alpha=0.3)
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "ber_small.png", dpi=120)
print(f"wrote {OUT / 'ber_small.png'}")
