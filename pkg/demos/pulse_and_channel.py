"""Walk through the transmit pulse and the multipath channel model.

Samples the Gaussian monocycle, draws one channel realization per
delay-spread scenario, and synthesizes the per-pulse received response
g(t). Saves two figures next to this script and prints tap statistics.

Run:  python demos/pulse_and_channel.py
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from diruwb import PulseSpec, SCENARIOS, draw_channel, sample_pulse, synth_response

OUT = pathlib.Path(__file__).resolve().parent

# -- the transmit pulse -----------------------------------------------------
# Second-derivative Gaussian monocycle, tau_m = 0.2877 ns, sampled at 10 ps.
spec = PulseSpec()
pulse = sample_pulse(spec)
t_ns = (pulse.t0 + spec.dt * np.arange(len(pulse.samples))) * 1e9

print(f"pulse: {len(pulse.samples)} samples over [0, {2 * spec.support_half_width * 1e9:.1f}] ns")
print(f"pulse energy: {pulse.energy():.3e} (closed form 0.375*tau_m = {0.375 * spec.tau_m:.3e})")

fig, ax = plt.subplots(figsize=(6, 3))
ax.plot(t_ns, pulse.samples)
ax.set_xlabel("time (ns)")
ax.set_ylabel("w(t)")
ax.set_title("Gaussian monocycle")
fig.tight_layout()
fig.savefig(OUT / "pulse.png", dpi=120)
print(f"wrote {OUT / 'pulse.png'}")

# -- channel realizations per scenario --------------------------------------
# Taps arrive as a Poisson process over the delay spread; amplitudes decay
# exponentially with excess delay and carry random polarity. The receiver
# clock locks to the earliest path, so the first tap sits at delay 0.
rng = np.random.default_rng(0)
fig, axes = plt.subplots(3, 1, figsize=(7, 7), sharex=False)
for ax, name in zip(axes, ("flat", "mild", "severe")):
    params = SCENARIOS[name]
    realization = draw_channel(params, rng)
    g = synth_response(realization, spec)
    delays = np.array([delay for delay, _ in realization.taps])
    amps = np.array([amp for _, amp in realization.taps])
    t_g = (g.t0 + g.dt * np.arange(len(g.samples))) * 1e9
    ax.plot(t_g, g.samples, lw=0.8)
    ax.set_title(
        f"{name}: spread {params.max_delay_spread * 1e9:.0f} ns, "
        f"{len(delays)} taps, energy {g.energy():.2e}"
    )
    ax.set_ylabel("g(t)")
    print(
        f"{name:>7}: {len(delays):3d} taps, "
        f"first {delays[0] * 1e9:.2f} ns, last {delays[-1] * 1e9:6.2f} ns, "
        f"max |amp| {np.max(np.abs(amps)):.3f}"
    )
axes[-1].set_xlabel("time (ns)")
fig.tight_layout()
fig.savefig(OUT / "channels.png", dpi=120)
print(f"wrote {OUT / 'channels.png'}")
