"""Multipath channel draws, response synthesis, and autocorrelation integrals."""

import math

import numpy as np
import pytest

from diruwb import (
    ChannelRealization,
    PulseSpec,
    SVChannelParams,
    attach_response,
    autocorr_integral,
    draw_channel,
    sample_pulse,
    synth_response,
    taps_from_text,
    taps_to_text,
)
from diruwb.channel import rayleigh_mean_scale


class TestDrawChannel:
    def test_deterministic_given_seed(self):
        params = SVChannelParams(max_delay_spread=200e-9)
        a = draw_channel(params, 123)
        b = draw_channel(params, 123)
        assert a.taps == b.taps

    def test_flat_sentinel(self):
        flat = draw_channel(SVChannelParams(max_delay_spread=0.0), 0)
        assert flat.taps == [(0.0, 1.0)]

    def test_first_tap_at_origin(self):
        # receiver clock locks to the earliest path
        params = SVChannelParams(max_delay_spread=30e-9)
        rng = np.random.default_rng(5)
        for _ in range(200):
            ch = draw_channel(params, rng)
            assert ch.taps[0][0] == 0.0
            assert len(ch.taps) >= 1

    def test_delays_sorted_within_spread(self):
        params = SVChannelParams(max_delay_spread=200e-9)
        rng = np.random.default_rng(11)
        for _ in range(100):
            ch = draw_channel(params, rng)
            delays = [d for d, _ in ch.taps]
            assert all(x < y for x, y in zip(delays, delays[1:]))
            assert delays[-1] <= 200e-9

    def test_mean_tap_count(self):
        # expected number of Poisson arrivals is spread / mean gap = 20
        params = SVChannelParams(max_delay_spread=200e-9)
        rng = np.random.default_rng(2024)
        counts = [len(draw_channel(params, rng).taps) for _ in range(10_000)]
        mean = float(np.mean(counts))
        assert 19.5 <= mean <= 20.5, f"mean tap count {mean:.3f}"

    def test_amplitude_decay_calibration(self):
        # tap amplitude mean follows exp(-delay / decay constant); check a
        # narrow excess-delay bin against its profile value within 3 SE
        params = SVChannelParams(max_delay_spread=200e-9, random_tap_signs=False)
        rng = np.random.default_rng(99)
        lo, hi = 38e-9, 42e-9
        amps = []
        for _ in range(4000):
            for delay, amp in draw_channel(params, rng).taps:
                if lo <= delay < hi:
                    amps.append(amp)
        amps = np.asarray(amps)
        target = math.exp(-40e-9 / params.decay_constant)
        se = amps.std(ddof=1) / math.sqrt(len(amps))
        # the profile varies across the bin; allow that drift on top of 3 SE
        bin_drift = abs(
            math.exp(-lo / params.decay_constant) - math.exp(-hi / params.decay_constant)
        )
        err = abs(amps.mean() - target)
        assert err < 3 * se + bin_drift, f"mean {amps.mean():.4f} vs {target:.4f}"

    def test_rayleigh_scale_convention(self):
        # a Rayleigh draw with scale sigma has mean sigma * sqrt(pi / 2)
        sigma = rayleigh_mean_scale(0.0, 20e-9)
        rng = np.random.default_rng(3)
        sample = rng.rayleigh(scale=sigma, size=100_000)
        assert abs(sample.mean() - 1.0) < 0.01

    def test_signs_split_when_enabled(self):
        params = SVChannelParams(max_delay_spread=200e-9, random_tap_signs=True)
        rng = np.random.default_rng(17)
        amps = np.concatenate(
            [[a for _, a in draw_channel(params, rng).taps] for _ in range(500)]
        )
        frac_neg = np.mean(amps < 0)
        assert 0.45 < frac_neg < 0.55, f"negative fraction {frac_neg:.3f}"


class TestChannelRealizationValidation:
    def test_requires_taps(self):
        with pytest.raises(ValueError):
            ChannelRealization(taps=[])

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            ChannelRealization(taps=[(2e-9, 1.0), (1e-9, 0.5)])

    def test_rejects_negative_delay(self):
        with pytest.raises(ValueError):
            ChannelRealization(taps=[(-1e-9, 1.0)])


class TestSynthResponse:
    def test_single_unit_tap_is_the_pulse(self):
        spec = PulseSpec()
        g = synth_response(ChannelRealization(taps=[(0.0, 1.0)]), spec)
        w = sample_pulse(spec)
        assert np.allclose(g.samples[: len(w)], w.samples, atol=1e-18)
        assert np.all(g.samples[len(w) :] == 0.0)

    def test_disjoint_copies_add_energy(self):
        spec = PulseSpec()
        delta = 10e-9  # far beyond the 2 ns pulse footprint
        g = synth_response(ChannelRealization(taps=[(0.0, 1.0), (delta, 1.0)]), spec)
        w = sample_pulse(spec)
        assert abs(g.energy() - 2 * w.energy()) < 1e-9 * w.energy()

    def test_amplitude_linearity(self):
        spec = PulseSpec()
        g1 = synth_response(ChannelRealization(taps=[(0.0, 1.0)]), spec)
        g2 = synth_response(ChannelRealization(taps=[(0.0, 2.0)]), spec)
        assert np.allclose(g2.samples, 2 * g1.samples, rtol=1e-15, atol=0)

    def test_off_grid_tap_delay(self):
        # delays need not sit on the sampling grid
        spec = PulseSpec()
        g = synth_response(ChannelRealization(taps=[(13.37e-12, 1.0)]), spec)
        w = sample_pulse(spec)
        assert abs(g.energy() - w.energy()) < 1e-3 * w.energy()

    def test_attach_response(self):
        spec = PulseSpec()
        ch = ChannelRealization(taps=[(0.0, 1.0)])
        ch2 = attach_response(ch, spec)
        assert ch2.sampled_response is not None
        assert ch2.taps == ch.taps


class TestAutocorrIntegral:
    def test_zero_lag_full_window_is_energy(self):
        spec = PulseSpec()
        g = synth_response(ChannelRealization(taps=[(0.0, 1.0)]), spec)
        e = autocorr_integral(g, 0.0, g.duration, 0.0)
        assert abs(e - g.energy()) < 1e-12 * g.energy()

    def test_lag_symmetry_over_full_support(self):
        spec = PulseSpec()
        ch = draw_channel(SVChannelParams(max_delay_spread=30e-9), 21)
        g = synth_response(ch, spec)
        span = g.duration
        for tau in (0.5e-9, 2e-9, 7.3e-9):
            fwd = autocorr_integral(g, -span, 2 * span, tau)
            bwd = autocorr_integral(g, -span, 2 * span, -tau)
            assert abs(fwd - bwd) <= 1e-10 * g.energy(), f"tau {tau}"

    def test_beyond_support_lag_is_zero(self):
        spec = PulseSpec()
        g = synth_response(ChannelRealization(taps=[(0.0, 1.0)]), spec)
        assert autocorr_integral(g, 0.0, g.duration, 5e-9) == 0.0

    def test_cauchy_schwarz(self):
        spec = PulseSpec()
        ch = draw_channel(SVChannelParams(max_delay_spread=30e-9), 8)
        g = synth_response(ch, spec)
        e = g.energy()
        for tau in np.linspace(-10e-9, 10e-9, 21):
            v = autocorr_integral(g, 0.0, g.duration, float(tau))
            assert abs(v) <= e * (1 + 1e-12)

    def test_window_order_validated(self):
        spec = PulseSpec()
        g = synth_response(ChannelRealization(taps=[(0.0, 1.0)]), spec)
        with pytest.raises(ValueError):
            autocorr_integral(g, 2e-9, 1e-9, 0.0)


class TestTapSerialization:
    def test_round_trip(self):
        # nanosecond formatting costs one ulp on the unit conversion
        ch = draw_channel(SVChannelParams(max_delay_spread=200e-9), 42)
        back = taps_from_text(taps_to_text(ch))
        assert len(back.taps) == len(ch.taps)
        for (d1, a1), (d2, a2) in zip(ch.taps, back.taps):
            assert abs(d1 - d2) <= 1e-15 * max(abs(d1), 1e-12), f"{d1} vs {d2}"
            assert a1 == a2, f"{a1} vs {a2}"

    def test_comments_and_blanks_skipped(self):
        text = "# header\n\n0.0 1.0\n2.5 -0.125\n"
        ch = taps_from_text(text)
        assert ch.taps == [(0.0, 1.0), (2.5e-9, -0.125)]

    def test_bad_field_count_rejected(self):
        with pytest.raises(ValueError):
            taps_from_text("0.0 1.0 extra\n")
