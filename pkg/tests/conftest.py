"""Shared fixtures: the small flat-channel fixture and default setups."""

import numpy as np
import pytest

from diruwb import (
    PulseSpec,
    SVChannelParams,
    SystemConfig,
    draw_channel,
    synth_response,
)

# Acceptance tests register (criterion, passed, detail) rows here; the
# terminal-summary hook prints one line per criterion after the run.
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}: {detail}")


@pytest.fixture(scope="session")
def narrow_pulse():
    """Pulse short enough that adjacent pulses of the small fixture stay disjoint."""
    return PulseSpec(support_half_width=0.9e-9)


@pytest.fixture(scope="session")
def two_pulse_config():
    """Two symbols of two pulses each, gaps wider than pulse and window.

    With a single-tap channel every window captures exactly one aligned
    pulse product, so the decision vector has a closed form.
    """
    return SystemConfig(
        n_symbols=2,
        pulses_per_symbol=2,
        symbol_duration=8e-9,
        integration_time=1.9e-9,
        amplitude_code=(1, 1),
        hopping_code=(2e-9, 6e-9),
    )


@pytest.fixture(scope="session")
def flat_response(narrow_pulse):
    flat = draw_channel(SVChannelParams(max_delay_spread=0.0), np.random.default_rng(0))
    return synth_response(flat, narrow_pulse)


@pytest.fixture(scope="session")
def default_config():
    return SystemConfig()


@pytest.fixture(scope="session")
def mild_response():
    """One dispersive 30 ns realization shared by read-only tests."""
    ch = draw_channel(SVChannelParams(max_delay_spread=30e-9), np.random.default_rng(7))
    return synth_response(ch, PulseSpec())
