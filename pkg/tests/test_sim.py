"""Campaign harness: trials, aggregation, CSV, config parsing, CLI."""

import math

import numpy as np
import pytest

from diruwb import (
    CSV_HEADER,
    CampaignConfig,
    PulseSpec,
    SCENARIOS,
    SystemConfig,
    emit_report,
    load_campaign_config,
    parse_campaign_config,
    run_block_trial,
    run_campaign,
    scenario_config,
    trial_seed_sequence,
    write_csv,
)
from diruwb.cli import main
from diruwb.sim import BerRecord

PINNED_HEADER = "scenario,decoder,ebn0_db,bit_errors,bits,ber,agreement,wall_time_s"


def _tiny_config(tmp_path, scenario_name="flat", **overrides):
    base = dict(
        ebn0_grid_db=(math.inf,),
        blocks_per_point=3,
        decoders=("exhaustive",),
        output_path=str(tmp_path / "out.csv"),
    )
    base.update(overrides)
    return scenario_config(scenario_name, **base)


class TestTrialSeedSequence:
    def test_deterministic(self):
        a = trial_seed_sequence(0, "mild", 1, 2).generate_state(4)
        b = trial_seed_sequence(0, "mild", 1, 2).generate_state(4)
        assert np.array_equal(a, b)

    def test_streams_separate(self):
        base = trial_seed_sequence(0, "mild", 1, 2).generate_state(4)
        for other in (
            trial_seed_sequence(1, "mild", 1, 2),
            trial_seed_sequence(0, "severe", 1, 2),
            trial_seed_sequence(0, "mild", 0, 2),
            trial_seed_sequence(0, "mild", 1, 3),
        ):
            assert not np.array_equal(base, other.generate_state(4))


class TestRunBlockTrial:
    def test_deterministic_given_seed(self):
        cfg = scenario_config("mild", decoders=("exhaustive", "sdp_sign"))
        seq = trial_seed_sequence(0, "mild", 0, 0)
        first = run_block_trial(cfg, 12.0, seq)
        again = run_block_trial(cfg, 12.0, trial_seed_sequence(0, "mild", 0, 0))
        assert np.array_equal(first.d_true, again.d_true)
        assert np.array_equal(first.z, again.z)
        for name in first.decisions:
            assert np.array_equal(first.decisions[name], again.decisions[name])

    def test_decoders_share_one_decision_vector(self):
        cfg = scenario_config("mild", decoders=("sdp_sign", "exhaustive"))
        trial = run_block_trial(cfg, 10.0, trial_seed_sequence(0, "mild", 0, 1))
        assert trial.z.shape == (cfg.system.n_symbols,)
        assert list(trial.decisions) == ["exhaustive", "sdp_sign"]
        assert set(trial.decode_seconds) == set(trial.decisions)
        assert all(t >= 0.0 for t in trial.decode_seconds.values())

    def test_noiseless_exactness_smoke(self):
        # exhaustive and the randomized-rounding relaxation recover the data
        # on noiseless blocks; the acceptance suite runs this at full scale
        for name in sorted(SCENARIOS):
            cfg = scenario_config(name, decoders=("exhaustive", "sdp_randomized"))
            for block in range(3):
                seq = trial_seed_sequence(0, name, 0, block)
                trial = run_block_trial(cfg, None, seq)
                for decoder, d_hat in trial.decisions.items():
                    assert np.array_equal(d_hat, trial.d_true), (
                        f"{name} block {block} {decoder}"
                    )

    def test_none_and_inf_noiseless_paths_match(self):
        cfg = scenario_config("mild", decoders=("exhaustive",))
        a = run_block_trial(cfg, None, trial_seed_sequence(3, "mild", 0, 0))
        b = run_block_trial(cfg, math.inf, trial_seed_sequence(3, "mild", 0, 0))
        assert np.array_equal(a.z, b.z)


class TestCampaignConfigValidation:
    def test_blocks_must_be_positive(self):
        with pytest.raises(ValueError):
            scenario_config("mild", blocks_per_point=0)

    def test_grid_must_be_nonempty(self):
        with pytest.raises(ValueError):
            scenario_config("mild", ebn0_grid_db=())

    def test_grid_rejects_nan_and_minus_inf(self):
        for bad in (math.nan, -math.inf):
            with pytest.raises(ValueError):
                scenario_config("mild", ebn0_grid_db=(bad,))

    def test_decoders_must_be_known_and_nonempty(self):
        with pytest.raises(ValueError):
            scenario_config("mild", decoders=())
        with pytest.raises(ValueError):
            scenario_config("mild", decoders=("exhaustive", "ml"))

    def test_pulse_and_system_share_dt(self):
        with pytest.raises(ValueError):
            scenario_config("mild", pulse=PulseSpec(dt=20e-12))

    def test_unknown_scenario_rejected(self):
        with pytest.raises(ValueError):
            scenario_config("indoor")


class TestRunCampaign:
    def test_flat_noiseless_rows_and_sorting(self, tmp_path):
        cfg = _tiny_config(
            tmp_path,
            ebn0_grid_db=(math.inf, 20.0),
            decoders=("sdp_sign", "exhaustive"),
            blocks_per_point=2,
        )
        records = run_campaign(cfg)
        keys = [(r.scenario, r.decoder, r.ebn0_db) for r in records]
        assert keys == sorted(keys)
        assert len(records) == 4
        for r in records:
            assert r.bits == 2 * cfg.system.n_symbols
            assert r.ber == r.bit_errors / r.bits
            if r.ebn0_db == math.inf:
                assert r.bit_errors == 0
            if r.decoder == "exhaustive":
                assert r.agreement_with_baseline == 1.0

    def test_csv_written_with_pinned_header(self, tmp_path):
        cfg = _tiny_config(tmp_path)
        run_campaign(cfg)
        text = (tmp_path / "out.csv").read_text(encoding="ascii")
        lines = text.splitlines()
        assert lines[0] == PINNED_HEADER
        assert CSV_HEADER == PINNED_HEADER
        assert len(lines) == 2
        fields = lines[1].split(",")
        assert fields[0] == "flat"
        assert fields[1] == "exhaustive"
        assert fields[2] == "inf"
        assert fields[7] == "0"

    def test_rerun_is_byte_identical(self, tmp_path):
        cfg = _tiny_config(
            tmp_path,
            scenario_name="mild",
            ebn0_grid_db=(12.0,),
            decoders=("exhaustive", "sdp_sign"),
        )
        run_campaign(cfg)
        first = (tmp_path / "out.csv").read_bytes()
        run_campaign(cfg)
        assert (tmp_path / "out.csv").read_bytes() == first

    def test_timing_column_zeroed_unless_requested(self, tmp_path):
        cfg = _tiny_config(tmp_path, include_timing_in_csv=True)
        records = run_campaign(cfg)
        assert all(r.wall_time > 0.0 for r in records)
        text = (tmp_path / "out.csv").read_text(encoding="ascii")
        assert text.splitlines()[1].split(",")[7] != "0"

    def test_pinned_channel_reproducible(self, tmp_path):
        cfg = _tiny_config(tmp_path, scenario_name="mild", pin_channel=True)
        records = run_campaign(cfg)
        assert all(r.bit_errors == 0 for r in records)
        pinned = (tmp_path / "out.csv").read_bytes()
        run_campaign(cfg)
        assert (tmp_path / "out.csv").read_bytes() == pinned

    def test_pinned_realization_overrides_channel_stream(self):
        from diruwb import SCENARIOS as presets
        from diruwb import draw_channel

        cfg = scenario_config("mild", decoders=("exhaustive",))
        seq = trial_seed_sequence(0, "mild", 0, 0)
        realization = draw_channel(presets["mild"], np.random.default_rng(99))
        pinned_a = run_block_trial(cfg, None, seq, pinned=realization)
        pinned_b = run_block_trial(
            cfg, None, trial_seed_sequence(0, "mild", 0, 0), pinned=realization
        )
        fresh = run_block_trial(cfg, None, trial_seed_sequence(0, "mild", 0, 0))
        assert np.array_equal(pinned_a.z, pinned_b.z)
        assert not np.array_equal(pinned_a.z, fresh.z)

    def test_unwritable_output_path(self, tmp_path):
        cfg = _tiny_config(tmp_path, output_path=str(tmp_path / "missing" / "x.csv"))
        with pytest.raises(OSError):
            run_campaign(cfg)


class TestWriteCsv:
    def test_float_formatting(self, tmp_path):
        rec = BerRecord(
            scenario="mild",
            decoder="exhaustive",
            ebn0_db=math.inf,
            bit_errors=1,
            bits=30,
            ber=1 / 30,
            agreement_with_baseline=1.0,
            wall_time=0.5,
        )
        path = tmp_path / "fmt.csv"
        write_csv([rec], path)
        line = path.read_text(encoding="ascii").splitlines()[1]
        assert line == "mild,exhaustive,inf,1,30,0.0333333333333,1,0"
        write_csv([rec], path, include_timing=True)
        assert path.read_text().splitlines()[1].endswith(",0.5")


class TestParseCampaignConfig:
    def test_defaults_match_scenario_preset(self):
        assert parse_campaign_config("scenario = mild") == scenario_config("mild")

    def test_comments_blanks_and_units(self):
        text = """
        # campaign description
        scenario = severe
        n_symbols = 4          # fewer symbols
        symbol_duration_ns = 8
        integration_time_ns = 8
        dt_ps = 10
        tau_m_ns = 0.2877
        mean_arrival_interval_ns = 2
        max_delay_spread_ns = 50
        ebn0_grid_db = 8, 12
        blocks_per_point = 7
        master_seed = 5
        decoders = exhaustive, sdp_randomized
        rounding_trials = 9
        pin_channel = yes
        output_path = sweep.csv
        """
        cfg = parse_campaign_config(text)
        assert cfg.scenario_name == "severe"
        assert cfg.system.n_symbols == 4
        assert cfg.system.symbol_duration == 8e-9
        assert cfg.pulse.tau_m == pytest.approx(0.2877e-9)
        assert cfg.pulse.dt == cfg.system.dt == 10e-12
        assert cfg.channel.mean_arrival_interval == pytest.approx(2e-9, rel=1e-15)
        assert cfg.channel.max_delay_spread == pytest.approx(50e-9, rel=1e-15)
        assert cfg.ebn0_grid_db == (8.0, 12.0)
        assert cfg.blocks_per_point == 7
        assert cfg.master_seed == 5
        assert cfg.decoders == ("exhaustive", "sdp_randomized")
        assert cfg.rounding_trials == 9
        assert cfg.pin_channel is True
        assert cfg.output_path == "sweep.csv"

    def test_solver_keys(self):
        cfg = parse_campaign_config("feas_tol = 1e-8\ngap_tol = 1e-7\nmax_iterations = 40")
        assert cfg.solver.feas_tol == 1e-8
        assert cfg.solver.gap_tol == 1e-7
        assert cfg.solver.max_iterations == 40

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="unknown config key"):
            parse_campaign_config("scenorio = mild")

    def test_duplicate_key_rejected(self):
        with pytest.raises(ValueError, match="duplicate key"):
            parse_campaign_config("master_seed = 1\nmaster_seed = 2")

    def test_line_without_assignment_rejected(self):
        with pytest.raises(ValueError, match="key = value"):
            parse_campaign_config("blocks_per_point")

    def test_unknown_scenario_rejected(self):
        with pytest.raises(ValueError, match="unknown scenario"):
            parse_campaign_config("scenario = office")

    def test_bad_boolean_rejected(self):
        with pytest.raises(ValueError, match="boolean"):
            parse_campaign_config("pin_channel = maybe")

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "campaign.cfg"
        path.write_text("scenario = flat\nblocks_per_point = 2\n", encoding="utf-8")
        assert load_campaign_config(str(path)) == parse_campaign_config(
            path.read_text()
        )


class TestEmitReport:
    def _record(self, **kw):
        base = dict(
            scenario="mild",
            decoder="exhaustive",
            ebn0_db=10.0,
            bit_errors=5,
            bits=100,
            ber=0.05,
            agreement_with_baseline=1.0,
            wall_time=1.25,
        )
        base.update(kw)
        return BerRecord(**base)

    def test_single_record_table(self):
        text = emit_report([self._record()])
        assert "scenario: mild" in text
        assert "ebn0_db" in text and "agreement" in text
        assert "5.000e-02" in text
        assert "5/100" in text

    def test_rows_sorted_by_scenario_decoder_ebn0(self):
        records = [
            self._record(ebn0_db=20.0, bit_errors=1, ber=0.01),
            self._record(ebn0_db=10.0),
            self._record(scenario="flat"),
        ]
        lines = emit_report(records).splitlines()
        assert lines[0] == "scenario: flat"
        mild_rows = [l for l in lines if l.lstrip().startswith(("10", "20"))]
        assert len(mild_rows) == 3

    def test_empty_records_rejected(self):
        with pytest.raises(ValueError):
            emit_report([])


class TestCli:
    def test_end_to_end_flat_noiseless(self, tmp_path, capsys):
        out = tmp_path / "cli.csv"
        code = main(
            [
                "--scenario",
                "flat",
                "--blocks",
                "2",
                "--grid",
                "inf",
                "--decoders",
                "exhaustive",
                "--out",
                str(out),
            ]
        )
        captured = capsys.readouterr()
        assert code == 0
        assert out.exists()
        assert "scenario: flat" in captured.out
        assert f"wrote {out}" in captured.out

    def test_quiet_suppresses_report(self, tmp_path, capsys):
        out = tmp_path / "cli.csv"
        code = main(
            ["--scenario", "flat", "--blocks", "1", "--grid", "inf",
             "--decoders", "exhaustive", "--out", str(out), "--quiet"]
        )
        assert code == 0
        assert capsys.readouterr().out == ""

    def test_config_file_with_flag_overrides(self, tmp_path, capsys):
        cfg_path = tmp_path / "c.cfg"
        cfg_path.write_text(
            "scenario = mild\nblocks_per_point = 1\nebn0_grid_db = inf\n"
            "decoders = exhaustive\noutput_path = unused.csv\n",
            encoding="utf-8",
        )
        out = tmp_path / "override.csv"
        code = main(
            ["--config", str(cfg_path), "--scenario", "flat", "--seed", "9",
             "--out", str(out), "--quiet"]
        )
        assert code == 0
        text = out.read_text(encoding="ascii")
        assert text.splitlines()[1].startswith("flat,exhaustive,inf")

    def test_bad_decoder_exits_2(self, tmp_path, capsys):
        code = main(
            ["--scenario", "flat", "--blocks", "1", "--grid", "inf",
             "--decoders", "oracle", "--out", str(tmp_path / "x.csv")]
        )
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_config_file_exits_2(self, tmp_path, capsys):
        code = main(["--config", str(tmp_path / "nope.cfg")])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_unwritable_output_exits_2(self, tmp_path, capsys):
        code = main(
            ["--scenario", "flat", "--blocks", "1", "--grid", "inf",
             "--decoders", "exhaustive",
             "--out", str(tmp_path / "missing" / "x.csv")]
        )
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_unknown_scenario_flag_argparse_exit(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--scenario", "indoor"])
        assert exc.value.code == 2
        capsys.readouterr()
