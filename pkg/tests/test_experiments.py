"""Configuration files, experiment specs, tables, and the convergence run."""

import json
import math
import random
from fractions import Fraction

import pytest

from winterbottom_lab import (
    ConfigError,
    Configuration,
    InvalidConfiguration,
    ModelParams,
    total_energy,
    wetting_configuration,
)
from winterbottom_lab.experiments import (
    CONFIG_FORMAT,
    CONVERGENCE_FIELDS,
    SCAN_FIELDS,
    ExperimentSpec,
    configuration_from_dict,
    configuration_to_dict,
    convergence_experiment,
    default_convergence_schedule,
    energy_report,
    read_configuration,
    rows_to_csv,
    run_experiment,
    wetting_scan,
    write_configuration,
)
from winterbottom_lab.search import AnnealSchedule

from test_energy import FLOWER, sample_family

Q1 = ModelParams(c_F=1, c_S=2, q=1)
WET2 = ModelParams(c_F=1, c_S=6, p=1, q=2)


class TestConfigurationFiles:
    def test_disk_round_trip(self, tmp_path):
        cfg = Configuration(FLOWER)
        path = tmp_path / "flower.json"
        write_configuration(path, cfg, Q1)
        back_cfg, back_params = read_configuration(path)
        assert back_cfg == cfg
        assert back_params == Q1

    def test_version_marker_is_written(self, tmp_path):
        path = tmp_path / "one.json"
        write_configuration(path, Configuration([(0, 0)]), Q1)
        assert json.loads(path.read_text())["format"] == CONFIG_FORMAT

    def test_round_trip_thousand_random(self):
        # dict-level round trip over a mixed family, a different parameter
        # set per batch
        pools = [Q1, WET2, ModelParams(c_F=Fraction(3, 2), c_S=5, q=3)]
        count = 0
        for i, params in enumerate(pools):
            for cfg in sample_family(1000 + i, 340, params):
                back_cfg, back_params = configuration_from_dict(
                    configuration_to_dict(cfg, params)
                )
                assert back_cfg == cfg
                assert back_params == params
                count += 1
        assert count >= 1000

    def test_rational_coupling_written_as_decimal(self):
        params = ModelParams(c_F=Fraction(3, 2), c_S=4, q=1)
        payload = configuration_to_dict(Configuration([(0, 0)]), params)
        assert payload["c_F"] == 1.5
        assert payload["c_S"] == 4
        _, back = configuration_from_dict(payload)
        assert back == params

    def test_unknown_version_rejected(self):
        payload = configuration_to_dict(Configuration([(0, 0)]), Q1)
        payload["format"] = "winterbottom-lab/99"
        with pytest.raises(ConfigError, match="winterbottom-lab/99"):
            configuration_from_dict(payload)

    def test_missing_keys_are_named(self):
        with pytest.raises(ConfigError, match="c_S.*sites"):
            configuration_from_dict({"format": CONFIG_FORMAT, "c_F": 1, "p": 1, "q": 1})

    @pytest.mark.parametrize(
        "payload",
        [
            [],
            "text",
            {"format": CONFIG_FORMAT, "c_F": 1, "c_S": 2, "p": 1, "q": 1, "sites": 5},
            {
                "format": CONFIG_FORMAT,
                "c_F": 1,
                "c_S": 2,
                "p": 1,
                "q": 1,
                "sites": [[0, 0, 0]],
            },
        ],
    )
    def test_malformed_payloads(self, payload):
        with pytest.raises(ConfigError):
            configuration_from_dict(payload)

    def test_negative_k2_fails_validation(self):
        payload = {
            "format": CONFIG_FORMAT,
            "c_F": 1,
            "c_S": 2,
            "p": 1,
            "q": 1,
            "sites": [[0, 0], [1, -1]],
        }
        with pytest.raises(InvalidConfiguration):
            configuration_from_dict(payload)

    def test_duplicate_site_fails_validation(self):
        payload = configuration_to_dict(Configuration([(0, 0), (1, 0)]), Q1)
        payload["sites"] = [[0, 0], [0, 0]]
        with pytest.raises(InvalidConfiguration):
            configuration_from_dict(payload)

    def test_non_json_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigError, match="not valid JSON"):
            read_configuration(path)


class TestExperimentSpec:
    def test_full_round_trip(self):
        spec = ExperimentSpec(
            kind="Convergence",
            params=Q1,
            n=(50, 100),
            seed=7,
            schedule=AnnealSchedule(1.5, 0.995, 4000),
            replicas=4,
            window=(9, 5),
            ratios=(Fraction(59, 10), Fraction(4)),
            qs=(2,),
            out="run.csv",
            fmt="csv",
        )
        assert ExperimentSpec.from_dict(spec.as_dict()) == spec

    def test_spec_serializes_to_json(self):
        spec = ExperimentSpec(kind="Minimize", params=WET2, n=(5,))
        text = json.dumps(spec.as_dict(), sort_keys=True)
        assert ExperimentSpec.from_dict(json.loads(text)) == spec

    def test_unknown_kind_rejected(self):
        with pytest.raises(ConfigError, match="kind"):
            ExperimentSpec(kind="Quench", params=Q1)

    def test_unknown_format_rejected(self):
        with pytest.raises(ConfigError, match="format"):
            ExperimentSpec(kind="Minimize", params=Q1, fmt="xml")

    def test_energy_kind_needs_source(self):
        with pytest.raises(ConfigError, match="source"):
            run_experiment(ExperimentSpec(kind="Energy", params=Q1))

    def test_convergence_kind_needs_seed(self):
        with pytest.raises(ConfigError, match="seed"):
            run_experiment(ExperimentSpec(kind="Convergence", params=Q1, n=(20,)))

    def test_minimize_dispatch(self):
        out = run_experiment(ExperimentSpec(kind="Minimize", params=Q1, n=(4,)))
        assert out["certificate"]["kind"] == "exact"
        assert out["best_energy"] == -14.0

    def test_wetting_scan_dispatch(self):
        out = run_experiment(
            ExperimentSpec(kind="WettingScan", params=Q1, n=(3,), ratios=(4,), qs=(1,))
        )
        assert [row["n"] for row in out["rows"]] == [1, 2, 3]


class TestCsvWriter:
    def test_header_then_rows(self):
        text = rows_to_csv(
            [{"a": 1, "b": 2.5}, {"a": 3, "b": 0.1}], fieldnames=("a", "b")
        )
        assert text.splitlines() == ["a,b", "1,2.5", "3,0.1"]

    def test_floats_keep_shortest_repr(self):
        text = rows_to_csv([{"x": 5.0, "y": 1 / 3}], fieldnames=("x", "y"))
        assert text.splitlines()[1] == "5.0,0.3333333333333333"

    def test_booleans_lowercase(self):
        text = rows_to_csv([{"flag": True}, {"flag": False}], fieldnames=("flag",))
        assert text.splitlines()[1:] == ["true", "false"]

    def test_fractions_become_decimals(self):
        text = rows_to_csv([{"r": Fraction(59, 10)}], fieldnames=("r",))
        assert text.splitlines()[1] == "5.9"

    def test_semicolon_never_leaks(self):
        with pytest.raises(ConfigError, match=";"):
            rows_to_csv([{"label": "a;b"}], fieldnames=("label",))


class TestEnergyReport:
    def test_wetting_row_audit(self):
        cfg = wetting_configuration(5, WET2)
        report = energy_report(cfg, WET2)
        assert report["v_n"] == -30.0
        assert report["film_bonds"] == 0
        assert report["substrate_bonds"] == 5
        assert report["boundary_count"] == 5
        assert report["decomposition"]["exact"] is True

    def test_flower_decomposition_is_exact(self):
        report = energy_report(Configuration(FLOWER), Q1)
        dec = report["decomposition"]
        assert dec["exact"] is True
        assert dec["total"] == dec["rescaled_energy"] == report["e_n"]
        assert dec["total"] == pytest.approx(
            dec["surface_term"] - dec["adhesion_term"], rel=1e-12
        )

    def test_strip_rows_only_for_anchored_atoms(self):
        cfg = Configuration([(0, 0), (1, 0), (2, 0)])
        report = energy_report(cfg, WET2)
        anchored = [entry["site"] for entry in report["strip"]["centers"]]
        assert anchored == [[0, 0], [2, 0]]

    def test_loops_pair_with_boundary(self):
        report = energy_report(Configuration(FLOWER), Q1)
        assert len(report["geometry"]["hn_loops"]) == 1
        assert len(report["geometry"]["hn_prime_loops"]) == 1


class TestWettingScan:
    def test_threshold_rows_stay_optimal(self):
        rows = wetting_scan(ratios=(4,), qs=(1,), n_max=6)
        assert all(row["wetting_optimal"] for row in rows)
        rows = wetting_scan(ratios=(6,), qs=(2,), n_max=6)
        assert all(row["wetting_optimal"] for row in rows)

    def test_flag_agrees_with_column_values(self):
        for row in wetting_scan(ratios=(3.5, 6.5), qs=(1, 2), n_max=5):
            assert row["wetting_optimal"] == (
                row["exact_minimum"] == row["wetting_energy"]
            )
            assert row["exact_minimum"] <= row["wetting_energy"]

    def test_scan_is_deterministic(self):
        a = wetting_scan(n_max=4)
        b = wetting_scan(n_max=4)
        assert rows_to_csv(a, SCAN_FIELDS) == rows_to_csv(b, SCAN_FIELDS)

    def test_ratio_column_keeps_given_precision(self):
        rows = wetting_scan(ratios=(Fraction(59, 10),), qs=(2,), n_max=2)
        assert {row["c_s_over_c_f"] for row in rows} == {5.9}

    @pytest.mark.parametrize("bad", [0, 13, 2.5])
    def test_bad_size_cap(self, bad):
        with pytest.raises(ConfigError):
            wetting_scan(n_max=bad)


FAST_SCHEDULE = AnnealSchedule(0.5, 0.99, 800)


class TestConvergenceExperiment:
    def run_small(self, seed=9):
        return convergence_experiment(
            Q1, (24, 40), seed, schedule=FAST_SCHEDULE, replicas=2
        )

    def test_row_shape(self):
        out = self.run_small()
        assert [row["n"] for row in out["rows"]] == [24, 40]
        for row in out["rows"]:
            assert set(CONVERGENCE_FIELDS) <= set(row)
            assert row["gap"] == pytest.approx(abs(row["e_n"] - row["reference"]))

    def test_rows_obey_boundary_coercivity(self):
        # the rescaled energy always dominates delta * boundary / sqrt(n)
        out = self.run_small()
        delta = float(Q1.delta)
        for row in out["rows"]:
            assert delta * row["boundary_count"] <= math.sqrt(row["n"]) * row["e_n"] + 1e-9

    def test_shift_never_hurts(self):
        out = self.run_small()
        for row in out["rows"]:
            assert row["sym_diff"] <= row["sym_diff_unshifted"] + 1e-12
            k = row["shift"] * math.sqrt(row["n"]) / Q1.q
            assert k == pytest.approx(round(k), abs=1e-9)

    def test_polygons_emitted(self):
        out = self.run_small()
        assert set(out["polygons"]["hn_prime"]) == {"24", "40"}
        assert len(out["polygons"]["winterbottom"]) >= 3
        for loop in out["polygons"]["hn_prime"]["40"]:
            assert all(len(vertex) == 2 for vertex in loop)

    def test_byte_identical_reruns(self):
        a = rows_to_csv(self.run_small()["rows"], CONVERGENCE_FIELDS)
        b = rows_to_csv(self.run_small()["rows"], CONVERGENCE_FIELDS)
        assert a == b

    def test_seed_matters(self):
        a = self.run_small(seed=9)["rows"]
        b = self.run_small(seed=10)["rows"]
        assert [r["n"] for r in a] == [r["n"] for r in b]

    def test_default_schedule_scales_with_size(self):
        sched = default_convergence_schedule(200)
        assert sched.steps == 30000
        assert sched.t0 == pytest.approx(0.6)
        assert 0.99 < sched.alpha < 1.0
