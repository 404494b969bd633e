import math

import pytest
from hypothesis import given, settings, strategies as st

from gwplan.analysis import (MetricSeries, aggregate_runs, ccdf, cdf, gain,
                             percentile, write_report_csv, write_step_csv)

floats_list = st.lists(
    st.floats(-1e9, 1e9, allow_nan=False, allow_infinity=False),
    min_size=1, max_size=60)


class TestCdf:
    def test_single_value(self):
        assert cdf([3.0]) == [(3.0, 1.0)]

    def test_distinct_values(self):
        assert cdf([2.0, 1.0, 3.0]) == [(1.0, 1 / 3), (2.0, 2 / 3), (3.0, 1.0)]

    def test_ties_collapse(self):
        assert cdf([5.0, 5.0, 1.0, 5.0]) == [(1.0, 0.25), (5.0, 1.0)]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            cdf([])

    @given(floats_list)
    def test_monotone_steps_ending_at_one(self, values):
        steps = cdf(values)
        xs = [x for x, _ in steps]
        fs = [f for _, f in steps]
        assert xs == sorted(xs) and len(set(xs)) == len(xs)
        assert all(0.0 < f <= 1.0 for f in fs)
        assert fs == sorted(fs)
        assert fs[-1] == 1.0


class TestCcdf:
    def test_complements_cdf(self):
        values = [1.0, 2.0, 2.0, 7.0]
        for (x, f), (cx, cf) in zip(cdf(values), ccdf(values)):
            assert x == cx
            assert f + cf == pytest.approx(1.0)

    @given(floats_list)
    def test_nonincreasing_ending_at_zero(self, values):
        fs = [f for _, f in ccdf(values)]
        assert fs == sorted(fs, reverse=True)
        assert fs[-1] == pytest.approx(0.0, abs=1e-12)


class TestPercentile:
    def test_nearest_rank_examples(self):
        values = [15.0, 20.0, 35.0, 40.0, 50.0]
        assert percentile(values, 0.30) == 20.0
        assert percentile(values, 0.40) == 20.0
        assert percentile(values, 0.50) == 35.0
        assert percentile(values, 0.95) == 50.0

    def test_median_of_two(self):
        assert percentile([1.0, 9.0], 0.5) == 1.0

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            percentile([], 0.5)
        with pytest.raises(ValueError):
            percentile([1.0], 0.0)
        with pytest.raises(ValueError):
            percentile([1.0], 1.0)

    @given(floats_list, st.floats(0.01, 0.99), st.randoms())
    @settings(max_examples=60)
    def test_permutation_invariant_and_member(self, values, p, rnd):
        shuffled = list(values)
        rnd.shuffle(shuffled)
        v = percentile(values, p)
        assert percentile(shuffled, p) == v
        assert v in values

    @given(floats_list)
    def test_extremes_bracket(self, values):
        assert percentile(values, 0.01) >= min(values)
        assert percentile(values, 0.99) <= max(values)


class TestGain:
    def test_reference_value(self):
        assert gain([120.0], [100.0], 0.5) == pytest.approx(0.20)

    def test_sign_convention(self):
        assert gain([80.0], [100.0], 0.5) == pytest.approx(-0.20)

    def test_accepts_series(self):
        t = MetricSeries([3.0, 3.0], strategy="gwp")
        b = MetricSeries([2.0, 2.0], strategy="centroid")
        assert gain(t, b, 0.5) == pytest.approx(0.5)

    def test_zero_baseline_rejected(self):
        with pytest.raises(ZeroDivisionError):
            gain([1.0], [0.0], 0.5)

    @given(st.lists(st.floats(1.0, 1e6), min_size=1, max_size=30),
           st.floats(0.01, 0.99))
    def test_self_gain_is_zero(self, values, p):
        assert gain(values, values, p) == 0.0


class TestAggregateRuns:
    def test_one_mean_per_run(self):
        runs = [MetricSeries([1.0, 3.0], scenario_id="a", strategy="gwp", seed="1"),
                MetricSeries([10.0], scenario_id="a", strategy="gwp", seed="2")]
        agg = aggregate_runs(runs)
        assert agg.values == [2.0, 10.0]
        assert agg.scenario_id == "a"
        assert agg.strategy == "gwp"

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate_runs([])


class TestSeries:
    def test_mean(self):
        assert MetricSeries([2.0, 4.0]).mean() == 3.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            MetricSeries([])


class TestCsvWriters:
    def test_step_csv(self, tmp_path):
        path = tmp_path / "cdf.csv"
        write_step_csv([(1.0, 0.5), (2.0, 1.0)], path)
        assert path.read_text() == "x,fraction\n1.0,0.5\n2.0,1.0\n"

    def test_report_csv_optional_gain(self, tmp_path):
        path = tmp_path / "report.csv"
        rows = [
            {"strategy": "centroid", "metric": "throughput", "percentile": 0.5,
             "value": 100.0, "gain_vs_baseline": None},
            {"strategy": "gwp", "metric": "throughput", "percentile": 0.5,
             "value": 120.0, "gain_vs_baseline": 0.2},
        ]
        write_report_csv(rows, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "strategy,metric,percentile,value,gain_vs_baseline"
        assert lines[1].endswith(",")
        assert lines[2].endswith(",0.2")
