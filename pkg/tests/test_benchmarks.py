import pandas as pd
import pytest

from src.benchmarks import (TABLE_COLUMNS, SweepSummary, format_table, random_sweep, tightness_table,
                            timing_slope)
from src.lib.errors import InputError


def test_tightness_table_small():
    df = tightness_table(4, jobs=1)
    assert list(df.columns) == TABLE_COLUMNS
    assert df["iterations"].tolist() == [2, 5, 10, 17]
    assert (df["iterations"] == df["expected"]).all()
    assert (df["iterations"] <= df["bound"]).all()


def test_tightness_table_selected_sizes_with_timing():
    df = tightness_table(0, timing=True, jobs=1, n_values=[2, 3])
    assert df["n"].tolist() == [2, 3]
    assert "seconds" in df.columns
    assert "seconds" in format_table(df)


def test_tightness_table_rejects_empty_range():
    with pytest.raises(InputError):
        tightness_table(0)


def test_timing_slope_recovers_the_exponent():
    df = pd.DataFrame({"n": [10, 20, 40, 80], "seconds": [0.01, 0.04, 0.16, 0.64]})
    assert timing_slope(df) == pytest.approx(2.0)


@pytest.mark.slow
def test_worst_case_family_runs_in_cubic_time():
    df = tightness_table(0, timing=True, jobs=1, n_values=[50, 100, 200])
    assert (df["iterations"] <= df["bound"]).all()
    assert timing_slope(df) <= 3.5


def test_timing_slope_needs_two_rows():
    with pytest.raises(InputError):
        timing_slope(pd.DataFrame({"n": [3], "seconds": [0.5]}))


def test_sweep_agrees_with_the_oracle():
    summary = random_sweep(12, seed=5, jobs=1)
    assert summary.instances == 12
    assert summary.matching + summary.violator == 12
    assert summary.disagreements == 0
    assert 0 < summary.max_iteration_ratio <= 1


def test_sweep_is_reproducible():
    assert random_sweep(4, seed=9, jobs=1) == random_sweep(4, seed=9, jobs=1)


def test_sweep_summary_line():
    line = SweepSummary(3, 2, 1, 0, 0.25).line()
    assert line == "instances=3 matching=2 violator=1 disagreements=0 max_iteration_ratio=0.250000"


def test_sweep_rejects_zero_count():
    with pytest.raises(InputError):
        random_sweep(0)
