import json
import math

import pytest
from hypothesis import given, strategies as st

from cvflab import io
from cvflab.cvf import FULL, ExponentialFit, RankEffectHistogram, report_from_effects
from cvflab.errors import OutputError, UsageError
from cvflab.simulation import SimOutcome


def _report(fit=None):
    return report_from_effects([-2.0, -1.0], [1.0, 3.0, -1.0], program="token-ring", topology="ring", n=5,
                               rank_kind="average", analysis_kind=FULL, fit=fit)


def test_empty_histogram_gives_header_only(tmp_path):
    path = io.emit(io.histogram_rows([RankEffectHistogram("cvf", "max", {})]), io.HISTOGRAM_COLUMNS,
                   tmp_path / "h.csv")
    assert path.read_bytes() == b"rank_effect,count,fraction,source,rank_kind\n"


def test_report_round_trip_csv_and_json(tmp_path):
    rep = _report(ExponentialFit(0.0736331234, 1.2365812, 0.91234567, 5))
    for fmt in io.FORMATS:
        path = io.emit(io.report_rows([rep]), io.REPORT_COLUMNS, tmp_path / f"r.{fmt}", fmt)
        (row,) = io.read_table(path)
        assert list(row) == list(io.REPORT_COLUMNS)
        for k, v in rep.row().items():
            if isinstance(v, float):
                assert row[k] == pytest.approx(v, rel=5e-6)
            else:
                assert row[k] == v


def test_nan_fit_fields(tmp_path):
    text = io.render(io.report_rows([_report()]), io.REPORT_COLUMNS)
    assert text.splitlines()[1].endswith(",nan,nan,nan")
    body = json.loads(io.render(io.report_rows([_report()]), io.REPORT_COLUMNS, "json"))
    assert body[0]["fit_A"] is None
    path = io.emit(io.report_rows([_report()]), io.REPORT_COLUMNS, tmp_path / "r.json", "json")
    assert math.isnan(io.read_table(path)[0]["fit_B"])


def test_output_is_byte_stable_with_lf_endings():
    rows = io.histogram_rows([RankEffectHistogram("cvf", "average", {-1: 3, 0: 1, 2: 7})])
    a = io.render(rows, io.HISTOGRAM_COLUMNS)
    assert a == io.render(rows, io.HISTOGRAM_COLUMNS)
    assert "\r" not in a
    assert a.splitlines()[1] == "-1,3,0.272727,cvf,average"


def test_unknown_format():
    with pytest.raises(UsageError):
        io.render([], io.REPORT_COLUMNS, "xml")


def test_unwritable_path_names_the_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OutputError, match="file"):
        io.emit([], io.REPORT_COLUMNS, blocker / "sub" / "r.csv")


def test_simulation_and_scatter_rows():
    o = SimOutcome((0, 1), 7, 4, 5.5, 2, 4.0, 1.375, [5, 6], [4, 4])
    sim = io.simulation_rows([o], "coloring", "ring", 2)
    assert list(sim[0]) == list(io.SIMULATION_COLUMNS)
    assert sim[0]["ratio"] == 1.375
    scatter = io.scatter_rows([o], "coloring", "ring", 2)
    assert [(r["run"], r["baseline_steps"], r["convergence_steps"]) for r in scatter] == [(0, 4.0, 5), (1, 4.0, 6)]


def test_histograms_rebuilt_from_rows():
    hists = [RankEffectHistogram("program", "max", {-2: 1, -1: 4}), RankEffectHistogram("cvf", "max", {1: 2, 3: 1})]
    back = io.histograms_from_rows(io.histogram_rows(hists))
    assert [(h.source, h.rank_kind, h.counts) for h in back] == [(h.source, h.rank_kind, h.counts) for h in hists]


@given(st.floats(allow_nan=False, allow_infinity=False, width=64))
def test_six_significant_digits_round_trip(x):
    text = io.format_value(x)
    assert float(text) == pytest.approx(x, rel=5e-6, abs=1e-300)
    assert io.format_value(float(text)) == text
