"""CSV/JSON emission with fixed column order and 6-significant-digit floats."""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path

from .cvf import AnalysisReport, ExponentialFit, RankEffectHistogram
from .errors import OutputError, UsageError

FORMATS = ("csv", "json")

REPORT_COLUMNS = ("program", "topology", "n", "rank_kind", "analysis_kind",
                  "effect_prog", "effect_cvf", "rel_cvf", "fit_A", "fit_B", "fit_r2")
HISTOGRAM_COLUMNS = ("rank_effect", "count", "fraction", "source", "rank_kind")
SIMULATION_COLUMNS = ("program", "topology", "n", "initial_state_index", "cvf_interval",
                      "baseline_steps", "convergence_steps", "converged_runs", "ratio")
SCATTER_COLUMNS = ("program", "topology", "n", "initial_state_index", "cvf_interval", "run",
                   "baseline_steps", "convergence_steps")
FIT_COLUMNS = ("source", "rank_kind", "fit_A", "fit_B", "fit_r2", "bins")


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.6g}"
    return str(v)


def _json_value(v):
    if isinstance(v, float):
        return None if math.isnan(v) else float(f"{v:.6g}")
    return v


def report_rows(reports: list[AnalysisReport]) -> list[dict]:
    return [r.row() for r in reports]


def histogram_rows(hists: list[RankEffectHistogram]) -> list[dict]:
    return [{"rank_effect": c, "count": count, "fraction": frac, "source": h.source, "rank_kind": h.rank_kind}
            for h in hists for c, count, frac in h.rows()]


def simulation_rows(outcomes, program: str, topology: str, n: int) -> list[dict]:
    return [{"program": program, "topology": topology, "n": n, "initial_state_index": o.initial_index,
             "cvf_interval": o.cvf_interval, "baseline_steps": float(o.baseline_steps),
             "convergence_steps": float(o.convergence_steps), "converged_runs": o.converged_runs,
             "ratio": float(o.ratio)} for o in outcomes]


def scatter_rows(outcomes, program: str, topology: str, n: int) -> list[dict]:
    """One row per run: (mean baseline steps, steps of that run)."""
    return [{"program": program, "topology": topology, "n": n, "initial_state_index": o.initial_index,
             "cvf_interval": o.cvf_interval, "run": r, "baseline_steps": float(o.baseline_steps),
             "convergence_steps": steps} for o in outcomes for r, steps in enumerate(o.runs)]


def fit_rows(fits: list[tuple[str, str, ExponentialFit | None]]) -> list[dict]:
    nan = float("nan")
    return [{"source": src, "rank_kind": kind, "fit_A": f.A if f else nan, "fit_B": f.B if f else nan,
             "fit_r2": f.r2 if f else nan, "bins": f.bins if f else 0} for src, kind, f in fits]


def render(rows: list[dict], columns, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([format_value(row[c]) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        body = [{c: _json_value(row[c]) for c in columns} for row in rows]
        return json.dumps(body, indent=1, allow_nan=False) + "\n"
    raise UsageError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def emit(rows: list[dict], columns, path, fmt: str = "csv") -> Path:
    """Write ``rows`` to ``path``; an empty table still gets its header."""
    path = Path(path)
    text = render(rows, columns, fmt)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(text.encode("utf-8"))
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def _parse_cell(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def read_table(path) -> list[dict]:
    """Parse a file written by :func:`emit` (format taken from the suffix)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if path.suffix == ".json":
        return [{k: float("nan") if v is None else v for k, v in row.items()} for row in json.loads(text)]
    reader = csv.DictReader(_io.StringIO(text))
    return [{k: _parse_cell(v) for k, v in row.items()} for row in reader]


def histograms_from_rows(rows: list[dict]) -> list[RankEffectHistogram]:
    """Rebuild histograms (grouped by source and rank kind, first-seen order) from table rows."""
    groups: dict[tuple[str, str], RankEffectHistogram] = {}
    for row in rows:
        key = (str(row["source"]), str(row["rank_kind"]))
        h = groups.setdefault(key, RankEffectHistogram(key[0], key[1], {}))
        c = int(row["rank_effect"])
        h.counts[c] = h.counts.get(c, 0) + int(row["count"])
    for h in groups.values():
        h.counts = dict(sorted(h.counts.items()))
    return list(groups.values())
