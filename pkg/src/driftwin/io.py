"""CSV ingestion of per-period samples and losses, and report serialization.

Input schemas (UTF-8, comma-separated, header mandatory):

* samples: ``period,value`` with periods numbered contiguously from 1;
* losses: ``period,sample,model,loss`` with one row per
  (period, sample, model) triple and an identical model set everywhere.

Reports are written as CSV (17 significant digits, so every float
round-trips exactly) or JSON.
"""

from __future__ import annotations

import csv
import json
from functools import singledispatch
from pathlib import Path
from typing import Sequence

import numpy as np

from .selection import BracketRecord, ComparisonResult, LossTable
from .summaries import SummarySeries, summarize_batch
from .synthetic import ExperimentReport
from .window import WindowDiagnostics

DIAGNOSTIC_COLUMNS = ["k", "B", "mean", "var", "psi", "phi", "objective"]


class DataFormatError(Exception):
    """Malformed or inconsistent input data."""


def _read_rows(path: str | Path, expected_header: list[str]) -> list[list[str]]:
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataFormatError(f"{path}: {exc.strerror or exc}") from exc
    if not rows:
        raise DataFormatError(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    if header != expected_header:
        raise DataFormatError(
            f"{path}: expected header {','.join(expected_header)!r}, got {','.join(header)!r}"
        )
    if len(rows) == 1:
        raise DataFormatError(f"{path}: no data rows")
    return rows[1:]


def _parse_int(path: Path | str, row_number: int, field: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise DataFormatError(
            f"{path}: row {row_number}: non-numeric {field} {raw!r}"
        ) from None


def _parse_float(path: Path | str, row_number: int, field: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise DataFormatError(
            f"{path}: row {row_number}: non-numeric {field} {raw!r}"
        ) from None
    if not np.isfinite(value):
        raise DataFormatError(f"{path}: row {row_number}: non-finite {field} {raw!r}")
    return value


def read_samples(path: str | Path) -> SummarySeries:
    """Read a ``period,value`` CSV and summarize each period's batch."""
    rows = _read_rows(path, ["period", "value"])
    by_period: dict[int, list[float]] = {}
    for i, row in enumerate(rows, start=2):
        if len(row) != 2:
            raise DataFormatError(f"{path}: row {i}: expected 2 fields, got {len(row)}")
        period = _parse_int(path, i, "period", row[0])
        value = _parse_float(path, i, "value", row[1])
        if period < 1:
            raise DataFormatError(f"{path}: row {i}: period must be >= 1, got {period}")
        by_period.setdefault(period, []).append(value)

    t = max(by_period)
    missing = sorted(set(range(1, t + 1)) - set(by_period))
    if missing:
        raise DataFormatError(
            f"{path}: non-contiguous periods, missing {missing} out of 1..{t}"
        )
    return SummarySeries(summarize_batch(by_period[j]) for j in range(1, t + 1))


def read_losses(path: str | Path) -> LossTable:
    """Read a ``period,sample,model,loss`` CSV into a dense loss table.

    Model column order follows first appearance in the file; every
    (period, sample) pair must carry exactly one row per model.
    """
    rows = _read_rows(path, ["period", "sample", "model", "loss"])
    models: list[str] = []
    cells: dict[tuple[int, int, str], float] = {}
    for i, row in enumerate(rows, start=2):
        if len(row) != 4:
            raise DataFormatError(f"{path}: row {i}: expected 4 fields, got {len(row)}")
        period = _parse_int(path, i, "period", row[0])
        sample = _parse_int(path, i, "sample", row[1])
        model = row[2].strip()
        loss = _parse_float(path, i, "loss", row[3])
        if period < 1 or sample < 1:
            raise DataFormatError(
                f"{path}: row {i}: period and sample must be >= 1"
            )
        if not model:
            raise DataFormatError(f"{path}: row {i}: empty model name")
        if model not in models:
            models.append(model)
        key = (period, sample, model)
        if key in cells:
            raise DataFormatError(
                f"{path}: duplicate row for period {period}, sample {sample}, model {model!r}"
            )
        cells[key] = loss

    periods = sorted({p for p, _, _ in cells})
    t = periods[-1]
    missing_periods = sorted(set(range(1, t + 1)) - set(periods))
    if missing_periods:
        raise DataFormatError(
            f"{path}: non-contiguous periods, missing {missing_periods} out of 1..{t}"
        )

    matrices = []
    for period in range(1, t + 1):
        samples = sorted({s for p, s, _ in cells if p == period})
        mat = np.empty((len(samples), len(models)))
        for row_idx, sample in enumerate(samples):
            for col, model in enumerate(models):
                try:
                    mat[row_idx, col] = cells[(period, sample, model)]
                except KeyError:
                    raise DataFormatError(
                        f"{path}: missing loss for period {period}, sample {sample}, "
                        f"model {model!r}"
                    ) from None
        matrices.append(mat)
    return LossTable(matrices, models=models)


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return "" if value is None else str(value)


def write_table(path: str | Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    """Write one CSV table; floats carry 17 significant digits."""
    path = Path(path)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise DataFormatError(f"{path}: {exc.strerror or exc}") from exc


def write_report(report, path: str | Path, format: str = "csv") -> None:
    """Serialize a report to ``path`` as CSV or JSON."""
    if format == "csv":
        header, rows = report_rows(report)
        write_table(path, header, rows)
    elif format == "json":
        path = Path(path)
        try:
            with path.open("w", encoding="utf-8") as fh:
                json.dump(report_jsonable(report), fh, indent=2)
                fh.write("\n")
        except OSError as exc:
            raise DataFormatError(f"{path}: {exc.strerror or exc}") from exc
    else:
        raise ValueError(f"unknown format {format!r}")


@singledispatch
def report_rows(report) -> tuple[list[str], list[list]]:
    """CSV header and rows for a report object."""
    raise TypeError(f"cannot serialize {type(report).__name__} as a table")


@report_rows.register
def _(report: WindowDiagnostics):
    rows = [
        [
            k + 1,
            int(report.counts[k]),
            float(report.means[k]),
            float(report.variances[k]),
            float(report.noise_bounds[k]),
            float(report.bias_proxies[k]),
            float(report.objectives[k]),
        ]
        for k in range(report.n_windows)
    ]
    return list(DIAGNOSTIC_COLUMNS), rows


@report_rows.register
def _(report: ComparisonResult):
    header = ["first", "second", "winner", "gap_estimate", "window"]
    row = [
        report.first,
        report.second,
        report.winner,
        float(report.gap_estimate),
        report.diagnostics.chosen_window,
    ]
    return header, [row]


@report_rows.register
def _(report: BracketRecord):
    header = ["round", "match", "first", "second", "winner", "gap_estimate", "window"]
    rows = []
    for s, rnd in enumerate(report.rounds, start=1):
        for i, match in enumerate(rnd.matches, start=1):
            rows.append(
                [s, i, match.first, match.second, match.winner,
                 float(match.gap_estimate), match.window]
            )
        if rnd.bye is not None:
            rows.append([s, "bye", rnd.bye, None, rnd.bye, None, None])
    return header, rows


@report_rows.register
def _(report: ExperimentReport):
    header = ["method", "mean_excess_risk"]
    rows = [[m, float(report.mean_excess[m])] for m in report.methods]
    return header, rows


@singledispatch
def report_jsonable(report) -> dict:
    """JSON-ready dict for a report object."""
    raise TypeError(f"cannot serialize {type(report).__name__} as JSON")


@report_jsonable.register
def _(report: WindowDiagnostics):
    header, rows = report_rows(report)
    return {
        "windows": [dict(zip(header, row)) for row in rows],
        "chosen_k": report.chosen_window,
        "estimate": report.estimate,
    }


@report_jsonable.register
def _(report: ComparisonResult):
    return {
        "first": report.first,
        "second": report.second,
        "winner": report.winner,
        "gap_estimate": report.gap_estimate,
        "diagnostics": report_jsonable(report.diagnostics),
    }


@report_jsonable.register
def _(report: BracketRecord):
    return {
        "rounds": [
            {
                "matches": [
                    {
                        "first": m.first,
                        "second": m.second,
                        "winner": m.winner,
                        "gap_estimate": m.gap_estimate,
                        "window": m.window,
                    }
                    for m in rnd.matches
                ],
                "bye": rnd.bye,
            }
            for rnd in report.rounds
        ],
        "champion": report.champion,
        "comparisons_made": report.comparisons_made,
    }


@report_jsonable.register
def _(report: ExperimentReport):
    return {
        "methods": list(report.methods),
        "mean_excess": {m: report.mean_excess[m] for m in report.methods},
        "per_period": {m: report.per_period[m].tolist() for m in report.methods},
        "window_trace": report.window_trace.tolist(),
        "horizon": report.horizon,
        "trials": report.trials,
    }
