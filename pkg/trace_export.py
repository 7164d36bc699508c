# -*- coding: utf-8 -*-
"""
Trace exporter.
- CSV: one TraceRow per line under a fixed header; floats written with 17
  significant digits so values read back exactly.
- JSON: manifest (config, seeds, code version) plus every trace with its rows.
- Both readers invert their writer.
"""
from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Optional, Sequence

from errors import ExportError
from optim.loops import OptimizerTrace, TraceRow

CSV_COLUMNS = tuple(f.name for f in fields(TraceRow))
_INT_COLUMNS = {"seed", "step", "axis", "shots_step", "cum_shots"}


@dataclass(frozen=True)
class CsvTrace:
    """Rows of one seed as read back from a CSV file (no run metadata)."""
    seed: int
    rows: tuple[TraceRow, ...]


# ---------------------------------------------------------------------------
# Public
# ---------------------------------------------------------------------------
def format_value(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def export_csv(traces: Iterable, path: str) -> int:
    """Writes the header and every row; returns the number of data rows."""
    n = 0
    try:
        _ensure_parent(path)
        with open(path, "w", encoding="utf-8", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for trace in traces:
                for row in trace.rows:
                    w.writerow([format_value(getattr(row, c)) for c in CSV_COLUMNS])
                    n += 1
    except OSError as e:
        raise ExportError(f"cannot write trace CSV {path}: {e}") from e
    return n


def load_traces_csv(path: str) -> list[CsvTrace]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            reader = csv.DictReader(f)
            if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
                raise ExportError(f"{path}: header {reader.fieldnames} does not match {list(CSV_COLUMNS)}")
            by_seed: dict[int, list[TraceRow]] = {}
            for lineno, rec in enumerate(reader, start=2):
                try:
                    row = _row_from_strings(rec)
                except (TypeError, ValueError) as e:
                    raise ExportError(f"{path}:{lineno}: bad row: {e}") from e
                by_seed.setdefault(row.seed, []).append(row)
    except OSError as e:
        raise ExportError(f"cannot read trace CSV {path}: {e}") from e
    return [CsvTrace(seed=s, rows=tuple(rows)) for s, rows in sorted(by_seed.items())]


def traces_to_json(traces: Sequence[OptimizerTrace], manifest: Optional[dict] = None) -> dict:
    return {
        "manifest": manifest or {},
        "traces": [_trace_to_dict(t) for t in traces],
    }


def export_json(traces: Sequence[OptimizerTrace], path: str, manifest: Optional[dict] = None) -> None:
    try:
        _ensure_parent(path)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(traces_to_json(traces, manifest), f, indent=2)
            f.write("\n")
    except OSError as e:
        raise ExportError(f"cannot write trace JSON {path}: {e}") from e


def load_traces_json(path: str) -> tuple[dict, list[OptimizerTrace]]:
    """Returns (manifest, traces)."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ExportError(f"cannot read trace JSON {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ExportError(f"{path}: not valid JSON: {e}") from e
    try:
        traces = [_trace_from_dict(t) for t in data["traces"]]
    except (KeyError, TypeError, ValueError) as e:
        raise ExportError(f"{path}: malformed trace record: {e}") from e
    return data.get("manifest", {}), traces


def export_curves_csv(curves, path: str) -> None:
    """Quantile curves from harness.aggregate: one checkpoint per line."""
    header = ["cum_shots", "n_traces"]
    header += [f"delta_energy_q{q:g}" for q in curves.quantiles]
    header += [f"delta_fidelity_q{q:g}" for q in curves.quantiles]
    try:
        _ensure_parent(path)
        with open(path, "w", encoding="utf-8", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(header)
            for g, shots in enumerate(curves.shot_grid):
                vals = [int(shots), int(curves.n_traces[g])]
                vals += [float(v) for v in curves.energy[:, g]]
                vals += [float(v) for v in curves.fidelity[:, g]]
                w.writerow([format_value(v) for v in vals])
    except OSError as e:
        raise ExportError(f"cannot write curves CSV {path}: {e}") from e


# ---------------------------------------------------------------------------
# Internals
# ---------------------------------------------------------------------------
def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def _row_from_strings(rec: dict) -> TraceRow:
    kwargs = {c: (int(rec[c]) if c in _INT_COLUMNS else float(rec[c])) for c in CSV_COLUMNS}
    return TraceRow(**kwargs)


def _trace_to_dict(trace: OptimizerTrace) -> dict:
    out = asdict(trace)
    out["rows"] = [asdict(r) for r in trace.rows]
    return out


def _trace_from_dict(d: dict) -> OptimizerTrace:
    return OptimizerTrace(
        seed=int(d["seed"]),
        variant=str(d["variant"]),
        x0=tuple(float(v) for v in d["x0"]),
        eta2=float(d["eta2"]),
        sigma0_2=None if d["sigma0_2"] is None else float(d["sigma0_2"]),
        e_ground=float(d["e_ground"]),
        rows=tuple(TraceRow(**r) for r in d["rows"]),
        x_final=tuple(float(v) for v in d["x_final"]),
    )
