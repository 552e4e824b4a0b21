"""Campaign artifact files: traces, final configurations, checkpoints, reports.

All writers are deterministic: identical in-memory inputs produce
byte-identical files. Timestamps never appear in artifacts (they belong in
the run log), so replaying a campaign against a warm cache rewrites the
same bytes.

Trace files are CSV with one line per (tested configuration, benchmark)
measurement: sequence, config bitstring, base level, benchmark, time,
status, annotation.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

from flagtuner.analysis import CompareTable, RelativeSeries
from flagtuner.evaluator import Measurement
from flagtuner.flagspace import Configuration, FlagSpace, render_args
from flagtuner.search import CampaignTrace, CEState

TRACE_COLUMNS = ["sequence", "bitstring", "base_level", "benchmark", "time", "status", "annotation"]


def write_trace(path: str | Path, trace: CampaignTrace) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for rec in trace.records:
            for bench, m in rec.measurements.items():
                writer.writerow(
                    [
                        rec.seq,
                        rec.config.bitstring,
                        rec.config.base_level,
                        bench,
                        "" if m.time is None else repr(m.time),
                        m.status,
                        rec.annotation,
                    ]
                )


def read_trace(path: str | Path, space: FlagSpace) -> CampaignTrace:
    """Rebuild a trace from its file. Digest and cached markers are not
    part of the format, so reloaded measurements carry neither."""
    trace = CampaignTrace()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != TRACE_COLUMNS:
            raise ValueError(f"{path}: not a trace file")
        current_seq = None
        config = None
        measurements: dict[str, Measurement] = {}
        annotation = ""

        def flush():
            if current_seq is not None:
                rec = trace.append(config, measurements, annotation)
                if rec.seq != current_seq:
                    raise ValueError(
                        f"{path}: sequence numbers not contiguous at {current_seq}"
                    )

        for row in reader:
            seq = int(row[0])
            if seq != current_seq:
                flush()
                current_seq = seq
                config = Configuration.from_bitstring(row[2], row[1])
                measurements = {}
                annotation = row[6]
            time = float(row[4]) if row[4] else None
            measurements[row[3]] = Measurement(status=row[5], time=time)
        flush()
    for rec in trace.records:
        if len(rec.config.assignment) != len(space.flags):
            raise ValueError(f"{path}: trace does not match the flag space")
    return trace


def write_final_config(path: str | Path, space: FlagSpace, config: Configuration) -> None:
    data = {
        "base_level": config.base_level,
        "bitstring": config.bitstring,
        "flags": {f.name: on for f, on in zip(space.flags, config.assignment)},
        "args": render_args(space, config),
    }
    Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def read_final_config(path: str | Path) -> Configuration:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return Configuration.from_bitstring(data["base_level"], data["bitstring"])


def write_series(path: str | Path, series: RelativeSeries) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["configs_tested", "value"])
        for n, value in series.points:
            writer.writerow([n, repr(value)])


def write_compare(path: str | Path, table: CompareTable) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["benchmark", "best_time", "ref_time", "ratio", "method", "base_level", "bitstring", "seq"]
        )
        for r in table.rows:
            writer.writerow(
                [
                    r.benchmark,
                    repr(r.best_time),
                    repr(r.ref_time),
                    repr(r.ratio),
                    r.method,
                    r.config.base_level,
                    r.config.bitstring,
                    r.seq,
                ]
            )
        writer.writerow(["suite_mean", "", "", repr(table.mean_ratio), "", "", "", ""])
        writer.writerow(
            ["suite_mean_floored", "", "", repr(table.mean_ratio_floored), "", "", "", ""]
        )


def file_digest(path: str | Path) -> str:
    return hashlib.md5(Path(path).read_bytes()).hexdigest()


def write_checkpoint(
    path: str | Path,
    *,
    command: str,
    status: str,
    seed: int,
    input_digests: dict[str, str],
    params: dict,
    state: CEState | None = None,
    progress: dict | None = None,
) -> None:
    data = {
        "command": command,
        "status": status,
        "seed": seed,
        "inputs": input_digests,
        "params": params,
        "state": None,
        "progress": progress or {},
    }
    if state is not None and state.B is not None:
        data["state"] = {
            "S": state.S,
            "B": {"base_level": state.B.base_level, "bitstring": state.B.bitstring},
            "X": state.X,
        }
    Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def read_checkpoint(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
