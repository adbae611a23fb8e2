"""Station operations: frame ingestion, weigh sessions, persisted records.

Wire format is one ADC frame per line, ASCII, comma-separated:

    station_id,cell_index,timestamp_ms,adc_code,gain,saturated

`station_id` is any non-empty comma-free token, `cell_index` counts from
0 (FL, FR, RL, RR on a four-cell station; left, right in two-cell mode),
`gain` is one of 128/64/32 and `saturated` is 0 or 1. Timestamps must
be non-decreasing per (station, cell); the ingestor rejects regressions
with a SequencingError.

Persisted weigh records are JSON objects, one per line, appended to
`records.ndjson` in the data directory. Key order is fixed (see
`WeighRecord.to_line`), floats round-trip exactly through their shortest
repr, and `started_at_ms`/`ended_at_ms` are taken from the input frames,
so identical inputs produce byte-identical lines except for the random
`record_id`. The data directory resolves in this order: explicit
argument, the WEIGHSIM_DATA_DIR environment variable, `./weighsim_records`.
"""

from __future__ import annotations

import json
import os
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .calibration import CalibrationState, code_to_mass
from .cog import (
    AlertPolicy,
    DeckGeometry,
    FourCellReading,
    LoadAssessment,
    TwoCellAssessment,
    TwoCellReading,
    assess_four_cell,
    assess_two_cell,
)
from .compliance import (
    AxleConfiguration,
    ToleranceRule,
    check_compliance,
    static_weigh,
    wim_weigh,
    within_gvw_limit,
)
from .errors import IncompleteStationError, RecordParseError, SequencingError
from .sensor import CODE_MAX, CODE_MIN, GAIN_CHANNELS

ENV_DATA_DIR = "WEIGHSIM_DATA_DIR"
DEFAULT_DATA_DIR = "weighsim_records"
RECORDS_FILENAME = "records.ndjson"

MODES = ("static", "wim")


@dataclass(frozen=True)
class SensorFrameRecord:
    """One wire-format frame."""

    station_id: str
    cell_index: int
    timestamp_ms: int
    adc_code: int
    gain: int = 128
    saturated: bool = False


def format_frame_line(rec: SensorFrameRecord) -> str:
    return (
        f"{rec.station_id},{rec.cell_index},{rec.timestamp_ms},"
        f"{rec.adc_code},{rec.gain},{int(rec.saturated)}"
    )


def parse_frame_line(line: str, line_no: int | None = None, cell_count: int = 4) -> SensorFrameRecord:
    """Parse one wire line; every failure is a RecordParseError with the line number."""
    fields = line.strip().split(",")
    if len(fields) != 6:
        raise RecordParseError(f"expected 6 fields, got {len(fields)}", line_no)
    station_id, cell_s, ts_s, code_s, gain_s, sat_s = fields
    if not station_id:
        raise RecordParseError("empty station id", line_no)
    try:
        cell = int(cell_s)
        ts = int(ts_s)
        code = int(code_s)
        gain = int(gain_s)
        sat = int(sat_s)
    except ValueError:
        raise RecordParseError(f"non-numeric field in {line.strip()!r}", line_no) from None
    if not 0 <= cell < cell_count:
        raise RecordParseError(f"cell index {cell} outside 0-{cell_count - 1}", line_no)
    if not CODE_MIN <= code <= CODE_MAX:
        raise RecordParseError(f"code {code} outside signed 24-bit range", line_no)
    if gain not in GAIN_CHANNELS:
        raise RecordParseError(f"gain {gain} not one of {sorted(GAIN_CHANNELS)}", line_no)
    if sat not in (0, 1):
        raise RecordParseError(f"saturated flag must be 0 or 1, got {sat_s}", line_no)
    return SensorFrameRecord(
        station_id=station_id,
        cell_index=cell,
        timestamp_ms=ts,
        adc_code=code,
        gain=gain,
        saturated=bool(sat),
    )


class FrameIngestor:
    """Stateful line parser enforcing per-(station, cell) time order."""

    def __init__(self, cell_count: int = 4):
        self.cell_count = cell_count
        self._last_ts: dict[tuple[str, int], int] = {}

    def ingest(self, line: str, line_no: int | None = None) -> SensorFrameRecord:
        rec = parse_frame_line(line, line_no, self.cell_count)
        key = (rec.station_id, rec.cell_index)
        last = self._last_ts.get(key)
        if last is not None and rec.timestamp_ms < last:
            raise SequencingError(
                f"timestamp {rec.timestamp_ms} ms before {last} ms on"
                f" station {rec.station_id!r} cell {rec.cell_index}"
                + (f" (line {line_no})" if line_no is not None else "")
            )
        self._last_ts[key] = rec.timestamp_ms
        return rec

    def ingest_lines(self, lines: Iterable[str]) -> list[SensorFrameRecord]:
        return [
            self.ingest(line, i)
            for i, line in enumerate(lines, start=1)
            if line.strip()
        ]


def assessment_dict(a: LoadAssessment | TwoCellAssessment) -> dict:
    """Assessment as a fixed-key-order JSON-ready dict (the single-line form)."""
    if isinstance(a, LoadAssessment):
        return {
            "kind": "four_cell",
            "total_kg": a.total_kg,
            "x_cg_m": a.x_cg_m,
            "y_cg_m": a.y_cg_m,
            "centreline_offset_m": a.centreline_offset_m,
            "front_kg": a.front_kg,
            "rear_kg": a.rear_kg,
            "left_kg": a.left_kg,
            "right_kg": a.right_kg,
            "quadrant_pct": list(a.quadrant_pct),
            "overloaded": a.overloaded,
            "flagged_quadrants": list(a.flagged_quadrants),
            "front_heavy": a.front_heavy,
            "rear_heavy": a.rear_heavy,
            "left_heavy": a.left_heavy,
            "right_heavy": a.right_heavy,
        }
    return {
        "kind": "two_cell",
        "total_kg": a.total_kg,
        "lateral_offset_m": a.lateral_offset_m,
        "overloaded": a.overloaded,
        "left_heavy": a.left_heavy,
        "right_heavy": a.right_heavy,
    }


def assessment_line(a: LoadAssessment | TwoCellAssessment) -> str:
    return json.dumps(assessment_dict(a), separators=(",", ":"))


@dataclass(frozen=True)
class WeighRecord:
    """One persisted weighing."""

    record_id: str
    station_id: str
    started_at_ms: int
    ended_at_ms: int
    mode: str
    cell_masses_kg: tuple[float, ...]
    geometry: DeckGeometry
    policy: AlertPolicy
    assessment: LoadAssessment | TwoCellAssessment
    calibration_fingerprint: str
    compliance: tuple[dict, ...] = ()

    def unsafe(self) -> bool:
        """True when the record should exit the CLI with code 2."""
        if self.assessment.overloaded:
            return True
        if isinstance(self.assessment, LoadAssessment) and self.assessment.flagged_quadrants:
            return True
        return any(not entry["passed"] for entry in self.compliance)

    def to_line(self) -> str:
        obj = {
            "record_id": self.record_id,
            "station_id": self.station_id,
            "started_at_ms": self.started_at_ms,
            "ended_at_ms": self.ended_at_ms,
            "mode": self.mode,
            "cell_masses_kg": list(self.cell_masses_kg),
            "geometry": {
                "wheelbase_m": self.geometry.wheelbase_m,
                "track_m": self.geometry.track_m,
                "breadth_m": self.geometry.breadth_m,
            },
            "policy": {
                "overload_threshold_kg": self.policy.overload_threshold_kg,
                "quadrant_threshold_pct": self.policy.quadrant_threshold_pct,
            },
            "assessment": assessment_dict(self.assessment),
            "calibration_fingerprint": self.calibration_fingerprint,
            "compliance": list(self.compliance),
        }
        return json.dumps(obj, separators=(",", ":"))

    @classmethod
    def from_line(cls, line: str, line_no: int | None = None) -> "WeighRecord":
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RecordParseError(f"bad record JSON: {exc}", line_no) from None
        try:
            a = obj["assessment"]
            if a["kind"] == "four_cell":
                assessment: LoadAssessment | TwoCellAssessment = LoadAssessment(
                    total_kg=a["total_kg"],
                    x_cg_m=a["x_cg_m"],
                    y_cg_m=a["y_cg_m"],
                    centreline_offset_m=a["centreline_offset_m"],
                    front_kg=a["front_kg"],
                    rear_kg=a["rear_kg"],
                    left_kg=a["left_kg"],
                    right_kg=a["right_kg"],
                    quadrant_pct=tuple(a["quadrant_pct"]),
                    overloaded=a["overloaded"],
                    flagged_quadrants=tuple(a["flagged_quadrants"]),
                    front_heavy=a["front_heavy"],
                    rear_heavy=a["rear_heavy"],
                    left_heavy=a["left_heavy"],
                    right_heavy=a["right_heavy"],
                )
            elif a["kind"] == "two_cell":
                assessment = TwoCellAssessment(
                    total_kg=a["total_kg"],
                    lateral_offset_m=a["lateral_offset_m"],
                    overloaded=a["overloaded"],
                    left_heavy=a["left_heavy"],
                    right_heavy=a["right_heavy"],
                )
            else:
                raise RecordParseError(f"unknown assessment kind {a['kind']!r}", line_no)
            return cls(
                record_id=obj["record_id"],
                station_id=obj["station_id"],
                started_at_ms=obj["started_at_ms"],
                ended_at_ms=obj["ended_at_ms"],
                mode=obj["mode"],
                cell_masses_kg=tuple(obj["cell_masses_kg"]),
                geometry=DeckGeometry(
                    wheelbase_m=obj["geometry"]["wheelbase_m"],
                    track_m=obj["geometry"]["track_m"],
                    breadth_m=obj["geometry"]["breadth_m"],
                ),
                policy=AlertPolicy(
                    overload_threshold_kg=obj["policy"]["overload_threshold_kg"],
                    quadrant_threshold_pct=obj["policy"]["quadrant_threshold_pct"],
                ),
                assessment=assessment,
                calibration_fingerprint=obj["calibration_fingerprint"],
                compliance=tuple(obj["compliance"]),
            )
        except (KeyError, TypeError) as exc:
            raise RecordParseError(f"record missing field: {exc}", line_no) from None

    def reassess(self) -> LoadAssessment | TwoCellAssessment:
        """Recompute the assessment from the stored per-cell masses."""
        if len(self.cell_masses_kg) == 4:
            reading = FourCellReading(*self.cell_masses_kg)
            return assess_four_cell(reading, self.geometry, self.policy)
        reading2 = TwoCellReading(*self.cell_masses_kg)
        return assess_two_cell(reading2, self.geometry, self.policy)


def run_session(
    frames: Iterable[SensorFrameRecord],
    calibrations: Sequence[CalibrationState],
    mode: str,
    policy: AlertPolicy,
    geometry: DeckGeometry,
    tolerance_rule: ToleranceRule | None = None,
    reference_kg: float | None = None,
    axle_config: AxleConfiguration | None = None,
    cell_count: int = 4,
) -> WeighRecord:
    """Weigh one vehicle from its closed per-cell frame streams.

    Static mode averages the trailing 15 s window per cell (and therefore
    needs at least that much data); WIM mode averages each cell's whole
    pass-over segment. Compliance entries are appended when a tolerance
    rule + reference mass and/or an axle configuration are provided.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if cell_count not in (2, 4):
        raise ValueError(f"cell count must be 2 or 4, got {cell_count}")
    if len(calibrations) != cell_count:
        raise ValueError(f"need {cell_count} calibrations, got {len(calibrations)}")

    streams: dict[int, list[SensorFrameRecord]] = {i: [] for i in range(cell_count)}
    station_ids = set()
    for frame in frames:
        station_ids.add(frame.station_id)
        if frame.cell_index >= cell_count:
            raise IncompleteStationError(
                f"frame for cell {frame.cell_index} on a {cell_count}-cell station"
            )
        streams[frame.cell_index].append(frame)
    if not station_ids:
        raise IncompleteStationError("no frames at all")
    if len(station_ids) > 1:
        raise IncompleteStationError(f"frames span multiple stations: {sorted(station_ids)}")
    missing = [i for i, s in streams.items() if not s]
    if missing:
        raise IncompleteStationError(f"no frames for cell(s) {missing}")

    cell_masses = []
    for i in range(cell_count):
        samples = [
            (f.timestamp_ms / 1000.0, code_to_mass(f.adc_code, calibrations[i]).kg)
            for f in sorted(streams[i], key=lambda f: f.timestamp_ms)
        ]
        if mode == "static":
            cell_masses.append(static_weigh(samples))
        else:
            cell_masses.append(wim_weigh(samples)[0])

    if cell_count == 4:
        assessment: LoadAssessment | TwoCellAssessment = assess_four_cell(
            FourCellReading(*cell_masses), geometry, policy
        )
    else:
        assessment = assess_two_cell(TwoCellReading(*cell_masses), geometry, policy)

    compliance_entries: list[dict] = []
    if tolerance_rule is not None and reference_kg is not None:
        result = check_compliance(assessment.total_kg, reference_kg, tolerance_rule)
        compliance_entries.append(
            {
                "check": "tolerance",
                "jurisdiction": result.jurisdiction,
                "verification_kind": result.verification_kind,
                "reference_kg": result.reference_kg,
                "error_kg": result.error_kg,
                "max_error_kg": result.max_error_kg,
                "passed": result.passed,
            }
        )
    if axle_config is not None:
        compliance_entries.append(
            {
                "check": "gvw",
                "config_code": axle_config.config_code,
                "gvw_limit_kg": axle_config.gvw_limit_kg,
                "measured_kg": assessment.total_kg,
                "passed": within_gvw_limit(axle_config, assessment.total_kg),
            }
        )

    all_ts = [f.timestamp_ms for s in streams.values() for f in s]
    return WeighRecord(
        record_id=uuid.uuid4().hex[:12],
        station_id=next(iter(station_ids)),
        started_at_ms=min(all_ts),
        ended_at_ms=max(all_ts),
        mode=mode,
        cell_masses_kg=tuple(cell_masses),
        geometry=geometry,
        policy=policy,
        assessment=assessment,
        calibration_fingerprint="+".join(c.fingerprint() for c in calibrations),
        compliance=tuple(compliance_entries),
    )


class RecordStore:
    """Append-only newline-delimited record log."""

    def __init__(self, data_dir: str | Path | None = None):
        if data_dir is None:
            data_dir = os.environ.get(ENV_DATA_DIR, DEFAULT_DATA_DIR)
        self.data_dir = Path(data_dir)
        self.path = self.data_dir / RECORDS_FILENAME

    def append(self, record: WeighRecord) -> None:
        self.data_dir.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as fh:
            fh.write(record.to_line() + "\n")

    def load_all(self) -> list[WeighRecord]:
        if not self.path.exists():
            return []
        lines = self.path.read_text().splitlines()
        return [WeighRecord.from_line(line, i) for i, line in enumerate(lines, 1) if line.strip()]

    def load(self, record_id: str) -> WeighRecord:
        for record in self.load_all():
            if record.record_id == record_id:
                return record
        raise RecordParseError(f"no record {record_id!r} in {self.path}")
