"""Telemetry records and CSV persistence.

One record per control tick. Values are written with 9 significant
digits, so a read-back reproduces them to that precision (not exactly);
the event column is free text (empty when nothing happened).
"""

from __future__ import annotations

from dataclasses import dataclass, fields

COLUMNS = ("t", "y_r", "v_r", "y_p", "v_p", "dy", "F_sp", "F_raw",
           "F_filt", "v_motor_cmd", "mode", "y_des", "v_des", "event")

UNITS_COMMENT = ("# t[s] y_r[m] v_r[m/s] y_p[m] v_p[m/s] dy[m] F_sp[N] "
                 "F_raw[N] F_filt[N] v_motor_cmd[m/s] mode[-] y_des[m] "
                 "v_des[m/s] event[-]")


@dataclass
class TelemetryRecord:
    t: float
    y_r: float
    v_r: float
    y_p: float
    v_p: float
    dy: float
    F_sp: float
    F_raw: float
    F_filt: float
    v_motor_cmd: float
    mode: str
    y_des: float
    v_des: float
    event: str = ""


_FLOAT_FIELDS = tuple(f.name for f in fields(TelemetryRecord)
                      if f.name not in ("mode", "event"))


class IoError(OSError):
    """Telemetry file could not be written or read."""


def _fmt(x: float) -> str:
    return format(x, ".9g")


def write_csv(telemetry: list[TelemetryRecord], path, header_note: str = "") -> None:
    """Write telemetry to path. header_note goes into a leading comment
    (used to record the spring-law variant and the seed)."""
    try:
        with open(path, "w", newline="") as f:
            if header_note:
                f.write(f"# {header_note}\n")
            f.write(UNITS_COMMENT + "\n")
            f.write(",".join(COLUMNS) + "\n")
            for r in telemetry:
                vals = [_fmt(getattr(r, n)) for n in _FLOAT_FIELDS[:10]]
                vals.append(r.mode)
                vals.append(_fmt(r.y_des))
                vals.append(_fmt(r.v_des))
                vals.append(r.event)
                f.write(",".join(vals) + "\n")
    except OSError as e:
        raise IoError(str(e)) from e


def read_csv(path) -> list[TelemetryRecord]:
    """Read telemetry written by write_csv; comment lines are skipped."""
    rows: list[TelemetryRecord] = []
    try:
        with open(path, "r", newline="") as f:
            header = None
            for line in f:
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                if header is None:
                    header = line.split(",")
                    if tuple(header) != COLUMNS:
                        raise IoError(f"unexpected telemetry columns in {path}")
                    continue
                parts = line.split(",")
                if len(parts) != len(COLUMNS):
                    # events may themselves contain commas only if tagged;
                    # rejoin anything beyond the known columns into event
                    parts = parts[:13] + [",".join(parts[13:])]
                rows.append(TelemetryRecord(
                    *[float(v) for v in parts[:10]],
                    parts[10],
                    float(parts[11]),
                    float(parts[12]),
                    parts[13],
                ))
    except OSError as e:
        raise IoError(str(e)) from e
    return rows
