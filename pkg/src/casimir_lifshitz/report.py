"""Report rows and their CSV/JSON serialisation.

Floats go to CSV with 17 significant digits and to JSON through ``repr``; both
re-parse to the identical double.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

from .lifshitz import ForceResult
from .perturbation import casimir_ideal


@dataclass(frozen=True)
class ReportRow:
    method: str
    medium1: str
    medium2: str
    medium3: str
    eps1: float
    eps2: float
    eps3: float
    gap_m: float
    area_m2: float
    pressure_pa: float
    pressure_dyn_cm2: float
    force_n: float
    force_dyn: float
    sign_class: str
    rel_error: float
    ratio_to_ideal: float  # signed P / P_ideal(d): negative when repulsive
    delta_rel: float | None = None

    @classmethod
    def from_result(cls, result: ForceResult, *, method, media, eps, gap, area, delta_rel=None) -> "ReportRow":
        return cls(
            method=method,
            medium1=media[0],
            medium2=media[1],
            medium3=media[2],
            eps1=eps[0],
            eps2=eps[1],
            eps3=eps[2],
            gap_m=gap,
            area_m2=area,
            pressure_pa=result.pressure,
            pressure_dyn_cm2=result.pressure_cgs,
            force_n=result.force,
            force_dyn=result.force_cgs,
            sign_class=result.sign_class.value,
            rel_error=result.rel_error,
            ratio_to_ideal=result.pressure / casimir_ideal(gap, area).pressure + 0.0,
            delta_rel=delta_rel,
        )

    def as_dict(self, units: str | None = None) -> dict:
        out = asdict(self)
        if units == "si":
            out = {"units": "si", "pressure": self.pressure_pa, "force": self.force_n, **out}
        elif units == "cgs":
            out = {"units": "cgs", "pressure": self.pressure_dyn_cm2, "force": self.force_dyn, **out}
        return out


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def rows_to_csv(rows: list[ReportRow], units: str | None = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    dicts = [row.as_dict(units) for row in rows]
    if dicts:
        writer.writerow(list(dicts[0]))
        for d in dicts:
            writer.writerow([_cell(v) for v in d.values()])
    return buf.getvalue()


def rows_to_json(rows: list[ReportRow], units: str | None = None) -> str:
    if len(rows) == 1:
        return json.dumps(rows[0].as_dict(units), indent=2)
    return json.dumps([row.as_dict(units) for row in rows], indent=2)


def read_csv(text: str) -> list[dict]:
    """Parse a report back; numeric cells come back as floats, blanks as ``None``."""
    out = []
    for record in csv.DictReader(io.StringIO(text)):
        parsed = {}
        for key, cell in record.items():
            if cell == "":
                parsed[key] = None
                continue
            try:
                parsed[key] = float(cell)
            except ValueError:
                parsed[key] = cell
        out.append(parsed)
    return out
