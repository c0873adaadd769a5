"""Structured run reports: JSON documents with a schema version, CSV tables.

Everything stored in a :class:`RunReport` is already a JSON value (dicts,
lists, str, float, int, bool, None), so ``from_json(to_json())`` returns an
equal object. Python's float repr is shortest-round-trip, hence lossless.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

SCHEMA_VERSION = "relbound.run/1"


def to_record(obj: Any) -> Any:
    """Convert dataclasses, enums, numpy values and tuples to JSON values."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_record(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_record(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_record(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_record(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class RunReport:
    command: str
    instance: dict = field(default_factory=dict)
    k_estimates: dict = field(default_factory=dict)
    bounds: dict | None = None
    verification: dict | None = None
    sharpness: list | None = None
    congruence: dict | None = None
    timing: dict = field(default_factory=dict)
    passed: bool = True
    notes: list = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def __post_init__(self):
        # normalise to plain JSON values so equality survives a round trip
        for f in dataclasses.fields(self):
            setattr(self, f.name, to_record(getattr(self, f.name)))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {version!r}")
        return cls(**data)

    def verdict_view(self) -> dict:
        """Everything except timing, for bit-for-bit comparisons."""
        d = self.to_dict()
        d.pop("timing")
        return d

    def per_index_rows(self) -> list[dict]:
        """Per-index table joining bound entries and sharpness verdicts."""
        rows: dict[tuple, dict] = {}
        for key in ("entries", "upper_entries", "lower_entries"):
            for e in (self.bounds or {}).get(key, []):
                tag = key.split("_")[0] if key != "entries" else "eig"
                row = rows.setdefault((tag, e["index"]), {"table": tag})
                row.update(e)
        for v in self.sharpness or []:
            row = rows.setdefault(("sharp", v["index"]), {"table": "sharp"})
            row.update(v)
        return [rows[k] for k in sorted(rows, key=lambda t: (t[0], t[1]))]


def rows_to_csv(rows: list[dict]) -> str:
    """CSV text with the union of keys as header, in first-seen order."""
    header: list[str] = []
    for row in rows:
        header += [k for k in row if k not in header]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(v) for k, v in row.items()})
    return buf.getvalue()


def _cell(v: Any) -> Any:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return v
