"""CSV ingestion and emission.

Every file written here starts with a comment line recording the package
version, the seed, and the configuration hash, so outputs are traceable
and reruns comparable.  Floats are serialized with 17 significant
digits, which round-trips IEEE doubles exactly.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import IngestError
from .simulate import ReturnSeries

__all__ = ["read_returns", "write_returns", "write_csv", "format_float"]


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def meta_comment(version: str, seed=None, config_hash=None) -> str:
    parts = [f"cogarch {version}"]
    if seed is not None:
        parts.append(f"seed={seed}")
    if config_hash is not None:
        parts.append(f"config={config_hash}")
    return "# " + " ".join(parts)


def write_csv(path, header: list[str], rows, version: str, seed=None, config_hash=None) -> None:
    """Write rows (iterables of str/float) with a traceability comment."""
    lines = [meta_comment(version, seed, config_hash), ",".join(header)]
    for row in rows:
        lines.append(
            ",".join(
                cell if isinstance(cell, str) else format_float(cell) for cell in row
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_cell(raw: str, row: int, what: str) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise IngestError(f"malformed {what} {raw!r}", row) from None
    if math.isnan(v):
        raise IngestError(f"NaN {what} is not allowed", row)
    return v


def read_returns(path, delta: float | None = None) -> ReturnSeries:
    """Read a return series from CSV.

    Two layouts are accepted:

    * header ``value``: one return per row on an implied equidistant
      grid 0, delta, 2*delta, ...; requires ``delta``.
    * header ``time,value``: the first data row carries the series
      origin t_0 and must leave the value empty; every following row is
      an observation time with the return over the preceding interval.

    Comment lines (``#``) are skipped.  Non-monotone times, blank or
    malformed numbers raise IngestError with the row number.
    """
    raw_lines = Path(path).read_text(encoding="utf-8").splitlines()
    rows = [
        (i, line.strip())
        for i, line in enumerate(raw_lines, start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not rows:
        raise IngestError("empty file")
    header_row, header = rows[0]
    columns = [c.strip().lower() for c in header.split(",")]
    data = rows[1:]

    if columns == ["value"]:
        if delta is None:
            raise IngestError("a value-only file needs an explicit delta")
        values = [_parse_cell(cell, i, "value") for i, cell in data]
        if not values:
            raise IngestError("no data rows", header_row)
        return ReturnSeries.from_equidistant(np.array(values), delta)

    if columns == ["time", "value"]:
        if len(data) < 2:
            raise IngestError("need the origin row plus at least one return", header_row)
        times = []
        values = []
        for pos, (i, line) in enumerate(data):
            cells = line.split(",")
            if len(cells) != 2:
                raise IngestError(f"expected 2 columns, got {len(cells)}", i)
            t = _parse_cell(cells[0], i, "time")
            if pos == 0:
                if cells[1].strip() != "":
                    raise IngestError(
                        "the first row is the series origin and must leave value empty", i
                    )
            else:
                values.append(_parse_cell(cells[1], i, "value"))
                if t <= times[-1]:
                    raise IngestError(
                        f"times must be strictly increasing ({t} after {times[-1]})", i
                    )
            times.append(t)
        return ReturnSeries(times=np.array(times), returns=np.array(values))

    raise IngestError(
        f"unrecognized header {header!r}; expected 'value' or 'time,value'", header_row
    )


def write_returns(series: ReturnSeries, path, version: str, seed=None, config_hash=None) -> None:
    """Write a return series in the ``time,value`` layout (lossless)."""
    lines = [meta_comment(version, seed, config_hash), "time,value"]
    lines.append(f"{format_float(series.times[0])},")
    for t, y in zip(series.times[1:], series.returns):
        lines.append(f"{format_float(t)},{format_float(y)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
