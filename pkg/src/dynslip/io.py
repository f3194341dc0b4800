"""CSV output and ``key = value`` configuration files.

CSV files are UTF-8 with ``\\n`` line endings.  They start with ``#`` metadata
lines, then a header row, then data; floats carry 17 significant digits so
identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import __version__
from .errors import ValidationError


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


@dataclass(frozen=True)
class RunRecord:
    scenario: str
    params: dict
    path: Path
    checksum: str

    def verify(self) -> bool:
        return sha256(self.path) == self.checksum


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def render_csv(header: Sequence[str], rows: Iterable[Sequence], metadata: Mapping | None = None) -> str:
    buf = io.StringIO()
    for key, value in (metadata or {}).items():
        buf.write(f"# {key}: {fmt(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(
    path,
    header: Sequence[str],
    columns: Sequence,
    scenario: str,
    params: Mapping,
    extra: Mapping | None = None,
) -> RunRecord:
    """Write equal-length ``columns`` under ``header``; returns the record."""
    cols = [np.asarray(c) for c in columns]
    if len(cols) != len(header) or len({len(c) for c in cols}) > 1:
        raise ValidationError("header and columns do not match")
    metadata = {"scenario": scenario}
    metadata.update({k: params[k] for k in sorted(params)})
    metadata.update(extra or {})
    metadata["version"] = __version__
    text = render_csv(header, zip(*[c.tolist() for c in cols]), metadata)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(text.encode("utf-8"))
    return RunRecord(scenario, dict(params), path, sha256(path))


def read_csv(path):
    """Return ``(metadata, header, rows)`` with rows as lists of strings."""
    metadata = {}
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            metadata[key.strip()] = value.strip()
        else:
            body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    return metadata, header, list(reader)


def parse_config(text: str) -> dict:
    """Flat ``key = value`` pairs; ``#`` starts a comment."""
    out = {}
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ValidationError(f"line {number}: expected 'key = value', got {raw!r}")
        if key in out:
            raise ValidationError(f"line {number}: duplicate key {key!r}")
        out[key] = value
    return out


def read_config(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)
