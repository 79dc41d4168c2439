"""Reader for the simulator's CSV envelope (schema version 1).

Files carry ``#``-prefixed metadata lines (key=value, plus ``summary.*``
and ``crossover`` entries), one header line, then comma-separated rows.
This package talks to the simulator only through these files.
"""

from __future__ import annotations

from dataclasses import dataclass, field

SUPPORTED_SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """The input file does not match the supported table schema."""


@dataclass
class Table:
    meta: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    crossover: list = field(default_factory=list)  # (theta, p_star-or-nan) pairs
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)       # lists of floats/strings

    def column(self, name: str) -> list:
        if name not in self.columns:
            raise SchemaError(f"missing column {name!r}")
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def _convert(token: str):
    try:
        return float(token)
    except ValueError:
        return token


def parse_table(path: str) -> Table:
    table = Table()
    header_seen = False
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("crossover "):
                    _, theta, p_star = body.split()
                    table.crossover.append((float(theta), float(p_star)))
                elif body.startswith("summary."):
                    key, _, value = body[len("summary."):].partition("=")
                    table.summary[key] = _convert(value)
                elif "=" in body:
                    key, _, value = body.partition("=")
                    table.meta[key] = value
                continue
            if not header_seen:
                table.columns = line.split(",")
                header_seen = True
            else:
                table.rows.append([_convert(tok) for tok in line.split(",")])
    if not header_seen:
        raise SchemaError(f"{path}: no header line found")
    return table


def check_table(table: Table, command: str, required_columns: list) -> None:
    """Validate schema version, producing command, and column presence."""
    version = table.meta.get("schema_version")
    if version != str(SUPPORTED_SCHEMA_VERSION):
        raise SchemaError(
            f"unsupported schema_version {version!r}; this tool reads "
            f"version {SUPPORTED_SCHEMA_VERSION}")
    got = table.meta.get("command")
    if got != command:
        raise SchemaError(f"expected output of the {command!r} command, got {got!r}")
    for name in required_columns:
        if name not in table.columns:
            raise SchemaError(f"missing column {name!r}")
    if not table.rows:
        raise SchemaError("empty payload: no data rows")
