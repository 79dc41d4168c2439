"""Machine-readable result envelopes: CSV and JSON serialisation.

CSV layout: ``#``-prefixed metadata lines (schema version, tool version,
command, resolved config as JSON, creation time, optional summary), one
header line, then the payload rows.  Floats use shortest round-trip
formatting with a ``.`` decimal separator, lines end with LF.  The
payload (header + rows) is a deterministic function of config and seed;
only the ``created`` metadata line varies between identical runs.

JSON output carries the same envelope as one object with a ``rows`` array.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ResultEnvelope:
    command: str
    config: dict
    columns: list
    rows: list
    summary: dict = field(default_factory=dict)
    tool_version: str = "0"
    schema_version: int = SCHEMA_VERSION
    created: str = ""


def _plain(value):
    """Recursively convert numpy scalars and sequences to built-in types."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    return value


def make_envelope(command: str, config: dict, columns: list, rows: list,
                  summary: dict | None = None, tool_version: str = "0") -> ResultEnvelope:
    return ResultEnvelope(
        command=command, config=_plain(config), columns=[str(c) for c in columns],
        rows=[_plain(list(r)) for r in rows], summary=_plain(summary or {}),
        tool_version=tool_version,
        created=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    if value is None:
        return "nan"
    return str(value)


def render_csv(env: ResultEnvelope) -> str:
    lines = [
        f"# schema_version={env.schema_version}",
        f"# tool_version={env.tool_version}",
        f"# command={env.command}",
        f"# created={env.created}",
        f"# config={json.dumps(env.config, sort_keys=True)}",
    ]
    for key in sorted(env.summary):
        value = env.summary[key]
        if key == "crossover":
            for theta, p_star in value:
                lines.append(f"# crossover {format_value(theta)} {format_value(p_star)}")
        else:
            lines.append(f"# summary.{key}={format_value(value)}")
    lines.append(",".join(env.columns))
    for row in env.rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def render_json(env: ResultEnvelope) -> str:
    payload = {
        "schema_version": env.schema_version,
        "tool_version": env.tool_version,
        "command": env.command,
        "created": env.created,
        "config": env.config,
        "summary": env.summary,
        "columns": env.columns,
        "rows": env.rows,
    }
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=True) + "\n"


def write_atomic(text: str, path: str) -> None:
    """Write via a temp file in the target directory plus rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        # mkstemp creates 0600 files; restore the usual umask-driven mode.
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
