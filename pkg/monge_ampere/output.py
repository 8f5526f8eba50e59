"""
Artifact writers: mesh-function CSV dumps, residual histories, JSON summaries.

All files are UTF-8 with LF line endings so that identical runs produce
identical bytes.
"""

import csv
import json
from pathlib import Path
from typing import Any

import numpy as np

from monge_ampere.errors import ConfigurationError
from monge_ampere.grid import Grid, MeshFunction
from monge_ampere.problems import ErrorTable

SCHEMA_VERSION = 1


def _open(path: Path, mode: str = "w"):
    path.parent.mkdir(parents=True, exist_ok=True)
    return open(path, mode, encoding="utf-8", newline="")


def _write_rows(path: Path, rows: list[list[str]]) -> None:
    with _open(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerows(rows)


def write_mesh_csv(v: MeshFunction, path: Path) -> None:
    grid = v.grid
    rows = [["i", "j", "x", "y", "value"]]
    for i in range(grid.n1 + 1):
        for j in range(grid.n2 + 1):
            rows.append([
                str(i),
                str(j),
                f"{grid.x[i]:.17g}",
                f"{grid.y[j]:.17g}",
                f"{v.values[i, j]:.17g}",
            ])
    _write_rows(path, rows)


def read_mesh_csv(path: Path, grid: Grid) -> MeshFunction:
    """Load a dump written by write_mesh_csv onto a grid of the same shape."""
    values = np.full(grid.shape, np.nan)
    try:
        with open(path, encoding="utf-8", newline="") as handle:
            for record in csv.DictReader(handle):
                i, j = int(record["i"]), int(record["j"])
                if not (0 <= i <= grid.n1 and 0 <= j <= grid.n2):
                    raise ConfigurationError(f"{path}: node ({i}, {j}) is outside the grid")
                values[i, j] = float(record["value"])
    except (OSError, KeyError, ValueError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"cannot read mesh function from {path}: {exc}") from exc
    if np.isnan(values).any():
        raise ConfigurationError(f"{path} does not cover every node of the grid")
    return MeshFunction(grid, values)


def write_history_csv(history: list[float], path: Path) -> None:
    rows = [["iter", "residual"]]
    rows += [[str(k), f"{r:.17g}"] for k, r in enumerate(history, start=1)]
    _write_rows(path, rows)


def write_error_table(table: ErrorTable, csv_path: Path, text_path: Path) -> None:
    _write_rows(csv_path, table.csv_lines())
    with _open(text_path) as handle:
        handle.write(table.to_text())


def to_jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        # JSON has no NaN/Infinity
        return value if np.isfinite(value) else None
    return value


def write_json(payload: dict[str, Any], path: Path) -> None:
    with _open(path) as handle:
        json.dump(to_jsonable(payload), handle, indent=2, sort_keys=True)
        handle.write("\n")
