"""Snapshot and time-series files plus companion gnuplot scripts."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import MRSWError, primitives_from_conserved
from .diagnostics import vorticity_and_divergence


class IoError(MRSWError, OSError):
    """Output file could not be written or read."""


COLUMNS_1D = ("y", "h", "u", "v", "a", "b", "B", "Z")
COLUMNS_2D = ("x", "y", "h", "u", "v", "a", "b", "A", "B", "Z", "zeta", "divv")
SERIES_COLUMNS = ("t", "energy", "max_divergence", "mass")


@dataclass
class SnapshotRecord:
    """Per-cell table at one time; ``columns`` maps header name to a flat array."""

    time: float
    columns: dict[str, np.ndarray]

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values())))


def snapshot_from_state(t: float, W: np.ndarray, grid, Z: np.ndarray) -> SnapshotRecord:
    """Build a snapshot of primitives, topography and (in 2-D) vorticity/divergence."""
    p = primitives_from_conserved(W)
    if W.ndim == 2:
        vals = [grid.centers, p["h"], p["u"], p["v"], p["a"], p["b"], p["B"], Z]
        return SnapshotRecord(t, dict(zip(COLUMNS_1D, vals)))
    X, Y = grid.mesh()
    zeta, divv = vorticity_and_divergence(W, grid.dx, grid.dy)
    vals = [X, Y, p["h"], p["u"], p["v"], p["a"], p["b"], p["A"], p["B"], Z, zeta, divv]
    return SnapshotRecord(t, {k: np.ravel(v) for k, v in zip(COLUMNS_2D, vals)})


def _gnuplot_script(csv: Path, names: tuple[str, ...], two_d: bool) -> str:
    lines = ["set datafile separator ','", f"set title '{csv.stem}'"]
    if two_d:
        lines += ["set view map", "set palette rainbow",
                  f"splot '{csv.name}' every ::1 using 1:2:3 with points pointtype 5 "
                  "pointsize 0.3 palette title 'h'"]
    else:
        plots = [f"'{csv.name}' every ::1 using 1:{i + 1} with lines title '{n}'"
                 for i, n in enumerate(names[1:], start=1) if n != "Z"]
        lines.append("plot " + ", \\\n     ".join(plots))
    lines.append("pause -1")
    return "\n".join(lines) + "\n"


def write_snapshot(record: SnapshotRecord, path) -> list[Path]:
    """Write ``record`` as CSV (``%.17g``) and a sibling ``.gp`` script."""
    path = Path(path)
    names = tuple(record.columns)
    table = np.column_stack([np.asarray(record.columns[k], dtype=np.float64) for k in names])
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, table, fmt="%.17g", delimiter=",", header=",".join(names), comments="")
        script = path.with_suffix(".gp")
        script.write_text(_gnuplot_script(path, names, "x" in names))
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return [path, script]


def read_snapshot(path) -> dict[str, np.ndarray]:
    """Read a snapshot CSV back into named columns."""
    try:
        with open(path) as fh:
            names = fh.readline().strip().split(",")
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return {n: data[:, i] for i, n in enumerate(names)}


def write_series(rows, path) -> Path:
    """Write ``(t, energy, max_divergence, mass)`` rows as CSV."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, np.asarray(rows, dtype=np.float64).reshape(-1, 4), fmt="%.17g",
                   delimiter=",", header=",".join(SERIES_COLUMNS), comments="")
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return path
