"""Experiment harness: configuration, runs with outputs, and convergence studies."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import IA_2D, IB_2D, IH, IHB, ConfigInvalid, MRSWError, primitives_from_conserved
from .diagnostics import error_norms, rates_from_differences, successive_differences, total_energy
from .output import snapshot_from_state, write_series, write_snapshot
from .presets import DEFAULT_MESH, Problem, build_problem
from .timeint import integrate


class RunAborted(MRSWError, RuntimeError):
    """A solver error interrupted a run; the message carries time and step."""


@dataclass
class ExperimentConfig:
    """One experiment.

    Attributes:
        example: preset id 1..8.
        mesh: ``N`` or ``(Nx, Ny)``; ``None`` picks the preset default.
        t_end: final time; ``None`` picks the preset default.
        snapshot_times: output times; ``None`` picks the preset default.
        variant: ``"WB"`` or ``"NWB"``.
        out_dir: output directory; ``None`` disables file output.
        perturb: add the preset's small depth perturbation.
        g, f_c, beta, theta, cfl: optional overrides.
    """

    example: int = 1
    mesh: int | tuple[int, int] | None = None
    t_end: float | None = None
    snapshot_times: tuple[float, ...] | None = None
    variant: str = "WB"
    out_dir: str | None = None
    perturb: bool = False
    g: float | None = None
    f_c: float | None = None
    beta: float | None = None
    theta: float | None = None
    cfl: float | None = None

    def __post_init__(self):
        if self.example not in DEFAULT_MESH:
            raise ConfigInvalid(f"example must be 1..8, got {self.example}")
        self.variant = str(self.variant).upper()
        if self.variant not in ("WB", "NWB"):
            raise ConfigInvalid(f"scheme must be WB or NWB, got {self.variant}")
        if self.mesh is not None:
            sizes = (self.mesh,) if np.ndim(self.mesh) == 0 else tuple(self.mesh)
            if any(int(n) < 5 for n in sizes):
                raise ConfigInvalid("mesh needs at least 5 cells per axis")
        if self.t_end is not None and not self.t_end >= 0:
            raise ConfigInvalid("t_end must be non-negative")
        if self.snapshot_times is not None and self.t_end is not None:
            if any(not 0 <= s <= self.t_end for s in self.snapshot_times):
                raise ConfigInvalid("snapshot times must lie in [0, t_end]")

    @property
    def dimension(self) -> int:
        return 1 if self.example <= 4 else 2

    def problem(self) -> Problem:
        overrides = {k: getattr(self, k) for k in ("g", "f_c", "beta", "theta", "cfl")}
        try:
            return build_problem(self.example, self.mesh, variant=self.variant, t_end=self.t_end,
                                 perturb=self.perturb, snapshot_times=self.snapshot_times,
                                 **overrides)
        except ValueError as exc:
            raise ConfigInvalid(str(exc)) from exc


def parse_mesh(text: str):
    """``"100"`` -> 100, ``"100x80"`` -> (100, 80)."""
    parts = str(text).lower().replace("×", "x").split("x")
    try:
        sizes = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise ConfigInvalid(f"bad mesh {text!r}") from exc
    return sizes[0] if len(sizes) == 1 else sizes


_FIELD_TYPES = {"example": int, "t_end": float, "variant": str, "out_dir": str,
                "g": float, "f_c": float, "beta": float, "theta": float, "cfl": float}
_ALIASES = {"tfinal": "t_end", "scheme": "variant", "out": "out_dir", "fc": "f_c"}


def config_from_mapping(values: dict) -> ExperimentConfig:
    """Build a config from string values as found in key=value files or CLI flags."""
    kwargs = {}
    for raw_key, raw in values.items():
        key = _ALIASES.get(raw_key, raw_key)
        if raw is None:
            continue
        if key == "mesh":
            kwargs[key] = parse_mesh(raw)
        elif key == "snapshot_times":
            kwargs[key] = tuple(float(s) for s in str(raw).split(",") if s.strip())
        elif key == "perturb":
            kwargs[key] = str(raw).strip().lower() in ("1", "true", "yes", "on")
        elif key in _FIELD_TYPES:
            try:
                kwargs[key] = _FIELD_TYPES[key](raw)
            except ValueError as exc:
                raise ConfigInvalid(f"bad value for {key}: {raw!r}") from exc
        else:
            raise ConfigInvalid(f"unknown key {raw_key!r}")
    return ExperimentConfig(**kwargs)


def read_config_file(path) -> dict[str, str]:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigInvalid(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


@dataclass
class RunSummary:
    label: str
    t: float
    steps: int
    errors: dict[str, float] = field(default_factory=dict)
    energy: list[tuple[float, float]] = field(default_factory=list)
    divergence: list[tuple[float, float]] = field(default_factory=list)
    files: list[Path] = field(default_factory=list)
    state: np.ndarray | None = None

    @property
    def max_divergence(self) -> float:
        return max((d for _, d in self.divergence), default=0.0)


def divergence_measure(W: np.ndarray) -> float:
    """``max|A + B|`` in 2-D; ``max_k |hb_k - hb_1|`` in 1-D."""
    if W.ndim == 3:
        return float(np.max(np.abs(W[IA_2D] + W[IB_2D])))
    return float(np.max(np.abs(W[IHB] - W[IHB][0])))


def equilibrium_errors(W: np.ndarray, reference: np.ndarray) -> dict[str, float]:
    """L-infinity errors of ``h, u, v, a`` against a reference state."""
    p, q = primitives_from_conserved(W), primitives_from_conserved(reference)
    return {k: error_norms(p[k], q[k], 1.0)[0] for k in ("h", "u", "v", "a")}


def run_problem(problem: Problem, out_dir=None, *, series_every: int = 1) -> RunSummary:
    """Integrate ``problem`` to its final time, recording diagnostics and files."""
    vol = problem.grid.dy if problem.dim == 1 else problem.grid.cell_volume
    Z, g = problem.topo.centers, problem.cfg.g
    out = Path(out_dir) if out_dir is not None else None
    summary = RunSummary(problem.label, 0.0, 0)
    series = []
    wanted = set(problem.snapshot_times) | {0.0, problem.t_end}
    last = {"t": 0.0, "step": 0}

    def record(t, w, step):
        last["t"], last["step"] = t, step
        e = total_energy(w, Z, g, vol)
        d = divergence_measure(w)
        summary.energy.append((t, e))
        summary.divergence.append((t, d))
        if step % series_every == 0 or t == problem.t_end:
            series.append((t, e, d, float(np.sum(w[IH]) * vol)))
        if out is not None and t in wanted:
            rec = snapshot_from_state(t, w, problem.grid, Z)
            summary.files += write_snapshot(rec, out / f"{problem.label}_t{t:g}.csv")

    try:
        res = integrate(problem.W0, problem.rhs_and_dt, problem.t_end,
                        stop_times=problem.snapshot_times, callback=record)
    except (MRSWError, ArithmeticError, ValueError) as exc:
        raise RunAborted(f"{problem.label}: {exc} (t={last['t']:.6g}, step={last['step']})") from exc
    summary.t, summary.steps, summary.state = res.t, res.steps, res.w
    if problem.reference is not None:
        summary.errors = equilibrium_errors(res.w, problem.reference)
    if out is not None:
        summary.files.append(write_series(series, out / f"{problem.label}_series.csv"))
    return summary


def run_experiment(cfg: ExperimentConfig) -> RunSummary:
    """Build the preset described by ``cfg`` and run it."""
    return run_problem(cfg.problem(), cfg.out_dir)


@dataclass
class ConvergenceTable:
    meshes: list
    differences: dict[str, list[float]]
    rates: dict[str, list[float]]

    def format(self) -> str:
        fields = list(self.differences)
        head = "mesh pair".ljust(16) + "".join(f"{f:>12}{'rate':>8}" for f in fields)
        lines = [head]
        for i in range(len(self.meshes) - 1):
            row = f"{self.meshes[i]}-{self.meshes[i + 1]}".ljust(16)
            for f in fields:
                r = self.rates[f][i - 1] if i >= 1 else float("nan")
                row += f"{self.differences[f][i]:12.4e}{r:8.2f}"
            lines.append(row)
        return "\n".join(lines)


def convergence_study(cfg: ExperimentConfig, meshes, fields=("h", "u", "v", "a"),
                      runner=None) -> ConvergenceTable:
    """Successive-mesh L1 differences and Runge rates along a doubling chain.

    Args:
        cfg: base configuration; ``mesh`` is replaced by each chain entry.
        meshes: doubling chain, e.g. ``[1000, 2000, 4000, 8000]``.
        fields: primitive names to compare.
        runner: ``mesh -> (solution dict, cell size)``; defaults to running ``cfg``.
    """
    meshes = list(meshes)
    for a, b in zip(meshes[:-1], meshes[1:]):
        if np.any(np.asarray(b) != 2 * np.asarray(a)):
            raise ConfigInvalid("meshes must form a doubling chain")

    def default_runner(mesh):
        problem = dataclasses.replace(cfg, mesh=mesh, out_dir=None).problem()
        res = integrate(problem.W0, problem.rhs_and_dt, problem.t_end)
        grid = problem.grid
        size = grid.dy if problem.dim == 1 else (grid.dx, grid.dy)
        return primitives_from_conserved(res.w), size

    runner = runner or default_runner
    runs = [runner(m) for m in meshes]
    sizes = [s for _, s in runs]
    diffs = {f: successive_differences([r[f] for r, _ in runs], sizes) for f in fields}
    return ConvergenceTable(meshes, diffs, {f: rates_from_differences(d) for f, d in diffs.items()})
