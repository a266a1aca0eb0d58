"""Command-line entry point: ``mrsw run``, ``mrsw converge``, ``mrsw verify``."""

from __future__ import annotations

import argparse
import sys

from .core import MRSWError
from .experiments import (ExperimentConfig, config_from_mapping, convergence_study, read_config_file,
                          run_experiment)
from .presets import ComplexRoot, balanced_vortex_velocity  # noqa: F401  (public re-export)

EXIT_OK, EXIT_ERROR, EXIT_ACCEPTANCE = 0, 1, 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file; flags override its entries")
    p.add_argument("--example", type=int)
    p.add_argument("--mesh", help="N or NxM")
    p.add_argument("--tfinal", type=float)
    p.add_argument("--scheme", choices=["wb", "nwb", "WB", "NWB"])
    p.add_argument("--out")
    p.add_argument("--theta", type=float)
    p.add_argument("--cfl", type=float)
    p.add_argument("--g", type=float)
    p.add_argument("--fc", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--perturb", action="store_true", default=None)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mrsw", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one preset experiment")
    _common(run)
    conv = sub.add_parser("converge", help="mesh-refinement study")
    _common(conv)
    conv.add_argument("--meshes", required=True, help="comma-separated doubling chain")
    ver = sub.add_parser("verify", help="run the acceptance criteria")
    ver.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def _config(args) -> ExperimentConfig:
    values = read_config_file(args.config) if args.config else {}
    flags = {"example": args.example, "mesh": args.mesh, "tfinal": args.tfinal,
             "scheme": args.scheme, "out": args.out, "theta": args.theta, "cfl": args.cfl,
             "g": args.g, "fc": args.fc, "beta": args.beta, "perturb": args.perturb}
    values.update({k: v for k, v in flags.items() if v is not None})
    return config_from_mapping(values)


def _run(args) -> int:
    summary = run_experiment(_config(args))
    print(f"{summary.label}: t={summary.t:g} steps={summary.steps}")
    for k, v in summary.errors.items():
        print(f"  Linf error {k}: {v:.3e}")
    if summary.energy:
        print(f"  energy ratio E(t)/E(0): {summary.energy[-1][1] / summary.energy[0][1]:.12f}")
    print(f"  max divergence: {summary.max_divergence:.3e}")
    for path in summary.files:
        print(f"  wrote {path}")
    return EXIT_OK


def _converge(args) -> int:
    cfg = _config(args)
    meshes = [int(m) for m in args.meshes.split(",")]
    print(convergence_study(cfg, meshes).format())
    return EXIT_OK


def _verify(args) -> int:
    from .acceptance import run_all

    numbers = [int(n) for n in args.only.split(",")] if args.only else None
    results = run_all(numbers)
    return EXIT_OK if all(r.passed for r in results) else EXIT_ACCEPTANCE


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    handler = {"run": _run, "converge": _converge, "verify": _verify}[args.command]
    try:
        return handler(args)
    except (MRSWError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
