"""Command-line front end for the experiment harness.

Exit code 0 on success; 2 with a message on stderr when the configuration
is invalid.  ``--T`` takes a single horizon, or a comma-separated list for
the bounds table.
"""
from __future__ import annotations

import argparse
import sys

from .bench import MECHANISMS, TASKS, ExperimentConfig, run_experiment
from .privacy import MODES

__all__ = ["build_parser", "main"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="continualdp",
        description="Seeded experiments for continual-release counting, averaging, and derived mechanisms.",
    )
    parser.add_argument("--task", required=True, choices=TASKS)
    parser.add_argument("--mechanism", default="factorization", choices=MECHANISMS)
    parser.add_argument("--T", default=str(1 << 14), help="horizon; comma-separated list for --task bounds")
    parser.add_argument("--epsilon", type=float, default=0.8)
    parser.add_argument("--delta", type=float, default=1e-10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=1)
    parser.add_argument("--mode", default="horizon", choices=MODES)
    parser.add_argument("--sigma-zero", action="store_true", help="noiseless dry run (exactness oracle)")
    parser.add_argument("--out", required=True, help="output directory for CSV files")
    parser.add_argument("--universe", type=int, default=4, help="histogram coordinate count")
    parser.add_argument("--vertices", type=int, default=8, help="graph vertex count")
    parser.add_argument("--clients", type=int, default=1000, help="local-model client count")
    parser.add_argument("--ell", type=int, default=2, help="max pattern length")
    parser.add_argument("--alphabet", default="ab")
    parser.add_argument("--input", default=None, help="graph updates CSV (t,u,v,weight)")
    parser.add_argument("--theta-points", type=int, default=101, help="risk-curve grid resolution")
    return parser


def _parse_horizons(raw: str, task: str) -> tuple[int, tuple[int, ...]]:
    parts = [p for p in raw.split(",") if p.strip()]
    try:
        values = tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"--T must be an integer or comma-separated integers, got {raw!r}") from None
    if not values:
        raise ValueError("--T must not be empty")
    if task != "bounds" and len(values) > 1:
        raise ValueError(f"--task {task} takes a single --T, got {raw!r}")
    return values[0], values


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    T, T_list = _parse_horizons(args.T, args.task)
    return ExperimentConfig(
        task=args.task,
        out=args.out,
        T=T,
        epsilon=args.epsilon,
        delta=args.delta,
        seed=args.seed,
        trials=args.trials,
        mechanism=args.mechanism,
        mode=args.mode,
        sigma_zero=args.sigma_zero,
        universe=args.universe,
        vertices=args.vertices,
        clients=args.clients,
        ell=args.ell,
        alphabet=args.alphabet,
        input_path=args.input,
        T_list=T_list if args.task == "bounds" else (),
        theta_points=args.theta_points,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        result = run_experiment(config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    written = [str(p) for p in result.trace_paths]
    if result.summary_path is not None:
        written.append(str(result.summary_path))
    print(f"wrote {len(written)} file(s) under {config.out}")
    if result.fraction_within_bound is not None:
        print(f"fraction_within_bound={result.fraction_within_bound:.6g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
