"""Command-line entry point: ``nqitsim <subcommand> [flags]``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import nqit
from .runner import VARIANT_SETS, ConfigError, ExperimentConfig, run, write_records

SUBCOMMANDS = {
    "bench-simulator": "part1_bench",
    "dqs-noise": "part2_dqs",
    "mbqc-restricted": "part2_mbqc",
    "ablation": "part3_ablation",
    "sweep": "part3_sweep",
}


def _dims(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected AxB, got {text!r}") from None


def _profiles(choice: str | None) -> tuple[nqit.NoiseProfile, nqit.TimingProfile]:
    if choice is None:
        return nqit.NoiseProfile(), nqit.TimingProfile()
    path = Path(choice)
    if path.exists():
        return nqit.load_profiles(path)
    return nqit.preset(choice), nqit.TimingProfile()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nqitsim", description="Noisy IQP experiments on a networked ion-trap model.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--trials", type=int, default=20)
        p.add_argument("--runs", type=int, default=20, help="noisy circuits per trial")
        p.add_argument("--shots", type=int, default=20, help="engine evaluations per run")
        p.add_argument("--grid", type=_dims, default=(4, 5), help="lattice NXxNY")
        p.add_argument("--chain", type=_dims, default=(4, 2), help="TRAPSxAPPQUBITS")
        p.add_argument("--noise-profile", default=None, help="profile file or preset name")
        p.add_argument("--variant", default="time-gate", choices=sorted(VARIANT_SETS))
        p.add_argument("--mode", default="fresh", choices=("fresh", "fixed"))
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--engine", default="sparse", choices=("exact", "sparse", "dense"), help="engine for noisy runs")
        p.add_argument("--perfect-engine", default=None, choices=("exact", "sparse", "dense"))
        p.add_argument("--k", type=int, default=None, help="samples per amplitude estimate")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--entangling-time", default="per_gate", choices=("per_gate", "per_step"))
        p.add_argument("--emit-plotdata", action="store_true")
        p.add_argument("--record-wall-clock", action="store_true")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    noise, timing = _profiles(args.noise_profile)
    return ExperimentConfig(
        recipe=SUBCOMMANDS[args.command],
        trials=args.trials,
        noisy_circuits_per_trial=args.runs,
        sims_per_run=args.shots,
        grid=args.grid,
        chain=args.chain,
        noise=noise,
        timing=timing,
        variant_set=args.variant,
        sweep_mode=args.mode,
        perfect_engine=args.perfect_engine,
        noisy_engine=args.engine,
        samples_k=args.k,
        entangling_time=args.entangling_time,
        master_seed=args.seed,
        record_wall_clock=args.record_wall_clock,
        workers=args.workers,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"nqitsim: error: {exc}", file=sys.stderr)
        return 2
    result = run(cfg)
    if args.out is not None:
        write_records(result, args.out, emit_plotdata=args.emit_plotdata)
    print(json.dumps(result.summary, indent=1, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
