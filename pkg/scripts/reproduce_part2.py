"""Device benchmark: 2D-DQS classification rates and the trap-chain MBQC R^2 trend."""
import argparse
import statistics
from pathlib import Path

from nqitsim.nqit import ZERO_NOISE
from nqitsim.runner import CHAIN_SIZES, ExperimentConfig, run, write_records


def dqs(args) -> None:
    for label, noise in (("default", None), ("zero", ZERO_NOISE)):
        extra = {} if noise is None else {"noise": noise}
        cfg = ExperimentConfig(
            "part2_dqs",
            trials=args.trials,
            master_seed=args.seed,
            entangling_time=args.entangling_time,
            workers=args.workers,
            **extra,
        )
        result = run(cfg)
        write_records(result, args.out / f"dqs_{label}_{args.entangling_time}", emit_plotdata=True)
        s = result.summary
        print(f"2D-DQS {label:7s} noise: {s['dismissive_far']}/{s['far_from_uniform']} far-from-uniform trials dismissive")


def mbqc(args) -> None:
    for chain in CHAIN_SIZES:
        r2 = []
        for rep in range(args.repeats):
            cfg = ExperimentConfig(
                "part2_mbqc", trials=args.trials, chain=chain, master_seed=args.seed + rep, workers=args.workers
            )
            result = run(cfg)
            write_records(result, args.out / f"mbqc_{chain[0]}x{chain[1]}_seed{args.seed + rep}", emit_plotdata=True)
            r2.append(result.summary["r_squared"])
        shown = ", ".join(f"{v:.3f}" for v in r2)
        print(f"MBQC {chain[0]:2d}x{chain[1]}: R^2 [{shown}]  median {statistics.median(r2):.3f}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--repeats", type=int, default=3, help="MBQC runs per chain; the median is reported")
    ap.add_argument("--entangling-time", default="per_gate", choices=("per_gate", "per_step"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results/part2"))
    ap.add_argument("--only", choices=("dqs", "mbqc"), default=None)
    args = ap.parse_args()
    if args.only != "mbqc":
        dqs(args)
    if args.only != "dqs":
        mbqc(args)


if __name__ == "__main__":
    main()
