"""Noise ablation: l1 proxies per noise group and the dephasing-rate sweep.

Orderings are judged on paired per-trial differences, since variants of one trial share
the instance, the outcome and every random stream.
"""
import argparse
from pathlib import Path

from nqitsim.runner import VARIANT_SETS, ExperimentConfig, paired_difference, run, write_records


def ablation(args) -> None:
    for vs, variants in VARIANT_SETS.items():
        cfg = ExperimentConfig(
            "part3_ablation", variant_set=vs, master_seed=args.seed, entangling_time=args.entangling_time, workers=args.workers
        )
        result = run(cfg)
        write_records(result, args.out / f"ablation_{vs}_{args.entangling_time}", emit_plotdata=True)
        print(f"[{vs}]")
        for v, s in result.summary["variants"].items():
            print(f"  {v:18s} l1 = {s['l1']:.4f} +/- {s['se']:.4f}")
        for a, b in zip(variants, variants[1:]):
            d, se = paired_difference(result, a, b)
            print(f"  {a} - {b}: {d:+.4f} +/- {se:.4f}  ({d / se if se else float('inf'):+.1f} se)")


def sweep(args) -> None:
    for mode in ("fresh", "fixed"):
        cfg = ExperimentConfig(
            "part3_sweep", sweep_mode=mode, master_seed=args.seed, entangling_time=args.entangling_time, workers=args.workers
        )
        result = run(cfg)
        write_records(result, args.out / f"sweep_{mode}_{args.entangling_time}", emit_plotdata=True)
        curve = "  ".join(f"{p['fraction']:g}:{p['l1']:.4f}" for p in result.summary["curve"])
        names = result.variants()
        d, se = paired_difference(result, names[-1], names[0])
        print(f"sweep {mode:5s} {curve}  endpoint gap {d:+.4f} +/- {se:.4f}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--entangling-time", default="per_gate", choices=("per_gate", "per_step"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results/part3"))
    ap.add_argument("--only", choices=("ablation", "sweep"), default=None)
    args = ap.parse_args()
    if args.only != "sweep":
        ablation(args)
    if args.only != "ablation":
        sweep(args)


if __name__ == "__main__":
    main()
