"""Simulator benchmark: statevector probability vs. averaged sparse estimates on random X-programs."""
import argparse
from pathlib import Path

from nqitsim.runner import ExperimentConfig, run, write_records


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--k", type=int, default=None, help="samples per estimate (default: variance budget)")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results/part1"))
    args = ap.parse_args()

    cfg = ExperimentConfig("part1_bench", trials=args.trials, samples_k=args.k, master_seed=args.seed, workers=args.workers)
    result = run(cfg)
    write_records(result, args.out, emit_plotdata=True)
    for r in result.records:
        print(f"trial {r.trial:2d}  n={r.n_qubits:2d} t={r.t_count:2d}  perfect={r.perfect_mean:.3e}  estimate={r.noisy_mean:.3e}")
    print(f"R^2 = {result.summary['r_squared']:.4f}")


if __name__ == "__main__":
    main()
