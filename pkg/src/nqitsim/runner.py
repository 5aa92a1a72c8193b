"""Experiment recipes: simulator benchmarking, noisy device benchmarking, noise ablation
and dephasing sweeps, with seeded trials and deterministic persistence.

Every random draw comes from a seed derived from ``master_seed`` and a path such as
``(trial, "run", r, "sim", s)``: the path is joined with ``/``, hashed with SHA-256 and
the first 8 bytes are read little-endian. Noisy-run and simulation seeds do not depend on
the noise variant, so variants within a trial share circuits' random streams and any
difference between them comes from the noise alone.
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial
from pathlib import Path
from typing import Any, Callable, Literal

import numpy as np

from . import dqs, iqp, merit
from .circuit import Circuit, bits_to_str, t_count
from .nqit import (
    SWEEP_FRACTIONS,
    ArchitectureParams,
    NoiseProfile,
    TimingProfile,
    build_noisy_dqs,
    build_noisy_restricted_mbqc,
    compile_restricted_mbqc,
    preset,
    random_restricted_program,
    restricted_xprogram,
    scale_profile,
)
from .simcore import (
    DEFAULT_QUBIT_CAP,
    EstimatorConfig,
    exact_probability,
    sparse_estimate_probability,
    statevector_amplitude,
)

Recipe = Literal["part1_bench", "part2_dqs", "part2_mbqc", "part3_ablation", "part3_sweep"]
RECIPES = ("part1_bench", "part2_dqs", "part2_mbqc", "part3_ablation", "part3_sweep")

VARIANT_SETS = {
    "time-gate": ("time-only", "gate-only"),
    "dephasing-depolarising": ("dephasing-only", "depolarising-only"),
    "repetition-code": ("full", "repetition-code", "no-dephasing"),
}
SWEEP_MODES = ("fresh", "fixed")
CHAIN_SIZES = ((12, 8), (9, 8), (4, 8), (4, 2))

CSV_COLUMNS = (
    "trial",
    "variant",
    "n_qubits",
    "t_count",
    "outcome",
    "perfect",
    "perfect_std",
    "noisy_mean",
    "noisy_std",
    "perfect_normalized",
    "noisy_normalized",
    "noisy_std_normalized",
    "abs_diff_normalized",
    "far_from_uniform",
    "classification",
)


class ConfigError(ValueError):
    pass


def derive_seed(master_seed: int, *path: Any) -> int:
    key = "/".join(map(str, (master_seed, *path))).encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "little")


@dataclass(frozen=True)
class ExperimentConfig:
    recipe: Recipe
    trials: int = 20
    noisy_circuits_per_trial: int = 20
    sims_per_run: int = 20
    grid: tuple[int, int] = (4, 5)  # (nx, ny) lattice for the 2D-DQS recipes
    chain: tuple[int, int] = (4, 2)  # (traps, application qubits per trap)
    ng_range: tuple[int, int] = (5, 15)
    na_range: tuple[int, int] = (5, 12)
    density: float = 0.5
    connection_prob: float = 0.15
    noise: NoiseProfile = field(default_factory=NoiseProfile)
    timing: TimingProfile = field(default_factory=TimingProfile)
    variant_set: str = "time-gate"
    sweep_mode: str = "fresh"
    sweep_fractions: tuple[float, ...] = SWEEP_FRACTIONS
    perfect_engine: str | None = None  # None: statevector for part1_bench, exact elsewhere
    noisy_engine: str = "sparse"
    samples_k: int | None = None
    entangling_time: str = "per_gate"
    outcome_support: str = "span"  # or "full": uniform over every qubit
    master_seed: int = 0
    record_wall_clock: bool = False
    workers: int = 1  # execution detail; excluded from the config hash

    def __post_init__(self) -> None:
        if self.recipe not in RECIPES:
            raise ConfigError(f"unknown recipe {self.recipe!r}")
        for name in ("trials", "noisy_circuits_per_trial", "sims_per_run", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if min(self.grid) < 1 or min(self.chain) < 1:
            raise ConfigError("grid and chain dimensions must be >= 1")
        if self.recipe == "part2_mbqc" and self.chain[0] < 2:
            raise ConfigError("a trap chain needs at least two traps")
        if self.variant_set not in VARIANT_SETS:
            raise ConfigError(f"unknown variant set {self.variant_set!r}; expected one of {sorted(VARIANT_SETS)}")
        if self.sweep_mode not in SWEEP_MODES:
            raise ConfigError(f"unknown sweep mode {self.sweep_mode!r}; expected one of {SWEEP_MODES}")
        for engine in (self.perfect_engine, self.noisy_engine):
            if engine not in (None, "exact", "sparse", "dense"):
                raise ConfigError(f"unknown engine {engine!r}")
        if self.entangling_time not in ("per_gate", "per_step"):
            raise ConfigError(f"unknown entangling time {self.entangling_time!r}")
        if self.samples_k is not None and self.samples_k < 1:
            raise ConfigError("samples_k must be >= 1")
        if self.outcome_support not in ("span", "full"):
            raise ConfigError(f"unknown outcome support {self.outcome_support!r}")

    def hash(self) -> str:
        d = asdict(self)
        d.pop("workers")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]

    def replace(self, **changes: Any) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


@dataclass
class TrialRecord:
    trial: int
    variant: str
    instance: str
    outcome: str
    n_qubits: int
    t_count: int
    perfect_mean: float
    perfect_std: float
    noisy_means: list[float]
    noisy_mean: float
    noisy_std: float
    seeds: dict[str, int]
    config_hash: str
    wall_clock: float | None = None

    @property
    def n_outcomes(self) -> int:
        return 1 << self.n_qubits

    def summary(self) -> merit.RunSummary:
        return merit.RunSummary(self.perfect_mean, self.noisy_mean, self.noisy_std, self.n_outcomes)

    @property
    def far_from_uniform(self) -> bool:
        return merit.far_from_uniform(self.perfect_mean, self.n_outcomes)

    @property
    def classification(self) -> str:
        return merit.advantage_consistency(self.summary()).value

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "TrialRecord":
        return cls(**json.loads(text))

    def csv_row(self) -> dict[str, Any]:
        u = self.n_outcomes
        return {
            "trial": self.trial,
            "variant": self.variant,
            "n_qubits": self.n_qubits,
            "t_count": self.t_count,
            "outcome": self.outcome,
            "perfect": repr(self.perfect_mean),
            "perfect_std": repr(self.perfect_std),
            "noisy_mean": repr(self.noisy_mean),
            "noisy_std": repr(self.noisy_std),
            "perfect_normalized": repr(self.perfect_mean * u),
            "noisy_normalized": repr(self.noisy_mean * u),
            "noisy_std_normalized": repr(self.noisy_std * u),
            "abs_diff_normalized": repr(abs(self.noisy_mean - self.perfect_mean) * u),
            "far_from_uniform": int(self.far_from_uniform),
            "classification": self.classification,
        }


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[TrialRecord]
    summary: dict[str, Any]

    def variants(self) -> list[str]:
        return list(dict.fromkeys(r.variant for r in self.records))

    def by_variant(self, variant: str) -> list[TrialRecord]:
        return [r for r in self.records if r.variant == variant]


# -- evaluation ----------------------------------------------------------------------


def _dense_probability(circuit: Circuit, x: np.ndarray) -> float:
    return abs(statevector_amplitude(circuit, x)) ** 2


def _evaluate(circuit: Circuit, x: np.ndarray, engine: str, cfg: ExperimentConfig, seed_path: tuple) -> np.ndarray:
    """``sims_per_run`` evaluations; deterministic engines are evaluated once."""
    if engine == "exact":
        return np.array([exact_probability(circuit, x)])
    if engine == "dense":
        return np.array([_dense_probability(circuit, x)])
    return np.array(
        [
            sparse_estimate_probability(
                circuit, x, EstimatorConfig(cfg.samples_k, derive_seed(cfg.master_seed, *seed_path, "sim", s))
            )
            for s in range(cfg.sims_per_run)
        ]
    )


def _std(values: np.ndarray) -> float:
    return float(values.std(ddof=1)) if values.size > 1 else 0.0


def _random_outcome(n: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).integers(0, 2, n).astype(np.uint8)


# -- per-trial work units --------------------------------------------------------------


def _part1_trial(cfg: ExperimentConfig, trial: int) -> list[TrialRecord]:
    start = time.perf_counter()
    inst_seed = derive_seed(cfg.master_seed, trial, "instance")
    prog = iqp.random_xprogram(cfg.ng_range, cfg.na_range, cfg.density, inst_seed)
    circuit = iqp.compile_mbqc(prog)
    n = circuit.n_qubits
    x = np.zeros(n, dtype=np.uint8)
    engine = cfg.perfect_engine or "dense"
    if engine == "dense" and n > DEFAULT_QUBIT_CAP:
        # every gate-qubit record is equally likely, so the joint probability is the
        # application marginal spread over 2^n_g records
        perfect = iqp.direct_probability(prog, x[: prog.n_a]) / 2**prog.n_g
    else:
        perfect = float(_evaluate(circuit, x, engine, cfg, (trial, "perfect")).mean())
    sims = _evaluate(circuit, x, cfg.noisy_engine, cfg, (trial, "run", 0))
    return [
        TrialRecord(
            trial=trial,
            variant="noiseless",
            instance=iqp.to_text(prog),
            outcome=bits_to_str(x),
            n_qubits=n,
            t_count=t_count(circuit),
            perfect_mean=perfect,
            perfect_std=0.0,
            noisy_means=[float(sims.mean())],
            noisy_mean=float(sims.mean()),
            noisy_std=_std(sims),
            seeds={"instance": inst_seed},
            config_hash=cfg.hash(),
            wall_clock=time.perf_counter() - start if cfg.record_wall_clock else None,
        )
    ]


def _mbqc_trial(cfg: ExperimentConfig, trial: int) -> list[TrialRecord]:
    start = time.perf_counter()
    arch = ArchitectureParams.chain(*cfg.chain)
    inst_seed = derive_seed(cfg.master_seed, trial, "instance")
    out_seed = derive_seed(cfg.master_seed, trial, "outcome")
    prog = random_restricted_program(arch, cfg.connection_prob, inst_seed)
    perfect_circuit = compile_restricted_mbqc(prog)
    x = _random_outcome(perfect_circuit.n_qubits, out_seed)
    if cfg.outcome_support == "span":
        # application outcomes lie in the row span of the program matrix; a uniform
        # full string would have probability zero almost surely
        rows = restricted_xprogram(prog).Q
        pick = np.random.default_rng(derive_seed(cfg.master_seed, trial, "outcome", "span")).integers(0, 2, rows.shape[0])
        x[: prog.n_app] = (pick @ rows) & 1
    perfect = _evaluate(perfect_circuit, x, cfg.perfect_engine or "exact", cfg, (trial, "perfect"))
    run_seed = derive_seed(cfg.master_seed, trial, "run", 0, "circuit")
    noisy = build_noisy_restricted_mbqc(prog, cfg.noise, cfg.timing, run_seed)
    sims = _evaluate(noisy, x, cfg.noisy_engine, cfg, (trial, "run", 0))
    return [
        TrialRecord(
            trial=trial,
            variant="noisy",
            instance=_restricted_text(prog),
            outcome=bits_to_str(x),
            n_qubits=perfect_circuit.n_qubits,
            t_count=t_count(perfect_circuit),
            perfect_mean=float(perfect.mean()),
            perfect_std=_std(perfect),
            noisy_means=[float(sims.mean())],
            noisy_mean=float(sims.mean()),
            noisy_std=_std(sims),
            seeds={"instance": inst_seed, "outcome": out_seed, "run_0": run_seed},
            config_hash=cfg.hash(),
            wall_clock=time.perf_counter() - start if cfg.record_wall_clock else None,
        )
    ]


def _restricted_text(prog) -> str:
    rows = [f"{prog.n_traps} {prog.app_per_trap}"]
    rows += [f"{bits_to_str(h)} {bits_to_str(a)}" for h, a in zip(prog.home, prog.away)]
    return "\n".join(rows) + "\n"


def _dqs_variants(cfg: ExperimentConfig) -> list[tuple[str, NoiseProfile]]:
    if cfg.recipe == "part2_dqs":
        return [("noisy", cfg.noise)]
    if cfg.recipe == "part3_ablation":
        return [(name, preset(name, cfg.noise)) for name in VARIANT_SETS[cfg.variant_set]]
    return [(f"dephasing-x{f:g}", scale_profile(cfg.noise, "dephasing", f)) for f in cfg.sweep_fractions]


def _dqs_trial(cfg: ExperimentConfig, trial: int) -> list[TrialRecord]:
    start = time.perf_counter()
    fixed = cfg.recipe == "part3_sweep" and cfg.sweep_mode == "fixed"
    inst_seed = derive_seed(cfg.master_seed, "instance") if fixed else derive_seed(cfg.master_seed, trial, "instance")
    out_seed = derive_seed(cfg.master_seed, trial, "outcome")
    instance = dqs.random_instance(*cfg.grid, inst_seed)
    perfect_circuit = dqs.compile_dqs(instance)
    n = instance.n_qubits
    x = _random_outcome(n, out_seed)
    perfect = _evaluate(perfect_circuit, x, cfg.perfect_engine or "exact", cfg, (trial, "perfect"))
    run_seeds = [derive_seed(cfg.master_seed, trial, "run", r, "circuit") for r in range(cfg.noisy_circuits_per_trial)]
    records = []
    for name, profile in _dqs_variants(cfg):
        means = []
        for r, seed in enumerate(run_seeds):
            noisy = build_noisy_dqs(instance, profile, cfg.timing, seed, cfg.entangling_time)
            means.append(float(_evaluate(noisy, x, cfg.noisy_engine, cfg, (trial, "run", r)).mean()))
        arr = np.array(means)
        records.append(
            TrialRecord(
                trial=trial,
                variant=name,
                instance=dqs.to_text(instance),
                outcome=bits_to_str(x),
                n_qubits=n,
                t_count=t_count(perfect_circuit),
                perfect_mean=float(perfect.mean()),
                perfect_std=_std(perfect),
                noisy_means=means,
                noisy_mean=float(arr.mean()),
                noisy_std=_std(arr),
                seeds={"instance": inst_seed, "outcome": out_seed},
                config_hash=cfg.hash(),
                wall_clock=None,
            )
        )
    if cfg.record_wall_clock:
        elapsed = time.perf_counter() - start
        for rec in records:
            rec.wall_clock = elapsed
    return records


_TRIAL_FUNCTIONS: dict[str, Callable[[ExperimentConfig, int], list[TrialRecord]]] = {
    "part1_bench": _part1_trial,
    "part2_dqs": _dqs_trial,
    "part2_mbqc": _mbqc_trial,
    "part3_ablation": _dqs_trial,
    "part3_sweep": _dqs_trial,
}


def _run_trials(cfg: ExperimentConfig) -> list[TrialRecord]:
    fn = partial(_TRIAL_FUNCTIONS[cfg.recipe], cfg)
    if cfg.workers == 1:
        per_trial = [fn(i) for i in range(cfg.trials)]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            per_trial = list(pool.map(fn, range(cfg.trials)))  # map keeps trial order
    return [rec for recs in per_trial for rec in recs]


# -- summaries -------------------------------------------------------------------------


def _r2_summary(records: list[TrialRecord]) -> dict[str, Any]:
    perfect = [r.perfect_mean for r in records]
    noisy = [r.noisy_mean for r in records]
    try:
        r2 = merit.r_squared(perfect, noisy)
    except ValueError:
        r2 = None
    return {"r_squared": r2}


def _classification_summary(records: list[TrialRecord]) -> dict[str, Any]:
    far = [r for r in records if r.far_from_uniform]
    dismissive = sum(r.classification == merit.Classification.DISMISSIVE.value for r in far)
    return {
        "trials": len(records),
        "far_from_uniform": len(far),
        "dismissive_far": dismissive,
        "dismissive_fraction": dismissive / len(far) if far else None,
        "counts_toward_advantage": sum(merit.counts_toward_advantage(r.summary()) for r in records),
    }


def _l1_summary(result_records: list[TrialRecord], variants: list[str]) -> dict[str, Any]:
    out = {}
    for v in variants:
        recs = [r for r in result_records if r.variant == v]
        mean, se = merit.l1_proxy_stats(
            [r.perfect_mean * r.n_outcomes for r in recs], [r.noisy_mean * r.n_outcomes for r in recs], 1
        )
        out[v] = {"l1": mean, "se": se, **_classification_summary(recs)}
    return out


def paired_difference(result: ExperimentResult, a: str, b: str) -> tuple[float, float]:
    """Mean and standard error of per-trial normalized |diff| of ``a`` minus that of ``b``."""
    da = [abs(r.noisy_mean - r.perfect_mean) * r.n_outcomes for r in result.by_variant(a)]
    db = [abs(r.noisy_mean - r.perfect_mean) * r.n_outcomes for r in result.by_variant(b)]
    d = np.array(da) - np.array(db)
    se = float(d.std(ddof=1) / np.sqrt(d.size)) if d.size > 1 else 0.0
    return float(d.mean()), se


def _check_recipe(cfg: ExperimentConfig, *allowed: str) -> None:
    if cfg.recipe not in allowed:
        raise ConfigError(f"recipe {cfg.recipe!r} cannot run here; expected one of {allowed}")


def run_part1(cfg: ExperimentConfig) -> ExperimentResult:
    _check_recipe(cfg, "part1_bench")
    records = _run_trials(cfg)
    return ExperimentResult(cfg, records, _r2_summary(records))


def run_part2_dqs(cfg: ExperimentConfig) -> ExperimentResult:
    _check_recipe(cfg, "part2_dqs")
    records = _run_trials(cfg)
    return ExperimentResult(cfg, records, _classification_summary(records))


def run_part2_mbqc(cfg: ExperimentConfig) -> ExperimentResult:
    _check_recipe(cfg, "part2_mbqc")
    records = _run_trials(cfg)
    return ExperimentResult(cfg, records, {"chain": list(cfg.chain), **_r2_summary(records)})


def run_part3_ablation(cfg: ExperimentConfig) -> ExperimentResult:
    _check_recipe(cfg, "part3_ablation")
    records = _run_trials(cfg)
    variants = list(VARIANT_SETS[cfg.variant_set])
    return ExperimentResult(cfg, records, {"variant_set": cfg.variant_set, "variants": _l1_summary(records, variants)})


def run_part3_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    _check_recipe(cfg, "part3_sweep")
    records = _run_trials(cfg)
    variants = [name for name, _ in _dqs_variants(cfg)]
    l1 = _l1_summary(records, variants)
    curve = [{"fraction": f, "l1": l1[v]["l1"], "se": l1[v]["se"]} for f, v in zip(cfg.sweep_fractions, variants)]
    return ExperimentResult(cfg, records, {"mode": cfg.sweep_mode, "curve": curve})


RUNNERS: dict[str, Callable[[ExperimentConfig], ExperimentResult]] = {
    "part1_bench": run_part1,
    "part2_dqs": run_part2_dqs,
    "part2_mbqc": run_part2_mbqc,
    "part3_ablation": run_part3_ablation,
    "part3_sweep": run_part3_sweep,
}


def run(cfg: ExperimentConfig) -> ExperimentResult:
    return RUNNERS[cfg.recipe](cfg)


# -- persistence -------------------------------------------------------------------------


def records_csv(records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow(rec.csv_row())
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _plot_data(result: ExperimentResult) -> dict[str, str]:
    """Per-figure CSVs: each has the values and one-standard-deviation error columns."""
    recipe = result.config.recipe
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if recipe in ("part1_bench", "part2_mbqc"):
        w.writerow(["trial", "perfect", "noisy_mean", "noisy_std"])
        for r in result.records:
            w.writerow([r.trial, repr(r.perfect_mean), repr(r.noisy_mean), repr(r.noisy_std)])
        return {"plot_perfect_vs_estimate.csv": buf.getvalue()}
    if recipe == "part2_dqs":
        w.writerow(["trial", "perfect_normalized", "noisy_normalized", "noisy_std_normalized", "far_from_uniform", "classification"])
        for r in result.records:
            u = r.n_outcomes
            w.writerow([r.trial, repr(r.perfect_mean * u), repr(r.noisy_mean * u), repr(r.noisy_std * u), int(r.far_from_uniform), r.classification])
        return {"plot_perfect_vs_noisy.csv": buf.getvalue()}
    if recipe == "part3_ablation":
        w.writerow(["variant", "l1", "se"])
        for v, s in result.summary["variants"].items():
            w.writerow([v, repr(s["l1"]), repr(s["se"])])
        return {"plot_l1_by_variant.csv": buf.getvalue()}
    w.writerow(["fraction", "l1", "se"])
    for point in result.summary["curve"]:
        w.writerow([repr(point["fraction"]), repr(point["l1"]), repr(point["se"])])
    return {f"plot_l1_curve_{result.config.sweep_mode}.csv": buf.getvalue()}


def write_records(result: ExperimentResult, directory: str | Path, emit_plotdata: bool = False) -> dict[str, Any]:
    """Write one JSON file per record, ``results.csv`` and ``manifest.json``."""
    out = Path(directory)
    rec_dir = out / "records"
    try:
        rec_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {rec_dir}: {exc}") from exc
    files = []
    for rec in result.records:
        name = f"trial_{rec.trial:04d}_{rec.variant}.json"
        _write(rec_dir / name, rec.to_json() + "\n")
        files.append(f"records/{name}")
    _write(out / "results.csv", records_csv(result.records))
    plots = _plot_data(result) if emit_plotdata and result.records else {}
    for name, text in plots.items():
        _write(out / name, text)
    cfg = asdict(result.config)
    cfg.pop("workers")
    manifest = {
        "config": cfg,
        "config_hash": result.config.hash(),
        "master_seed": result.config.master_seed,
        "n_records": len(result.records),
        "records": files,
        "plot_files": sorted(plots),
        "summary": result.summary,
    }
    _write(out / "manifest.json", json.dumps(manifest, sort_keys=True, indent=1) + "\n")
    return manifest


def read_records(directory: str | Path) -> list[TrialRecord]:
    out = Path(directory)
    manifest = json.loads((out / "manifest.json").read_text())
    return [TrialRecord.from_json((out / f).read_text()) for f in manifest["records"]]
