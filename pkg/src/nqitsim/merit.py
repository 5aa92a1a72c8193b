"""Figures of merit comparing perfect and noisy single-outcome probabilities."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

# additive l1 error up to which sampling stays hard for the lattice problem; reporting only
HARDNESS_L1_THRESHOLD = 1 / 22

# guards the equality edge of the one-standard-deviation tests against rounding
_TOL = 1e-12


class Classification(str, Enum):
    DISMISSIVE = "dismissive"
    NON_DISMISSIVE = "non-dismissive"


@dataclass(frozen=True)
class RunSummary:
    perfect_value: float
    noisy_mean: float
    noisy_std: float
    n_outcomes: int

    def __post_init__(self) -> None:
        if self.noisy_std < 0:
            raise ValueError("noisy_std must be >= 0")
        if self.n_outcomes < 1:
            raise ValueError("n_outcomes must be >= 1")

    @property
    def uniform(self) -> float:
        return 1.0 / self.n_outcomes

    @classmethod
    def from_runs(cls, perfect_value: float, run_means: Sequence[float], n_outcomes: int) -> "RunSummary":
        runs = np.asarray(run_means, dtype=float)
        std = float(runs.std(ddof=1)) if runs.size > 1 else 0.0
        return cls(perfect_value, float(runs.mean()), std, n_outcomes)


def r_squared(targets: Sequence[float], models: Sequence[float]) -> float:
    d = np.asarray(targets, dtype=float)
    m = np.asarray(models, dtype=float)
    if d.shape != m.shape or d.ndim != 1:
        raise ValueError(f"length mismatch: {d.shape} vs {m.shape}")
    if d.size == 0:
        raise ValueError("r_squared needs at least one value")
    v = float(((d - d.mean()) ** 2).sum())
    if v == 0:
        raise ValueError("zero total variance: all targets are identical")
    r = float(((d - m) ** 2).sum())
    return 1.0 - r / v


def far_from_uniform(perfect_value: float, n_outcomes: int) -> bool:
    return perfect_value > 2 / n_outcomes or perfect_value < 1 / (2 * n_outcomes)


def advantage_consistency(s: RunSummary) -> Classification:
    """Dismissive when the noisy runs look uniform or miss the perfect value."""
    scale = max(abs(s.noisy_mean), abs(s.perfect_value), s.uniform)
    tol = _TOL * scale
    near_uniform = abs(s.noisy_mean - s.uniform) <= s.noisy_std + tol
    off_perfect = abs(s.noisy_mean - s.perfect_value) > s.noisy_std + tol
    return Classification.DISMISSIVE if near_uniform or off_perfect else Classification.NON_DISMISSIVE


def counts_toward_advantage(s: RunSummary) -> bool:
    return far_from_uniform(s.perfect_value, s.n_outcomes) and (
        advantage_consistency(s) is Classification.NON_DISMISSIVE
    )


def normalized_differences(perfect_values: Sequence[float], noisy_means: Sequence[float], n_outcomes: int) -> np.ndarray:
    p = np.asarray(perfect_values, dtype=float)
    q = np.asarray(noisy_means, dtype=float)
    if p.shape != q.shape or p.ndim != 1 or p.size == 0:
        raise ValueError(f"length mismatch: {p.shape} vs {q.shape}")
    return np.abs(q - p) * n_outcomes


def l1_proxy(perfect_values: Sequence[float], noisy_means: Sequence[float], n_outcomes: int) -> float:
    """Mean |noisy - perfect| over trials in units of the uniform probability."""
    return float(normalized_differences(perfect_values, noisy_means, n_outcomes).mean())


def l1_proxy_stats(perfect_values: Sequence[float], noisy_means: Sequence[float], n_outcomes: int) -> tuple[float, float]:
    """(mean, standard error) of the normalized differences."""
    d = normalized_differences(perfect_values, noisy_means, n_outcomes)
    se = float(d.std(ddof=1) / np.sqrt(d.size)) if d.size > 1 else 0.0
    return float(d.mean()), se
