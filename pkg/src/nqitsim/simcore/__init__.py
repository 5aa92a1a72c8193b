from .chform import CHState
from .expansion import (
    ALPHA,
    BETA,
    DEFAULT_T_CAP,
    EstimatorConfig,
    NonCliffordGate,
    TCountExceeded,
    clifford_amplitude,
    compile_expansion,
    default_samples,
    exact_probability,
    exact_t_sum_amplitude,
    expansion_weight,
    l1_norm,
    sparse_estimate_probability,
)
from .statevector import (
    DEFAULT_QUBIT_CAP,
    QubitCapExceeded,
    probabilities,
    simulate,
    statevector_amplitude,
)

ENGINES = ("exact", "sparse", "dense")


def probability(circuit, x, engine: str = "exact", cfg: EstimatorConfig = EstimatorConfig()) -> float:
    """Single-outcome probability with the named engine."""
    if engine == "exact":
        return exact_probability(circuit, x)
    if engine == "sparse":
        return sparse_estimate_probability(circuit, x, cfg)
    if engine == "dense":
        return abs(statevector_amplitude(circuit, x)) ** 2
    raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")


__all__ = [
    "ALPHA",
    "BETA",
    "CHState",
    "DEFAULT_QUBIT_CAP",
    "DEFAULT_T_CAP",
    "ENGINES",
    "EstimatorConfig",
    "NonCliffordGate",
    "QubitCapExceeded",
    "TCountExceeded",
    "clifford_amplitude",
    "compile_expansion",
    "default_samples",
    "exact_probability",
    "exact_t_sum_amplitude",
    "expansion_weight",
    "l1_norm",
    "probabilities",
    "probability",
    "simulate",
    "sparse_estimate_probability",
    "statevector_amplitude",
]
