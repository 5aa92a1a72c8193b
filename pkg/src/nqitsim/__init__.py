"""Classical simulation of noisy IQP circuits on a networked ion-trap architecture."""
from .circuit import Circuit, Gate, t_count, validate
from .simcore import (
    EstimatorConfig,
    clifford_amplitude,
    exact_t_sum_amplitude,
    sparse_estimate_probability,
    statevector_amplitude,
)

__all__ = [
    "Circuit",
    "EstimatorConfig",
    "Gate",
    "clifford_amplitude",
    "exact_t_sum_amplitude",
    "sparse_estimate_probability",
    "statevector_amplitude",
    "t_count",
    "validate",
]
