"""Dense statevector evolution; the reference oracle for every other engine."""
from __future__ import annotations

import numpy as np

from ..circuit import Circuit, as_bits, bits_to_index

DEFAULT_QUBIT_CAP = 24

_SQ = 1 / np.sqrt(2)
_MATRICES = {
    "H": np.array([[_SQ, _SQ], [_SQ, -_SQ]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
}
_DIAGONALS = {
    "S": (1, 1j),
    "T": (1, np.exp(1j * np.pi / 4)),
    "Z": (1, -1),
}


class QubitCapExceeded(ValueError):
    pass


def _split(psi: np.ndarray, n: int, q: int) -> np.ndarray:
    # little-endian: qubit q is the bit of weight 2**q
    return psi.reshape(1 << (n - 1 - q), 2, 1 << q)


def _split2(psi: np.ndarray, n: int, a: int, b: int) -> tuple[np.ndarray, bool]:
    hi, lo = max(a, b), min(a, b)
    view = psi.reshape(1 << (n - 1 - hi), 2, 1 << (hi - 1 - lo), 2, 1 << lo)
    return view, a > b  # axis 1 is the higher qubit


def apply_gate(psi: np.ndarray, n: int, kind: str, targets: tuple[int, ...]) -> None:
    """Apply one gate in place."""
    if kind in _DIAGONALS:
        d0, d1 = _DIAGONALS[kind]
        v = _split(psi, n, targets[0])
        if d0 != 1:
            v[:, 0, :] *= d0
        v[:, 1, :] *= d1
    elif kind in _MATRICES:
        v = _split(psi, n, targets[0])
        m = _MATRICES[kind]
        a0, a1 = v[:, 0, :].copy(), v[:, 1, :].copy()
        v[:, 0, :] = m[0, 0] * a0 + m[0, 1] * a1
        v[:, 1, :] = m[1, 0] * a0 + m[1, 1] * a1
    elif kind == "CZ":
        v, _ = _split2(psi, n, *targets)
        v[:, 1, :, 1, :] *= -1
    elif kind == "CX":
        c, t = targets
        v, control_high = _split2(psi, n, c, t)
        if control_high:
            tmp = v[:, 1, :, 0, :].copy()
            v[:, 1, :, 0, :] = v[:, 1, :, 1, :]
            v[:, 1, :, 1, :] = tmp
        else:
            tmp = v[:, 0, :, 1, :].copy()
            v[:, 0, :, 1, :] = v[:, 1, :, 1, :]
            v[:, 1, :, 1, :] = tmp
    else:
        raise ValueError(f"unsupported gate kind {kind!r}")


def simulate(circuit: Circuit, cap: int = DEFAULT_QUBIT_CAP) -> np.ndarray:
    """Full state U|0^n>, indexed little-endian."""
    n = circuit.n_qubits
    if n > cap:
        raise QubitCapExceeded(f"{n} qubits exceeds the statevector cap of {cap}")
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1.0
    for g in circuit.gates:
        apply_gate(psi, n, g.kind, g.targets)
    return psi


def statevector_amplitude(circuit: Circuit, x, cap: int = DEFAULT_QUBIT_CAP) -> complex:
    bits = as_bits(x, circuit.n_qubits)
    return complex(simulate(circuit, cap)[bits_to_index(bits)])


def probabilities(circuit: Circuit, cap: int = DEFAULT_QUBIT_CAP) -> np.ndarray:
    return np.abs(simulate(circuit, cap)) ** 2
