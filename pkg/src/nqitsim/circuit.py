"""Circuit intermediate representation shared by generators, noise injection and engines.

Bit convention is little-endian everywhere: bit ``i`` of an outcome is qubit ``i``,
and outcome strings are written qubit 0 first (most-significant-last).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

SINGLE_QUBIT_KINDS = frozenset({"H", "S", "T", "X", "Y", "Z"})
TWO_QUBIT_KINDS = frozenset({"CZ", "CX"})
PAULI_KINDS = frozenset({"X", "Y", "Z"})
KINDS = SINGLE_QUBIT_KINDS | TWO_QUBIT_KINDS


class CircuitError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Gate:
    kind: str
    targets: tuple[int, ...]

    def __str__(self) -> str:
        return " ".join([self.kind, *map(str, self.targets)])


def gate(kind: str, *targets: int) -> Gate:
    return Gate(kind, tuple(int(t) for t in targets))


@dataclass(frozen=True)
class Circuit:
    """Immutable gate list on ``n_qubits`` qubits.

    ``tail_start`` indexes the first gate of the noiseless correction tail; gates at or
    after it never receive injected noise. ``None`` means no tail (equivalent to
    ``len(gates)``).
    """

    n_qubits: int
    gates: tuple[Gate, ...] = ()
    tail_start: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.gates, tuple):
            object.__setattr__(self, "gates", tuple(self.gates))
        if self.tail_start is None:
            object.__setattr__(self, "tail_start", len(self.gates))

    def __len__(self) -> int:
        return len(self.gates)

    @property
    def has_tail(self) -> bool:
        return self.tail_start < len(self.gates)

    def t_positions(self) -> list[int]:
        return [i for i, g in enumerate(self.gates) if g.kind == "T"]


def validate(circuit: Circuit) -> list[str]:
    """Return every invariant violation; an empty list means the circuit is valid."""
    problems = []
    n = circuit.n_qubits
    if n < 0:
        problems.append(f"negative qubit count {n}")
    for i, g in enumerate(circuit.gates):
        if g.kind not in KINDS:
            problems.append(f"gate {i}: unknown kind {g.kind!r}")
            continue
        arity = 1 if g.kind in SINGLE_QUBIT_KINDS else 2
        if len(g.targets) != arity:
            problems.append(f"gate {i}: {g.kind} expects {arity} target(s), got {len(g.targets)}")
        if arity == 2 and len(g.targets) == 2 and g.targets[0] == g.targets[1]:
            problems.append(f"gate {i}: duplicate targets {g.targets}")
        for q in g.targets:
            if not 0 <= q < n:
                problems.append(f"gate {i}: target out of range ({q} not in [0, {n}))")
    if not 0 <= circuit.tail_start <= len(circuit.gates):
        problems.append(f"tail index {circuit.tail_start} out of range [0, {len(circuit.gates)}]")
    return problems


def t_count(circuit: Circuit) -> int:
    return sum(1 for g in circuit.gates if g.kind == "T")


def concatenate(a: Circuit, b: Circuit) -> Circuit:
    if a.n_qubits != b.n_qubits:
        raise CircuitError(f"qubit-count mismatch: {a.n_qubits} != {b.n_qubits}")
    if a.has_tail and len(b.gates):
        raise CircuitError("append after tail: left operand already has a noiseless tail")
    if not b.gates:
        return a
    return Circuit(a.n_qubits, a.gates + b.gates, len(a.gates) + b.tail_start)


def is_clifford(circuit: Circuit) -> bool:
    return all(g.kind != "T" for g in circuit.gates)


# --- outcomes -------------------------------------------------------------------


def as_bits(x: str | Sequence[int] | np.ndarray, n: int | None = None) -> np.ndarray:
    """Outcome as a uint8 vector; strings are read qubit 0 first."""
    if isinstance(x, str):
        bits = np.fromiter((int(c) for c in x), dtype=np.uint8, count=len(x))
        if set(x) - {"0", "1"}:
            raise CircuitError(f"not a bit string: {x!r}")
    else:
        bits = np.asarray(x, dtype=np.uint8).ravel()
        if bits.size and bits.max() > 1:
            raise CircuitError("outcome entries must be 0 or 1")
    if n is not None and bits.size != n:
        raise CircuitError(f"outcome length {bits.size} does not match {n} qubits")
    return bits


def bits_to_str(bits: Iterable[int]) -> str:
    return "".join(str(int(b)) for b in bits)


def bits_to_index(bits: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))


def index_to_bits(index: int, n: int) -> np.ndarray:
    return np.array([(index >> i) & 1 for i in range(n)], dtype=np.uint8)


# --- text format ------------------------------------------------------------------


def to_text(circuit: Circuit) -> str:
    lines = [f"QUBITS {circuit.n_qubits}", f"TAIL {circuit.tail_start}"]
    lines.extend(str(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 2:
        raise CircuitError("missing QUBITS/TAIL header")
    head, tail = lines[0].split(), lines[1].split()
    if head[0] != "QUBITS" or tail[0] != "TAIL" or len(head) != 2 or len(tail) != 2:
        raise CircuitError(f"bad header: {lines[0]!r} / {lines[1]!r}")
    gates = []
    for ln in lines[2:]:
        kind, *qs = ln.split()
        gates.append(Gate(kind, tuple(int(q) for q in qs)))
    circuit = Circuit(int(head[1]), tuple(gates), int(tail[1]))
    problems = validate(circuit)
    if problems:
        raise CircuitError("; ".join(problems))
    return circuit


@dataclass
class CircuitBuilder:
    """Mutable accumulator used by the generators; ``build`` freezes it."""

    n_qubits: int
    gates: list[Gate] = field(default_factory=list)
    tail_start: int | None = None

    def add(self, kind: str, *targets: int) -> None:
        self.gates.append(Gate(kind, tuple(int(t) for t in targets)))

    def extend(self, gates: Iterable[Gate]) -> None:
        self.gates.extend(gates)

    def begin_tail(self) -> None:
        self.tail_start = len(self.gates)

    def build(self) -> Circuit:
        return Circuit(self.n_qubits, tuple(self.gates), self.tail_start)
