"""Random-phase Ising instances on a 2D square lattice (2D-DQS) and their perfect circuits.

Qubits are numbered row-major: node ``(row, col)`` is qubit ``row * nx + col``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .circuit import Circuit, CircuitBuilder, as_bits, bits_to_str


@dataclass(frozen=True)
class DqsInstance:
    nx: int
    ny: int
    tau: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.nx < 1 or self.ny < 1:
            raise ValueError(f"lattice dimensions must be >= 1, got {self.nx}x{self.ny}")
        tau = tuple(int(b) for b in self.tau)
        if len(tau) != self.nx * self.ny:
            raise ValueError(f"tau has {len(tau)} bits, lattice has {self.nx * self.ny} nodes")
        object.__setattr__(self, "tau", tau)

    @property
    def n_qubits(self) -> int:
        return self.nx * self.ny


@dataclass(frozen=True)
class LatticeEdge:
    endpoints: tuple[int, int]
    orientation: Literal["horizontal", "vertical"]
    schedule_step: int


def random_instance(nx: int, ny: int, rng_seed: int | None = None) -> DqsInstance:
    if nx < 1 or ny < 1:
        raise ValueError(f"zero dimension: {nx}x{ny}")
    rng = np.random.default_rng(rng_seed)
    return DqsInstance(nx, ny, tuple(rng.integers(0, 2, nx * ny).tolist()))


def lattice_edges(nx: int, ny: int) -> list[LatticeEdge]:
    """Every grid edge in entangling order.

    Steps: even columns to the right, odd columns to the right, even rows down, odd rows
    down. Indices are 0-based and edges within a step are row-major.
    """
    edges = []
    for step, parity in ((1, 0), (2, 1)):
        for r in range(ny):
            for c in range(parity, nx - 1, 2):
                i = r * nx + c
                edges.append(LatticeEdge((i, i + 1), "horizontal", step))
    for step, parity in ((3, 0), (4, 1)):
        for r in range(parity, ny - 1, 2):
            for c in range(nx):
                i = r * nx + c
                edges.append(LatticeEdge((i, i + nx), "vertical", step))
    return edges


def compile_dqs(instance: DqsInstance) -> Circuit:
    """Perfect circuit: |+> on every node, CZ per edge, T where tau is set, H before readout.

    The T layer comes after the CZ layer (they commute) so that the noisy builder with
    every channel switched off reproduces this circuit gate for gate.
    """
    n = instance.n_qubits
    b = CircuitBuilder(n)
    for q in range(n):
        b.add("H", q)
    for e in lattice_edges(instance.nx, instance.ny):
        b.add("CZ", *e.endpoints)
    for q in range(n):
        if instance.tau[q]:
            b.add("T", q)
    for q in range(n):
        b.add("H", q)
    return b.build()


def to_text(instance: DqsInstance) -> str:
    return f"{instance.nx} {instance.ny}\n{bits_to_str(instance.tau)}\n"


def from_text(text: str) -> DqsInstance:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) not in (1, 2):
        raise ValueError("expected 'NX NY' followed by the tau bit string")
    nx, ny = (int(v) for v in lines[0].split())
    tau = as_bits(lines[1]) if len(lines) == 2 else ()
    return DqsInstance(nx, ny, tuple(int(b) for b in tau))
