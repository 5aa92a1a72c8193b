"""X-programs, their bipartite graphs and the measurement-based circuit that samples them.

An X-program is a bit matrix ``Q`` (rows are program elements) and an angle ``theta``;
row ``h`` contributes ``exp(i theta prod_{j: Q[h, j] = 1} X_j)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .circuit import Circuit, CircuitBuilder, as_bits, bits_to_index

DEFAULT_THETA = math.pi / 8
DIRECT_QUBIT_CAP = 20


class UnsupportedAngle(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class XProgram:
    Q: np.ndarray
    theta: float = DEFAULT_THETA

    def __post_init__(self) -> None:
        q = np.array(self.Q, dtype=np.uint8)
        if q.ndim != 2:
            raise ValueError(f"program matrix must be 2-D, got shape {q.shape}")
        if q.size and q.max() > 1:
            raise ValueError("program matrix entries must be 0 or 1")
        q.flags.writeable = False
        object.__setattr__(self, "Q", q)

    @property
    def n_g(self) -> int:
        return self.Q.shape[0]

    @property
    def n_a(self) -> int:
        return self.Q.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, XProgram):
            return NotImplemented
        return self.theta == other.theta and np.array_equal(self.Q, other.Q)


@dataclass(frozen=True)
class BipartiteGraph:
    n_g: int
    n_a: int
    edges: tuple[tuple[int, int], ...] = field(default=())  # (gate h, application j), 0-based

    def biadjacency(self) -> np.ndarray:
        q = np.zeros((self.n_g, self.n_a), dtype=np.uint8)
        for h, j in self.edges:
            q[h, j] = 1
        return q


def random_xprogram(
    ng_range: tuple[int, int] = (5, 15),
    na_range: tuple[int, int] = (5, 12),
    density: float = 0.5,
    rng_seed: int | None = None,
) -> XProgram:
    """Random program with dimensions drawn uniformly from the inclusive ranges."""
    for name, (lo, hi) in (("ng_range", ng_range), ("na_range", na_range)):
        if lo > hi or lo < 0:
            raise ValueError(f"empty range {name}=({lo}, {hi})")
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density {density} not in [0, 1]")
    rng = np.random.default_rng(rng_seed)
    n_g = int(rng.integers(ng_range[0], ng_range[1] + 1))
    n_a = int(rng.integers(na_range[0], na_range[1] + 1))
    q = rng.random((n_g, n_a)) < density
    return XProgram(q.astype(np.uint8))


def bipartite_graph(p: XProgram) -> BipartiteGraph:
    edges = tuple((int(h), int(j)) for h, j in zip(*np.nonzero(p.Q)))
    return BipartiteGraph(p.n_g, p.n_a, edges)


def gate_qubit(p: XProgram, h: int) -> int:
    """Circuit index of gate qubit ``h``; application qubits come first."""
    return p.n_a + h


def compile_mbqc(p: XProgram) -> Circuit:
    """Measurement-based circuit on ``n_a + n_g`` qubits with a noiseless CX correction tail.

    Gate qubit ``h`` is measured in the rotated basis by ``H X T H`` (read right to left).
    The outcome of the full register is returned with all measurements at the end.
    """
    if not math.isclose(p.theta, DEFAULT_THETA, rel_tol=0, abs_tol=1e-12):
        raise UnsupportedAngle(f"only theta = pi/8 compiles to Clifford+T, got {p.theta}")
    n = p.n_a + p.n_g
    b = CircuitBuilder(n)
    for q in range(n):
        b.add("H", q)
    edges = bipartite_graph(p).edges
    for h, j in edges:
        b.add("CZ", gate_qubit(p, h), j)
    for h in range(p.n_g):
        g = gate_qubit(p, h)
        for kind in ("H", "T", "X", "H"):
            b.add(kind, g)
    for j in range(p.n_a):
        b.add("H", j)
    b.begin_tail()
    for h, j in reversed(edges):
        b.add("CX", gate_qubit(p, h), j)
    return b.build()


def direct_probability(p: XProgram, x) -> float:
    """Probability of application outcome ``x`` from the product of X-exponentials.

    Works on the dense ``n_a``-qubit state and shares no code with the circuit engines.
    """
    n = p.n_a
    if n > DIRECT_QUBIT_CAP:
        raise ValueError(f"{n} application qubits exceeds the direct-evaluation cap of {DIRECT_QUBIT_CAP}")
    bits = as_bits(x, n)
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1.0
    idx = np.arange(1 << n)
    c, s = math.cos(p.theta), math.sin(p.theta)
    for row in p.Q:
        mask = bits_to_index(row)
        psi = c * psi + 1j * s * psi[idx ^ mask]
    return float(abs(psi[bits_to_index(bits)]) ** 2)


# -- text format ---------------------------------------------------------------------


def to_text(p: XProgram) -> str:
    frac = Fraction(p.theta / math.pi).limit_denominator(1 << 16)
    lines = [f"{p.n_g} {p.n_a} {frac.numerator}/{frac.denominator}"]
    lines.extend("".join(str(int(b)) for b in row) for row in p.Q)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> XProgram:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty X-program text")
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError(f"bad header {lines[0]!r}; expected 'NG NA NUM/DEN'")
    n_g, n_a = int(head[0]), int(head[1])
    theta = float(Fraction(head[2])) * math.pi
    rows = lines[1:]
    if len(rows) != n_g or any(len(r) != n_a for r in rows):
        raise ValueError(f"expected {n_g} rows of {n_a} bits")
    q = np.array([[int(c) for c in r] for r in rows], dtype=np.uint8).reshape(n_g, n_a)
    return XProgram(q, theta)
