"""Networked ion-trap architecture: noise parameters, Pauli injection channels and the
noisy circuit builders for the 2D-DQS lattice and the trap-chain MBQC programs.

Noise is only ever Pauli gates inserted into the gate list, so every noisy circuit stays
in Clifford+T and ``t_count`` is unchanged by injection.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Literal

import numpy as np

from .circuit import Circuit, CircuitBuilder, Gate
from .dqs import DqsInstance, lattice_edges
from .iqp import XProgram

_PAULIS = ("X", "Y", "Z")


@dataclass(frozen=True)
class NoiseProfile:
    prob_two_qubit_single: float = 5.5e-5
    prob_two_qubit_zz: float = 6e-5
    prob_single_qubit: float = 1.5e-6
    prob_measurement: float = 5e-4
    prob_preparation: float = 2e-4
    rate_dephasing: float = 7.2e-3  # events per second
    rate_depolarising: float = 9e-3

    def __post_init__(self) -> None:
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if value < 0:
                raise ValueError(f"{f.name} must be >= 0, got {value}")
            if f.name.startswith("prob_") and value > 1:
                raise ValueError(f"{f.name} must be a probability, got {value}")

    def is_zero(self) -> bool:
        return all(getattr(self, f.name) == 0 for f in dataclasses.fields(self))


@dataclass(frozen=True)
class TimingProfile:
    t_in_trap_op: float = 0.5e-3  # seconds
    t_linking: float = 1.5
    t_preparation: float = 1.25e-3
    t_measurement: float = 2.25e-3

    def __post_init__(self) -> None:
        for f in dataclasses.fields(self):
            if getattr(self, f.name) < 0:
                raise ValueError(f"{f.name} must be >= 0")


ZERO_NOISE = NoiseProfile(0, 0, 0, 0, 0, 0, 0)
# the rates quoted with the device description, which differ from the simulator constants
# in the depolarising rate and the two-qubit single-Pauli probability
SUMMARY_RATES = NoiseProfile(prob_two_qubit_single=5.5e-4, rate_depolarising=9e-4)

TIME_CHANNELS = ("rate_dephasing", "rate_depolarising")
OPERATION_CHANNELS = (
    "prob_two_qubit_single",
    "prob_two_qubit_zz",
    "prob_single_qubit",
    "prob_measurement",
    "prob_preparation",
)
CHANNEL_GROUPS = {
    "time": TIME_CHANNELS,
    "operation": OPERATION_CHANNELS,
    "dephasing": ("rate_dephasing",),
    "depolarising": ("rate_depolarising",),
}
REPETITION_CODE_DEPHASING = 2.3e-4
SWEEP_FRACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)


def scale_profile(profile: NoiseProfile, channel: str, factor: float) -> NoiseProfile:
    """Copy of ``profile`` with a channel group (or a single named channel) scaled."""
    if factor < 0:
        raise ValueError(f"factor must be >= 0, got {factor}")
    names = CHANNEL_GROUPS.get(channel)
    if names is None:
        if channel not in TIME_CHANNELS + OPERATION_CHANNELS:
            raise ValueError(f"unknown channel {channel!r}")
        names = (channel,)
    return replace(profile, **{n: getattr(profile, n) * factor for n in names})


def preset(name: str, base: NoiseProfile = NoiseProfile()) -> NoiseProfile:
    """Named noise variants used by the ablation and sweep recipes."""
    if name in ("nqit", "full"):
        return base
    if name == "summary-rates":
        return SUMMARY_RATES
    if name == "zero":
        return ZERO_NOISE
    if name == "gate-only":
        return scale_profile(base, "time", 0)
    if name == "time-only":
        return scale_profile(base, "operation", 0)
    if name == "dephasing-only":
        return scale_profile(scale_profile(base, "operation", 0), "depolarising", 0)
    if name == "depolarising-only":
        return scale_profile(scale_profile(base, "operation", 0), "dephasing", 0)
    if name == "repetition-code":
        return replace(base, rate_dephasing=REPETITION_CODE_DEPHASING)
    if name == "no-dephasing":
        return scale_profile(base, "dephasing", 0)
    if name.startswith("dephasing-x"):
        return scale_profile(base, "dephasing", float(name.removeprefix("dephasing-x")))
    raise ValueError(f"unknown noise preset {name!r}")


# -- profile files -------------------------------------------------------------------

FILE_KEYS = {
    "TimeInTrapOperation": ("timing", "t_in_trap_op"),
    "TimeLinkingOperation": ("timing", "t_linking"),
    "TimePreparation": ("timing", "t_preparation"),
    "TimeMeasurement": ("timing", "t_measurement"),
    "ProbTwoQubitOperationSingleQubit": ("noise", "prob_two_qubit_single"),
    "ProbTwoQubitOperationTwoQubit": ("noise", "prob_two_qubit_zz"),
    "ProbSingleQubitOperation": ("noise", "prob_single_qubit"),
    "ProbMeasurement": ("noise", "prob_measurement"),
    "ProbPreparation": ("noise", "prob_preparation"),
    "ProbDephasing": ("noise", "rate_dephasing"),
    "ProbDepolarising": ("noise", "rate_depolarising"),
}


def parse_profiles(
    text: str, noise: NoiseProfile = NoiseProfile(), timing: TimingProfile = TimingProfile()
) -> tuple[NoiseProfile, TimingProfile]:
    """Parse ``Key = value`` lines; keys not given keep the supplied defaults."""
    updates: dict[str, dict[str, float]] = {"noise": {}, "timing": {}}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep:
            raise ValueError(f"line {lineno}: expected 'Key = value', got {raw!r}")
        if key not in FILE_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        target, attr = FILE_KEYS[key]
        updates[target][attr] = float(value)
    return replace(noise, **updates["noise"]), replace(timing, **updates["timing"])


def load_profiles(path: str | Path) -> tuple[NoiseProfile, TimingProfile]:
    return parse_profiles(Path(path).read_text())


def dump_profiles(noise: NoiseProfile, timing: TimingProfile) -> str:
    values = {"noise": noise, "timing": timing}
    return "".join(f"{key} = {getattr(values[t], a)!r}\n" for key, (t, a) in FILE_KEYS.items())


# -- injection channels --------------------------------------------------------------


def sample_event_count(duration: float, rate: float, rng: np.random.Generator) -> int:
    if duration < 0 or rate < 0:
        raise ValueError("duration and rate must be >= 0")
    return int(rng.poisson(duration * rate))


def _random_pauli(q: int, rng: np.random.Generator) -> Gate:
    return Gate(_PAULIS[int(rng.integers(3))], (q,))


def time_based_noise(n_qubits: int, duration: float, profile: NoiseProfile, rng: np.random.Generator) -> list[Gate]:
    """Dephasing and depolarising events on every qubit over ``duration`` seconds.

    Dephasing emits Z when the Poisson event count is odd. Depolarising emits one
    uniformly random Pauli per event.
    """
    lam_z = duration * profile.rate_dephasing
    lam_d = duration * profile.rate_depolarising
    if n_qubits == 0 or (lam_z == 0 and lam_d == 0):
        return []
    kz = rng.poisson(lam_z, n_qubits)
    kd = rng.poisson(lam_d, n_qubits)
    out = []
    for q in np.flatnonzero((kz & 1) | kd):
        if kz[q] & 1:
            out.append(Gate("Z", (int(q),)))
        out.extend(_random_pauli(int(q), rng) for _ in range(kd[q]))
    return out


OperationKind = Literal["prep", "measure", "single", "two_qubit"]


def operation_noise(kind: OperationKind, targets: tuple[int, ...], profile: NoiseProfile, rng: np.random.Generator) -> list[Gate]:
    arity = 2 if kind == "two_qubit" else 1
    if len(targets) != arity:
        raise ValueError(f"{kind} noise expects {arity} target(s), got {len(targets)}")
    if kind == "prep":
        return [Gate("X", targets)] if rng.random() < profile.prob_preparation else []
    if kind == "measure":
        return [Gate("X", targets)] if rng.random() < profile.prob_measurement else []
    if kind == "single":
        return [_random_pauli(targets[0], rng)] if rng.random() < profile.prob_single_qubit else []
    if kind == "two_qubit":
        out = [_random_pauli(q, rng) for q in targets if rng.random() < profile.prob_two_qubit_single]
        if rng.random() < profile.prob_two_qubit_zz:
            out += [Gate("Z", (targets[0],)), Gate("Z", (targets[1],))]
        return out
    raise ValueError(f"unknown operation kind {kind!r}")


@dataclass
class _NoisyBuilder:
    """Circuit accumulator that interleaves noise draws from one generator."""

    n: int
    noise: NoiseProfile
    rng: np.random.Generator
    b: CircuitBuilder = field(init=False)

    def __post_init__(self) -> None:
        self.b = CircuitBuilder(self.n)

    def op(self, kind: str, *targets: int, noise_kind: OperationKind | None = None) -> None:
        self.b.add(kind, *targets)
        if noise_kind is not None:
            self.b.extend(operation_noise(noise_kind, tuple(targets), self.noise, self.rng))

    def inject(self, kind: OperationKind, *targets: int) -> None:
        self.b.extend(operation_noise(kind, tuple(targets), self.noise, self.rng))

    def wait(self, duration: float) -> None:
        self.b.extend(time_based_noise(self.n, duration, self.noise, self.rng))


# -- 2D-DQS --------------------------------------------------------------------------

EntanglingTime = Literal["per_gate", "per_step"]


def build_noisy_dqs(
    instance: DqsInstance,
    noise: NoiseProfile = NoiseProfile(),
    timing: TimingProfile = TimingProfile(),
    rng_seed: int | None = None,
    entangling_time: EntanglingTime = "per_gate",
) -> Circuit:
    """Noisy lattice circuit with serialized gates and an in-trap wait after each gate.

    ``entangling_time="per_step"`` instead charges one inter-trap link wait
    (``t_linking + t_measurement``) after each of the four CZ schedule steps, treating
    every CZ as a trap-to-trap link performed in parallel within its step.
    """
    if entangling_time not in ("per_gate", "per_step"):
        raise ValueError(f"unknown entangling_time {entangling_time!r}")
    n = instance.n_qubits
    nb = _NoisyBuilder(n, noise, np.random.default_rng(rng_seed))
    for q in range(n):
        nb.op("H", q, noise_kind="prep")
    edges = lattice_edges(instance.nx, instance.ny)
    for i, e in enumerate(edges):
        nb.op("CZ", *e.endpoints, noise_kind="two_qubit")
        if entangling_time == "per_gate":
            nb.wait(timing.t_in_trap_op)
        elif i + 1 == len(edges) or edges[i + 1].schedule_step != e.schedule_step:
            nb.wait(timing.t_linking + timing.t_measurement)
    for q in range(n):
        if instance.tau[q]:
            nb.op("T", q, noise_kind="single")
            nb.wait(timing.t_in_trap_op)
    for q in range(n):
        nb.op("H", q, noise_kind="single")
        nb.wait(timing.t_in_trap_op)
    for q in range(n):
        nb.inject("measure", q)
    return nb.b.build()


# -- trap-chain MBQC -----------------------------------------------------------------


@dataclass(frozen=True)
class ArchitectureParams:
    n_traps: int
    ions_per_trap: int = 20
    available_qubits: int = 10
    max_links: int = 4  # housed for completeness; no recipe uses it
    grid: tuple[int, int] | None = None  # (nx, ny); defaults to a chain

    def __post_init__(self) -> None:
        if self.grid is None:
            object.__setattr__(self, "grid", (self.n_traps, 1))
        if self.available_qubits > self.ions_per_trap:
            raise ValueError("available_qubits cannot exceed ions_per_trap")
        if self.available_qubits < 3:
            raise ValueError("each trap needs a gate qubit, a receiver and one application qubit")
        if self.grid[0] * self.grid[1] != self.n_traps:
            raise ValueError(f"grid {self.grid} does not hold {self.n_traps} traps")

    @property
    def app_per_trap(self) -> int:
        return self.available_qubits - 2

    @classmethod
    def chain(cls, n_traps: int, app_per_trap: int) -> "ArchitectureParams":
        k = app_per_trap + 2
        return cls(n_traps, ions_per_trap=max(20, k), available_qubits=k)


@dataclass(frozen=True, eq=False)
class RestrictedProgram:
    """Per gate qubit ``i`` (trap ``i``, all but the last trap): ``home[i]`` marks the
    application qubits of trap ``i`` it entangles with, ``away[i]`` those of trap ``i+1``."""

    n_traps: int
    home: np.ndarray
    away: np.ndarray

    def __post_init__(self) -> None:
        for name in ("home", "away"):
            arr = np.array(getattr(self, name), dtype=np.uint8)
            if arr.ndim != 2 or arr.shape[0] != max(self.n_traps - 1, 0):
                raise ValueError(f"{name} must have one row per gate qubit")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if self.home.shape != self.away.shape:
            raise ValueError("home and away strings must have equal shapes")

    @property
    def app_per_trap(self) -> int:
        return self.home.shape[1]

    @property
    def n_app(self) -> int:
        return self.n_traps * self.app_per_trap

    def active_gates(self) -> list[int]:
        return [i for i in range(self.n_traps - 1) if self.home[i].any() or self.away[i].any()]

    @property
    def n_qubits(self) -> int:
        return self.n_app + len(self.active_gates())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RestrictedProgram):
            return NotImplemented
        return (
            self.n_traps == other.n_traps
            and np.array_equal(self.home, other.home)
            and np.array_equal(self.away, other.away)
        )


def random_restricted_program(
    arch: ArchitectureParams, connection_prob: float = 0.15, rng_seed: int | None = None
) -> RestrictedProgram:
    """Random home/away strings with each bit set independently.

    The default connection probability gives about ten T gates at 12 traps of 8.
    """
    if arch.grid[1] != 1:
        raise ValueError(f"restricted programs need a 1-D trap chain, got grid {arch.grid}")
    if not 0.0 <= connection_prob <= 1.0:
        raise ValueError(f"connection_prob {connection_prob} not in [0, 1]")
    rng = np.random.default_rng(rng_seed)
    shape = (arch.n_traps - 1, arch.app_per_trap)
    home = (rng.random(shape) < connection_prob).astype(np.uint8)
    away = (rng.random(shape) < connection_prob).astype(np.uint8)
    return RestrictedProgram(arch.n_traps, home, away)


def restricted_xprogram(prog: RestrictedProgram) -> XProgram:
    """Equivalent unrestricted X-program; one row per active gate qubit."""
    m = prog.app_per_trap
    rows = []
    for i in prog.active_gates():
        row = np.zeros(prog.n_app, dtype=np.uint8)
        row[i * m : (i + 1) * m] = prog.home[i]
        row[(i + 1) * m : (i + 2) * m] = prog.away[i]
        rows.append(row)
    return XProgram(np.array(rows, dtype=np.uint8).reshape(len(rows), prog.n_app))


def build_noisy_restricted_mbqc(
    prog: RestrictedProgram,
    noise: NoiseProfile = NoiseProfile(),
    timing: TimingProfile = TimingProfile(),
    rng_seed: int | None = None,
) -> Circuit:
    """Noisy MBQC circuit for a trap chain.

    Application qubits of trap ``i`` are ``i*m .. i*m + m - 1``; active gate qubits follow
    in trap order. Moving a gate qubit to the next trap is a relabeling that costs two
    link waits in total. Measurement errors are injected before the correction tail,
    since the corrections act on the (possibly flipped) classical record.
    """
    m = prog.app_per_trap
    active = prog.active_gates()
    gq = {i: prog.n_app + k for k, i in enumerate(active)}
    n = prog.n_qubits
    nb = _NoisyBuilder(n, noise, np.random.default_rng(rng_seed))

    def app(trap: int, j: int) -> int:
        return trap * m + j

    for q in range(n):
        nb.op("H", q, noise_kind="prep")
    for i in active:
        for j in np.flatnonzero(prog.home[i]):
            nb.op("CZ", gq[i], app(i, j), noise_kind="two_qubit")
            nb.wait(timing.t_in_trap_op)
    # even-position then odd-position swaps; each batch ends in one link wait
    nb.wait(timing.t_linking + timing.t_measurement)
    nb.wait(timing.t_linking + timing.t_measurement)
    for i in active:
        for j in np.flatnonzero(prog.away[i]):
            nb.op("CZ", gq[i], app(i + 1, j), noise_kind="two_qubit")
            nb.wait(timing.t_in_trap_op)
    for kind in ("H", "T", "X"):
        for i in active:
            nb.op(kind, gq[i], noise_kind="single")
        nb.wait(timing.t_in_trap_op)
    for q in range(n):
        nb.op("H", q, noise_kind="single")
    nb.wait(timing.t_in_trap_op)
    for q in range(n):
        nb.inject("measure", q)
    nb.b.begin_tail()
    for i in active:
        for j in np.flatnonzero(prog.home[i]):
            nb.op("CX", gq[i], app(i, j))
    for i in active:
        for j in np.flatnonzero(prog.away[i]):
            nb.op("CX", gq[i], app(i + 1, j))
    return nb.b.build()


def compile_restricted_mbqc(prog: RestrictedProgram) -> Circuit:
    return build_noisy_restricted_mbqc(prog, ZERO_NOISE, TimingProfile(), rng_seed=0)
