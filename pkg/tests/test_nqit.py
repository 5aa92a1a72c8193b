import math
from dataclasses import replace

import numpy as np
import pytest

from nqitsim import dqs, nqit
from nqitsim.circuit import PAULI_KINDS, t_count
from nqitsim.iqp import compile_mbqc, direct_probability
from nqitsim.nqit import (
    ZERO_NOISE,
    ArchitectureParams,
    NoiseProfile,
    RestrictedProgram,
    TimingProfile,
    build_noisy_dqs,
    build_noisy_restricted_mbqc,
    compile_restricted_mbqc,
    operation_noise,
    random_restricted_program,
    restricted_xprogram,
    sample_event_count,
    scale_profile,
    time_based_noise,
)
from nqitsim.simcore import probabilities

from . import calibration
from .strategies import all_outcomes

DEFAULTS = NoiseProfile()


# -- profiles --------------------------------------------------------------------------


def test_default_constants():
    assert DEFAULTS.rate_dephasing == 7.2e-3
    assert DEFAULTS.rate_depolarising == 9e-3
    assert DEFAULTS.prob_two_qubit_single == 5.5e-5
    assert nqit.SUMMARY_RATES.rate_depolarising == 9e-4
    assert nqit.SUMMARY_RATES.prob_two_qubit_single == 5.5e-4
    assert TimingProfile().t_linking == 1.5


def test_profile_validation():
    with pytest.raises(ValueError):
        NoiseProfile(prob_measurement=1.5)
    with pytest.raises(ValueError):
        NoiseProfile(rate_dephasing=-1)
    with pytest.raises(ValueError):
        TimingProfile(t_linking=-1)
    assert ZERO_NOISE.is_zero() and not DEFAULTS.is_zero()
    # rates are per second, so values above one are legal
    assert NoiseProfile(rate_dephasing=3.0).rate_dephasing == 3.0


def test_scale_profile():
    assert scale_profile(DEFAULTS, "time", 1) == DEFAULTS
    quarter = nqit.preset("dephasing-x0.25")
    assert quarter.rate_dephasing == pytest.approx(1.8e-3)
    assert replace(quarter, rate_dephasing=DEFAULTS.rate_dephasing) == DEFAULTS
    assert scale_profile(DEFAULTS, "prob_measurement", 2).prob_measurement == 1e-3
    with pytest.raises(ValueError, match="unknown channel"):
        scale_profile(DEFAULTS, "cosmic-rays", 1)
    with pytest.raises(ValueError):
        scale_profile(DEFAULTS, "time", -1)


def test_presets():
    assert nqit.preset("repetition-code").rate_dephasing == 2.3e-4
    gate_only = nqit.preset("gate-only")
    assert gate_only.rate_dephasing == gate_only.rate_depolarising == 0
    assert gate_only.prob_measurement == DEFAULTS.prob_measurement
    time_only = nqit.preset("time-only")
    assert all(getattr(time_only, f) == 0 for f in nqit.OPERATION_CHANNELS)
    assert time_only.rate_dephasing == DEFAULTS.rate_dephasing
    assert nqit.preset("dephasing-only") == replace(ZERO_NOISE, rate_dephasing=7.2e-3)
    assert nqit.preset("depolarising-only") == replace(ZERO_NOISE, rate_depolarising=9e-3)
    assert nqit.preset("zero").is_zero()
    with pytest.raises(ValueError):
        nqit.preset("loud")


def test_profile_file_round_trip(tmp_path):
    noise, timing = nqit.preset("summary-rates"), TimingProfile(t_linking=2.0)
    path = tmp_path / "profile.txt"
    path.write_text(nqit.dump_profiles(noise, timing))
    assert nqit.load_profiles(path) == (noise, timing)


def test_profile_file_parsing():
    noise, timing = nqit.parse_profiles("# NQIT\nProbDephasing = 1e-3\n\nTimeLinkingOperation = 2  # slower link\n")
    assert noise == replace(DEFAULTS, rate_dephasing=1e-3)
    assert timing == TimingProfile(t_linking=2.0)
    with pytest.raises(ValueError, match="unknown key"):
        nqit.parse_profiles("ProbCosmicRay = 1\n")
    with pytest.raises(ValueError, match="Key = value"):
        nqit.parse_profiles("ProbDephasing 1\n")


# -- channels ---------------------------------------------------------------------------


def test_event_count_examples():
    rng = np.random.default_rng(0)
    assert all(sample_event_count(0.0, 7.2e-3, rng) == 0 for _ in range(100))
    k = np.array([sample_event_count(1.5, 7.2e-3, rng) for _ in range(100_000)])
    assert abs(k.mean() - 0.0108) <= 3 * math.sqrt(0.0108 / k.size)
    with pytest.raises(ValueError):
        sample_event_count(-1, 1, rng)


def test_poisson_moments():
    for check in calibration.poisson_checks(2.0, 100_000):
        assert calibration.within(check), check


def test_operation_channel_calibration():
    loud = NoiseProfile(0.01, 0.02, 0.03, 0.04, 0.05, 0, 0)
    for check in calibration.operation_checks(loud, 100_000, seed=1):
        assert calibration.within(check), check


def test_time_channel_calibration():
    for check in calibration.time_checks(DEFAULTS, 1.5, 20, 10_000, seed=2):
        assert calibration.within(check), check
    # large lambda: the parity saturates at one half
    for check in calibration.time_checks(NoiseProfile(rate_dephasing=2.0), 1.0, 5, 20_000, seed=3)[:1]:
        assert calibration.within(check), check


def test_single_qubit_paulis_are_uniform():
    rng = np.random.default_rng(4)
    loud = replace(ZERO_NOISE, prob_single_qubit=1.0)
    kinds = [operation_noise("single", (0,), loud, rng)[0].kind for _ in range(30_000)]
    for k in "XYZ":
        assert abs(kinds.count(k) / 30_000 - 1 / 3) <= 3 * math.sqrt(2 / 9 / 30_000)


def test_zero_profile_emits_nothing():
    rng = np.random.default_rng(0)
    assert time_based_noise(10, 100.0, ZERO_NOISE, rng) == []
    for kind, t in (("prep", (0,)), ("measure", (0,)), ("single", (0,)), ("two_qubit", (0, 1))):
        assert operation_noise(kind, t, ZERO_NOISE, rng) == []


def test_operation_arity():
    with pytest.raises(ValueError, match="target"):
        operation_noise("two_qubit", (0,), DEFAULTS, np.random.default_rng())
    with pytest.raises(ValueError, match="target"):
        operation_noise("prep", (0, 1), DEFAULTS, np.random.default_rng())


# -- 2D-DQS builder ----------------------------------------------------------------------


@pytest.mark.parametrize("mode", ["per_gate", "per_step"])
def test_noiseless_dqs_is_perfect_compile(mode):
    for seed in range(5):
        inst = dqs.random_instance(4, 5, seed)
        assert build_noisy_dqs(inst, ZERO_NOISE, rng_seed=seed, entangling_time=mode) == dqs.compile_dqs(inst)


def _injected(noisy, perfect) -> list:
    """Gates of ``noisy`` left over after embedding ``perfect`` as a subsequence."""
    extra, k = [], 0
    for g in noisy.gates:
        if k < len(perfect.gates) and g == perfect.gates[k]:
            k += 1
        else:
            extra.append(g)
    assert k == len(perfect.gates), "perfect circuit is not a subsequence"
    return extra


def test_noisy_dqs_only_adds_paulis():
    loud = scale_profile(scale_profile(DEFAULTS, "time", 100), "operation", 100)
    inst = dqs.random_instance(4, 5, 1)
    c = build_noisy_dqs(inst, loud, rng_seed=1)
    extra = _injected(c, dqs.compile_dqs(inst))
    assert extra and {g.kind for g in extra} <= PAULI_KINDS
    assert t_count(c) == sum(inst.tau)


def test_noisy_dqs_determinism():
    inst = dqs.random_instance(4, 5, 2)
    loud = scale_profile(DEFAULTS, "time", 1000)
    assert build_noisy_dqs(inst, loud, rng_seed=5) == build_noisy_dqs(inst, loud, rng_seed=5)
    assert build_noisy_dqs(inst, loud, rng_seed=5) != build_noisy_dqs(inst, loud, rng_seed=6)


def test_noisy_dqs_time_noise_volume():
    inst = dqs.random_instance(4, 5, 3)
    profile = replace(ZERO_NOISE, rate_dephasing=20.0, rate_depolarising=10.0)
    timing = TimingProfile()
    waits = 31 + sum(inst.tau) + 20
    lam_z = timing.t_in_trap_op * profile.rate_dephasing
    per_wait = 20 * ((1 - math.exp(-2 * lam_z)) / 2 + timing.t_in_trap_op * profile.rate_depolarising)
    counts = [len(build_noisy_dqs(inst, profile, timing, rng_seed=s)) - len(dqs.compile_dqs(inst)) for s in range(400)]
    expected = waits * per_wait
    assert abs(np.mean(counts) - expected) <= 3 * np.std(counts, ddof=1) / math.sqrt(len(counts))


def test_per_step_charges_four_link_waits():
    inst = dqs.random_instance(4, 5, 3)
    profile = replace(ZERO_NOISE, rate_depolarising=0.5)
    timing = TimingProfile()
    counts = [len(build_noisy_dqs(inst, profile, timing, s, "per_step")) - len(dqs.compile_dqs(inst)) for s in range(300)]
    duration = 4 * (timing.t_linking + timing.t_measurement) + (sum(inst.tau) + 20) * timing.t_in_trap_op
    expected = 20 * duration * 0.5
    assert abs(np.mean(counts) - expected) <= 3 * math.sqrt(expected / len(counts))


# -- trap-chain MBQC ---------------------------------------------------------------------


def test_architecture():
    arch = ArchitectureParams(12)
    assert arch.app_per_trap == 8 and arch.grid == (12, 1)
    assert ArchitectureParams.chain(4, 2).app_per_trap == 2
    with pytest.raises(ValueError):
        ArchitectureParams(4, available_qubits=30)
    with pytest.raises(ValueError):
        random_restricted_program(ArchitectureParams(4, grid=(2, 2)))


def test_random_restricted_program_shapes():
    prog = random_restricted_program(ArchitectureParams(12), 0.5, rng_seed=0)
    assert prog.home.shape == prog.away.shape == (11, 8)
    empty = random_restricted_program(ArchitectureParams(12), 0.0, rng_seed=0)
    assert not empty.home.any() and not empty.away.any() and empty.active_gates() == []
    assert random_restricted_program(ArchitectureParams(5), 0.3, 9) == random_restricted_program(ArchitectureParams(5), 0.3, 9)


def test_random_restricted_program_density():
    bits = np.concatenate(
        [np.ravel(random_restricted_program(ArchitectureParams(12), 0.5, s).home) for s in range(200)]
    )
    assert abs(bits.mean() - 0.5) <= 3 * math.sqrt(0.25 / bits.size)


def test_restricted_compile_structure():
    prog = random_restricted_program(ArchitectureParams.chain(4, 2), 0.5, rng_seed=3)
    c = compile_restricted_mbqc(prog)
    assert c.n_qubits == prog.n_app + len(prog.active_gates())
    assert t_count(c) == len(prog.active_gates())
    n_edges = int(prog.home.sum() + prog.away.sum())
    assert sum(g.kind == "CZ" for g in c.gates) == n_edges
    assert len(c) - c.tail_start == n_edges
    assert all(g.kind == "CX" for g in c.gates[c.tail_start:])


def test_restricted_program_matches_its_xprogram():
    # same distribution as the unrestricted compile of the equivalent X-program
    for seed in range(4):
        prog = random_restricted_program(ArchitectureParams.chain(3, 2), 0.6, rng_seed=seed)
        p = restricted_xprogram(prog)
        probs = probabilities(compile_restricted_mbqc(prog))
        assert np.allclose(probs, probabilities(compile_mbqc(p)), atol=1e-12)
        marginal = probs.reshape(-1, 1 << prog.n_app).sum(axis=0)
        direct = [direct_probability(p, x) for x in all_outcomes(prog.n_app)]
        assert np.allclose(marginal, direct, atol=1e-9)


def test_restricted_program_validation():
    with pytest.raises(ValueError):
        RestrictedProgram(3, np.zeros((3, 2)), np.zeros((3, 2)))


def test_noisy_restricted_limits_and_determinism():
    prog = random_restricted_program(ArchitectureParams(5), 0.3, rng_seed=1)
    assert build_noisy_restricted_mbqc(prog, ZERO_NOISE, rng_seed=7) == compile_restricted_mbqc(prog)
    a = build_noisy_restricted_mbqc(prog, rng_seed=7)
    assert a == build_noisy_restricted_mbqc(prog, rng_seed=7)
    assert {g.kind for g in _injected(a, compile_restricted_mbqc(prog))} <= PAULI_KINDS
    assert a.gates[a.tail_start:] == compile_restricted_mbqc(prog).gates[-(len(a) - a.tail_start):]


def test_link_waits_dominate_dephasing():
    prog = random_restricted_program(ArchitectureParams.chain(4, 2), 0.5, rng_seed=2)
    only = replace(ZERO_NOISE, rate_dephasing=DEFAULTS.rate_dephasing)
    n = prog.n_qubits
    runs = 4000
    z = sum(len(build_noisy_restricted_mbqc(prog, only, rng_seed=s)) for s in range(runs))
    z -= runs * len(compile_restricted_mbqc(prog))
    per_qubit = z / (runs * n)
    link = 2 * (1.5 + 2.25e-3) * 7.2e-3
    assert link == pytest.approx(0.0216, abs=2e-4)
    # small in-trap waits add a little on top of the two link waits
    assert abs(per_qubit - link) <= 3 * math.sqrt(link / (runs * n)) + 0.002


# -- monotonicity harness -----------------------------------------------------------------


def mean_abs_deviation(base: NoiseProfile, factor: float, instances, runs: int = 30) -> tuple[float, float]:
    """Mean |noisy - perfect| of the all-zero outcome over fixed instances and its error."""
    profile = scale_profile(scale_profile(base, "time", factor), "operation", factor)
    diffs = []
    for k, inst in enumerate(instances):
        perfect = probabilities(dqs.compile_dqs(inst))[0]
        for r in range(runs):
            noisy = probabilities(build_noisy_dqs(inst, profile, rng_seed=1000 * k + r))[0]
            diffs.append(abs(noisy - perfect))
    d = np.array(diffs)
    return float(d.mean()), float(d.std(ddof=1) / math.sqrt(d.size))


def test_noise_monotone_in_scale():
    instances = [dqs.random_instance(3, 3, s) for s in range(4)]
    base = scale_profile(scale_profile(DEFAULTS, "time", 200), "operation", 200)
    stats = [mean_abs_deviation(base, f, instances) for f in (0.0, 0.5, 1.0)]
    assert stats[0] == (0.0, 0.0)
    for (m0, s0), (m1, s1) in zip(stats, stats[1:]):
        assert m1 >= m0 - 3 * math.hypot(s0, s1)
    assert stats[2][0] > 0
