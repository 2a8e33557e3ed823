"""Tests for relevance distributions, sample sizing, shot simulation and the estimators.

The statistical tests run seeded repetitions and check the frequency of
success against the guarantee (|error| <= eps with probability 1 - delta),
so they are deterministic for a given numpy version.
"""

import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gate_fidelity_lab.channels import (
    compose,
    depolarizing,
    identity_channel,
    unitary_channel,
)
from gate_fidelity_lab.errors import DimensionMismatchError, InvalidInputError
from gate_fidelity_lab.estimators import (
    SHOTS_INFINITE,
    chebyshev_L,
    draw_plan,
    estimate,
    hoeffding_shots,
    hofmann_bounds,
    relevance_classical,
    relevance_distributions,
    relevance_process,
    relevance_two_design,
    simulate_shot,
    simulate_shots,
)
from gate_fidelity_lab.factory import random_channel, random_clifford_circuit, random_unitary
from gate_fidelity_lab.gates import named_gate
from gate_fidelity_lab.mub import build_mub_family
from gate_fidelity_lab.oracle import exact_fidelities
from gate_fidelity_lab.pauli import PauliString
from gate_fidelity_lab.rng import RandomStreams
from gate_fidelity_lab.states import StateVector

IDENTITY_1 = np.eye(2, dtype=complex)


def _noisy(unitary, noise):
    return compose(unitary_channel(unitary), noise)


# ---------------------------------------------------------------------------
# Relevance distributions
# ---------------------------------------------------------------------------

class TestRelevanceClassical:

    def test_identity_canonical_basis(self):
        dist = relevance_classical(IDENTITY_1, np.eye(2))
        assert len(dist) == 4
        assert dist.event_space_size == 8
        np.testing.assert_allclose(dist.probabilities, 0.25)
        assert {dist.measurement(e).label for e in range(4)} == {"1", "Z"}
        assert list(dist.chi) == pytest.approx([1, 1, 1, -1])

    def test_labels_name_the_basis(self):
        family = build_mub_family(1)
        dist = relevance_classical(IDENTITY_1, family.matrices[1], "C2", family.labels[1])
        assert dist.protocol == "C2"
        assert dist.input_labels == ("X[0]", "X[1]")

    def test_accepts_state_sequence(self):
        family = build_mub_family(2)
        u = named_gate("CNOT", 2)
        from_grid = relevance_classical(u, family.matrices[1])
        from_states = relevance_classical(u, family.basis(1))
        np.testing.assert_allclose(from_grid.probabilities, from_states.probabilities)

    def test_rejects_non_unitary(self):
        with pytest.raises(InvalidInputError):
            relevance_classical([[1, 1], [0, 1]], np.eye(2))

    def test_rejects_basis_of_wrong_size(self):
        with pytest.raises(DimensionMismatchError):
            relevance_classical(IDENTITY_1, np.eye(4))

    def test_input_state_accessor(self):
        dist = relevance_classical(IDENTITY_1, np.eye(2))
        assert dist.input_state(1) == StateVector.basis_state(1, 1)
        with pytest.raises(InvalidInputError):
            dist.input_operator(0)


class TestRelevanceTwoDesign:

    def test_identity_single_qubit(self):
        dist = relevance_two_design(IDENTITY_1)
        assert len(dist) == 12
        assert dist.event_space_size == 24
        np.testing.assert_allclose(dist.probabilities, 1 / 12)
        assert dist.support_per_input() == {i: 2 for i in range(6)}

    def test_family_size_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            relevance_two_design(IDENTITY_1, build_mub_family(2))


class TestRelevanceProcess:

    def test_identity_single_qubit(self):
        dist = relevance_process(IDENTITY_1)
        assert len(dist) == 4
        assert dist.event_space_size == 16
        assert list(dist.input_index) == list(dist.pauli_index)
        np.testing.assert_allclose(dist.probabilities, 0.25)

    def test_hadamard(self):
        dist = relevance_process(named_gate("H", 1))
        pairs = {
            (dist.input_operator(int(i)).label, dist.measurement(e).label): float(chi)
            for e, (i, chi) in enumerate(zip(dist.input_index, dist.chi))
        }
        assert pairs == pytest.approx({("1", "1"): 1.0, ("X", "Z"): 1.0, ("Z", "X"): 1.0, ("Y", "Y"): -1.0})

    def test_operator_inputs(self):
        dist = relevance_process(IDENTITY_1)
        assert dist.operator_inputs
        with pytest.raises(InvalidInputError):
            dist.input_state(0)


@st.composite
def unitaries(draw, max_qubits=3):
    n = draw(st.integers(1, max_qubits))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_unitary(n, np.random.default_rng(seed))


class TestNormalization:

    @settings(max_examples=200)
    @given(unitaries())
    def test_classical_and_two_design(self, u):
        for dist in relevance_distributions("C", u) + relevance_distributions("B", u):
            assert dist.total() == pytest.approx(1.0, abs=1e-9)
            assert np.all(dist.probabilities > 0)

    @settings(max_examples=200)
    @given(unitaries(max_qubits=2))
    def test_process(self, u):
        assert relevance_process(u).total() == pytest.approx(1.0, abs=1e-9)

    @given(unitaries())
    def test_classical_bases_other_than_default(self, u):
        n = int(np.log2(u.shape[0]))
        family = build_mub_family(n)
        dists = relevance_distributions("C", u, family=family, bases=(family.size - 1, 1))
        assert [d.protocol for d in dists] == ["C1", "C2"]
        assert all(d.total() == pytest.approx(1.0, abs=1e-9) for d in dists)


def _clifford_unitaries():
    rng = np.random.default_rng(77)
    cases = [("H", named_gate("H", 1)), ("S", named_gate("S", 2)), ("CNOT", named_gate("CNOT", 2))]
    for index in range(20):
        n = 1 + index % 3
        cases.append((f"circuit-{index}", random_clifford_circuit(n, rng)))
    return cases


CLIFFORD_CASES = _clifford_unitaries()


class TestCliffordSupport:

    @pytest.mark.parametrize("name, u", CLIFFORD_CASES, ids=[c[0] for c in CLIFFORD_CASES])
    def test_d_uniform_entries_per_input(self, name, u):
        dim = u.shape[0]
        family = build_mub_family(int(np.log2(dim)))
        two_design = relevance_two_design(u, family)
        assert set(two_design.support_per_input().values()) == {dim}
        assert len(two_design.support_per_input()) == dim * (dim + 1)
        np.testing.assert_allclose(two_design.probabilities, 1 / (dim * dim * (dim + 1)))
        for dist in relevance_distributions("C", u, family=family):
            assert set(dist.support_per_input().values()) == {dim}
            np.testing.assert_allclose(dist.probabilities, 1 / dim ** 2)
        np.testing.assert_allclose(np.abs(two_design.chi), 1.0)

    def test_process_has_one_entry_per_input(self):
        dist = relevance_process(named_gate("CNOT", 2))
        assert dist.support_per_input() == {i: 1 for i in range(16)}

    def test_shots_per_setting_do_not_depend_on_n(self):
        L, eps, delta = 500, 0.1, 0.1
        counts = set()
        for name, u in CLIFFORD_CASES:
            dist = relevance_two_design(u)
            counts |= set(draw_plan(dist, eps, delta, RandomStreams(1), L=L).shots.tolist())
        assert counts == {hoeffding_shots(1.0, L, eps, delta)}


# ---------------------------------------------------------------------------
# Sample sizing
# ---------------------------------------------------------------------------

class TestChebyshev:

    @pytest.mark.parametrize("eps, delta, expected", [
        (0.05, 0.01, 40000),
        (1.0, 1 - 1e-9, 2),
        (0.1, 0.1, 1000),
        (0.1, 0.05, 2000),
    ])
    def test_examples(self, eps, delta, expected):
        assert chebyshev_L(eps, delta) == expected

    @pytest.mark.parametrize("eps, delta", [(0, 0.1), (1.5, 0.1), (0.1, 0), (0.1, 1.0), (-0.1, 0.5)])
    def test_rejects_out_of_range(self, eps, delta):
        with pytest.raises(InvalidInputError):
            chebyshev_L(eps, delta)


class TestHoeffding:

    def test_examples(self):
        assert hoeffding_shots(1.0, 1000, 0.1, 0.1) == 1
        assert hoeffding_shots(0.1, 1000, 0.1, 0.1) == 60

    def test_negative_chi(self):
        assert hoeffding_shots(-0.1, 1000, 0.1, 0.1) == 60

    def test_halving_chi_quadruples(self):
        big = 2 * math.log(2 / 0.1) / (10 * 0.01 * 0.2 ** 2)
        assert hoeffding_shots(0.2, 10, 0.1, 0.1) == math.ceil(big)
        assert hoeffding_shots(0.1, 10, 0.1, 0.1) == math.ceil(4 * big)

    @pytest.mark.parametrize("chi", [0.0, 1.5])
    def test_rejects_bad_chi(self, chi):
        with pytest.raises(InvalidInputError):
            hoeffding_shots(chi, 1000, 0.1, 0.1)

    def test_rejects_bad_L(self):
        with pytest.raises(InvalidInputError):
            hoeffding_shots(1.0, 0, 0.1, 0.1)

    def test_overflow(self):
        with pytest.raises(InvalidInputError, match="64-bit"):
            hoeffding_shots(1e-12, 1, 0.001, 0.1)

    def test_large_counts_are_never_rounded_down(self):
        required = 2.0 * math.log(2.0 / 0.1) / (1 * 0.1 ** 2 * 1e-6 ** 2)
        shots = hoeffding_shots(1e-6, 1, 0.1, 0.1)
        assert required <= shots < required + 1


# ---------------------------------------------------------------------------
# Plans
# ---------------------------------------------------------------------------

class TestDrawPlan:

    def test_single_entry_repeats(self):
        dist = relevance_process(IDENTITY_1)
        single = type(dist)(
            protocol="A", n_qubits=1, event_space_size=16, input_labels=dist.input_labels,
            input_states=None, input_index=dist.input_index[:1], pauli_index=dist.pauli_index[:1],
            probabilities=np.array([1.0]), chi=dist.chi[:1],
        )
        plan = draw_plan(single, 0.1, 0.1, RandomStreams(0))
        assert plan.L == 1000
        assert set(plan.entries.tolist()) == {0}

    def test_small_chi_plan_keeps_the_hoeffding_count(self):
        dist = relevance_process(IDENTITY_1)
        single = type(dist)(
            protocol="A", n_qubits=1, event_space_size=16, input_labels=dist.input_labels,
            input_states=None, input_index=dist.input_index[:1], pauli_index=dist.pauli_index[:1],
            probabilities=np.array([1.0]), chi=np.array([1e-6]),
        )
        plan = draw_plan(single, 0.1, 0.1, RandomStreams(0), L=1)
        assert int(plan.shots[0]) == hoeffding_shots(1e-6, 1, 0.1, 0.1)

    def test_records(self):
        dist = relevance_two_design(named_gate("T", 1))
        plan = draw_plan(dist, 0.1, 0.1, RandomStreams(5))
        records = list(plan.records())
        assert len(records) == plan.L == 1000
        for l, i, k, chi, shots in records:
            assert shots == hoeffding_shots(chi, plan.L, 0.1, 0.1)
            assert dist.chi[plan.entries[l]] == chi
        assert plan.total_shots == sum(r[4] for r in records)

    def test_same_seed_same_plan(self):
        dist = relevance_two_design(named_gate("T", 2))
        a = draw_plan(dist, 0.1, 0.1, 3)
        b = draw_plan(dist, 0.1, 0.1, RandomStreams(3))
        np.testing.assert_array_equal(a.entries, b.entries)

    def test_plan_does_not_depend_on_entry_order(self):
        dist = relevance_two_design(named_gate("T", 1))
        order = np.random.default_rng(4).permutation(len(dist))
        shuffled = type(dist)(
            protocol=dist.protocol, n_qubits=1, event_space_size=dist.event_space_size,
            input_labels=dist.input_labels, input_states=dist.input_states,
            input_index=dist.input_index[order], pauli_index=dist.pauli_index[order],
            probabilities=dist.probabilities[order], chi=dist.chi[order],
        )
        a = draw_plan(dist, 0.2, 0.2, RandomStreams(8))
        b = draw_plan(shuffled, 0.2, 0.2, RandomStreams(8))
        np.testing.assert_array_equal(a.input_index, b.input_index)
        np.testing.assert_array_equal(a.pauli_index, b.pauli_index)
        np.testing.assert_array_equal(a.shots, b.shots)

    def test_accepts_generator(self, rng):
        plan = draw_plan(relevance_process(IDENTITY_1), 0.5, 0.5, rng, L=7)
        assert plan.L == 7

    def test_frequencies_follow_probabilities(self):
        dist = relevance_two_design(named_gate("T", 1))
        plan = draw_plan(dist, 0.1, 0.1, RandomStreams(11), L=20000)
        observed = np.bincount(plan.entries, minlength=len(dist)) / plan.L
        sigma = np.sqrt(dist.probabilities * (1 - dist.probabilities) / plan.L)
        assert np.all(np.abs(observed - dist.probabilities) <= 5 * sigma)


# ---------------------------------------------------------------------------
# Shots
# ---------------------------------------------------------------------------

class TestShots:

    def test_identity_z_on_zero_is_deterministic(self, rng):
        z = PauliString.parse("Z")
        zero = StateVector.basis_state(1, 0)
        assert all(simulate_shot(identity_channel(1), zero, z, rng) == 1 for _ in range(100))

    def test_identity_x_on_zero_is_fair(self, rng):
        x = PauliString.parse("X")
        zero = StateVector.basis_state(1, 0)
        total = sum(simulate_shot(identity_channel(1), zero, x, rng) for _ in range(4000))
        assert abs(total) <= 4 * math.sqrt(4000)

    def test_depolarized_mean(self, rng):
        total = simulate_shots(depolarizing(1, 0.2), StateVector.basis_state(1, 0), PauliString.parse("Z"),
                               100_000, rng)
        assert total / 100_000 == pytest.approx(0.8, abs=0.012)

    def test_identity_measurement(self, rng):
        assert simulate_shots(depolarizing(1, 0.5), StateVector.basis_state(1, 0),
                              PauliString.identity(1), 17, rng) == 17

    def test_rejects_zero_shots(self, rng):
        with pytest.raises(InvalidInputError):
            simulate_shots(identity_channel(1), StateVector.basis_state(1, 0), PauliString.parse("Z"), 0, rng)


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------

class TestHofmannBounds:

    @pytest.mark.parametrize("f1, f2, dim, expected", [
        (1.0, 1.0, 4, (1.0, 1.0)),
        (0.9, 0.9, 2, (0.8666666666666667, 0.9333333333333333)),
        (0.4, 0.5, 2, (1 / 3, 0.6)),
    ])
    def test_examples(self, f1, f2, dim, expected):
        assert hofmann_bounds(f1, f2, dim) == pytest.approx(expected)

    def test_clips_and_warns(self, caplog):
        with caplog.at_level(logging.WARNING, logger="gate_fidelity_lab.estimators"):
            lower, upper = hofmann_bounds(1.05, 0.9, 2)
        assert (lower, upper) == pytest.approx(hofmann_bounds(1.0, 0.9, 2))
        assert "outside [0, 1]" in caplog.text

    @given(st.floats(0, 1), st.floats(0, 1), st.integers(1, 6))
    def test_lower_never_exceeds_upper(self, f1, f2, n):
        lower, upper = hofmann_bounds(f1, f2, 2 ** n)
        assert lower <= upper


# ---------------------------------------------------------------------------
# End-to-end estimation
# ---------------------------------------------------------------------------

class TestEstimate:

    @pytest.mark.parametrize("protocol", ["A", "B", "C"])
    def test_ideal_clifford_gate_gives_one(self, protocol):
        u = named_gate("H", 1)
        report = estimate(protocol, u, unitary_channel(u), 0.1, 0.1, rng=7)
        assert report.f_av == pytest.approx(1.0, abs=1e-9)
        assert all(np.allclose(run.x_values, 1.0) for run in report.runs)

    @pytest.mark.parametrize("protocol", ["A", "B", "C"])
    def test_ideal_gate_infinite_shots_gives_one(self, protocol):
        u = named_gate("T", 2)
        report = estimate(protocol, u, unitary_channel(u), 0.2, 0.2, rng=1, shots=SHOTS_INFINITE)
        assert report.f_av == pytest.approx(1.0, abs=1e-9)

    def test_protocol_fields(self):
        u = named_gate("H", 1)
        channel = _noisy(u, depolarizing(1, 0.2))
        a = estimate("A", u, channel, 0.2, 0.2, rng=3)
        assert a.f_e is not None and a.f1 is None
        assert a.f_av == pytest.approx((2 * a.f_e + 1) / 3)
        c = estimate("C", u, channel, 0.2, 0.2, rng=3)
        assert [run.tag for run in c.runs] == ["C1", "C2"]
        assert c.lower <= c.f_av <= c.upper
        assert c.L == 2 * 125
        assert c.total_shots == sum(run.plan.total_shots for run in c.runs)
        assert "f1_clamped" in c.metadata and "f_av_out_of_range" in c.metadata

    def test_thread_count_does_not_change_results(self):
        u = named_gate("CNOT", 2)
        channel = _noisy(u, depolarizing(2, 0.1))
        for protocol in ("A", "B", "C"):
            one = estimate(protocol, u, channel, 0.2, 0.2, rng=9, threads=1)
            many = estimate(protocol, u, channel, 0.2, 0.2, rng=9, threads=8)
            for a, b in zip(one.runs, many.runs):
                np.testing.assert_array_equal(a.x_values, b.x_values)
            assert one.f_av == many.f_av

    def test_outcomes_match_simulate_shots(self):
        u = named_gate("T", 1)
        channel = _noisy(u, depolarizing(1, 0.3))
        streams = RandomStreams(6)
        run = estimate("B", u, channel, 0.2, 0.2, rng=streams).runs[0]
        dist = relevance_two_design(u)
        for l, i, k, chi, shots in run.plan.records():
            w = PauliString.from_index(1, k)
            total = simulate_shots(channel, dist.input_state(i), w, shots, streams.shots("B", l))
            assert run.x_values[l] == pytest.approx(total / (shots * chi), abs=1e-12)

    def test_rejects_negative_seed(self):
        u = named_gate("H", 1)
        with pytest.raises(InvalidInputError, match="non-negative"):
            estimate("B", u, unitary_channel(u), 0.2, 0.2, rng=-1)

    def test_seed_changes_results(self):
        u = named_gate("T", 1)
        channel = _noisy(u, depolarizing(1, 0.3))
        assert estimate("B", u, channel, 0.2, 0.2, rng=1).f_av != estimate("B", u, channel, 0.2, 0.2, rng=2).f_av

    def test_exhaustive_ignores_shots_mode(self):
        u = named_gate("H", 1)
        report = estimate("B", u, _noisy(u, depolarizing(1, 0.2)), 0.1, 0.1, rng=0, sampling="exhaustive")
        assert report.shots_mode == SHOTS_INFINITE
        assert report.total_shots == 0
        assert report.f_av == pytest.approx(0.9, abs=1e-12)

    def test_unknown_protocol(self):
        with pytest.raises(InvalidInputError, match="Unknown protocol"):
            estimate("D", IDENTITY_1, identity_channel(1), 0.1, 0.1, rng=0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            estimate("B", IDENTITY_1, identity_channel(2), 0.1, 0.1, rng=0)

    @pytest.mark.parametrize("kwargs", [{"shots": "some"}, {"sampling": "grid"}])
    def test_unknown_modes(self, kwargs):
        with pytest.raises(InvalidInputError):
            estimate("B", IDENTITY_1, identity_channel(1), 0.1, 0.1, rng=0, **kwargs)


class TestStatisticalGuarantee:

    @pytest.mark.parametrize("n", [1, 2])
    def test_two_design_accuracy(self, n):
        u = np.eye(2 ** n)
        channel = depolarizing(n, 0.2)
        exact = 1 - 0.2 * (1 - 1 / 2 ** n)
        dists = relevance_distributions("B", u)
        hits = 0
        for seed in range(50):
            report = estimate("B", u, channel, 0.1, 0.1, rng=seed, distributions=dists)
            hits += abs(report.f_av - exact) <= 0.1
        assert hits >= 45

    def test_bounds_bracket_exact_fidelity(self):
        rng = np.random.default_rng(2024)
        family = build_mub_family(2)
        widened = exact_hits = 0
        for seed in range(25):
            u = random_unitary(2, rng)
            channel = _noisy(u, random_channel(2, rng, kraus=2, strength=0.15))
            exact = exact_fidelities(u, channel, family=family)
            report = estimate("C", u, channel, 0.1, 0.1, rng=seed, family=family)
            widened += report.lower - 0.2 <= exact["f_av"] <= report.upper + 0.2
            exact_hits += exact["lower"] - 1e-12 <= exact["f_av"] <= exact["upper"] + 1e-12
        assert widened >= 22
        assert exact_hits == 25
