"""Tests for the dense exact-fidelity oracle.

Includes the cross-checks between the oracle and the estimators:
exhaustive enumeration of a relevance distribution must reproduce the
oracle's value, and the Hofmann interval must contain the true F_av for
random channels.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gate_fidelity_lab.channels import (
    compose,
    dephasing,
    depolarizing,
    identity_channel,
    unitary_channel,
)
from gate_fidelity_lab.errors import DimensionMismatchError, InfeasibleSizeError
from gate_fidelity_lab.estimators import SAMPLING_EXHAUSTIVE, estimate, relevance_distributions
from gate_fidelity_lab.factory import random_channel, random_unitary
from gate_fidelity_lab.gates import named_gate
from gate_fidelity_lab.mub import build_mub_family
from gate_fidelity_lab.oracle import (
    entanglement_fidelity_kraus,
    exact_classical_fidelity,
    exact_entanglement_fidelity,
    exact_fidelities,
    exact_moments,
    exact_two_design_favg,
    favg_from_fe,
    fe_from_favg,
)


@st.composite
def noisy_gates(draw, max_qubits=2):
    """(U, D) with D a random channel applied after U."""
    n = draw(st.integers(1, max_qubits))
    rng = np.random.default_rng(draw(st.integers(0, 2 ** 32 - 1)))
    strength = draw(st.floats(0.0, 1.0))
    kraus = draw(st.integers(1, 3))
    u = random_unitary(n, rng)
    return u, compose(unitary_channel(u), random_channel(n, rng, kraus=kraus, strength=strength))


class TestClosedForms:

    def test_ideal_gate(self):
        u = named_gate("T", 2)
        channel = unitary_channel(u)
        family = build_mub_family(2)
        assert exact_classical_fidelity(u, channel, family.matrices[3]) == pytest.approx(1.0)
        assert exact_two_design_favg(u, channel) == pytest.approx(1.0)
        assert exact_entanglement_fidelity(u, channel) == pytest.approx(1.0)

    def test_depolarizing_classical(self):
        assert exact_classical_fidelity(np.eye(2), depolarizing(1, 0.2), np.eye(2)) == pytest.approx(0.9)

    def test_dephasing_is_invisible_to_its_basis(self):
        assert exact_classical_fidelity(np.eye(4), dephasing(2, 0.7), np.eye(4)) == pytest.approx(1.0)

    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("p", [0.0, 0.2, 1.0])
    def test_depolarizing_average(self, n, p):
        d = 2 ** n
        assert exact_two_design_favg(np.eye(d), depolarizing(n, p)) == pytest.approx(1 - p * (1 - 1 / d))

    def test_depolarizing_entanglement(self):
        f_e = exact_entanglement_fidelity(np.eye(2), depolarizing(1, 0.2))
        assert f_e == pytest.approx(0.85)
        assert favg_from_fe(0.85, 2) == pytest.approx(0.9)

    def test_conversion_roundtrip(self):
        assert fe_from_favg(favg_from_fe(0.7, 8), 8) == pytest.approx(0.7)

    def test_state_sequence_basis(self):
        family = build_mub_family(1)
        u = named_gate("H", 1)
        channel = compose(unitary_channel(u), depolarizing(1, 0.4))
        from_states = exact_classical_fidelity(u, channel, family.basis(1))
        assert from_states == pytest.approx(exact_classical_fidelity(u, channel, family.matrices[1]))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            exact_two_design_favg(np.eye(2), identity_channel(2))

    def test_entanglement_cap(self):
        with pytest.raises(InfeasibleSizeError):
            exact_entanglement_fidelity(np.eye(128), identity_channel(7))


class TestAgreement:

    @settings(max_examples=100)
    @given(noisy_gates(max_qubits=3))
    def test_two_design_matches_entanglement_fidelity(self, pair):
        u, channel = pair
        d = u.shape[0]
        f_e = exact_entanglement_fidelity(u, channel)
        assert exact_two_design_favg(u, channel) == pytest.approx((d * f_e + 1) / (d + 1), abs=1e-9)

    @settings(max_examples=100)
    @given(noisy_gates(max_qubits=3))
    def test_pauli_sum_matches_kraus_traces(self, pair):
        u, channel = pair
        assert exact_entanglement_fidelity(u, channel) == pytest.approx(
            entanglement_fidelity_kraus(u, channel), abs=1e-9,
        )

    @settings(max_examples=60)
    @given(noisy_gates())
    def test_bounds_hold(self, pair):
        u, channel = pair
        values = exact_fidelities(u, channel)
        f1, f2, f_e = values["f1"], values["f2"], values["f_e"]
        assert f1 + f2 - 1 - 1e-12 <= f_e <= min(f1, f2) + 1e-12
        assert values["lower"] - 1e-12 <= values["f_av"] <= values["upper"] + 1e-12

    def test_exact_fidelities_keys(self):
        u = named_gate("CNOT", 2)
        values = exact_fidelities(u, compose(unitary_channel(u), depolarizing(2, 0.1)))
        assert set(values) == {"f_e", "f_av", "f_av_two_design", "f1", "f2", "lower", "upper"}
        assert values["f_av"] == pytest.approx(values["f_av_two_design"])


class TestMoments:

    @pytest.mark.parametrize("protocol", ["A", "B", "C"])
    def test_ideal_gate(self, protocol):
        u = named_gate("T", 1)
        for dist in relevance_distributions(protocol, u):
            mean, variance = exact_moments(dist, unitary_channel(u))
            assert mean == pytest.approx(1.0)
            assert variance == pytest.approx(0.0, abs=1e-12)

    def test_classical_mean(self):
        dist = relevance_distributions("C", np.eye(2))[0]
        mean, _ = exact_moments(dist, depolarizing(1, 0.2))
        assert mean == pytest.approx(0.9)

    @settings(max_examples=100)
    @given(noisy_gates())
    def test_variance_is_at_most_one(self, pair):
        u, channel = pair
        for protocol in ("A", "B", "C"):
            for dist in relevance_distributions(protocol, u):
                _, variance = exact_moments(dist, channel)
                assert variance <= 1 + 1e-9

    def test_process_moments_cap(self):
        u = np.eye(8)
        dist = relevance_distributions("A", u)[0]
        with pytest.raises(InfeasibleSizeError):
            exact_moments(dist, identity_channel(3))


class TestExhaustiveEqualsOracle:

    @settings(max_examples=100)
    @given(noisy_gates())
    def test_all_protocols(self, pair):
        u, channel = pair
        exact = exact_fidelities(u, channel)
        a = estimate("A", u, channel, 0.1, 0.1, rng=0, sampling=SAMPLING_EXHAUSTIVE)
        b = estimate("B", u, channel, 0.1, 0.1, rng=0, sampling=SAMPLING_EXHAUSTIVE)
        c = estimate("C", u, channel, 0.1, 0.1, rng=0, sampling=SAMPLING_EXHAUSTIVE)
        assert a.f_e == pytest.approx(exact["f_e"], abs=1e-9)
        assert b.f_av == pytest.approx(exact["f_av"], abs=1e-9)
        assert c.f1 == pytest.approx(exact["f1"], abs=1e-9)
        assert c.f2 == pytest.approx(exact["f2"], abs=1e-9)
        assert c.lower == pytest.approx(exact["lower"], abs=1e-9)
        assert c.upper == pytest.approx(exact["upper"], abs=1e-9)

    def test_moments_match_exhaustive_mean(self):
        u = named_gate("CNOT", 2)
        channel = compose(unitary_channel(u), depolarizing(2, 0.3))
        dist = relevance_distributions("B", u)[0]
        mean, _ = exact_moments(dist, channel)
        report = estimate("B", u, channel, 0.1, 0.1, rng=0, sampling=SAMPLING_EXHAUSTIVE, distributions=[dist])
        assert report.f_av == pytest.approx(mean, abs=1e-12)
