"""
Test the measurement models and resource formulas.
"""

# pylint: disable=no-self-use
# pylint: disable=invalid-name

import logging
import math
import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st
from trotex.core.evolution import Observable, StateVector
from trotex.core.exceptions import InvalidArgumentError
from trotex.core.measurement import (
    coherent_resource_report,
    hoeffding_samples,
    iqae_grover_calls,
    make_budget,
    per_node_delta,
    resource_report,
    samples_for_budget,
    shadows_samples,
    simulate_incoherent,
    simulate_noisy_eval,
)
from trotex.core.terms import PAULI_MATRICES, build_heisenberg_chain

Z_OBS = Observable(PAULI_MATRICES['Z'])
PLUS = StateVector(np.array([1, 1]) / math.sqrt(2))


class TestSampleCounts(object):
    """
    Test the closed form sample counts.
    """
    def test_hoeffding(self):
        """
        Test ceil(ln(2/delta) / (2 eps^2)).
        """
        assert hoeffding_samples(0.1, 0.05) == 185
        assert hoeffding_samples(1.0, 0.5) == 1

    @pytest.mark.parametrize("eps,delta", [
        (0.0, 0.1), (1.5, 0.1), (0.1, 0.0), (0.1, 1.0),
    ])
    def test_hoeffding_invalid(self, eps, delta):
        """
        Test that out of range arguments raise InvalidArgumentError.
        """
        with pytest.raises(InvalidArgumentError):
            hoeffding_samples(eps, delta)

    def test_iqae_and_shadows_invalid(self):
        """
        Test argument checks of the coherent and shadow counts.
        """
        with pytest.raises(InvalidArgumentError, match="eps_data"):
            iqae_grover_calls(1.0, 3, 0.05)
        with pytest.raises(InvalidArgumentError, match="m must be"):
            iqae_grover_calls(0.1, 0, 0.05)
        with pytest.raises(InvalidArgumentError):
            shadows_samples(0.1, 0.05, 0, 1.0)

    def test_shadows_zero_norm(self):
        """
        Test that a zero observable needs no snapshots.
        """
        assert shadows_samples(0.1, 0.05, 4, 0.0) == 0


class TestBudget(object):
    """
    Test the error budget.
    """
    def test_make_budget(self):
        """
        Test the split of the total error.
         - Half goes to the extrapolation.
         - The data share is divided by the amplification.
        """
        budget = make_budget(0.1, 2.5)
        assert budget.eps_ext == pytest.approx(0.05)
        assert budget.eps_data == pytest.approx(0.02)
        assert budget.to_json()["amplification"] == 2.5

    @pytest.mark.parametrize("eps,amplification", [
        (0.0, 2.0), (2.0, 2.0), (0.1, 0.5),
    ])
    def test_make_budget_invalid(self, eps, amplification):
        """
        Test that bad budgets raise InvalidArgumentError.
        """
        with pytest.raises(InvalidArgumentError):
            make_budget(eps, amplification)

    def test_samples_for_budget(self):
        """
        Test shots per node with a union bound over the nodes.
        """
        budget = make_budget(0.1, 2.5)
        assert per_node_delta(0.01, 4) == pytest.approx(0.0025)
        assert samples_for_budget(budget, 3) == 7997
        assert samples_for_budget(budget, 3) == \
            hoeffding_samples(0.02, 0.01 / 3)
        with pytest.raises(InvalidArgumentError):
            per_node_delta(0.01, 0)


class TestResourceReport(object):
    """
    Test the Trotter step accounting.
    """
    def test_resource_report(self):
        """
        Test incoherent accounting.
         - d_max is the deepest node, signs ignored.
         - c_trot is the total over repetitions.
        """
        report = resource_report([-21, 8, 5], 3)
        assert report.d_max == 21
        assert report.c_trot == 102
        assert report.per_node == ((21, 3), (8, 3), (5, 3))
        assert report.to_json()["per_node"] == [[21, 3], [8, 3], [5, 3]]

    def test_coherent_resource_report(self):
        """
        Test coherent accounting.
         - The deepest circuit repeats the deepest node per Grover call.
        """
        report = coherent_resource_report([21, 8, 5], 10)
        assert report.d_max == 210
        assert report.c_trot == 340

    @pytest.mark.parametrize("nodes,repetitions", [
        ([], 1), ([3, 0], 1), ([3], 0),
    ])
    def test_invalid(self, nodes, repetitions):
        """
        Test that empty or zero nodes and missing repetitions raise.
        """
        with pytest.raises(InvalidArgumentError):
            resource_report(nodes, repetitions)


class TestSimulateIncoherent(object):
    """
    Test simulated projective measurements.
    """
    def test_eigenstate(self):
        """
        Test that an eigenstate always gives its eigenvalue.
        """
        up = np.array([1.0, 0.0])
        assert simulate_incoherent(1.0, Z_OBS, up, 100, 0) == 1.0

    def test_superposition(self):
        """
        Test sampling of |+> in the Z basis.
         - The mean is within 4 standard deviations of 0.
         - The same seed gives the same mean.
        """
        first = simulate_incoherent(0.0, Z_OBS, PLUS, 10000, 7)
        assert abs(first) <= 4.0 / math.sqrt(10000)
        assert simulate_incoherent(0.0, Z_OBS, PLUS, 10000, 7) == first

    def test_unbiased(self):
        """
        Test that 10^5 shots estimate a four outcome expectation value.
         - Outcomes 1.5, -0.5, -1.5 and 0.5 are equally likely, mean 0 and
           variance 1.25, in a basis rotated by a chain evolution.
         - Every seed is within 5 standard errors of the exact value.
         - The mean over 10 seeds is within 5 standard errors of it.
        """
        rotation = scipy.linalg.expm(
            -1j * build_heisenberg_chain(2, seed=3).hamiltonian())
        obs = Observable(rotation @ np.diag([1.5, -0.5, -1.5, 0.5]) @
                         rotation.conj().T)
        state = rotation @ np.full(4, 0.5)
        exact = obs.expectation(state)
        assert exact == pytest.approx(0.0, abs=1e-12)
        shots = 10 ** 5
        error = math.sqrt(1.25 / shots)
        deviations = [simulate_incoherent(exact, obs, state, shots, seed)
                      - exact for seed in range(10)]
        assert max(abs(deviation) for deviation in deviations) <= 5 * error
        assert abs(np.mean(deviations)) <= 5 * error / math.sqrt(10)

    def test_mean_mismatch_is_logged(self, caplog):
        """
        Test that a wrong exact value is reported.
        """
        with caplog.at_level(logging.WARNING, logger='trotex'):
            simulate_incoherent(0.5, Z_OBS, PLUS, 10, 0)
        assert "exact value is" in caplog.text

    def test_no_shots(self):
        """
        Test that N < 1 raises InvalidArgumentError.
        """
        with pytest.raises(InvalidArgumentError):
            simulate_incoherent(0.0, Z_OBS, PLUS, 0, 0)


class TestSimulateNoisyEval(object):
    """
    Test the bounded noise oracle.
    """
    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=-1, max_value=1),
           st.floats(min_value=0, max_value=0.5),
           st.integers(min_value=0, max_value=2 ** 32))
    def test_noise_is_bounded(self, exact, eps, seed):
        """
        Test that estimates stay within eps_data of the value.
        """
        estimate = simulate_noisy_eval(exact, eps, seed)
        assert abs(estimate - exact) <= eps * (1 + 1e-12) + 1e-15

    def test_adversarial(self):
        """
        Test adversarial noise.
         - The full eps_data is added in the direction of the sign.
        """
        assert simulate_noisy_eval(0.5, 0.1, 0, adversarial_sign=-3.0) == \
            pytest.approx(0.4)
        assert simulate_noisy_eval(0.5, 0.1, 0, adversarial_sign=1) == \
            pytest.approx(0.6)

    def test_noise_free(self):
        """
        Test that eps_data = 0 gives the exact value and negative eps raises.
        """
        assert simulate_noisy_eval(0.25, 0.0, 0) == 0.25
        with pytest.raises(InvalidArgumentError):
            simulate_noisy_eval(0.25, -0.1, 0)
