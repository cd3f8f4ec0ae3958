"""
Test the term algebra.
"""

# pylint: disable=no-self-use
# pylint: disable=invalid-name

import functools
import itertools
import math
import operator
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from trotex.core.exceptions import InvalidArgumentError, ResourceLimitError
from trotex.core.terms import (
    PAULI_MATRICES,
    PauliString,
    SymmetryProjector,
    TermSum,
    alpha_comm,
    build_heisenberg_chain,
    lambda_param,
    lambda_table,
    nested_commutator,
    project_terms,
    spectral_norm,
    total_z_projector,
)

# p, sigma, m, K
LAMBDA_ARGS = [
    (1, 1, 2, 3),
    (2, 2, 2, 2),
    (2, 2, 3, 3),
    (4, 2, 2, 2),
]

X = PAULI_MATRICES['X']
Y = PAULI_MATRICES['Y']
Z = PAULI_MATRICES['Z']


def x_plus_z():
    return TermSum([PauliString('X'), PauliString('Z')])


SPECTRAL_NORM_DATA = [
    # Hermitian
    (X + Z, math.sqrt(2)),
    # Anti-Hermitian commutator [X, Z] = -2iY
    (X @ Z - Z @ X, 2.0),
    # Neither, goes through the SVD
    (np.array([[0, 3], [0, 0]], dtype=complex), 3.0),
    # Empty
    (np.zeros((0, 0)), 0.0),
]


class TestSpectralNorm(object):
    """
    Test the spectral_norm function.
    """
    @pytest.mark.parametrize("matrix,expected", SPECTRAL_NORM_DATA)
    def test_spectral_norm(self, matrix, expected):
        """
        Test spectral norms of Hermitian, anti-Hermitian and other matrices.
        """
        assert spectral_norm(matrix) == pytest.approx(expected)

    def test_not_square(self):
        """
        Test that a non-square matrix raises InvalidArgumentError.
        """
        with pytest.raises(InvalidArgumentError, match="square matrix"):
            spectral_norm(np.ones((2, 3)))


class TestPauliString(object):
    """
    Test functionality of PauliString.
    """
    def test_dense(self):
        """
        Test dense conversion.
         - Axes are upper cased.
         - The first axis acts on the most significant qubit.
         - The coefficient scales the matrix.
        """
        pauli = PauliString('xz', -0.5)
        assert pauli.axes == 'XZ'
        assert pauli.n_qubits == 2
        assert np.allclose(pauli.to_dense(), -0.5 * np.kron(X, Z))
        assert pauli.to_json() == {"pauli": "XZ", "coeff": -0.5}

    @pytest.mark.parametrize("axes,coefficient", [
        ('', 1.0), ('XA', 1.0), ('X', math.nan), ('X', 1j), ('X', math.inf),
    ])
    def test_invalid(self, axes, coefficient):
        """
        Test that bad axes or coefficients raise InvalidArgumentError.
        """
        with pytest.raises(InvalidArgumentError):
            PauliString(axes, coefficient)


class TestTermSum(object):
    """
    Test functionality of TermSum.
    """
    def test_basic_properties(self):
        """
        Test a sum of two Pauli terms.
         - Dimension and term count are inferred.
         - The dense Hamiltonian is the sum of the terms.
         - The norm sum is Lambda.
        """
        terms = x_plus_z()
        assert terms.dimension == 2
        assert terms.gamma_count == len(terms) == 2
        assert np.allclose(terms.hamiltonian(), X + Z)
        assert terms.norms() == pytest.approx((1.0, 1.0))
        assert terms.norm_sum() == pytest.approx(2.0)

    def test_mixed_terms(self):
        """
        Test mixing Pauli strings and dense matrices.
        """
        terms = TermSum([PauliString('X'), 2.0 * Z])
        assert np.allclose(terms.dense(1), 2.0 * Z)
        assert terms.norm_sum() == pytest.approx(3.0)

    def test_exponential(self):
        """
        Test term exponentials.
         - exp(-i tau X) equals cos(tau) I - i sin(tau) X.
         - The same exponential is returned from the cache.
         - Cached matrices are read only.
        """
        terms = x_plus_z()
        tau = 0.3
        expected = math.cos(tau) * np.eye(2) - 1j * math.sin(tau) * X
        first = terms.exponential(0, tau)
        assert np.allclose(first, expected)
        assert terms.exponential(0, tau) is first
        with pytest.raises(ValueError):
            first[0, 0] = 0

    @pytest.mark.parametrize("terms,message", [
        ([], "at least one term"),
        ([PauliString('X'), PauliString('XX')], "acts on 2 qubits"),
        ([np.eye(2), np.eye(4)], "has shape"),
        ([np.array([[0, 1], [0, 0]])], "not Hermitian"),
    ])
    def test_invalid(self, terms, message):
        """
        Test that bad term lists raise InvalidArgumentError.
        """
        with pytest.raises(InvalidArgumentError, match=message):
            TermSum(terms)

    def test_json(self):
        """
        Test the JSON form.
         - Pauli and dense terms survive a round trip.
         - A malformed document raises InvalidArgumentError.
        """
        terms = TermSum([PauliString('XY', 0.5), np.kron(Z, Y)])
        again = TermSum.from_json(terms.to_json())
        assert again.terms[0] == PauliString('XY', 0.5)
        assert np.allclose(again.hamiltonian(), terms.hamiltonian())
        with pytest.raises(InvalidArgumentError, match="Malformed"):
            TermSum.from_json({"terms": []})


class TestHeisenbergChain(object):
    """
    Test build_heisenberg_chain.
    """
    def test_structure(self):
        """
        Test the chain layout.
         - There are 4L - 3 terms on L qubits.
         - Coupling terms have coefficient 1, field terms lie in [-1, 1].
         - The same seed gives the same fields.
        """
        chain = build_heisenberg_chain(4, seed=11)
        assert chain.gamma_count == 13
        assert chain.n_qubits == 4
        assert [term.axes for term in chain.terms[:3]] == \
            ['XXII', 'IXXI', 'IIXX']
        assert all(term.coefficient == 1.0 for term in chain.terms[:9])
        fields = [term.coefficient for term in chain.terms[9:]]
        assert all(-1.0 <= field <= 1.0 for field in fields)
        again = build_heisenberg_chain(4, seed=11)
        assert [term.coefficient for term in again.terms[9:]] == fields

    def test_too_short(self):
        """
        Test that a chain needs 2 sites.
        """
        with pytest.raises(InvalidArgumentError, match="at least 2 sites"):
            build_heisenberg_chain(1, seed=0)


class TestCommutators(object):
    """
    Test nested commutators and the commutator scaling factors.
    """
    def test_nested_commutator(self):
        """
        Test nested commutators with 1-based indices.
         - A single index gives the term.
         - [X, Z] = -2iY.
         - [X, [X, Z]] = 4Z.
        """
        terms = x_plus_z()
        assert np.allclose(nested_commutator(terms, [2]), Z)
        assert np.allclose(nested_commutator(terms, (1, 2)), -2j * Y)
        assert np.allclose(nested_commutator(terms, (1, 1, 2)), 4 * Z)

    @pytest.mark.parametrize("indices", [(), (0, 1), (1, 3)])
    def test_nested_commutator_bad_indices(self, indices):
        """
        Test that empty or out of range indices raise.
        """
        with pytest.raises(InvalidArgumentError):
            nested_commutator(x_plus_z(), indices)

    ALPHA_DATA = [
        # j, exact, bound
        (1, 2.0, 2.0),
        (2, 4.0, 8.0),
        (3, 16.0, 32.0),
    ]

    @pytest.mark.parametrize("j,exact,bound", ALPHA_DATA)
    def test_alpha_comm(self, j, exact, bound):
        """
        Test alpha_comm on X + Z.
         - Exact values are sums of commutator norms.
         - Bound mode gives (2 Lambda)^j / 2.
        """
        terms = x_plus_z()
        assert alpha_comm(terms, j) == pytest.approx(exact)
        assert alpha_comm(terms, j, 'bound') == pytest.approx(bound)

    def test_commuting_terms(self):
        """
        Test that commuting terms have vanishing commutator sums.
        """
        terms = TermSum([PauliString('ZI'), PauliString('IZ')])
        assert alpha_comm(terms, 2) == 0.0
        assert alpha_comm(terms, 3) == 0.0

    def test_alpha_comm_limits(self):
        """
        Test alpha_comm argument checks.
         - j < 1 and unknown modes raise InvalidArgumentError.
         - Exceeding the cap raises ResourceLimitError.
        """
        terms = x_plus_z()
        with pytest.raises(InvalidArgumentError):
            alpha_comm(terms, 0)
        with pytest.raises(InvalidArgumentError, match="Unknown"):
            alpha_comm(terms, 2, 'guess')
        with pytest.raises(ResourceLimitError, match="bound mode"):
            alpha_comm(terms, 5, cap=16)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=1, max_value=4), st.integers(0, 2 ** 16))
    def test_exact_below_bound(self, j, seed):
        """
        Test that the exact factor never exceeds the bound mode factor.
        """
        terms = build_heisenberg_chain(2, seed)
        assert alpha_comm(terms, j) <= alpha_comm(terms, j, 'bound') * \
            (1 + 1e-12)


class TestLambda(object):
    """
    Test the growth rates lambda.
    """
    def test_lambda_table(self):
        """
        Test lambda_table on X + Z with p = sigma = m = K = 1.
         - (1, 1) is (2 alpha^(2) / 4)^(1/2).
         - (2, 1) is (2 alpha^(3) / 9)^(1/3).
        """
        table = lambda_table(x_plus_z(), 1, 1, 1, 1, j_cap=2)
        assert table[(1, 1)] == pytest.approx(math.sqrt(2.0))
        assert table[(2, 1)] == pytest.approx((32.0 / 9.0) ** (1.0 / 3.0))

    @pytest.mark.parametrize("p, sigma, m, K", LAMBDA_ARGS)
    def test_lambda_table_compositions(self, p, sigma, m, K):
        """
        Test lambda_table against summing over every composition.
        """
        terms = x_plus_z()
        j_cap = sigma * m + 4
        table = lambda_table(terms, p, sigma, m, K, j_cap, mode='bound')
        parts = [q for q in range(p, j_cap + 1) if q % sigma == 0]
        weights = {q: 2.0 * alpha_comm(terms, q + 1, 'bound') / (q + 1) ** 2
                   for q in parts}
        for (j, l), value in table.items():
            total = sum(
                functools.reduce(operator.mul,
                                 (weights[q] for q in composition), 1.0)
                for composition in itertools.product(parts, repeat=l)
                if sum(composition) == j
            )
            want = total ** (1.0 / (j + l)) if total > 0 else 0.0
            assert value == pytest.approx(want, rel=1e-12)

    def test_lambda_table_many_iterates(self):
        """
        Test lambda_table with 40 iterates on X + Z in bound mode.
         - Every (j, l) up to the default j_cap is present.
         - 40 parts of 1 give (4^40)^(1/80) = 2.
         - 41 in 40 parts has 40 arrangements of one part 2.
         - 40 in one part is the weight of order 40 alone.
        """
        table = lambda_table(x_plus_z(), 1, 1, 40, 40, mode='bound')
        assert sorted(table) == [(j, l) for j in range(40, 45)
                                 for l in range(1, 41)]
        assert table[(40, 40)] == pytest.approx(2.0)
        assert table[(41, 40)] == pytest.approx(
            (40 * 4.0 ** 39 * 64.0 / 9.0) ** (1.0 / 81.0))
        assert table[(40, 1)] == pytest.approx(
            (2.0 * 0.5 * 4.0 ** 41 / 41 ** 2) ** (1.0 / 41.0))

    def test_lambda_param(self):
        """
        Test lambda_param modes.
         - Bound mode gives 4 Lambda.
         - Exact mode is the table maximum and below the bound.
         - Bad arguments raise InvalidArgumentError.
        """
        terms = x_plus_z()
        assert lambda_param(terms, 2, 2, 2, 2) == pytest.approx(8.0)
        exact = lambda_param(terms, 2, 2, 2, 2, mode='exact')
        assert exact == max(lambda_table(terms, 2, 2, 2, 2).values())
        assert exact <= 8.0
        with pytest.raises(InvalidArgumentError):
            lambda_param(terms, 2, 3, 2, 2)


class TestSymmetryProjection(object):
    """
    Test projectors and projected terms.
    """
    def test_total_z_projector(self):
        """
        Test the total Z projector.
         - Magnetisation 0 on 2 qubits keeps |01> and |10>.
         - An empty sector raises InvalidArgumentError.
        """
        proj = total_z_projector(2, 0)
        assert np.allclose(np.diag(proj.projector), [0, 1, 1, 0])
        with pytest.raises(InvalidArgumentError, match="No states"):
            total_z_projector(2, 1)

    def test_invalid_projector(self):
        """
        Test that non-projectors are refused.
        """
        with pytest.raises(InvalidArgumentError, match="idempotent"):
            SymmetryProjector(2 * np.eye(2))
        with pytest.raises(InvalidArgumentError, match="Hermitian"):
            SymmetryProjector(np.array([[0, 1], [0, 0]]))

    def test_projected_quantities(self):
        """
        Test projected norms on a 2 site chain.
         - Projected Lambda and alpha^(2) don't exceed the full ones.
         - A dimension mismatch raises InvalidArgumentError.
        """
        chain = build_heisenberg_chain(2, seed=3)
        projected = project_terms(chain, total_z_projector(2, 0))
        assert projected.norm_sum() <= chain.norm_sum() + 1e-12
        assert alpha_comm(projected, 2) <= alpha_comm(chain, 2) + 1e-12
        with pytest.raises(InvalidArgumentError, match="does not match"):
            project_terms(chain, total_z_projector(3, 1))
