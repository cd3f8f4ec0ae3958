"""
Dense statevector simulation.

Exact evolution goes through the cached eigendecomposition of the full
Hamiltonian, Trotterized evolution applies the step unitary of a formula to
the state vector ``|r|`` times. The Trotter evolved expectation value as a
function of ``s = 1/r`` is the function both extrapolation schemes sample.
"""
import collections
import logging
import numpy as np
import scipy.linalg
from trotex.core.exceptions import (
    EvolutionError,
    InvalidArgumentError,
    StencilDegeneracyError,
)
from trotex.core.formula import polynomial_fit, step_unitary
from trotex.core.terms import PauliString, is_hermitian
from trotex.util.functions import unique
from trotex.util.rng import child_generator

LOG = logging.getLogger(__name__)

#: Largest imaginary part an expectation value may have before it is
#: considered an error.
IMAGINARY_RESIDUE = 1e-10

#: State vectors must have unit norm within this tolerance.
NORM_TOLERANCE = 1e-12

#: Coefficient estimates of :func:`taylor_coefficients_fd`: ``coefficients``
#: and ``errors`` are indexed by power 0..j_max, ``nodes`` are the signed
#: step counts used with the requested stencil width.
TaylorEstimate = collections.namedtuple(
    'TaylorEstimate', ['coefficients', 'errors', 'nodes'])


class StateVector(object):
    """A normalised pure state over ``2**n`` basis states."""

    def __init__(self, amplitudes):
        """
        :param sequence amplitudes: Complex amplitudes, length a power of 2.
        :raises InvalidArgumentError: If the length isn't a power of 2 or the
            norm isn't 1.
        """
        amplitudes = np.array(amplitudes, dtype=complex).ravel()
        size = amplitudes.shape[0]
        if size < 2 or size & (size - 1):
            raise InvalidArgumentError(
                "A state needs 2**n amplitudes, got {}".format(size))
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidArgumentError(
                "A state must have unit norm, got {!r}".format(norm))
        amplitudes.setflags(write=False)
        self.amplitudes = amplitudes
        self.n_qubits = size.bit_length() - 1

    def to_json(self):
        return {
            "n_qubits": self.n_qubits,
            "amplitudes_real": self.amplitudes.real.tolist(),
            "amplitudes_imag": self.amplitudes.imag.tolist(),
        }

    @classmethod
    def from_json(cls, document):
        try:
            return cls(np.asarray(document["amplitudes_real"], dtype=float)
                       + 1j * np.asarray(document["amplitudes_imag"],
                                         dtype=float))
        except (KeyError, TypeError) as exc:
            raise InvalidArgumentError(
                "Malformed state document: {}".format(exc))

    def __repr__(self):
        return "<StateVector {} qubits>".format(self.n_qubits)


class Observable(object):
    """
    A Hermitian observable with its eigendecomposition.

    :ivar numpy.ndarray matrix: The observable.
    :ivar float norm: Its spectral norm.
    :ivar tuple paulis: The Pauli strings it was built from, if any.
    """

    def __init__(self, matrix, paulis=None):
        """
        :param numpy.ndarray matrix: Hermitian matrix.
        :param sequence paulis: Optional :class:`PauliString` terms summing
            to ``matrix``, kept for serialisation.
        :raises InvalidArgumentError: If ``matrix`` isn't square and
            Hermitian.
        """
        matrix = np.array(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidArgumentError("An observable must be square.")
        if not is_hermitian(matrix):
            raise InvalidArgumentError("An observable must be Hermitian.")
        matrix.setflags(write=False)
        self.matrix = matrix
        self.paulis = tuple(paulis) if paulis else ()
        self._eigenvalues, self._eigenvectors = scipy.linalg.eigh(matrix)
        self.norm = float(np.max(np.abs(self._eigenvalues)))

    @classmethod
    def from_paulis(cls, paulis):
        """Sum a sequence of :class:`PauliString` terms."""
        paulis = tuple(paulis)
        if not paulis:
            raise InvalidArgumentError("An observable needs a Pauli term.")
        matrix = sum(pauli.to_dense() for pauli in paulis)
        return cls(matrix, paulis=paulis)

    def spectrum(self):
        """:return tuple: ``(eigenvalues, eigenvectors)`` ascending."""
        return self._eigenvalues, self._eigenvectors

    @property
    def spread(self):
        """Largest minus smallest eigenvalue."""
        return float(self._eigenvalues[-1] - self._eigenvalues[0])

    def expectation(self, vector):
        """
        :math:`\\langle\\psi|O|\\psi\\rangle` of a state vector.

        :raises EvolutionError: If the imaginary residue exceeds
            :data:`IMAGINARY_RESIDUE`.
        """
        value = np.vdot(vector, self.matrix @ vector)
        if abs(value.imag) > IMAGINARY_RESIDUE:
            raise EvolutionError(
                "Expectation value has imaginary part {:.3g}".format(
                    value.imag)
            )
        return float(value.real)

    def to_json(self):
        if self.paulis:
            return {
                "n_qubits": self.paulis[0].n_qubits,
                "terms": [pauli.to_json() for pauli in self.paulis],
            }
        return {
            "dense_real": self.matrix.real.tolist(),
            "dense_imag": self.matrix.imag.tolist(),
        }

    def __repr__(self):
        return "<Observable norm={:.6g}>".format(self.norm)


def __check_dimensions(terms, state, obs):
    if not terms.dimension == state.amplitudes.shape[0] == \
            obs.matrix.shape[0]:
        raise InvalidArgumentError(
            "Dimension mismatch: terms {}, state {}, observable {}".format(
                terms.dimension, state.amplitudes.shape[0],
                obs.matrix.shape[0])
        )


def exact_evolve(terms, T, state):
    """:math:`e^{-iHT}|\\psi\\rangle` through the eigendecomposition of H."""
    eigenvalues, eigenvectors = terms.spectrum()
    overlaps = eigenvectors.conj().T @ state.amplitudes
    return eigenvectors @ (np.exp(-1j * T * eigenvalues) * overlaps)


def exact_evolve_expectation(terms, T, state, obs):
    """
    :math:`\\langle\\psi|e^{iHT}Oe^{-iHT}|\\psi\\rangle`.

    :param TermSum terms: The Hamiltonian.
    :param float T: Evolution time.
    :param StateVector state: Initial state.
    :param Observable obs: Observable.
    :raises InvalidArgumentError: On mismatched dimensions.
    :raises EvolutionError: On a non-negligible imaginary part.
    :return float: The expectation value.
    """
    __check_dimensions(terms, state, obs)
    return obs.expectation(exact_evolve(terms, T, state))


def trotter_evolve(f, terms, r, T, state):
    """
    :math:`\\mathcal{P}^{1/s}(sT)|\\psi\\rangle` with ``s = 1/r``, by
    applying the step unitary ``|r|`` times to the vector.

    :raises InvalidArgumentError: If ``r`` is 0.
    :return numpy.ndarray: The evolved amplitudes.
    """
    step = step_unitary(f, terms, r, T)
    vector = state.amplitudes
    for _ in range(abs(r)):
        vector = step @ vector
    return vector


def trotter_expectation(f, terms, r, T, state, obs):
    """
    The Trotter evolved expectation value :math:`f(s)` at ``s = 1/r``.

    :param StagedFormula f: The formula.
    :param TermSum terms: The Hamiltonian.
    :param int r: Nonzero signed number of steps.
    :param float T: Evolution time.
    :param StateVector state: Initial state.
    :param Observable obs: Observable.
    :raises InvalidArgumentError: If ``r`` is 0 or dimensions mismatch.
    :return float: The expectation value.
    """
    __check_dimensions(terms, state, obs)
    return obs.expectation(trotter_evolve(f, terms, r, T, state))


def sample_function(f, terms, T, state, obs):
    """
    :math:`f(s)` as a callable on signed step counts.

    ``sample(0)`` gives the exact value, any other ``r`` the Trotter evolved
    value with ``s = 1/r``.
    """
    def sample(r):
        if r == 0:
            return exact_evolve_expectation(terms, T, state, obs)
        return trotter_expectation(f, terms, r, T, state, obs)
    return sample


def _snapped_stencil(h, half_width):
    nodes = []
    for k in range(1, half_width + 1):
        r = int(round(1.0 / (k * h)))
        if r == 0:
            raise StencilDegeneracyError(
                "Stencil point {} snaps to zero steps; use a smaller h.".format(
                    k * h)
            )
        nodes.append(r)
    if len(unique(nodes)) != len(nodes):
        raise StencilDegeneracyError(
            "Stencil points {} collide after snapping to inverse integers "
            "{}; use a smaller h.".format(
                [k * h for k in range(1, half_width + 1)], nodes)
        )
    return [-r for r in reversed(nodes)] + nodes


def _stencil_coefficients(sample, h, j_max):
    half_width = j_max // 2 + 1
    nodes = _snapped_stencil(h, half_width)
    abscissae = [0.0] + [1.0 / r for r in nodes]
    values = [sample(0)] + [sample(r) for r in nodes]
    coefficients, _, _ = polynomial_fit(
        abscissae, values, range(2 * half_width + 1))
    return [float(coef) for coef in coefficients[:j_max + 1]], nodes


def taylor_coefficients_fd(f, terms, T, state, obs, j_max, h):
    """
    Taylor coefficients :math:`\\partial_s^jf(0)/j!` by finite differences.

    The stencil holds ``s = 0`` (the exact value) and ``±k h`` for
    ``k = 1..j_max//2 + 1``, every nonzero point snapped to the nearest
    inverse integer. The interpolating polynomial through the stencil gives
    the coefficients; repeating with ``h/2`` gives the error estimates.

    :param int j_max: Highest power, at most 6.
    :param float h: Stencil spacing.
    :raises InvalidArgumentError: If ``j_max`` is outside ``[1, 6]`` or ``h``
        is not positive.
    :raises StencilDegeneracyError: If snapped stencil points collide.
    :return TaylorEstimate: Coefficients and errors for powers 0..j_max.
    """
    if not 1 <= j_max <= 6 or h <= 0:
        raise InvalidArgumentError(
            "Need 1 <= j_max <= 6 and h > 0, got j_max={}, h={}".format(
                j_max, h)
        )
    sample = sample_function(f, terms, T, state, obs)
    coarse, nodes = _stencil_coefficients(sample, h, j_max)
    fine, _ = _stencil_coefficients(sample, h / 2.0, j_max)
    errors = [abs(a - b) for a, b in zip(coarse, fine)]
    LOG.debug("Stencil %s gave coefficients %s (errors %s)",
              nodes, coarse, errors)
    return TaylorEstimate(coarse, errors, nodes)


def random_bitstring_state(n, seed, bits=None):
    """
    A computational basis state, random unless ``bits`` is given.

    :param int n: Number of qubits.
    :param int seed: Master seed, the ``bitstring`` stream is used.
    :param sequence bits: Optional explicit bits, most significant qubit
        first.
    :raises InvalidArgumentError: If ``n < 1`` or ``bits`` has the wrong
        length.
    """
    if n < 1:
        raise InvalidArgumentError("Need at least 1 qubit, got {}".format(n))
    if bits is None:
        bits = child_generator(seed, 'bitstring').integers(0, 2, size=n)
    bits = [int(bit) for bit in bits]
    if len(bits) != n or any(bit not in (0, 1) for bit in bits):
        raise InvalidArgumentError(
            "Need {} bits of 0 or 1, got {}".format(n, bits))
    index = int(''.join(str(bit) for bit in bits), 2)
    amplitudes = np.zeros(2 ** n, dtype=complex)
    amplitudes[index] = 1.0
    return StateVector(amplitudes)


def random_pauli_observable(n, n_terms, seed):
    """
    Sum of ``n_terms`` uniformly drawn non-identity Pauli strings.

    :param int n: Number of qubits.
    :param int n_terms: Number of strings, at least 1.
    :param int seed: Master seed, the ``pauli-observable`` stream is used.
    :raises InvalidArgumentError: If ``n_terms < 1``.
    """
    if n_terms < 1 or n < 1:
        raise InvalidArgumentError(
            "Need n >= 1 and n_terms >= 1, got n={}, n_terms={}".format(
                n, n_terms)
        )
    codes = child_generator(seed, 'pauli-observable').integers(
        1, 4 ** n, size=n_terms)
    paulis = []
    for code in codes:
        code = int(code)
        axes = []
        for _ in range(n):
            axes.append('IXYZ'[code % 4])
            code //= 4
        paulis.append(PauliString(''.join(reversed(axes)), 1.0))
    LOG.debug("Drew observable %s", paulis)
    return Observable.from_paulis(paulis)
