"""
Hamiltonians as ordered sums of Hermitian terms, and the commutator-scaling
quantities built from them.

A :class:`TermSum` keeps its terms either as :class:`PauliString` objects or
as dense Hermitian matrices. Dense matrices are the backend of every norm and
commutator computation, Pauli strings are converted on demand and the dense
form is cached.

Qubit ordering follows :func:`numpy.kron`: the first axis of a Pauli string
acts on the most significant qubit.
"""
import functools
import logging
import math
import numpy as np
import scipy.linalg
import trotex
from trotex.core.exceptions import InvalidArgumentError, ResourceLimitError
from trotex.util.cache import FifoCache
from trotex.util.functions import max_entry
from trotex.util.rng import child_generator

LOG = logging.getLogger(__name__)

#: Single qubit Pauli matrices by axis label.
PAULI_MATRICES = {
    'I': np.eye(2, dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}


def is_hermitian(matrix, tolerance=trotex.MATRIX_TOLERANCE):
    """Check Hermiticity in max-entry norm."""
    return max_entry(matrix - matrix.conj().T) <= tolerance


def spectral_norm(matrix):
    """
    Largest singular value of a square matrix.

    Hermitian and anti-Hermitian matrices (all nested commutators of Hermitian
    terms are one or the other) use a Hermitian eigensolve, anything else a
    singular value decomposition.

    :param numpy.ndarray matrix: Square matrix.
    :raises InvalidArgumentError: If the matrix is not square.
    :return float: The spectral norm.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidArgumentError(
            "Spectral norm needs a square matrix, got shape {}".format(
                matrix.shape)
        )
    if matrix.size == 0:
        return 0.0
    if is_hermitian(matrix):
        return float(np.max(np.abs(scipy.linalg.eigvalsh(matrix))))
    if max_entry(matrix + matrix.conj().T) <= trotex.MATRIX_TOLERANCE:
        return float(np.max(np.abs(scipy.linalg.eigvalsh(1j * matrix))))
    return float(np.linalg.norm(matrix, 2))


class PauliString(object):
    """A real multiple of a tensor product of Pauli matrices."""

    def __init__(self, axes, coefficient=1.0):
        """
        :param str axes: One of ``IXYZ`` per qubit, e.g. ``"XZIY"``.
        :param float coefficient: Finite real coefficient.
        :raises InvalidArgumentError: On unknown axes or a non-finite or
            complex coefficient.
        """
        axes = str(axes).upper()
        if not axes or any(axis not in PAULI_MATRICES for axis in axes):
            raise InvalidArgumentError(
                "Pauli string axes must be a nonempty string over IXYZ, "
                "got \"{}\"".format(axes)
            )
        if isinstance(coefficient, complex) or not math.isfinite(coefficient):
            raise InvalidArgumentError(
                "Pauli string coefficient must be a finite real, got "
                "{!r}".format(coefficient)
            )
        self.axes = axes
        self.coefficient = float(coefficient)

    @property
    def n_qubits(self):
        return len(self.axes)

    def to_dense(self):
        """
        :return numpy.ndarray: The ``2**n x 2**n`` Hermitian matrix.
        """
        matrix = functools.reduce(
            np.kron, (PAULI_MATRICES[axis] for axis in self.axes)
        )
        return self.coefficient * matrix

    def to_json(self):
        return {"pauli": self.axes, "coeff": self.coefficient}

    def __eq__(self, other):
        return (
            isinstance(other, PauliString)
            and self.axes == other.axes
            and self.coefficient == other.coefficient
        )

    def __hash__(self):
        return hash((self.axes, self.coefficient))

    def __repr__(self):
        return "<PauliString {!r} {}>".format(self.coefficient, self.axes)


class TermSum(object):
    """
    A Hamiltonian :math:`H = \\sum_\\gamma H_\\gamma` with ordered terms.

    Terms are 0-indexed internally; operations that follow the usual
    mathematical convention (:func:`nested_commutator`) take 1-based indices.

    Instances are treated as immutable. Dense forms, spectra and term
    exponentials are cached in a lock-guarded cache, which is transparent to
    callers and safe to share between threads.
    """

    def __init__(self, terms, n_qubits=None):
        """
        :param sequence terms: :class:`PauliString` objects and/or dense
            Hermitian matrices.
        :param int n_qubits: Number of qubits, inferred from the first term
            if omitted.
        :raises InvalidArgumentError: On an empty term list, mismatched
            dimensions or a non-Hermitian dense term.
        """
        terms = tuple(terms)
        if not terms:
            raise InvalidArgumentError("A term sum needs at least one term.")
        if n_qubits is None:
            first = terms[0]
            if isinstance(first, PauliString):
                n_qubits = first.n_qubits
            else:
                n_qubits = int(round(math.log2(np.asarray(first).shape[0])))
        self.n_qubits = int(n_qubits)
        self.dimension = 2 ** self.n_qubits
        checked = []
        for index, term in enumerate(terms):
            if isinstance(term, PauliString):
                if term.n_qubits != self.n_qubits:
                    raise InvalidArgumentError(
                        "Term {} acts on {} qubits, expected {}".format(
                            index + 1, term.n_qubits, self.n_qubits)
                    )
            else:
                term = np.array(term, dtype=complex)
                if term.shape != (self.dimension, self.dimension):
                    raise InvalidArgumentError(
                        "Term {} has shape {}, expected {}".format(
                            index + 1, term.shape,
                            (self.dimension, self.dimension))
                    )
                if not is_hermitian(term):
                    raise InvalidArgumentError(
                        "Term {} is not Hermitian".format(index + 1)
                    )
                term.setflags(write=False)
            checked.append(term)
        self.terms = tuple(checked)
        self._cache = FifoCache(trotex.EXPONENTIAL_CACHE_SIZE)

    @property
    def gamma_count(self):
        """Number of terms, :math:`\\Gamma`."""
        return len(self.terms)

    def __len__(self):
        return len(self.terms)

    def dense(self, gamma):
        """
        Dense matrix of term ``gamma`` (0-based).

        :param int gamma: Term index.
        :return numpy.ndarray: Read-only Hermitian matrix.
        """
        def factory():
            term = self.terms[gamma]
            if isinstance(term, PauliString):
                term = term.to_dense()
                term.setflags(write=False)
            return term
        return self._cache.fetch(('dense', gamma), factory)

    def hamiltonian(self):
        """:return numpy.ndarray: The dense sum of all terms."""
        def factory():
            total = np.zeros((self.dimension, self.dimension), dtype=complex)
            for gamma in range(self.gamma_count):
                total += self.dense(gamma)
            total.setflags(write=False)
            return total
        return self._cache.fetch(('hamiltonian',), factory)

    def spectrum(self, gamma=None):
        """
        Eigendecomposition of one term, or of :math:`H` if ``gamma`` is None.

        :param int gamma: Term index (0-based) or None.
        :return tuple: ``(eigenvalues, eigenvectors)`` from
            :func:`scipy.linalg.eigh`.
        """
        def factory():
            matrix = self.hamiltonian() if gamma is None else self.dense(gamma)
            return scipy.linalg.eigh(matrix)
        return self._cache.fetch(('spectrum', gamma), factory)

    def exponential(self, gamma, tau):
        """
        :math:`e^{-i \\tau H_\\gamma}` by eigendecomposition of the term.

        Results are cached per ``(gamma, tau)`` with exact float equality.

        :param int gamma: Term index (0-based).
        :param float tau: Real time (already multiplied by the stage
            coefficient).
        :return numpy.ndarray: Read-only unitary.
        """
        def factory():
            eigenvalues, eigenvectors = self.spectrum(gamma)
            phases = np.exp(-1j * tau * eigenvalues)
            unitary = (eigenvectors * phases) @ eigenvectors.conj().T
            unitary.setflags(write=False)
            return unitary
        return self._cache.fetch(('exp', gamma, float(tau)), factory)

    def norms(self):
        """:return tuple: Spectral norm per term."""
        return self._cache.fetch(
            ('norms',),
            lambda: tuple(
                spectral_norm(self.dense(gamma))
                for gamma in range(self.gamma_count)
            )
        )

    def norm_sum(self):
        """:math:`\\Lambda = \\sum_\\gamma \\|H_\\gamma\\|`."""
        return math.fsum(self.norms())

    def to_json(self):
        """
        :return dict: ``{"n_qubits": int, "terms": [...]}`` with Pauli terms
            as ``{"pauli", "coeff"}`` and dense terms as ``{"dense_real",
            "dense_imag"}``.
        """
        terms = []
        for term in self.terms:
            if isinstance(term, PauliString):
                terms.append(term.to_json())
            else:
                terms.append({
                    "dense_real": term.real.tolist(),
                    "dense_imag": term.imag.tolist(),
                })
        return {"n_qubits": self.n_qubits, "terms": terms}

    @classmethod
    def from_json(cls, document):
        """
        Inverse of :meth:`to_json`.

        :param dict document: Parsed JSON document.
        :raises InvalidArgumentError: On missing keys or malformed terms.
        """
        try:
            terms = []
            for term in document["terms"]:
                if "pauli" in term:
                    terms.append(PauliString(term["pauli"], term["coeff"]))
                else:
                    terms.append(
                        np.asarray(term["dense_real"], dtype=float)
                        + 1j * np.asarray(term["dense_imag"], dtype=float)
                    )
            return cls(terms, n_qubits=document["n_qubits"])
        except (KeyError, TypeError) as exc:
            raise InvalidArgumentError(
                "Malformed term sum document: {}".format(exc))

    def __repr__(self):
        return "<TermSum {} terms on {} qubits>".format(
            self.gamma_count, self.n_qubits)


class SymmetryProjector(object):
    """An orthogonal projector :math:`\\Pi_\\mathcal{S}` onto a subspace."""

    def __init__(self, projector):
        """
        :param numpy.ndarray projector: Hermitian idempotent matrix.
        :raises InvalidArgumentError: If it isn't square, Hermitian and
            idempotent within :data:`trotex.MATRIX_TOLERANCE`.
        """
        projector = np.array(projector, dtype=complex)
        if projector.ndim != 2 or projector.shape[0] != projector.shape[1]:
            raise InvalidArgumentError("A projector must be a square matrix.")
        if not is_hermitian(projector):
            raise InvalidArgumentError("A projector must be Hermitian.")
        if max_entry(projector @ projector - projector) > \
                trotex.MATRIX_TOLERANCE:
            raise InvalidArgumentError("A projector must be idempotent.")
        projector.setflags(write=False)
        self.projector = projector

    @property
    def dimension(self):
        return self.projector.shape[0]


def total_z_projector(n_qubits, magnetisation):
    """
    Projector onto the computational basis states with a fixed total Z.

    :param int n_qubits: Number of qubits.
    :param int magnetisation: Eigenvalue of :math:`\\sum_i Z_i`, i.e. number
        of ``0`` bits minus number of ``1`` bits.
    :raises InvalidArgumentError: If the sector is empty.
    :return SymmetryProjector: The diagonal projector.
    """
    diagonal = np.zeros(2 ** n_qubits)
    for index in range(2 ** n_qubits):
        ones = bin(index).count('1')
        if n_qubits - 2 * ones == magnetisation:
            diagonal[index] = 1.0
    if not diagonal.any():
        raise InvalidArgumentError(
            "No states with total Z {} on {} qubits".format(
                magnetisation, n_qubits)
        )
    return SymmetryProjector(np.diag(diagonal))


def build_heisenberg_chain(L, seed):
    """
    Nearest neighbour Heisenberg chain with random Z fields.

    :math:`H = \\sum_i (X_iX_{i+1} + Y_iY_{i+1} + Z_iZ_{i+1}) +
    \\sum_i h_i Z_i` with :math:`h_i` uniform on [-1, 1] drawn from the
    ``heisenberg-fields`` stream. Terms are ordered XX, YY, ZZ, then the
    field terms, each left to right along the chain.

    :param int L: Number of sites, at least 2.
    :param int seed: Master seed.
    :raises InvalidArgumentError: If ``L < 2``.
    :return TermSum: The chain with ``4L - 3`` terms.
    """
    if L < 2:
        raise InvalidArgumentError(
            "A Heisenberg chain needs at least 2 sites, got {}".format(L))
    fields = child_generator(seed, 'heisenberg-fields').uniform(-1.0, 1.0, L)
    terms = []
    for axis in 'XYZ':
        for site in range(L - 1):
            axes = ['I'] * L
            axes[site] = axes[site + 1] = axis
            terms.append(PauliString(''.join(axes), 1.0))
    for site in range(L):
        axes = ['I'] * L
        axes[site] = 'Z'
        terms.append(PauliString(''.join(axes), float(fields[site])))
    LOG.debug("Built Heisenberg chain L=%d with fields %s", L, fields)
    return TermSum(terms, n_qubits=L)


def commutator(left, right):
    """:math:`[A, B] = AB - BA`."""
    return left @ right - right @ left


def nested_commutator(terms, indices):
    """
    Right-nested commutator
    :math:`[H_{\\gamma_1},[H_{\\gamma_2},[\\ldots,H_{\\gamma_j}]]]`.

    :param TermSum terms: The terms.
    :param sequence indices: 1-based term indices, outermost first.
    :raises InvalidArgumentError: On an empty index list or an index outside
        ``[1, Γ]``.
    :return numpy.ndarray: The nested commutator, a single index returns the
        term itself.
    """
    indices = tuple(indices)
    if not indices:
        raise InvalidArgumentError("Nested commutators need an index.")
    for index in indices:
        if not 1 <= index <= terms.gamma_count:
            raise InvalidArgumentError(
                "Term index {} outside [1, {}]".format(index, terms.gamma_count)
            )
    result = np.array(terms.dense(indices[-1]))
    for index in reversed(indices[:-1]):
        result = commutator(terms.dense(index - 1), result)
    return result


def alpha_comm(terms, j, mode='exact', cap=None):
    """
    Commutator scaling factor :math:`\\alpha_\\mathrm{comm}^{(j)}`.

    Exact mode sums the spectral norms of all :math:`\\Gamma^j` right-nested
    commutators, building them inside out and pruning a branch as soon as
    its running commutator vanishes (max entry below
    :data:`trotex.COMMUTATOR_ZERO`). Bound mode returns
    :math:`\\frac{1}{2}(2\\Lambda)^j`.

    :param TermSum terms: The terms.
    :param int j: Nesting depth, at least 1.
    :param str mode: ``exact`` or ``bound``.
    :param int cap: Maximum :math:`\\Gamma^j` for exact mode, defaults to
        :data:`trotex.ALPHA_COMM_CAP`.
    :raises InvalidArgumentError: On ``j < 1`` or an unknown mode.
    :raises ResourceLimitError: If :math:`\\Gamma^j` exceeds the cap.
    :return float: The sum.
    """
    if j < 1:
        raise InvalidArgumentError("alpha_comm needs j >= 1, got {}".format(j))
    if mode == 'bound':
        return 0.5 * (2.0 * terms.norm_sum()) ** j
    if mode != 'exact':
        raise InvalidArgumentError("Unknown alpha_comm mode {!r}".format(mode))
    cap = trotex.ALPHA_COMM_CAP if cap is None else cap
    if terms.gamma_count ** j > cap:
        raise ResourceLimitError(
            "Exact alpha_comm of order {} needs {}^{} nested commutators, "
            "more than the cap of {}; use bound mode instead.".format(
                j, terms.gamma_count, j, cap)
        )
    if j == 1:
        return terms.norm_sum()

    gammas = range(terms.gamma_count)
    norms = []

    def descend(inner, depth):
        for gamma in gammas:
            outer = commutator(terms.dense(gamma), inner)
            if max_entry(outer) < trotex.COMMUTATOR_ZERO:
                continue
            if depth + 1 == j:
                norms.append(spectral_norm(outer))
            else:
                descend(outer, depth + 1)

    for gamma in gammas:
        descend(terms.dense(gamma), 1)
    return math.fsum(norms)


def lambda_table(terms, p, sigma, m, K, j_cap=None, mode='exact'):
    """
    Per-order growth rates :math:`\\lambda_{j,l}`.

    For :math:`j \\in \\sigma\\mathbb{Z}_+`, :math:`\\sigma m \\le j \\le
    j_\\mathrm{cap}` and :math:`1 \\le l \\le K`:

    .. math::

        \\lambda_{j,l} = \\Big(\\sum_{j_1+\\ldots+j_l=j}\\prod_{\\kappa}
        \\frac{2\\alpha_\\mathrm{comm}^{(j_\\kappa+1)}}{(j_\\kappa+1)^2}
        \\Big)^{1/(j+l)}

    where every part :math:`j_\\kappa` is a multiple of :math:`\\sigma` and
    at least :math:`p`. Orders without any such composition get 0.

    :param TermSum terms: The terms.
    :param int p: Formula order.
    :param int sigma: Symmetry class, 1 or 2.
    :param int m: Number of extrapolation nodes.
    :param int K: Number of iterates, usually :math:`\\lceil\\sigma m/p\\rceil`.
    :param int j_cap: Largest order, default :math:`\\sigma m` +
        :data:`trotex.LAMBDA_J_CAP_OFFSET`.
    :param str mode: ``exact`` or ``bound``, the mode of the
        :math:`\\alpha_\\mathrm{comm}` factors.
    :return dict: ``{(j, l): value}``.
    """
    __check_lambda_args(p, sigma, m, K)
    if j_cap is None:
        j_cap = sigma * m + trotex.LAMBDA_J_CAP_OFFSET
    parts = [q for q in range(p, j_cap + 1) if q % sigma == 0]
    alphas = {q: alpha_comm(terms, q + 1, mode) for q in parts}
    weights = {q: 2.0 * alphas[q] / (q + 1) ** 2 for q in parts}

    # sums[j] is the weighted count of compositions of j into l parts.
    sums = {0: 1.0}
    table = {}
    for l in range(1, K + 1):
        previous = sums
        sums = {
            j: math.fsum(previous[j - q] * weights[q]
                         for q in parts if j - q in previous)
            for j in range(l * p, j_cap + 1)
        }
        for j in range(sigma * m, j_cap + 1):
            if j % sigma == 0:
                total = sums.get(j, 0.0)
                table[(j, l)] = \
                    total ** (1.0 / (j + l)) if total > 0 else 0.0
    return table


def lambda_param(terms, p, sigma, m, K, mode='bound', j_cap=None):
    """
    Uniform growth rate :math:`\\lambda`.

    Bound mode returns :math:`4\\Lambda`, which bounds every
    :math:`\\lambda_{j,l}`. Exact mode takes the maximum of
    :func:`lambda_table` with exact :math:`\\alpha_\\mathrm{comm}`; the
    supremum over all orders is truncated at ``j_cap`` and the truncation is
    logged.

    :raises ResourceLimitError: If exact :math:`\\alpha_\\mathrm{comm}` is
        intractable.
    :return float: :math:`\\lambda`.
    """
    __check_lambda_args(p, sigma, m, K)
    if mode == 'bound':
        return 4.0 * terms.norm_sum()
    if mode != 'exact':
        raise InvalidArgumentError("Unknown lambda mode {!r}".format(mode))
    if j_cap is None:
        j_cap = sigma * m + trotex.LAMBDA_J_CAP_OFFSET
    table = lambda_table(terms, p, sigma, m, K, j_cap, 'exact')
    argmax = max(table, key=table.get)
    LOG.info(
        "Exact lambda %.6g attained at (j, l)=%s, supremum truncated at "
        "j_cap=%d", table[argmax], argmax, j_cap
    )
    return table[argmax]


def __check_lambda_args(p, sigma, m, K):
    if p < 1 or sigma not in (1, 2) or m < 1 or K < 1:
        raise InvalidArgumentError(
            "lambda needs p >= 1, sigma in (1, 2), m >= 1 and K >= 1, got "
            "p={}, sigma={}, m={}, K={}".format(p, sigma, m, K)
        )


def project_terms(terms, proj):
    """
    Replace every term by :math:`\\Pi H_\\gamma \\Pi`.

    :func:`alpha_comm` and :func:`lambda_param` on the result give the
    symmetry-respecting quantities.

    :param TermSum terms: The terms.
    :param SymmetryProjector proj: The projector.
    :raises InvalidArgumentError: On a dimension mismatch.
    :return TermSum: Dense projected terms.
    """
    if proj.dimension != terms.dimension:
        raise InvalidArgumentError(
            "Projector dimension {} does not match term dimension {}".format(
                proj.dimension, terms.dimension)
        )
    pi = proj.projector
    projected = []
    for gamma in range(terms.gamma_count):
        matrix = pi @ terms.dense(gamma) @ pi
        # Remove the rounding-level anti-Hermitian part.
        projected.append(0.5 * (matrix + matrix.conj().T))
    return TermSum(projected, n_qubits=terms.n_qubits)
