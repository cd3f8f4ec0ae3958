"""
Staged product formulae: construction, dense unitaries, the effective
Hamiltonian and fitted error operators.

Matrix order convention: a formula's exponentials are listed left to right as
they appear in the matrix product, so the first order formula on terms
``H_1, H_2`` is ``U(t) = exp(-i H_1 t) exp(-i H_2 t)`` and ``H_2`` acts on a
state first. For that formula the effective Hamiltonian is
``H_1 + H_2 - (it/2)[H_1, H_2] + O(t^2)``, e.g. ``X + Z - tY``.
"""
import logging
import math
import numpy as np
import scipy.linalg
import trotex
from trotex.core.exceptions import (
    BranchAmbiguityError,
    EvolutionError,
    FitFailureError,
    InvalidArgumentError,
)
from trotex.core.terms import TermSum, is_hermitian
from trotex.util.functions import loglog_slope, max_entry
from trotex.util.rng import child_generator

LOG = logging.getLogger(__name__)

#: Distance to the branch cut of the principal logarithm that is considered
#: ambiguous.
BRANCH_MARGIN = 1e-9

#: Errors below this value are indistinguishable from rounding in
#: :func:`order_slope`.
ORDER_SLOPE_FLOOR = 1e-12

#: Tolerance on the Hermiticity of an extracted effective Hamiltonian.
HEFF_HERMITICITY = 1e-10

#: Tolerance of the ``P(-t) P(t) = I`` check.
SYMMETRY_TOLERANCE = 1e-10


class StagedFormula(object):
    """
    A product formula organised in stages.

    Stage ``v`` is the product of ``exp(-i a[v, g] t H[perm[v][g]])`` for
    ``g = 0..Γ-1`` in matrix order, and the stages themselves are in matrix
    order too. Permutations are stored 0-based.

    :ivar str kind: ``first_order`` or ``suzuki``.
    :ivar int k: Suzuki recursion depth, 1 for first order formulae.
    :ivar int gamma_count: Number of terms Γ.
    :ivar numpy.ndarray coefficients: ``(Υ, Γ)`` stage coefficients.
    :ivar tuple permutations: One permutation of ``range(Γ)`` per stage.
    :ivar int order: Order ``p``.
    :ivar int sigma: 2 for symmetric formulae, else 1.
    :ivar float a_max: Largest absolute stage coefficient (before merging).
    :ivar tuple exponentials: ``(term, coefficient)`` pairs in matrix order,
        adjacent exponentials of the same term merged.
    :ivar float merged_a_max: Largest absolute coefficient after merging.
    """

    # pylint: disable=too-many-instance-attributes,too-many-arguments
    def __init__(self, kind, k, coefficients, permutations, order, sigma):
        """
        :raises InvalidArgumentError: If a permutation is invalid or the
            coefficients of a term don't add up to 1.
        """
        coefficients = np.array(coefficients, dtype=float)
        if coefficients.ndim != 2 or coefficients.shape[0] != \
                len(permutations):
            raise InvalidArgumentError(
                "Need one permutation per stage, got {} stages and {} "
                "permutations".format(coefficients.shape[0], len(permutations))
            )
        gamma_count = coefficients.shape[1]
        for perm in permutations:
            if sorted(perm) != list(range(gamma_count)):
                raise InvalidArgumentError(
                    "{} is not a permutation of {} terms".format(
                        perm, gamma_count)
                )
        totals = np.zeros(gamma_count)
        for stage, perm in enumerate(permutations):
            for position, term in enumerate(perm):
                totals[term] += coefficients[stage, position]
        if np.max(np.abs(totals - 1.0)) > 1e-12:
            raise InvalidArgumentError(
                "Stage coefficients of each term must add up to 1, got "
                "{}".format(totals)
            )
        coefficients.setflags(write=False)
        self.kind = kind
        self.k = k
        self.gamma_count = gamma_count
        self.coefficients = coefficients
        self.permutations = tuple(tuple(int(g) for g in p)
                                  for p in permutations)
        self.order = order
        self.sigma = sigma
        self.a_max = float(np.max(np.abs(coefficients)))
        self.exponentials = self.__merge()
        self.merged_a_max = max(abs(coef) for _, coef in self.exponentials)

    @property
    def stages(self):
        """Number of stages Υ."""
        return self.coefficients.shape[0]

    def __merge(self):
        merged = []
        for stage, perm in enumerate(self.permutations):
            for position, term in enumerate(perm):
                coef = float(self.coefficients[stage, position])
                if merged and merged[-1][0] == term:
                    merged[-1] = (term, merged[-1][1] + coef)
                else:
                    merged.append((term, coef))
        return tuple(merged)

    def to_json(self):
        """:return dict: ``{"kind", "k", "gamma_count"}``."""
        return {"kind": self.kind, "k": self.k,
                "gamma_count": self.gamma_count}

    def __repr__(self):
        return "<StagedFormula {} k={} p={} stages={} Γ={}>".format(
            self.kind, self.k, self.order, self.stages, self.gamma_count)


def first_order(gamma_count):
    """
    The first order formula, one stage with all coefficients 1.

    :param int gamma_count: Number of terms.
    :raises InvalidArgumentError: If ``gamma_count < 1``.
    """
    if gamma_count < 1:
        raise InvalidArgumentError(
            "gamma_count must be at least 1, got {}".format(gamma_count))
    return StagedFormula(
        'first_order', 1, np.ones((1, gamma_count)),
        [tuple(range(gamma_count))], order=1, sigma=1
    )


def suzuki_constant(k):
    """:math:`u_k = 1/(4 - 4^{1/(2k-1)})`."""
    return 1.0 / (4.0 - 4.0 ** (1.0 / (2 * k - 1)))


def suzuki(k, gamma_count):
    """
    Symmetric Suzuki formula :math:`S_{2k}` flattened to stages.

    :math:`S_2` is a reversed sweep followed by a forward sweep, both with
    half steps; :math:`S_{2k}(t) = S_{2k-2}(u_kt)^2 S_{2k-2}((1-4u_k)t)
    S_{2k-2}(u_kt)^2`, which gives :math:`2\\cdot5^{k-1}` stages.

    :param int k: Recursion depth, at least 1.
    :param int gamma_count: Number of terms, at least 1.
    :raises InvalidArgumentError: If ``k < 1`` or ``gamma_count < 1``.
    """
    if k < 1 or gamma_count < 1:
        raise InvalidArgumentError(
            "suzuki needs k >= 1 and gamma_count >= 1, got k={}, "
            "gamma_count={}".format(k, gamma_count)
        )
    forward = tuple(range(gamma_count))
    stages = [(0.5, forward[::-1]), (0.5, forward)]
    for depth in range(2, k + 1):
        u = suzuki_constant(depth)
        outer = [(u * coef, perm) for coef, perm in stages]
        inner = [((1.0 - 4.0 * u) * coef, perm) for coef, perm in stages]
        stages = outer + outer + inner + outer + outer
    coefficients = [[coef] * gamma_count for coef, _ in stages]
    permutations = [perm for _, perm in stages]
    return StagedFormula('suzuki', k, coefficients, permutations,
                         order=2 * k, sigma=2)


def formula_from_descriptor(descriptor, gamma_count=None):
    """
    Build a formula from its JSON descriptor.

    :param dict descriptor: ``{"kind": "first_order" | "suzuki", "k": int,
        "gamma_count": int}``; ``gamma_count`` may be omitted if passed as
        argument.
    :param int gamma_count: Overrides the descriptor's term count.
    :raises InvalidArgumentError: On an unknown kind or missing keys.
    """
    kind = descriptor.get("kind")
    if gamma_count is None:
        gamma_count = descriptor.get("gamma_count")
    if gamma_count is None:
        raise InvalidArgumentError("Formula descriptor lacks gamma_count.")
    if kind == "first_order":
        return first_order(int(gamma_count))
    if kind == "suzuki":
        return suzuki(int(descriptor.get("k", 1)), int(gamma_count))
    raise InvalidArgumentError("Unknown formula kind {!r}".format(kind))


def __check(f, terms):
    if f.gamma_count != terms.gamma_count:
        raise InvalidArgumentError(
            "Formula is built for {} terms, got {}".format(
                f.gamma_count, terms.gamma_count)
        )


def unitary(f, terms, t):
    """
    Dense unitary :math:`\\mathcal{P}(t)` of a formula.

    :param StagedFormula f: The formula.
    :param TermSum terms: The terms.
    :param float t: Time step.
    :return numpy.ndarray: The ordered product of the (cached) term
        exponentials.
    """
    __check(f, terms)
    result = np.eye(terms.dimension, dtype=complex)
    if t == 0:
        return result
    for term, coef in f.exponentials:
        result = result @ terms.exponential(term, coef * t)
    return result


def step_unitary(f, terms, r, T):
    """
    The single step that :func:`iterated_unitary` repeats ``|r|`` times.

    ``P(T/r)`` for positive ``r`` and ``P(T/r)^†`` for negative ``r``.

    :raises InvalidArgumentError: If ``r`` is 0.
    """
    if r == 0:
        raise InvalidArgumentError("The number of Trotter steps can't be 0.")
    step = unitary(f, terms, T / r)
    if r < 0:
        step = step.conj().T
    return step


def iterated_unitary(f, terms, r, T):
    """
    :math:`\\mathcal{P}^{1/s}(sT)` with :math:`s = 1/r`.

    For ``r > 0`` this is :math:`\\mathcal{P}(T/r)^r`, for ``r < 0`` it is
    :math:`(\\mathcal{P}(T/r)^{-1})^{|r|}`. The step is left-multiplied
    ``|r| - 1`` times onto itself.

    :param StagedFormula f: The formula.
    :param TermSum terms: The terms.
    :param int r: Nonzero number of steps.
    :param float T: Total time.
    :raises InvalidArgumentError: If ``r`` is 0.
    """
    step = step_unitary(f, terms, r, T)
    result = step
    for _ in range(abs(r) - 1):
        result = step @ result
    return result


def effective_hamiltonian(f, terms, t):
    """
    :math:`H_\\mathrm{eff}(t) = \\frac{i}{t}\\mathrm{Log}\\,\\mathcal{P}(t)`.

    The principal logarithm is taken through a complex Schur decomposition of
    the unitary, which is diagonal for normal matrices.

    :param StagedFormula f: The formula.
    :param TermSum terms: The terms.
    :param float t: Nonzero time step.
    :raises InvalidArgumentError: If ``t`` is 0.
    :raises BranchAmbiguityError: If an eigenphase lies within
        :data:`BRANCH_MARGIN` of ±π.
    :raises EvolutionError: If the result isn't Hermitian.
    :return numpy.ndarray: The effective Hamiltonian.
    """
    if t == 0:
        raise InvalidArgumentError(
            "The effective Hamiltonian is undefined at t=0.")
    triangular, basis = scipy.linalg.schur(unitary(f, terms, t),
                                           output='complex')
    phases = np.angle(np.diag(triangular))
    if np.any(np.abs(phases) > math.pi - BRANCH_MARGIN):
        raise BranchAmbiguityError(
            "An eigenphase of P({}) lies on the branch cut of the matrix "
            "logarithm; use a smaller t.".format(t)
        )
    heff = -(basis * phases) @ basis.conj().T / t
    if not is_hermitian(heff, HEFF_HERMITICITY):
        raise EvolutionError(
            "Effective Hamiltonian at t={} is not Hermitian (residue "
            "{:.3g})".format(t, max_entry(heff - heff.conj().T))
        )
    return 0.5 * (heff + heff.conj().T)


def polynomial_fit(abscissae, samples, powers):
    """
    Least squares fit of samples to ``sum_j c_j x^j`` over ``powers``.

    Abscissae are scaled by their largest magnitude before the Vandermonde
    matrix is built, the condition number of that scaled matrix is checked
    against :data:`trotex.FIT_CONDITION_CAP`.

    :param sequence abscissae: Sample points.
    :param numpy.ndarray samples: One sample (scalar or array) per point.
    :param sequence powers: Exponents to fit.
    :raises FitFailureError: If the fit is too ill-conditioned.
    :return tuple: ``(coefficients, residual, condition)`` with coefficients
        shaped like one sample per power and residual the max-norm misfit.
    """
    abscissae = np.asarray(abscissae, dtype=float)
    samples = np.asarray(samples)
    shape = samples.shape[1:]
    scale = float(np.max(np.abs(abscissae)))
    if scale == 0:
        raise FitFailureError("Can't fit on an all-zero grid.",
                              condition=math.inf)
    scaled = abscissae / scale
    design = np.column_stack([scaled ** power for power in powers])
    condition = float(np.linalg.cond(design))
    if not math.isfinite(condition) or condition > trotex.FIT_CONDITION_CAP:
        raise FitFailureError(
            "Polynomial fit over powers {} is ill-conditioned (condition "
            "number {:.3g})".format(list(powers), condition),
            condition=condition
        )
    flat = samples.reshape(len(abscissae), -1)
    solution, _, _, _ = np.linalg.lstsq(design, flat, rcond=None)
    residual = max_entry(design @ solution - flat)
    coefficients = [
        (solution[index] / scale ** power).reshape(shape)
        for index, power in enumerate(powers)
    ]
    return coefficients, residual, condition


def bch_error_operators(f, terms, j_max, t_grid):
    """
    Fitted error operators :math:`E_{j+1}` of the effective Hamiltonian.

    Fits :math:`H_\\mathrm{eff}(t) - H = \\sum_{j=1}^{j_\\mathrm{max}}
    E_{j+1}t^j` by least squares over ``t_grid``.

    :param StagedFormula f: The formula.
    :param TermSum terms: The terms.
    :param int j_max: Highest power of t fitted.
    :param sequence t_grid: At least ``j_max + 2`` distinct nonzero times in
        the branch safe region.
    :raises InvalidArgumentError: If the grid is too small.
    :raises FitFailureError: If the fit is ill-conditioned.
    :return list: ``[E_2, ..., E_{j_max+1}]``, Hermitian matrices.
    """
    t_grid = sorted(set(float(t) for t in t_grid))
    if j_max < 1 or len(t_grid) < j_max + 2 or 0.0 in t_grid:
        raise InvalidArgumentError(
            "Need j_max >= 1 and at least j_max + 2 distinct nonzero times, "
            "got j_max={} and {} times".format(j_max, len(t_grid))
        )
    hamiltonian = terms.hamiltonian()
    samples = [effective_hamiltonian(f, terms, t) - hamiltonian
               for t in t_grid]
    coefficients, residual, condition = polynomial_fit(
        t_grid, samples, range(1, j_max + 1))
    LOG.debug("Fitted %d error operators, residual %.3g, condition %.3g",
              j_max, residual, condition)
    return [0.5 * (coef + coef.conj().T) for coef in coefficients]


def is_symmetric(f, terms, t_probe):
    """
    Check :math:`\\mathcal{P}(-t)\\mathcal{P}(t) = I` at ``t_probe`` and
    ``t_probe / 2``.

    :raises InvalidArgumentError: If ``t_probe <= 0``.
    """
    if t_probe <= 0:
        raise InvalidArgumentError(
            "t_probe must be positive, got {}".format(t_probe))
    identity = np.eye(terms.dimension)
    for t in (t_probe, t_probe / 2.0):
        product = unitary(f, terms, -t) @ unitary(f, terms, t)
        if max_entry(product - identity) > SYMMETRY_TOLERANCE:
            return False
    return True


def order_slope(f, terms, t_grid):
    """
    Log-log slope of :math:`\\|\\mathcal{P}(t) - e^{-iHt}\\|` over ``t_grid``.

    Points whose error is below :data:`ORDER_SLOPE_FLOOR` are dropped.

    :raises InvalidArgumentError: If fewer than 3 points are left.
    :return float: The slope, ``p + 1`` for an order ``p`` formula.
    """
    eigenvalues, eigenvectors = terms.spectrum()
    kept_t, kept_err = [], []
    for t in t_grid:
        exact = (eigenvectors * np.exp(-1j * t * eigenvalues)) @ \
            eigenvectors.conj().T
        error = float(np.linalg.norm(unitary(f, terms, t) - exact, 2))
        if error >= ORDER_SLOPE_FLOOR:
            kept_t.append(t)
            kept_err.append(error)
    if len(kept_t) < 3:
        raise InvalidArgumentError(
            "Only {} times have an error above the rounding floor".format(
                len(kept_t))
        )
    return loglog_slope(kept_t, kept_err)


def random_two_term_hamiltonian(seed, n_qubits=2, norm=4.0):
    """
    Two dense random Hermitian terms with spectral norm ``norm`` each.

    :param int seed: Master seed, the ``two-term-hamiltonian`` stream is used.
    :param int n_qubits: Number of qubits.
    :param float norm: Spectral norm of each term.
    :return TermSum: The two terms.
    """
    rng = child_generator(seed, 'two-term-hamiltonian')
    dimension = 2 ** n_qubits
    terms = []
    for _ in range(2):
        gaussian = rng.normal(size=(dimension, dimension)) + \
            1j * rng.normal(size=(dimension, dimension))
        hermitian = gaussian + gaussian.conj().T
        hermitian *= norm / np.max(np.abs(scipy.linalg.eigvalsh(hermitian)))
        terms.append(0.5 * (hermitian + hermitian.conj().T))
    return TermSum(terms, n_qubits=n_qubits)
