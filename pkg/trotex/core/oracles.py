"""
Brute force oracles for the error expansions.

These only use the term algebra, the product formulae and the evolution
engine, so they can check those independently of the extrapolation code.
Every fit reports its residual and condition number; a fit that is too
ill-conditioned makes the oracle fail or report ``inconclusive``, never pass.
"""
import collections
import logging
import numpy as np
from trotex.core.evolution import exact_evolve_expectation, trotter_expectation
from trotex.core.exceptions import FitFailureError, InvalidArgumentError
from trotex.core.formula import (
    bch_error_operators,
    first_order,
    iterated_unitary,
    polynomial_fit,
)
from trotex.core.terms import PauliString, TermSum, alpha_comm, spectral_norm
from trotex.util.functions import loglog_slope

LOG = logging.getLogger(__name__)

#: Relative slack of :func:`heff_consistency`.
BOUND_SLACK = 1e-6

#: Smallest T-exponent of the second order coefficient that refutes an
#: ``s^m T^(m+1)`` expansion.
S2_EXPONENT_THRESHOLD = 3.5

#: The first order coefficient must scale as ``T**2`` within this margin.
S1_EXPONENT_MARGIN = 0.3

#: Default small-T window of :func:`step_series_structure_check`.
STRUCTURE_T_GRID = tuple(np.geomspace(0.05, 0.3, 8))

#: Window on which the raw second order norm exponent is reported.
STRUCTURE_WIDE_T_GRID = tuple(np.geomspace(0.5, 2.0, 8))

#: Default step counts of :func:`step_series_structure_check`, used with
#: both signs.
STRUCTURE_STEPS = (4, 5, 6, 8, 10, 12, 16, 20)

#: Result of :func:`fit_observable_series`; ``condition`` is the condition
#: number of the scaled design matrix.
SeriesFit = collections.namedtuple(
    'SeriesFit', ['powers', 'coefficients', 'residual', 'grid', 'condition'])


def series_powers(p, sigma, j_max, include_odd=False):
    """
    Powers ``j`` in ``sigma Z+`` with ``p <= j <= j_max``, or every power
    ``1..j_max`` with ``include_odd``.
    """
    if include_odd:
        return list(range(1, j_max + 1))
    return [j for j in range(p, j_max + 1) if j % sigma == 0]


def fit_observable_series(formula, terms, T, state, obs, j_max, s_grid,
                          include_odd=False):
    """
    Least squares fit of :math:`f(s) - f_\\mathrm{exact}` to a power series.

    :param StagedFormula formula: The formula.
    :param TermSum terms: The Hamiltonian.
    :param float T: Evolution time.
    :param StateVector state: Initial state.
    :param Observable obs: Observable.
    :param int j_max: Highest power.
    :param sequence s_grid: Inverse integers, at least ``j_max + 3``.
    :param bool include_odd: Fit all powers ``1..j_max`` instead of the
        nonzero ones.
    :raises InvalidArgumentError: On a grid of the wrong size or a point that
        is not an inverse integer.
    :raises FitFailureError: If the fit is ill-conditioned.
    :return SeriesFit: The fit.
    """
    # pylint: disable=too-many-arguments
    s_grid = [float(s) for s in s_grid]
    if len(s_grid) < j_max + 3:
        raise InvalidArgumentError(
            "Need at least {} grid points, got {}".format(
                j_max + 3, len(s_grid)))
    steps = []
    for s in s_grid:
        r = round(1.0 / s) if s else 0
        if r == 0 or abs(1.0 / r - s) > 1e-12:
            raise InvalidArgumentError(
                "Grid point {} is not an inverse integer".format(s))
        steps.append(r)
    powers = series_powers(formula.order, formula.sigma, j_max, include_odd)
    if not powers:
        raise InvalidArgumentError(
            "No powers between p={} and j_max={}".format(formula.order, j_max))
    exact = exact_evolve_expectation(terms, T, state, obs)
    deviations = [trotter_expectation(formula, terms, r, T, state, obs) - exact
                  for r in steps]
    coefficients, residual, condition = polynomial_fit(
        s_grid, deviations, powers)
    return SeriesFit(powers, [float(c) for c in coefficients], residual,
                     s_grid, condition)


def x_plus_z():
    """The terms ``{X, Z}`` of ``H = X + Z``."""
    return TermSum([PauliString('X'), PauliString('Z')])


def _deviation_coefficients(terms, formula, T, s_grid, powers):
    eigenvalues, eigenvectors = terms.spectrum()
    exact = (eigenvectors * np.exp(-1j * T * eigenvalues)) @ \
        eigenvectors.conj().T
    samples = [iterated_unitary(formula, terms, int(round(1.0 / s)), T) - exact
               for s in s_grid]
    coefficients, residual, condition = polynomial_fit(s_grid, samples, powers)
    return exact, coefficients, residual, condition


def step_series_structure_check(T_grid=None, s_grid=None, wide_T_grid=None):
    """
    Check how the coefficients of ``P^(1/s)(sT) - e^(-iHT)`` scale with T for
    the first order formula on ``H = X + Z``.

    For every T the deviation is fitted entrywise to ``s, s^2, .., s^5``.
    The first order coefficient must scale like ``T^2``. The identity
    component of the interaction frame second order coefficient,
    ``tr(e^(iHT) C_2(T)) / 2``, must scale faster than
    :data:`S2_EXPONENT_THRESHOLD`; an expansion in ``s^m T^(m+1)`` would make
    it scale like ``T^3``. The raw ``||C_2||`` exponent on ``wide_T_grid`` is
    reported for information.

    :param sequence T_grid: Small T values, default
        :data:`STRUCTURE_T_GRID`.
    :param sequence s_grid: Inverse integers, default ``±1/r`` for
        :data:`STRUCTURE_STEPS`.
    :param sequence wide_T_grid: T values of the diagnostic exponent.
    :return dict: ``status`` (``pass``, ``fail`` or ``inconclusive``),
        ``passed``, the fitted exponents, the worst residual and condition
        number, and the grids.
    """
    T_grid = list(STRUCTURE_T_GRID if T_grid is None else T_grid)
    wide_T_grid = list(STRUCTURE_WIDE_T_GRID if wide_T_grid is None
                       else wide_T_grid)
    if s_grid is None:
        s_grid = [sign / r for r in STRUCTURE_STEPS for sign in (1.0, -1.0)]
    s_grid = [float(s) for s in s_grid]
    terms = x_plus_z()
    formula = first_order(2)
    powers = range(1, 6)
    report = {
        "status": "inconclusive",
        "passed": False,
        "T_grid": T_grid,
        "s_grid": s_grid,
        "wide_T_grid": wide_T_grid,
    }
    try:
        c1_norms, c2_traces = [], []
        worst_residual, worst_condition = 0.0, 0.0
        for T in T_grid:
            exact, coefficients, residual, condition = \
                _deviation_coefficients(terms, formula, T, s_grid, powers)
            worst_residual = max(worst_residual, residual)
            worst_condition = max(worst_condition, condition)
            c1_norms.append(spectral_norm(coefficients[0]))
            frame = exact.conj().T @ coefficients[1]
            c2_traces.append(abs(np.trace(frame)) / 2.0)
        report["s1_exponent"] = loglog_slope(T_grid, c1_norms)
        report["s2_trace_exponent"] = loglog_slope(T_grid, c2_traces)
        report["residual"] = worst_residual
        report["condition"] = worst_condition
        wide_norms = []
        for T in wide_T_grid:
            _, coefficients, _, _ = _deviation_coefficients(
                terms, formula, T, s_grid, powers)
            wide_norms.append(spectral_norm(coefficients[1]))
        report["s2_norm_exponent_wide"] = loglog_slope(wide_T_grid, wide_norms)
    except (FitFailureError, ValueError) as exc:
        LOG.warning("Structure check is inconclusive: %s", exc)
        report["reason"] = str(exc)
        return report
    passed = (
        abs(report["s1_exponent"] - 2.0) <= S1_EXPONENT_MARGIN
        and report["s2_trace_exponent"] > S2_EXPONENT_THRESHOLD
    )
    report["passed"] = passed
    report["status"] = "pass" if passed else "fail"
    LOG.info("Structure check: s1 exponent %.3f, s2 exponent %.3f (%s)",
             report["s1_exponent"], report["s2_trace_exponent"],
             report["status"])
    return report


def default_heff_grid(formula):
    """Symmetric time grid suited to fitting the formula's error operators."""
    if formula.sigma == 2:
        half = np.linspace(0.05, 0.3, 8)
    else:
        half = np.linspace(0.005, 0.05, 10)
    return [float(t) for t in np.concatenate([-half[::-1], half])]


def heff_consistency(formula, terms, t_grid=None, j_max=6, max_order=4):
    """
    Compare fitted ``||E_j||`` with ``(a_max Υ)^j / j^2 alpha_comm^(j)`` for
    ``j = 2..max_order``.

    :param StagedFormula formula: The formula.
    :param TermSum terms: The terms.
    :param sequence t_grid: Branch safe times, default
        :func:`default_heff_grid`.
    :param int j_max: Highest power fitted.
    :param int max_order: Highest ``j`` compared.
    :return dict: ``passed`` and one entry per order with the fitted norm and
        both bounds.
    """
    if t_grid is None:
        t_grid = default_heff_grid(formula)
    operators = bch_error_operators(formula, terms, j_max, t_grid)
    scale = formula.a_max * formula.stages
    orders = []
    for j in range(2, max_order + 1):
        fitted = spectral_norm(operators[j - 2])
        exact_bound = scale ** j / j ** 2 * alpha_comm(terms, j, 'exact')
        loose_bound = scale ** j / j ** 2 * alpha_comm(terms, j, 'bound')
        orders.append({
            "j": j,
            "fitted_norm": fitted,
            "bound_exact": exact_bound,
            "bound_bound_mode": loose_bound,
            "passed": fitted <= exact_bound * (1.0 + BOUND_SLACK),
        })
    passed = all(order["passed"] for order in orders)
    LOG.debug("Effective Hamiltonian consistency %s: %s", passed, orders)
    return {"passed": passed, "orders": orders,
            "formula": formula.to_json()}


def leading_coefficient_bound(obs_norm, a_max, upsilon, lam, T, p):
    """
    Long time bound ``2 ||O|| (a_max Υ λ T)^(p (1 + 1/p))`` on the first
    nonzero series coefficient.
    """
    # pylint: disable=too-many-arguments
    return 2.0 * obs_norm * (a_max * upsilon * lam * T) ** (p + 1)

