"""
Chebyshev interpolation of the Trotter evolved expectation value around
``s = 0``.

Samples are taken at Chebyshev points of ``[-ell, ell]``, each replaced by
the nearest inverse integer ``1/r`` so only whole Trotter steps run, and the
interpolant is evaluated at ``s = 0`` with the second barycentric formula.
"""
import collections
import logging
import math
import numpy as np
import trotex
from trotex.core.exceptions import InvalidArgumentError, ResourceLimitError
from trotex.util.functions import duplicates

LOG = logging.getLogger(__name__)

#: :math:`4\\sqrt{2\\pi}e^{1/12}`, constant of the interpolation error bound.
ERROR_CONSTANT = 4.0 * math.sqrt(2.0 * math.pi) * math.exp(1.0 / 12.0)

#: :math:`\\ln 2 + 1 - 1/(2e)`, decay rate of the interpolation error bound.
ERROR_DECAY = math.log(2.0) + 1.0 - 1.0 / (2.0 * math.e)

#: Snapped nodes and the largest ``|1/r - s|`` snapping caused.
SnappedNodes = collections.namedtuple('SnappedNodes',
                                      ['nodes', 'perturbation'])


class InterpolationPlan(object):
    """
    Nodes of an ``m`` point interpolation on ``[-ell, ell]``.

    :ivar int m: Number of nodes.
    :ivar float ell: Interval half width.
    :ivar tuple raw_nodes: Chebyshev points.
    :ivar tuple snapped_nodes: Signed step counts ``r_i`` (empty when not
        snapped).
    :ivar float perturbation: Largest ``|1/r_i - raw_i|``.
    :ivar float lebesgue: Numeric Lebesgue constant of the sampled nodes.
    :ivar float lebesgue_at_zero: ``sum_i |L_i(0)|`` of the sampled nodes.
    """

    # pylint: disable=too-many-instance-attributes,too-many-arguments
    def __init__(self, m, ell, raw_nodes, snapped_nodes, perturbation,
                 lebesgue, lebesgue_at_zero):
        self.m = m
        self.ell = ell
        self.raw_nodes = tuple(float(node) for node in raw_nodes)
        self.snapped_nodes = tuple(int(node) for node in snapped_nodes)
        self.perturbation = perturbation
        self.lebesgue = lebesgue
        self.lebesgue_at_zero = lebesgue_at_zero

    @property
    def samples(self):
        """The ``s`` values actually sampled."""
        if self.snapped_nodes:
            return tuple(1.0 / node for node in self.snapped_nodes)
        return self.raw_nodes

    @property
    def spacing_margin(self):
        """``ell**2`` minus the snapping perturbation."""
        return self.ell ** 2 - self.perturbation

    @property
    def lebesgue_margin(self):
        """``ell / (m**2 L_m)`` minus the snapping perturbation."""
        return self.ell / (self.m ** 2 * lebesgue_bound(self.m)) - \
            self.perturbation

    def to_json(self):
        """:return dict: ``{"m", "ell", "raw_nodes", "snapped_nodes"}``."""
        return {
            "m": self.m,
            "ell": self.ell,
            "raw_nodes": list(self.raw_nodes),
            "snapped_nodes": list(self.snapped_nodes),
        }

    def __repr__(self):
        return "<InterpolationPlan m={} ell={:.6g} nodes={}>".format(
            self.m, self.ell, list(self.snapped_nodes or self.raw_nodes))


def chebyshev_nodes(m, ell):
    """
    ``ell cos(pi(2i-1)/2m)`` for ``i = 1..m``, exactly antisymmetric.

    :raises InvalidArgumentError: If ``m < 1`` or ``ell <= 0``.
    """
    if m < 1 or ell <= 0:
        raise InvalidArgumentError(
            "Need m >= 1 and ell > 0, got m={}, ell={}".format(m, ell))
    half = [ell * math.cos(math.pi * (2 * i - 1) / (2.0 * m))
            for i in range(1, m // 2 + 1)]
    middle = [0.0] if m % 2 else []
    return half + middle + [-node for node in reversed(half)]


def lebesgue_bound(m):
    """:math:`\\frac{2}{\\pi}\\ln(m+1) + 1`."""
    return 2.0 / math.pi * math.log(m + 1.0) + 1.0


def perturbed_lebesgue_bound(m, alpha):
    """
    ``L_m / (1 - alpha)``, the Lebesgue bound for nodes perturbed by at most
    ``alpha (d - c) / (m**2 L_m)``; infinite for ``alpha >= 1``.
    """
    if alpha >= 1:
        return math.inf
    return lebesgue_bound(m) / (1.0 - alpha)


def __long_time_base(a_max, upsilon, lam, T):
    if min(a_max, upsilon, lam, T) <= 0:
        raise InvalidArgumentError(
            "a_max, upsilon, lambda and T must be positive, got {}".format(
                (a_max, upsilon, lam, T))
        )
    return a_max * upsilon * lam * T


def choose_ell(a_max, upsilon, lam, T, p):
    """
    :math:`\\ell = \\frac{1}{2}(a_\\mathrm{max}\\Upsilon\\lambda T)^{-(1+1/p)}`.

    Outside the long time regime (base below 1) a warning is logged and the
    result is clamped to 1/2. ``p`` may be ``math.inf``.

    :raises InvalidArgumentError: On nonpositive arguments.
    """
    base = __long_time_base(a_max, upsilon, lam, T)
    if p <= 0:
        raise InvalidArgumentError("p must be positive, got {}".format(p))
    if base < 1:
        LOG.warning(
            "a_max*upsilon*lambda*T = %.6g is below 1, clamping ell to 1/2",
            base)
        return 0.5
    return 0.5 * base ** -(1.0 + 1.0 / p)


def choose_ell_snapped(a_max, upsilon, lam, T, p, m):
    """
    ``min(choose_ell, 1 / (base**(1+1/p) m**2 L_m))``.

    The second term keeps the inverse integer spacing ``ell**2`` below the
    perturbation ``ell / (m**2 L_m)`` that at most doubles the Lebesgue
    constant.

    :raises InvalidArgumentError: If ``m`` is not even and at least 2.
    """
    # pylint: disable=too-many-arguments
    if m < 2 or m % 2:
        raise InvalidArgumentError(
            "m must be even and at least 2, got {}".format(m))
    ell = choose_ell(a_max, upsilon, lam, T, p)
    base = __long_time_base(a_max, upsilon, lam, T)
    return min(ell, 1.0 / (base ** (1.0 + 1.0 / p) * m ** 2 *
                           lebesgue_bound(m)))


def nearest_inverse_integer(s):
    """
    The positive integer ``r >= 2`` minimising ``|1/r - |s||``.

    :raises InvalidArgumentError: If ``s`` is 0 or ``|s| > 1/2``.
    """
    magnitude = abs(s)
    if magnitude == 0 or magnitude > 0.5:
        raise InvalidArgumentError(
            "Can only snap nonzero nodes with |s| <= 1/2, got {}".format(s))
    lower = max(2, int(math.floor(1.0 / magnitude)))
    return min((lower, lower + 1),
               key=lambda r: (abs(1.0 / r - magnitude), r))


def snap_nodes(raw_nodes, cap=None):
    """
    Replace every node ``s`` by the nearest inverse integer ``1/r`` with the
    sign of ``s``.

    Nodes are processed in order of decreasing ``|s|``; a node whose ``r`` is
    already taken moves outward to the next unused ``|r|`` of its sign.

    :param sequence raw_nodes: Nonzero nodes with ``|s| <= 1/2``.
    :param int cap: Largest ``|r|``, default :data:`trotex.SNAP_CAP`.
    :raises InvalidArgumentError: On a zero node or ``|s| > 1/2``.
    :raises ResourceLimitError: If a node needs ``|r|`` above the cap.
    :return SnappedNodes: Signed ``r`` aligned with ``raw_nodes`` and the
        largest perturbation.
    """
    cap = trotex.SNAP_CAP if cap is None else cap
    raw_nodes = [float(node) for node in raw_nodes]
    order = sorted(range(len(raw_nodes)), key=lambda i: -abs(raw_nodes[i]))
    used = {1: set(), -1: set()}
    snapped = [None] * len(raw_nodes)
    for index in order:
        node = raw_nodes[index]
        if node == 0 or abs(node) > 0.5:
            raise InvalidArgumentError(
                "Can only snap nonzero nodes with |s| <= 1/2, got {}".format(
                    node))
        if 1.0 / abs(node) > cap:
            raise ResourceLimitError(
                "Node {} needs more than {} steps".format(node, cap))
        sign = 1 if node > 0 else -1
        r = nearest_inverse_integer(node)
        while r in used[sign]:
            r += 1
        if r > cap:
            raise ResourceLimitError(
                "Node {} needs {} steps after collision resolution, more "
                "than {}".format(node, r, cap)
            )
        used[sign].add(r)
        snapped[index] = sign * r
    perturbation = max(
        (abs(1.0 / r - s) for r, s in zip(snapped, raw_nodes)), default=0.0)
    return SnappedNodes(snapped, perturbation)


def __distinct_nodes(nodes):
    nodes = np.asarray(nodes, dtype=float)
    if nodes.ndim != 1 or not nodes.size:
        raise InvalidArgumentError("Need a nonempty list of nodes.")
    if duplicates(nodes.tolist()):
        raise InvalidArgumentError(
            "Interpolation nodes must be distinct, got {}".format(
                nodes.tolist()))
    return nodes


def barycentric_weights(nodes):
    """
    ``w_i = 1 / prod_{n != i} (x_i - x_n)`` for nodes scaled to unit
    half width.
    """
    scaled = nodes / np.max(np.abs(nodes))
    differences = scaled[:, None] - scaled[None, :]
    np.fill_diagonal(differences, 1.0)
    return 1.0 / np.prod(differences, axis=1)


def interpolate_at_zero(nodes, values):
    """
    Value at ``s = 0`` of the polynomial interpolating ``values``.

    :param sequence nodes: Distinct sample points.
    :param sequence values: Values at the nodes.
    :raises InvalidArgumentError: On duplicate nodes or a length mismatch.
    :return float: :math:`P_{m-1}f(0)`.
    """
    nodes = __distinct_nodes(nodes)
    values = np.asarray(values, dtype=float)
    if values.shape != nodes.shape:
        raise InvalidArgumentError(
            "Need one value per node, got {} values for {} nodes".format(
                values.size, nodes.size)
        )
    zero = np.flatnonzero(nodes == 0)
    if zero.size:
        return float(values[zero[0]])
    scaled = nodes / np.max(np.abs(nodes))
    terms = barycentric_weights(nodes) / (0.0 - scaled)
    return float(np.dot(terms, values) / np.sum(terms))


def lagrange_basis(nodes, points):
    """
    Lagrange basis polynomials in product form.

    :return numpy.ndarray: ``(len(nodes), len(points))`` values
        ``L_i(points)``.
    """
    nodes = np.asarray(nodes, dtype=float)
    points = np.atleast_1d(np.asarray(points, dtype=float))
    scale = np.max(np.abs(nodes)) or 1.0
    nodes = nodes / scale
    points = points / scale
    basis = np.ones((nodes.size, points.size))
    for i, node in enumerate(nodes):
        for n, other in enumerate(nodes):
            if n != i:
                basis[i] *= (points - other) / (node - other)
    return basis


def lebesgue_at_zero(nodes):
    """:math:`\\sum_i|\\mathcal{L}_i(0)|`, the noise amplification at 0."""
    nodes = __distinct_nodes(nodes)
    return float(np.sum(np.abs(lagrange_basis(nodes, [0.0]))))


def lebesgue_constant(nodes, grid_points=None):
    """
    Maximum of :math:`\\sum_i|\\mathcal{L}_i(s)|` over a uniform grid on
    ``[min(nodes), max(nodes)]``.

    :param int grid_points: At least 1000, default
        :data:`trotex.LEBESGUE_GRID_POINTS`.
    :raises InvalidArgumentError: On duplicate nodes or too few points.
    """
    grid_points = trotex.LEBESGUE_GRID_POINTS if grid_points is None \
        else grid_points
    if grid_points < 1000:
        raise InvalidArgumentError(
            "Need at least 1000 grid points, got {}".format(grid_points))
    nodes = __distinct_nodes(nodes)
    if nodes.size == 1:
        return 1.0
    grid = np.linspace(nodes.min(), nodes.max(), int(grid_points))
    return float(np.max(np.sum(np.abs(lagrange_basis(nodes, grid)), axis=0)))


def interpolation_error_bound(m, obs_norm=1.0):
    """:math:`4\\sqrt{2\\pi}e^{1/12}\\sqrt{m}(2e)^{-m}\\|O\\|`."""
    return ERROR_CONSTANT * math.sqrt(m) * (2.0 * math.e) ** -m * obs_norm


def polynomial_error_bound(max_derivative, ell, m):
    """
    Interpolation error at 0 from a bound on the ``m``-th derivative over
    ``[-ell, ell]``: ``max_derivative (ell / 2m)**m``.
    """
    return max_derivative * (ell / (2.0 * m)) ** m


def choose_interpolation_m(eps):
    """
    Smallest even ``m`` with ``c e^(-gamma m) <= eps``.

    :raises InvalidArgumentError: If ``eps`` is not in ``(0, 1)``.
    """
    if not 0 < eps < 1:
        raise InvalidArgumentError("eps must be in (0, 1), got {}".format(eps))
    m = max(2, int(math.ceil(math.log(ERROR_CONSTANT / eps) / ERROR_DECAY)))
    return m + m % 2


def make_interpolation_plan(m, ell, snap=True, grid_points=None):
    """
    Chebyshev nodes on ``[-ell, ell]``, snapped unless ``snap`` is False,
    with their Lebesgue diagnostics.

    :raises InvalidArgumentError: If ``m`` is not even and at least 2, or
        ``ell`` is not in ``(0, 1/2]`` when snapping.
    """
    if m < 2 or m % 2:
        raise InvalidArgumentError(
            "m must be even and at least 2, got {}".format(m))
    raw = chebyshev_nodes(m, ell)
    if snap:
        snapped, perturbation = snap_nodes(raw)
        samples = [1.0 / r for r in snapped]
    else:
        snapped, perturbation, samples = [], 0.0, raw
    plan = InterpolationPlan(
        m, ell, raw, snapped, perturbation,
        lebesgue_constant(samples, grid_points), lebesgue_at_zero(samples)
    )
    if snap and plan.lebesgue_margin < 0:
        LOG.info(
            "%s: snapping moved nodes by %.3g, more than ell/(m^2 L_m)",
            plan, perturbation)
    return plan
