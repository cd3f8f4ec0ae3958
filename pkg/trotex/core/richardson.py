"""
Well-conditioned Richardson extrapolation.

Nodes are integer step counts ``r_k = r_scale * ceil(R / sin(pi(2k-1)/8m))``
with ``R = sqrt(8) m / pi``, which places ``s_k = 1/r_k`` close to scaled
Chebyshev points. The weights ``b_k`` solve the generalised Vandermonde
system ``V b = e_1``, ``V[j, k] = s_k**(eta*j)``, and are computed by their
closed form product; the system is only used to verify them.
"""
import logging
import math
import numpy as np
from trotex.core.exceptions import (
    ConditioningError,
    InvalidArgumentError,
    NodeCollisionError,
)
from trotex.util.functions import ceil_tolerant, duplicates

LOG = logging.getLogger(__name__)

#: Largest allowed ``|sum(b) - 1|``.
WEIGHT_SUM_TOLERANCE = 1e-10

#: Largest allowed ``||V b - e_1||_inf``.
RESIDUAL_TOLERANCE = 1e-8


class RichardsonPlan(object):
    """
    Nodes and weights of an ``m`` point extrapolation.

    :ivar int m: Number of nodes.
    :ivar int r_scale: Scale factor of the nodes.
    :ivar int eta: Power of ``s`` the error series advances in.
    :ivar tuple nodes: Step counts ``r_k`` in generation order ``k=1..m``
        (descending).
    :ivar tuple weights: Weights ``b_k`` aligned with ``nodes``.
    :ivar float one_norm: ``||b||_1``.
    :ivar float residual: ``||V b - e_1||_inf``.
    :ivar int max_s_index: Index of the node with the largest ``s`` (the
        smallest ``r_k``).
    """

    # pylint: disable=too-many-arguments
    def __init__(self, m, r_scale, eta, nodes, weights, residual):
        self.m = m
        self.r_scale = r_scale
        self.eta = eta
        self.nodes = tuple(int(node) for node in nodes)
        self.weights = tuple(float(weight) for weight in weights)
        self.one_norm = math.fsum(abs(weight) for weight in self.weights)
        self.residual = residual
        self.max_s_index = int(np.argmin(self.nodes))

    @property
    def samples(self):
        """:return tuple: ``s_k = 1/r_k``."""
        return tuple(1.0 / node for node in self.nodes)

    @property
    def max_sample(self):
        """The largest sample ``s_1``."""
        return 1.0 / self.nodes[self.max_s_index]

    def to_json(self):
        """
        :return dict: ``{"m", "r_scale", "eta", "nodes", "weights"}``.
        """
        return {
            "m": self.m,
            "r_scale": self.r_scale,
            "eta": self.eta,
            "nodes": list(self.nodes),
            "weights": list(self.weights),
        }

    def __repr__(self):
        return "<RichardsonPlan m={} r_scale={} eta={} nodes={}>".format(
            self.m, self.r_scale, self.eta, list(self.nodes))


def base_nodes(m):
    """
    Unscaled nodes ``ceil(R / sin(pi(2k-1)/8m))`` for ``k = 1..m``.

    :raises InvalidArgumentError: If ``m < 1``.
    """
    if m < 1:
        raise InvalidArgumentError("m must be at least 1, got {}".format(m))
    radius = math.sqrt(8.0) * m / math.pi
    return [
        int(math.ceil(radius / math.sin(math.pi * (2 * k - 1) / (8.0 * m))))
        for k in range(1, m + 1)
    ]


def closed_form_weights(nodes, eta):
    """
    ``b_k = prod_{i != k} 1 / (1 - (r_i / r_k)**eta)``.

    :param sequence nodes: Distinct nonzero step counts.
    :param int eta: Power of the error series.
    """
    weights = []
    for k, r_k in enumerate(nodes):
        weight = 1.0
        for i, r_i in enumerate(nodes):
            if i != k:
                weight /= 1.0 - (r_i / r_k) ** eta
        weights.append(weight)
    return weights


def vandermonde_residual(nodes, weights, eta):
    """:math:`\\|Vb - \\hat{e}_1\\|_\\infty` with ``V[j, k] = s_k**(eta j)``."""
    samples = np.array([1.0 / node for node in nodes])
    powers = np.arange(len(nodes))[:, None] * eta
    target = np.zeros(len(nodes))
    target[0] = 1.0
    return float(np.max(np.abs(samples[None, :] ** powers @
                               np.asarray(weights) - target)))


def make_plan(m, r_scale=1, eta=2):
    """
    Build and verify a Richardson plan.

    :param int m: Number of nodes, at least 1.
    :param int r_scale: Node scale, at least 1.
    :param int eta: 1 or 2, the formula's symmetry class.
    :raises InvalidArgumentError: On out of range arguments.
    :raises NodeCollisionError: If two nodes coincide.
    :raises ConditioningError: If the weights fail the sum or residual check.
    :return RichardsonPlan: The plan.
    """
    if m < 1 or r_scale < 1 or eta not in (1, 2):
        raise InvalidArgumentError(
            "make_plan needs m >= 1, r_scale >= 1 and eta in (1, 2), got "
            "m={}, r_scale={}, eta={}".format(m, r_scale, eta)
        )
    nodes = [r_scale * node for node in base_nodes(m)]
    collided = duplicates(nodes)
    if collided:
        raise NodeCollisionError(
            "Nodes {} collide for m={}, r_scale={}".format(
                collided, m, r_scale),
            m=m, r_scale=r_scale
        )
    weights = closed_form_weights(nodes, eta)
    total = math.fsum(weights)
    if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
        raise ConditioningError(
            "Weights for m={} add up to {!r}".format(m, total))
    residual = vandermonde_residual(nodes, weights, eta)
    if residual > RESIDUAL_TOLERANCE:
        raise ConditioningError(
            "Vandermonde residual {:.3g} for m={}, eta={} exceeds {}".format(
                residual, m, eta, RESIDUAL_TOLERANCE)
        )
    plan = RichardsonPlan(m, r_scale, eta, nodes, weights, residual)
    LOG.debug("%s: ||b||_1=%.6g residual=%.3g", plan, plan.one_norm, residual)
    return plan


def extrapolate(plan, values):
    """
    :math:`\\sum_k b_k f(s_k)` in compensated summation.

    :param RichardsonPlan plan: The plan.
    :param sequence values: One value per plan node, in node order.
    :raises InvalidArgumentError: On a length mismatch.
    """
    values = list(values)
    if len(values) != plan.m:
        raise InvalidArgumentError(
            "Need {} values, got {}".format(plan.m, len(values)))
    return math.fsum(
        weight * value for weight, value in zip(plan.weights, values))


def one_norm_growth(m_list, eta=2):
    """:return list: ``||b||_1`` of the unscaled plan per ``m``."""
    return [make_plan(m, 1, eta).one_norm for m in m_list]


def __check_depth_args(a_max, upsilon, lam, T, p, sigma, m, eps, b_one_norm):
    # pylint: disable=too-many-arguments
    if min(a_max, upsilon, lam, T, p, m, b_one_norm) <= 0 or \
            sigma not in (1, 2) or not 0 < eps < 1:
        raise InvalidArgumentError(
            "Sufficient depth needs positive parameters, sigma in (1, 2) and "
            "eps in (0, 1)"
        )


def sufficient_depth_report(a_max, upsilon, lam, T, p, sigma, m, eps,
                            b_one_norm):
    """
    Minimum number of steps for relative extrapolation error ``eps``.

    With ``x = a_max * upsilon * lam * T``, the short time regime
    (``x <= 1``) needs ``ceil(x (4||b||_1/eps)^(1/(sigma m)))`` steps, the
    long time regime ``ceil(x^(1 + ceil(sigma m/p)/(sigma m))
    (4||b||_1/eps)^(1/(sigma m)))``. The bound holds when
    ``x / steps < 1/2``, reported as ``side_condition``.

    :return dict: ``steps``, ``regime`` (``short``/``long``), ``base``
        (``x``) and ``side_condition``.
    """
    # pylint: disable=too-many-arguments
    __check_depth_args(a_max, upsilon, lam, T, p, sigma, m, eps, b_one_norm)
    base = a_max * upsilon * lam * T
    order = sigma * m
    factor = (4.0 * b_one_norm / eps) ** (1.0 / order)
    if base <= 1:
        regime = 'short'
        steps = ceil_tolerant(base * factor)
    else:
        regime = 'long'
        exponent = 1.0 + math.ceil(order / p) / order
        steps = ceil_tolerant(base ** exponent * factor)
    steps = max(1, steps)
    return {
        "steps": steps,
        "regime": regime,
        "base": base,
        "side_condition": base / steps < 0.5,
    }


def sufficient_min_steps(a_max, upsilon, lam, T, p, sigma, m, eps,
                         b_one_norm):
    """The ``steps`` of :func:`sufficient_depth_report`."""
    # pylint: disable=too-many-arguments
    return sufficient_depth_report(
        a_max, upsilon, lam, T, p, sigma, m, eps, b_one_norm)["steps"]


def choose_r_scale(m, min_steps):
    """
    Smallest ``r_scale`` whose smallest node is at least ``min_steps``.

    :raises InvalidArgumentError: If ``min_steps < 1``.
    """
    if min_steps < 1:
        raise InvalidArgumentError(
            "min_steps must be at least 1, got {}".format(min_steps))
    return max(1, int(math.ceil(min_steps / min(base_nodes(m)))))


def choose_m(p, eps):
    """``m = p * ceil(ln(1/eps))`` nodes for target error ``eps``."""
    if p < 1 or not 0 < eps < 1:
        raise InvalidArgumentError(
            "choose_m needs p >= 1 and eps in (0, 1), got p={}, eps={}".format(
                p, eps)
        )
    return p * int(math.ceil(math.log(1.0 / eps)))


def richardson_error_bound(plan, a_max, upsilon, lam, T, p, sigma, obs_norm):
    """
    Bound on the extrapolation error with exact samples.

    ``4 ||O|| ||b||_1 eta^K (s_1 a_max upsilon lam T)^(sigma m)`` with
    ``eta = max(a_max upsilon lam T, 1)`` and ``K = ceil(sigma m / p)``.
    Infinite when ``s_1 a_max upsilon lam T >= 1/2``.
    """
    # pylint: disable=too-many-arguments
    base = a_max * upsilon * lam * T
    scaled = plan.max_sample * base
    if scaled >= 0.5:
        return math.inf
    order = sigma * plan.m
    growth = max(base, 1.0) ** math.ceil(order / p)
    return 4.0 * obs_norm * plan.one_norm * growth * scaled ** order
