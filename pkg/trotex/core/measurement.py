"""
Measurement models and resource formulas.

Two ways of turning an evolved state into an estimate are modelled:

 - incoherent sampling: ``N`` projective measurements of the observable,
   simulated exactly from its eigenvalue distribution;
 - coherent estimation: amplitude estimation is represented only by its
   guarantee ``|estimate - value| <= eps_data`` (a bounded noise oracle) and
   its Grover oracle call count.

Sample counts are relative to the observable norm: ``eps_data`` is an error
in units of ``||O||``.
"""
import collections
import logging
import math
import numpy as np
import trotex
from trotex.core.exceptions import InvalidArgumentError
from trotex.util.functions import ceil_tolerant
from trotex.util.rng import child_generator

LOG = logging.getLogger(__name__)

#: Largest distance between the mean of the sampled distribution and the
#: exact value that is not reported.
MEAN_MISMATCH_TOLERANCE = 1e-8


class ErrorBudget(collections.namedtuple(
        'ErrorBudget', ['eps_total', 'eps_ext', 'eps_data', 'amplification'])):
    """
    Split of a total error over the extrapolation and the data.

    ``eps_ext = eps_total / 2`` and ``eps_data = eps_total / (2 A)`` with
    ``A`` the noise amplification (``||b||_1`` or ``L_m``).
    """

    __slots__ = ()

    def to_json(self):
        return dict(self._asdict())


class ResourceReport(collections.namedtuple(
        'ResourceReport', ['d_max', 'c_trot', 'per_node'])):
    """
    Trotter step accounting of one estimate.

    ``d_max`` is the most steps in a single circuit, ``c_trot`` the total
    over all circuits and repetitions, ``per_node`` the ``(r_k,
    repetitions)`` pairs.
    """

    __slots__ = ()

    def to_json(self):
        return {
            "d_max": self.d_max,
            "c_trot": self.c_trot,
            "per_node": [list(pair) for pair in self.per_node],
        }


def __check_open_unit(**values):
    for name, value in values.items():
        if not 0 < value < 1:
            raise InvalidArgumentError(
                "{} must be in (0, 1), got {}".format(name, value))


def hoeffding_samples(eps_data, delta_prime):
    """
    :math:`\\lceil\\ln(2/\\delta')/(2\\epsilon^2)\\rceil` shots for error
    ``eps_data`` with failure probability ``delta_prime``.
    """
    __check_open_unit(delta_prime=delta_prime)
    if not 0 < eps_data <= 1:
        raise InvalidArgumentError(
            "eps_data must be in (0, 1], got {}".format(eps_data))
    return ceil_tolerant(math.log(2.0 / delta_prime) / (2.0 * eps_data ** 2))


def iqae_grover_calls(eps_data, m, delta):
    """
    Grover oracle calls of iterative amplitude estimation for all ``m``
    nodes: :math:`\\lceil\\frac{100}{\\epsilon}\\ln(\\frac{2m}{\\delta}
    \\ln\\frac{\\pi}{\\epsilon})\\rceil`.
    """
    __check_open_unit(eps_data=eps_data, delta=delta)
    if m < 1:
        raise InvalidArgumentError("m must be at least 1, got {}".format(m))
    return ceil_tolerant(
        100.0 / eps_data *
        math.log(2.0 * m / delta * math.log(math.pi / eps_data))
    )


def shadows_samples(eps_data, delta, M, max_norm):
    """
    Classical shadow snapshots to estimate ``M`` observables:
    :math:`\\lceil\\frac{128}{\\epsilon^2}\\|O\\|_\\mathrm{max}^2
    \\ln(M/\\delta)\\rceil`.
    """
    if eps_data <= 0 or delta <= 0 or M < 1 or max_norm < 0:
        raise InvalidArgumentError(
            "shadows_samples needs eps_data > 0, delta > 0, M >= 1 and "
            "max_norm >= 0"
        )
    return ceil_tolerant(
        128.0 / eps_data ** 2 * max_norm ** 2 * math.log(M / delta))


def per_node_delta(delta, m):
    """Union bound failure probability ``delta / m`` per node."""
    if m < 1:
        raise InvalidArgumentError("m must be at least 1, got {}".format(m))
    return delta / m


def make_budget(eps_total, amplification):
    """
    :raises InvalidArgumentError: If ``eps_total`` is not in ``(0, 2)`` or
        ``amplification < 1``.
    """
    if not 0 < eps_total < 2 or amplification < 1:
        raise InvalidArgumentError(
            "make_budget needs eps_total in (0, 2) and amplification >= 1, "
            "got {}, {}".format(eps_total, amplification)
        )
    return ErrorBudget(eps_total, eps_total / 2.0,
                       eps_total / (2.0 * amplification), amplification)


def samples_for_budget(budget, m, delta=None):
    """
    Hoeffding shots per node for ``budget.eps_data`` over ``m`` nodes, the
    overall failure probability defaults to :data:`trotex.DEFAULT_DELTA`.
    """
    delta = trotex.DEFAULT_DELTA if delta is None else delta
    return hoeffding_samples(budget.eps_data, per_node_delta(delta, m))


def resource_report(nodes, repetitions_per_node):
    """
    :param sequence nodes: Step counts, sign ignored.
    :param int repetitions_per_node: Circuits run per node.
    :raises InvalidArgumentError: On an empty or zero node or fewer than 1
        repetition.
    """
    nodes = [abs(int(node)) for node in nodes]
    if not nodes or min(nodes) < 1 or repetitions_per_node < 1:
        raise InvalidArgumentError(
            "Need nonzero nodes and at least 1 repetition, got {} and "
            "{}".format(nodes, repetitions_per_node)
        )
    return ResourceReport(
        d_max=max(nodes),
        c_trot=repetitions_per_node * sum(nodes),
        per_node=tuple((node, repetitions_per_node) for node in nodes),
    )


def coherent_resource_report(nodes, grover_calls):
    """
    Step accounting when every node is estimated coherently with
    ``grover_calls`` oracle calls, each running the node's circuit once:
    the deepest circuit is ``grover_calls * max(r)``.
    """
    report = resource_report(nodes, grover_calls)
    return ResourceReport(grover_calls * report.d_max, report.c_trot,
                          report.per_node)


def simulate_incoherent(exact_value, obs, state_after, N, rng_seed,
                        purpose='incoherent'):
    """
    Mean of ``N`` simulated projective measurements of ``obs``.

    Outcomes are eigenvalues of ``obs`` drawn with probabilities
    ``|<v_i|psi>|^2``; repeated eigenvalues are drawn as separate outcomes
    with the same value.

    :param float exact_value: The expectation value the distribution should
        have, mismatches are logged.
    :param Observable obs: Observable.
    :param numpy.ndarray|StateVector state_after: The evolved state.
    :param int N: Number of shots, at least 1.
    :param int|numpy.random.Generator rng_seed: Seed or stream.
    :param str purpose: Stream label when ``rng_seed`` is a seed.
    :return float: The sample mean.
    """
    # pylint: disable=too-many-arguments
    if N < 1:
        raise InvalidArgumentError("N must be at least 1, got {}".format(N))
    amplitudes = getattr(state_after, 'amplitudes', state_after)
    eigenvalues, eigenvectors = obs.spectrum()
    probabilities = np.abs(eigenvectors.conj().T @ amplitudes) ** 2
    probabilities = probabilities / probabilities.sum()
    mean = float(np.dot(probabilities, eigenvalues))
    if abs(mean - exact_value) > MEAN_MISMATCH_TOLERANCE:
        LOG.warning(
            "Outcome distribution has mean %.12g, exact value is %.12g",
            mean, exact_value)
    counts = child_generator(rng_seed, purpose).multinomial(
        int(N), probabilities)
    return float(np.dot(counts, eigenvalues) / N)


def simulate_noisy_eval(exact_value, eps_data, rng_seed,
                        adversarial_sign=None, purpose='bounded-noise'):
    """
    A coherent estimate: ``exact_value + u`` with ``u`` uniform on
    ``[-eps_data, eps_data]``, or ``exact_value + eps_data *
    adversarial_sign`` when a sign is supplied.
    """
    if eps_data < 0:
        raise InvalidArgumentError(
            "eps_data can't be negative, got {}".format(eps_data))
    if adversarial_sign is not None:
        return exact_value + eps_data * float(np.sign(adversarial_sign))
    if eps_data == 0:
        return exact_value
    noise = child_generator(rng_seed, purpose).uniform(-eps_data, eps_data)
    return exact_value + float(noise)
