"""
Independent arithmetic for the resource formulas.

Every formula is written out again with plain :mod:`math`, without importing
anything from trotex, so the library and this module only agree if both
evaluate the formulas as intended. :data:`CASES` holds three parameter sets
per formula; acceptance criterion 10 compares the library against these
functions on them.
"""
import math


def sufficient_min_steps(a_max, upsilon, lam, T, p, sigma, m, eps, b_one):
    # pylint: disable=too-many-arguments
    x = a_max * upsilon * lam * T
    degree = sigma * m
    if x <= 1:
        steps = x * math.exp(math.log(4 * b_one / eps) / degree)
    else:
        k = -(-degree // p)
        steps = math.exp(
            (1 + k / degree) * math.log(x) + math.log(4 * b_one / eps) / degree
        )
    return max(1, math.ceil(steps))


def iqae_grover_calls(eps, m, delta):
    inner = (2 * m / delta) * math.log(math.pi / eps)
    return math.ceil((100 / eps) * math.log(inner))


def shadows_samples(eps, delta, M, max_norm):
    return math.ceil(128 * max_norm * max_norm * math.log(M / delta) /
                     (eps * eps))


def resource_report(nodes, repetitions):
    depths = [abs(node) for node in nodes]
    total = 0
    for depth in depths:
        total += depth * repetitions
    return max(depths), total


#: Parameter sets per formula, keyword arguments of the library functions.
CASES = {
    'sufficient_min_steps': [
        dict(a_max=0.5, upsilon=2, lam=4.0, T=0.1, p=2, sigma=2, m=3,
             eps=1e-3, b_one_norm=1.5),
        dict(a_max=0.5, upsilon=2, lam=10.0, T=0.5, p=2, sigma=2, m=4,
             eps=1e-6, b_one_norm=2.0),
        dict(a_max=1.0, upsilon=1, lam=3.0, T=0.2, p=1, sigma=1, m=2,
             eps=1e-2, b_one_norm=3.0),
    ],
    'iqae_grover_calls': [
        dict(eps_data=0.01, m=3, delta=0.05),
        dict(eps_data=0.1, m=1, delta=0.01),
        dict(eps_data=0.02, m=5, delta=0.1),
    ],
    'shadows_samples': [
        dict(eps_data=0.1, delta=0.05, M=10, max_norm=1.0),
        dict(eps_data=0.05, delta=0.01, M=3, max_norm=2.0),
        dict(eps_data=0.2, delta=0.1, M=1, max_norm=0.5),
    ],
    'resource_report': [
        dict(nodes=[21, 8, 5], repetitions_per_node=1),
        dict(nodes=[42, 16, 10], repetitions_per_node=100),
        dict(nodes=[-7, -3, 3, 7], repetitions_per_node=5),
    ],
}


def expected(name, case):
    """
    Oracle value of formula ``name`` for one entry of :data:`CASES`.

    ``resource_report`` gives ``(d_max, c_trot)``.
    """
    if name == 'sufficient_min_steps':
        return sufficient_min_steps(
            case['a_max'], case['upsilon'], case['lam'], case['T'],
            case['p'], case['sigma'], case['m'], case['eps'],
            case['b_one_norm'])
    if name == 'iqae_grover_calls':
        return iqae_grover_calls(case['eps_data'], case['m'], case['delta'])
    if name == 'shadows_samples':
        return shadows_samples(case['eps_data'], case['delta'], case['M'],
                               case['max_norm'])
    if name == 'resource_report':
        return resource_report(case['nodes'], case['repetitions_per_node'])
    raise KeyError(name)
