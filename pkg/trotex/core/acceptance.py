"""
The acceptance suite: eleven numerical checks of the whole library, each
reported as one JSON verdict.

Every check takes its parameters from :data:`CRITERIA` defaults, optionally
overridden by a ``criterion-<id>.json`` document in the suite's config
directory. A check that raises is recorded as failed with the reason, the
remaining checks still run. Verdicts are logged with ``criterion`` and
``verdict`` extras so :class:`trotex.util.exitcode.ExitCodeTracker` can
decide the exit code.
"""
import collections
import logging
import math
import os
import time
import numpy as np
from trotex.core.chebyshev import (
    chebyshev_nodes,
    choose_ell_snapped,
    interpolate_at_zero,
    lebesgue_bound,
    lebesgue_constant,
    make_interpolation_plan,
)
from trotex.core.evolution import (
    Observable,
    exact_evolve,
    exact_evolve_expectation,
    random_bitstring_state,
    random_pauli_observable,
    trotter_expectation,
)
from trotex.core.excepthandler import trotex_except_handle
from trotex.core.exceptions import (
    ConfigError,
    EvolutionError,
    InvalidArgumentError,
)
from trotex.core.experiment import ExperimentConfig, run_error_vs_m
from trotex.core.formula import (
    bch_error_operators,
    first_order,
    order_slope,
    random_two_term_hamiltonian,
    suzuki,
)
from trotex.core.measurement import (
    hoeffding_samples,
    iqae_grover_calls,
    resource_report,
    shadows_samples,
    simulate_incoherent,
)
from trotex.core.oracles import (
    step_series_structure_check,
    default_heff_grid,
    heff_consistency,
    x_plus_z,
)
from trotex.core.richardson import make_plan, sufficient_min_steps
from trotex.core.runner import ExperimentRunner
from trotex.core.taskcontext import NodeTaskContext
from trotex.core.terms import (
    alpha_comm,
    build_heisenberg_chain,
    lambda_param,
    project_terms,
    spectral_norm,
    total_z_projector,
)
from trotex.scheduling import TaskContext
from trotex.util import arithmetic
from trotex.util.jsonio import dump_json, load_json

LOG = logging.getLogger(__name__)

#: Relative slack on comparisons of quantities that are equal in exact
#: arithmetic.
ROUNDING_SLACK = 1e-9


def _evaluate_nodes(runner, formula, terms, T, state, obs, nodes):
    """Noise free ``f(1/r)`` for every node, evaluated by ``runner``."""
    # pylint: disable=too-many-arguments
    def job(ctx):
        value = trotter_expectation(formula, terms, ctx.node, T, state, obs)
        return value, value
    contexts = runner.evaluate([
        NodeTaskContext(ExperimentRunner.TASK_NAME, node, index, job)
        for index, node in enumerate(nodes)
    ])
    failed = [ctx.failure for ctx in contexts if ctx.failed]
    if failed:
        raise EvolutionError("Node evaluation failed: {}".format(
            "; ".join(failed)))
    return [ctx.value for ctx in contexts]


def check_order_of_accuracy(params, master_seed, runner):
    """Slope of the one step error is ``p + 1`` for P1, S2 and S4."""
    # pylint: disable=unused-argument
    terms = random_two_term_hamiltonian(params.get("seed", master_seed),
                                        norm=params["norm"])
    t_grid = np.geomspace(params["t_min"], params["t_max"], params["points"])
    details = {}
    for name, formula in (('P1', first_order(2)), ('S2', suzuki(1, 2)),
                          ('S4', suzuki(2, 2))):
        slope = order_slope(formula, terms, t_grid)
        details[name] = {
            "order": formula.order,
            "slope": slope,
            "passed": abs(slope - (formula.order + 1)) <= params["tolerance"],
        }
    return all(entry["passed"] for entry in details.values()), details


def check_bch_bound(params, master_seed, runner):
    """
    Fitted first order error operators respect the commutator bound, the
    symmetric formula has no odd ones.
    """
    # pylint: disable=unused-argument
    terms = x_plus_z()
    consistency = heff_consistency(first_order(2), terms,
                                   max_order=params["max_order"])
    formula = suzuki(1, 2)
    operators = bch_error_operators(formula, terms, params["j_max"],
                                    default_heff_grid(formula))
    # operators[j - 1] is E_(j+1), the coefficient of t^j.
    odd = {j: spectral_norm(operators[j - 1])
           for j in range(1, params["j_max"] + 1, 2)}
    symmetric_passed = all(norm <= params["zero_tolerance"]
                           for norm in odd.values())
    details = {
        "first_order": consistency,
        "symmetric_odd_norms": odd,
        "symmetric_passed": symmetric_passed,
    }
    return consistency["passed"] and symmetric_passed, details


def check_richardson_plans(params, master_seed, runner):
    """Node values, weight normalisation, node ranges and norm growth."""
    # pylint: disable=unused-argument
    nodes = list(make_plan(3, 1, params["eta"]).nodes)
    failures = []
    norms = {}
    for m in range(1, params["m_max"] + 1):
        plan = make_plan(m, 1, params["eta"])
        norms[m] = plan.one_norm
        if abs(math.fsum(plan.weights) - 1.0) > 1e-10:
            failures.append("m={}: weights add up to {}".format(
                m, math.fsum(plan.weights)))
        if plan.residual > 1e-8:
            failures.append("m={}: residual {}".format(m, plan.residual))
        if not all(m <= node <= 3 * m * m for node in plan.nodes):
            failures.append("m={}: nodes {} out of range".format(
                m, list(plan.nodes)))
    ratio = norms[params["m_max"]] / norms[4]
    ratio_bound = 2 * math.log(params["m_max"]) / math.log(4)
    if nodes != [21, 8, 5]:
        failures.append("m=3 nodes are {}".format(nodes))
    if ratio > ratio_bound:
        failures.append("norm ratio {} exceeds {}".format(ratio, ratio_bound))
    details = {
        "m3_nodes": nodes,
        "one_norms": norms,
        "norm_ratio": ratio,
        "norm_ratio_bound": ratio_bound,
        "failures": failures,
    }
    return not failures, details


def _chain_config(params, master_seed, measurement, experiment_id):
    return ExperimentConfig({
        "experiment_id": experiment_id,
        "system": {"L": params["L"], "seed": params.get("seed", master_seed)},
        "time": params["T"],
        "formula": {"kind": "suzuki", "k": 1},
        "method": "richardson",
        "m_values": list(range(1, params["m_max"] + 1)),
        "measurement": measurement,
        "min_steps_rule": {"kind": "lambda_power"},
    })


def _require_rows(rows):
    reasons = [row["reason"] for row in rows if row.get("reason")]
    if reasons:
        raise EvolutionError("Rows failed: {}".format("; ".join(reasons)))
    return rows


def check_extrapolation_power(params, master_seed, runner):
    """Exact evaluations: the error falls with m until the rounding floor."""
    rows = _require_rows(run_error_vs_m(
        _chain_config(params, master_seed, {"kind": "exact"},
                      "acceptance-4"),
        master_seed=master_seed, runner=runner))
    errors = [row["err_extrapolated"] for row in rows]
    improvement = errors[-1] <= errors[0] / params["improvement"]
    monotone = True
    for previous, current in zip(errors, errors[1:]):
        if previous < params["floor"]:
            break
        if current >= previous:
            monotone = False
    details = {
        "errors": errors,
        "err_plain": [row["err_plain"] for row in rows],
        "d_max": [row["d_max"] for row in rows],
        "improvement": improvement,
        "monotone": monotone,
    }
    return improvement and monotone, details


def check_noise_plateau(params, master_seed, runner):
    """
    Adversarial bounded noise: the error stays between ``eps_data`` and the
    noise free error plus the amplified noise.
    """
    eps_data = params["eps_data"]
    exact_rows = _require_rows(run_error_vs_m(
        _chain_config(params, master_seed, {"kind": "exact"},
                      "acceptance-5-exact"),
        master_seed=master_seed, runner=runner))
    noisy_rows = _require_rows(run_error_vs_m(
        _chain_config(params, master_seed, {
            "kind": "bounded_noise", "eps_data": eps_data,
            "adversarial": True}, "acceptance-5"),
        master_seed=master_seed, runner=runner))
    entries = []
    for exact_row, noisy_row in zip(exact_rows, noisy_rows):
        error = noisy_row["err_extrapolated"]
        upper = exact_row["err_extrapolated"] + \
            noisy_row["amplification"] * eps_data
        entries.append({
            "m": noisy_row["m"],
            "err": error,
            "lower": eps_data,
            "upper": upper,
            "passed": (error >= eps_data * (1 - ROUNDING_SLACK) and
                       error <= upper * (1 + ROUNDING_SLACK) + 1e-15),
        })
    return all(entry["passed"] for entry in entries), {"rows": entries}


def check_interpolation_error(params, master_seed, runner):
    """Snapped Chebyshev interpolation meets the doubled error bound."""
    # pylint: disable=too-many-locals
    seed = params.get("seed", master_seed)
    terms = build_heisenberg_chain(params["L"], seed)
    formula = suzuki(1, terms.gamma_count)
    state = random_bitstring_state(params["L"], seed)
    obs = random_pauli_observable(params["L"], 3, seed)
    T = params["T"]
    exact = exact_evolve_expectation(terms, T, state, obs)
    p, sigma = formula.order, formula.sigma
    entries = []
    for m in params["m_values"]:
        lam = lambda_param(terms, p, sigma, m, int(math.ceil(sigma * m / p)))
        base = formula.a_max * formula.stages * lam * T
        if base <= 1:
            raise InvalidArgumentError(
                "T={} gives a_max Upsilon lambda T = {} <= 1".format(T, base))
        ell = choose_ell_snapped(formula.a_max, formula.stages, lam, T, p, m)
        plan = make_interpolation_plan(m, ell)
        values = _evaluate_nodes(runner, formula, terms, T, state, obs,
                                 plan.snapped_nodes)
        error = abs(interpolate_at_zero(plan.samples, values) - exact)
        bound = 2 * 11 * math.exp(-1.5 * m) * obs.norm
        entries.append({
            "m": m, "ell": ell, "base": base,
            "nodes": list(plan.snapped_nodes),
            "error": error, "bound": bound, "passed": error <= bound,
        })
    return all(entry["passed"] for entry in entries), {"rows": entries}


def check_lebesgue_constants(params, master_seed, runner):
    """Chebyshev Lebesgue constants and their growth under snapping."""
    # pylint: disable=unused-argument
    entries = []
    for m in params["m_values"]:
        exact = lebesgue_constant(chebyshev_nodes(m, 1.0))
        ell = choose_ell_snapped(0.5, 2, params["lam"], params["T"], 2, m)
        snapped = make_interpolation_plan(m, ell).lebesgue
        entries.append({
            "m": m,
            "lebesgue": exact,
            "bound": lebesgue_bound(m),
            "snapped_lebesgue": snapped,
            "passed": exact <= lebesgue_bound(m) and snapped <= 2 * exact,
        })
    return all(entry["passed"] for entry in entries), {"rows": entries}


def check_structure(params, master_seed, runner):
    """The deviation series of ``X + Z`` is not an ``s^m T^(m+1)`` series."""
    # pylint: disable=unused-argument
    report = step_series_structure_check(
        T_grid=params.get("T_grid"), s_grid=params.get("s_grid"),
        wide_T_grid=params.get("wide_T_grid"))
    return report["passed"], report


def check_hoeffding(params, master_seed, runner):
    """Empirical failure rate of Hoeffding sample counts."""
    # pylint: disable=unused-argument,too-many-locals
    seed = params.get("seed", master_seed)
    terms = build_heisenberg_chain(2, seed)
    evolved = exact_evolve(terms, params["T"],
                           random_bitstring_state(2, seed))
    obs = random_pauli_observable(2, 3, seed)
    eigenvalues, _ = obs.spectrum()
    low, high = float(eigenvalues[0]), float(eigenvalues[-1])
    rescaled = Observable(
        (2.0 * obs.matrix - (high + low) * np.eye(4)) / (high - low))
    exact = rescaled.expectation(evolved)
    eps, delta = params["eps"], params["delta"]
    shots = hoeffding_samples(eps, delta)
    trials = params["trials"]
    failures = 0
    for trial in range(trials):
        mean = simulate_incoherent(exact, rescaled, evolved, shots, seed,
                                   purpose="hoeffding/trial-{}".format(trial))
        if abs(mean - exact) > eps * rescaled.spread:
            failures += 1
    rate = failures / float(trials)
    allowed = delta + 3 * math.sqrt(delta * (1 - delta) / trials)
    details = {"shots": shots, "failures": failures, "rate": rate,
               "allowed": allowed}
    return rate <= allowed, details


def check_resource_formulas(params, master_seed, runner):
    """Library resource formulas against the arithmetic oracle."""
    # pylint: disable=unused-argument
    library = {
        'sufficient_min_steps': lambda case: sufficient_min_steps(**case),
        'iqae_grover_calls': lambda case: iqae_grover_calls(**case),
        'shadows_samples': lambda case: shadows_samples(**case),
        'resource_report': lambda case: tuple(
            resource_report(**case)[:2]),
    }
    entries = []
    for name, cases in sorted(arithmetic.CASES.items()):
        for case in cases:
            got = library[name](case)
            want = arithmetic.expected(name, case)
            entries.append({"formula": name, "case": case, "got": got,
                            "expected": want, "passed": got == want})
    return all(entry["passed"] for entry in entries), {"rows": entries}


def check_symmetry_projection(params, master_seed, runner):
    """Projected norms and commutator sums don't exceed the full ones."""
    # pylint: disable=unused-argument
    terms = build_heisenberg_chain(2, params.get("seed", master_seed))
    projected = project_terms(
        terms, total_z_projector(2, params["magnetisation"]))
    details = {
        "Lambda": terms.norm_sum(),
        "Lambda_projected": projected.norm_sum(),
        "alpha2": alpha_comm(terms, 2, 'exact'),
        "alpha2_projected": alpha_comm(projected, 2, 'exact'),
    }
    passed = (
        details["Lambda_projected"] <=
        details["Lambda"] * (1 + ROUNDING_SLACK) and
        details["alpha2_projected"] <=
        details["alpha2"] * (1 + ROUNDING_SLACK) + 1e-12
    )
    return passed, details


#: Criteria by id: title, check and default parameters.
CRITERIA = collections.OrderedDict([
    (1, ("order of accuracy", check_order_of_accuracy,
         {"norm": 4.0, "t_min": 1e-3, "t_max": 1e-2, "points": 12,
          "tolerance": 0.15})),
    (2, ("effective Hamiltonian error bound", check_bch_bound,
         {"max_order": 4, "j_max": 6, "zero_tolerance": 1e-8})),
    (3, ("Richardson nodes and weights", check_richardson_plans,
         {"eta": 2, "m_max": 32})),
    (4, ("extrapolation power", check_extrapolation_power,
         {"L": 6, "T": 1.0, "m_max": 5, "improvement": 100.0,
          "floor": 1e-10})),
    (5, ("noise plateau", check_noise_plateau,
         {"L": 6, "T": 1.0, "m_max": 5, "eps_data": 1e-6})),
    (6, ("interpolation error", check_interpolation_error,
         {"L": 4, "T": 0.1, "m_values": [4, 6, 8]})),
    (7, ("Lebesgue constants", check_lebesgue_constants,
         {"m_values": [2, 4, 8], "lam": 8.0, "T": 0.25})),
    (8, ("deviation series structure", check_structure,
         {"T_grid": None, "s_grid": None, "wide_T_grid": None})),
    (9, ("Hoeffding validity", check_hoeffding,
         {"T": 1.0, "eps": 0.05, "delta": 0.05, "trials": 200})),
    (10, ("resource formulas", check_resource_formulas, {})),
    (11, ("symmetry projection", check_symmetry_projection,
          {"magnetisation": 0})),
])


def load_overrides(config_dir, criterion):
    """
    Parameters from ``<config_dir>/criterion-<id>.json``, empty if there is
    no such file.

    :raises ConfigError: If the file is not a JSON object.
    """
    if not config_dir:
        return {}
    path = os.path.join(config_dir, "criterion-{}.json".format(criterion))
    if not os.path.isfile(path):
        return {}
    try:
        document = load_json(path)
    except (OSError, ValueError) as exc:
        raise ConfigError("Can't read {}: {}".format(path, exc))
    if not isinstance(document, dict):
        raise ConfigError("{} must hold a JSON object".format(path))
    return document


def run_criterion(criterion, config_dir=None, master_seed=0, runner=None):
    """
    Run one criterion and return its verdict.

    :return dict: ``criterion``, ``title``, ``passed``, ``params``,
        ``details`` and ``reason`` (None unless the check raised).
    """
    runner = ExperimentRunner(threads=0) if runner is None else runner
    title, check, defaults = CRITERIA[criterion]
    ctx = TaskContext('criterion', criterion)
    verdict = {"criterion": criterion, "title": title, "passed": False,
               "params": dict(defaults), "details": None, "reason": None}
    started = time.time()
    with trotex_except_handle(ctx):
        verdict["params"].update(load_overrides(config_dir, criterion))
        passed, details = check(verdict["params"], master_seed, runner)
        verdict.update(passed=bool(passed), details=details)
    verdict["reason"] = ctx.failure
    level = logging.INFO if verdict["passed"] else logging.WARNING
    LOG.log(level, "Criterion %d (%s): %s in %.1fs%s", criterion, title,
            "passed" if verdict["passed"] else "FAILED", time.time() - started,
            ": {}".format(ctx.failure) if ctx.failed else "",
            extra={'criterion': criterion, 'verdict': verdict["passed"]})
    return verdict


def run_acceptance_suite(config_dir=None, master_seed=0, out_dir=None,
                         runner=None, criteria=None):
    """
    Run the acceptance criteria and write their verdicts.

    :param str config_dir: Directory with ``criterion-<id>.json`` overrides,
        missing or empty means built-in defaults.
    :param int master_seed: Seed of every random draw.
    :param str out_dir: Where ``criterion-<id>.json`` verdicts and
        ``summary.json`` go, default ``acceptance`` in the working
        directory. It must differ from ``config_dir``.
    :param ExperimentRunner runner: Node evaluator.
    :param sequence criteria: Ids to run, default all.
    :raises ConfigError: If ``out_dir`` is the config directory.
    :return dict: The summary: pass/fail per criterion and the counts.
    """
    # pylint: disable=too-many-arguments
    out_dir = out_dir or os.path.join(os.getcwd(), "acceptance")
    if config_dir and os.path.realpath(out_dir) == \
            os.path.realpath(config_dir):
        raise ConfigError(
            "Verdicts would overwrite the overrides in {}".format(config_dir))
    os.makedirs(out_dir, exist_ok=True)
    verdicts = collections.OrderedDict()
    for criterion in (criteria or CRITERIA.keys()):
        verdict = run_criterion(criterion, config_dir, master_seed, runner)
        dump_json(os.path.join(out_dir, "criterion-{}.json".format(
            criterion)), verdict)
        verdicts[criterion] = verdict["passed"]
    passed = sum(1 for value in verdicts.values() if value)
    summary = {
        "master_seed": master_seed,
        "criteria": {str(key): value for key, value in verdicts.items()},
        "passed": passed,
        "failed": len(verdicts) - passed,
    }
    dump_json(os.path.join(out_dir, "summary.json"), summary)
    LOG.info("Acceptance suite: %d passed, %d failed", passed,
             len(verdicts) - passed)
    return summary
