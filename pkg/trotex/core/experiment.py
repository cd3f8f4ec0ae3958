"""
Error versus extrapolation degree experiments on a random field Heisenberg
chain.

An experiment is described by one JSON document:

.. code-block:: json

    {
        "experiment_id": "heisenberg-6",
        "system": {"L": 6, "seed": 7},
        "time": [1.0, 2.0],
        "formula": {"kind": "suzuki", "k": 1},
        "method": "richardson",
        "m_values": [1, 2, 3, 4, 5],
        "measurement": {"kind": "bounded_noise", "eps_data": 1e-6,
                        "adversarial": true},
        "min_steps_rule": {"kind": "lambda_power"},
        "observable": {"n_terms": 3},
        "output_path": "heisenberg-6.csv"
    }

For every ``(T, m)`` pair the nodes of an ``m`` point Richardson plan (scaled
so its smallest node has at least the minimum number of steps) or of a
snapped Chebyshev interpolation plan (whose largest ``|s|`` is ``1/r_min``)
are evaluated under the measurement model, combined, and compared with the
exact value. Every row also holds the error of the plain Trotter estimate with
as many steps as the deepest node, and the step accounting of the estimate.
"""
import collections
import csv
import functools
import logging
import math
import os
import sys
import trotex
from trotex.core.chebyshev import (
    interpolate_at_zero,
    lagrange_basis,
    make_interpolation_plan,
)
from trotex.core.evolution import (
    exact_evolve_expectation,
    random_bitstring_state,
    random_pauli_observable,
    trotter_evolve,
)
from trotex.core.excepthandler import trotex_except_handle
from trotex.core.exceptions import ConfigError
from trotex.core.formula import formula_from_descriptor
from trotex.core.measurement import (
    coherent_resource_report,
    hoeffding_samples,
    iqae_grover_calls,
    per_node_delta,
    resource_report,
    simulate_incoherent,
    simulate_noisy_eval,
)
from trotex.core.richardson import choose_r_scale, extrapolate, make_plan
from trotex.core.runner import ExperimentRunner
from trotex.core.taskcontext import NodeTaskContext
from trotex.core.terms import build_heisenberg_chain
from trotex.scheduling import TaskContext
from trotex.util.functions import ceil_tolerant
from trotex.util.jsonio import load_json
from trotex.util.rng import child_generator

LOG = logging.getLogger(__name__)

#: Columns of the CSV output, in order.
CSV_COLUMNS = (
    'experiment_id', 'T', 'm', 'd_max', 'c_trot', 'err_extrapolated',
    'err_plain', 'method', 'measurement',
)

#: Supported extrapolation methods.
METHODS = ('richardson', 'interpolation')

#: Supported measurement models.
MEASUREMENT_KINDS = ('exact', 'incoherent', 'bounded_noise')

#: Supported minimum step rules.
MIN_STEPS_KINDS = ('lambda_power', 'explicit')

#: Interpolation nodes need ``|s| < 1/2``, so their largest ``|s|`` is at
#: most ``1/MIN_INTERPOLATION_STEPS``.
MIN_INTERPOLATION_STEPS = 3

#: The Hamiltonian, formula, initial state and observable of an experiment.
ExperimentSystem = collections.namedtuple(
    'ExperimentSystem', ['terms', 'formula', 'state', 'obs'])


def _get(document, key, types, path, default=None, required=True):
    """Fetch ``document[key]`` checking its type, ``path`` names it."""
    if key not in document:
        if required:
            raise ConfigError("Missing config key \"{}\"".format(path))
        return default
    value = document[key]
    if isinstance(value, bool) and bool not in types:
        raise ConfigError(
            "Config key \"{}\" has the wrong type".format(path))
    if not isinstance(value, types):
        raise ConfigError(
            "Config key \"{}\" should be of type {}, got {!r}".format(
                path, "/".join(t.__name__ for t in types), value)
        )
    return value


def _open_unit(value, path, upper_closed=False):
    if not (0 < value <= 1 if upper_closed else 0 < value < 1):
        raise ConfigError(
            "Config key \"{}\" must be in (0, 1{}, got {}".format(
                path, "]" if upper_closed else ")", value)
        )
    return float(value)


class ExperimentConfig(object):
    """
    A validated experiment description.

    :ivar str experiment_id: Name used in the output and the seed labels.
    :ivar int L: Chain length.
    :ivar int seed: Seed of the fields, the initial state and the observable.
    :ivar tuple times: Evolution times.
    :ivar dict formula: Formula descriptor ``{"kind", "k"}``.
    :ivar str method: ``richardson`` or ``interpolation``.
    :ivar tuple m_values: Numbers of nodes.
    :ivar dict measurement: Normalised measurement model.
    :ivar dict min_steps_rule: ``{"kind": "lambda_power"}`` or
        ``{"kind": "explicit", "r": int}``.
    :ivar int n_terms: Pauli strings in the observable.
    :ivar str output_path: CSV destination or None.
    """

    # pylint: disable=too-many-instance-attributes

    def __init__(self, document, default_id='experiment'):
        """
        :param dict document: The parsed JSON document.
        :param str default_id: Id used when the document has none.
        :raises ConfigError: On a missing or invalid key.
        """
        if not isinstance(document, dict):
            raise ConfigError("An experiment config must be a JSON object.")
        self.experiment_id = _get(document, 'experiment_id', (str,),
                                  'experiment_id', default_id, False)

        system = _get(document, 'system', (dict,), 'system')
        self.L = _get(system, 'L', (int,), 'system.L')
        if self.L < 2:
            raise ConfigError("Config key \"system.L\" must be at least 2")
        self.seed = _get(system, 'seed', (int,), 'system.seed')

        time = _get(document, 'time', (int, float, list), 'time')
        times = time if isinstance(time, list) else [time]
        if not times or any(isinstance(t, bool) or
                            not isinstance(t, (int, float)) or t < 0
                            for t in times):
            raise ConfigError(
                "Config key \"time\" must be a non-negative number or a "
                "nonempty list of them, got {!r}".format(time)
            )
        self.times = tuple(float(t) for t in times)

        formula = _get(document, 'formula', (dict,), 'formula')
        kind = _get(formula, 'kind', (str,), 'formula.kind')
        if kind not in ('first_order', 'suzuki'):
            raise ConfigError(
                "Config key \"formula.kind\" must be first_order or suzuki, "
                "got {!r}".format(kind))
        k = _get(formula, 'k', (int,), 'formula.k', 1, False)
        if k < 1:
            raise ConfigError("Config key \"formula.k\" must be at least 1")
        self.formula = {"kind": kind, "k": k}

        self.method = _get(document, 'method', (str,), 'method')
        if self.method not in METHODS:
            raise ConfigError(
                "Config key \"method\" must be one of {}, got {!r}".format(
                    ", ".join(METHODS), self.method))

        m_values = _get(document, 'm_values', (list,), 'm_values')
        if not m_values or any(isinstance(m, bool) or not isinstance(m, int)
                               or m < 1 for m in m_values):
            raise ConfigError(
                "Config key \"m_values\" must be a nonempty list of positive "
                "integers, got {!r}".format(m_values))
        if self.method == 'interpolation' and any(m % 2 for m in m_values):
            raise ConfigError(
                "Config key \"m_values\" must only hold even values for "
                "interpolation, got {!r}".format(m_values))
        self.m_values = tuple(m_values)

        self.measurement = self.__parse_measurement(
            _get(document, 'measurement', (dict,), 'measurement',
                 {"kind": "exact"}, False))
        self.min_steps_rule = self.__parse_min_steps(
            _get(document, 'min_steps_rule', (dict,), 'min_steps_rule',
                 {"kind": "lambda_power"}, False))

        observable = _get(document, 'observable', (dict,), 'observable', {},
                          False)
        self.n_terms = _get(observable, 'n_terms', (int,),
                            'observable.n_terms', 3, False)
        if self.n_terms < 1:
            raise ConfigError(
                "Config key \"observable.n_terms\" must be at least 1")
        self.output_path = _get(document, 'output_path', (str,),
                                'output_path', None, False)

    @staticmethod
    def __parse_measurement(measurement):
        kind = _get(measurement, 'kind', (str,), 'measurement.kind')
        if kind not in MEASUREMENT_KINDS:
            raise ConfigError(
                "Config key \"measurement.kind\" must be one of {}, got "
                "{!r}".format(", ".join(MEASUREMENT_KINDS), kind))
        parsed = {"kind": kind}
        if kind == 'exact':
            return parsed
        if 'delta' in measurement:
            parsed["delta"] = _open_unit(
                _get(measurement, 'delta', (int, float), 'measurement.delta'),
                'measurement.delta')
        if kind == 'incoherent':
            if 'N' in measurement:
                parsed["N"] = _get(measurement, 'N', (int,), 'measurement.N')
                if parsed["N"] < 1:
                    raise ConfigError(
                        "Config key \"measurement.N\" must be at least 1")
            else:
                parsed["eps_data"] = _open_unit(
                    _get(measurement, 'eps_data', (int, float),
                         'measurement.eps_data'),
                    'measurement.eps_data', upper_closed=True)
            return parsed
        parsed["eps_data"] = float(_get(
            measurement, 'eps_data', (int, float), 'measurement.eps_data'))
        if parsed["eps_data"] <= 0:
            raise ConfigError(
                "Config key \"measurement.eps_data\" must be positive")
        parsed["adversarial"] = _get(measurement, 'adversarial', (bool,),
                                     'measurement.adversarial', False, False)
        return parsed

    @staticmethod
    def __parse_min_steps(rule):
        kind = _get(rule, 'kind', (str,), 'min_steps_rule.kind')
        if kind not in MIN_STEPS_KINDS:
            raise ConfigError(
                "Config key \"min_steps_rule.kind\" must be one of {}, got "
                "{!r}".format(", ".join(MIN_STEPS_KINDS), kind))
        if kind == 'lambda_power':
            return {"kind": kind}
        r = _get(rule, 'r', (int,), 'min_steps_rule.r')
        if r < 1:
            raise ConfigError(
                "Config key \"min_steps_rule.r\" must be at least 1")
        return {"kind": kind, "r": r}

    @classmethod
    def load(cls, path):
        """
        Read a config from a JSON file, its id defaults to the file name.

        :raises ConfigError: If the file can't be read or parsed.
        """
        try:
            document = load_json(path)
        except (OSError, ValueError) as exc:
            raise ConfigError(
                "Can't read experiment config {}: {}".format(path, exc))
        default_id = os.path.splitext(os.path.basename(path))[0]
        return cls(document, default_id=default_id)

    def to_json(self):
        document = {
            "experiment_id": self.experiment_id,
            "system": {"L": self.L, "seed": self.seed},
            "time": list(self.times),
            "formula": dict(self.formula),
            "method": self.method,
            "m_values": list(self.m_values),
            "measurement": dict(self.measurement),
            "min_steps_rule": dict(self.min_steps_rule),
            "observable": {"n_terms": self.n_terms},
        }
        if self.output_path is not None:
            document["output_path"] = self.output_path
        return document

    def __repr__(self):
        return "<ExperimentConfig {} L={} {} m={}>".format(
            self.experiment_id, self.L, self.method, list(self.m_values))


def build_system(config):
    """
    The chain, formula, initial basis state and Pauli observable of a
    config, all drawn from ``config.seed``.

    :return ExperimentSystem: The system.
    """
    terms = build_heisenberg_chain(config.L, config.seed)
    return ExperimentSystem(
        terms,
        formula_from_descriptor(config.formula, terms.gamma_count),
        random_bitstring_state(config.L, config.seed),
        random_pauli_observable(config.L, config.n_terms, config.seed),
    )


def min_steps(config, terms, T):
    """
    The minimum number of steps of the smallest node: the explicit ``r`` or
    ``max(1, ceil((Lambda T)**1.5))`` with ``Lambda`` the sum of term norms.
    """
    if config.min_steps_rule["kind"] == 'explicit':
        return config.min_steps_rule["r"]
    return max(1, ceil_tolerant((terms.norm_sum() * T) ** 1.5))


def _node_plan(config, system, m, r_min):
    """
    Nodes, weights and noise amplification of one row.

    Interpolation weights are the Lagrange basis at ``s = 0``, so both
    methods estimate ``sum_k w_k f(1/r_k)``.
    """
    if config.method == 'richardson':
        plan = make_plan(m, choose_r_scale(m, r_min), system.formula.sigma)
        return plan, list(plan.nodes), list(plan.weights), plan.one_norm
    r_first = max(MIN_INTERPOLATION_STEPS, r_min)
    ell = 1.0 / (r_first * math.cos(math.pi / (2.0 * m)))
    plan = make_interpolation_plan(m, ell)
    weights = [float(w) for w in lagrange_basis(plan.samples, [0.0])[:, 0]]
    return plan, list(plan.snapped_nodes), weights, plan.lebesgue_at_zero


def _combine(config, plan, values):
    if config.method == 'richardson':
        return extrapolate(plan, values)
    return interpolate_at_zero(plan.samples, values)


def _repetitions(measurement, m, obs, delta):
    """Circuits per node and the resource report factory of the model."""
    kind = measurement["kind"]
    delta = measurement.get("delta", delta)
    if kind == 'exact':
        return 1, resource_report
    if kind == 'incoherent':
        if "N" in measurement:
            return measurement["N"], resource_report
        return hoeffding_samples(measurement["eps_data"],
                                 per_node_delta(delta, m)), resource_report
    relative = min(measurement["eps_data"] / obs.norm, 0.5)
    return iqae_grover_calls(relative, m, delta), coherent_resource_report


def _evaluate_node(system, T, measurement, repetitions, master_seed, ctx):
    """
    Job of one node: the evolved state measured under the model.

    :return tuple: ``(measured value, noise free value)``.
    """
    # pylint: disable=too-many-arguments
    vector = trotter_evolve(system.formula, system.terms, ctx.node, T,
                            system.state)
    exact_value = system.obs.expectation(vector)
    kind = measurement["kind"]
    if kind == 'exact' or measurement.get("adversarial"):
        return exact_value, exact_value
    stream = child_generator(master_seed, ctx.purpose)
    if kind == 'incoherent':
        return simulate_incoherent(exact_value, system.obs, vector,
                                   repetitions, stream), exact_value
    return simulate_noisy_eval(exact_value, measurement["eps_data"],
                               stream), exact_value


def _failed_row(row, reason):
    row.update(err_extrapolated=math.nan, err_plain=math.nan, reason=reason)
    return row


def _run_row(config, system, T, m, exact, r_min, master_seed, runner,
             delta):
    """Evaluate, combine and account for one ``(T, m)`` pair."""
    # pylint: disable=too-many-arguments,too-many-locals
    measurement = config.measurement
    row = {
        "experiment_id": config.experiment_id, "T": T, "m": m,
        "d_max": None, "c_trot": None, "method": config.method,
        "measurement": measurement["kind"], "exact": exact, "reason": None,
    }
    plan, nodes, weights, amplification = _node_plan(config, system, m,
                                                     r_min)
    repetitions, report_factory = _repetitions(measurement, m, system.obs,
                                               delta)
    resources = report_factory(nodes, repetitions)
    row.update(d_max=resources.d_max, c_trot=resources.c_trot, nodes=nodes,
               weights=weights, amplification=amplification)

    job = functools.partial(_evaluate_node, system, T, measurement,
                            repetitions, master_seed)
    contexts = [
        NodeTaskContext(
            ExperimentRunner.TASK_NAME, node, index, job,
            purpose="{}/{!r}/{}/node-{}".format(
                config.experiment_id, T, m, index + 1)
        )
        for index, node in enumerate(nodes)
    ]
    runner.evaluate(contexts)
    failed = [ctx for ctx in contexts if ctx.failed]
    if failed:
        reason = "; ".join(
            "node r={}: {}".format(ctx.node, ctx.failure) for ctx in failed)
        LOG.error("%s T=%r m=%d aborted: %s", config.experiment_id, T, m,
                  reason)
        return _failed_row(row, reason)

    exact_values = [ctx.exact_value for ctx in contexts]
    values = [ctx.value for ctx in contexts]
    noise_free = _combine(config, plan, exact_values)
    if measurement.get("adversarial"):
        # Every node is off by eps_data in the direction that pushes the
        # estimate away from the truth.
        away = 1.0 if noise_free >= exact else -1.0
        values = [
            simulate_noisy_eval(value, measurement["eps_data"], None,
                                adversarial_sign=away * weight or away)
            for value, weight in zip(exact_values, weights)
        ]
    estimate = _combine(config, plan, values)
    deepest = max(range(len(nodes)), key=lambda i: (abs(nodes[i]), nodes[i]))
    row.update(
        estimate=estimate,
        estimate_noise_free=noise_free,
        err_extrapolated=abs(estimate - exact),
        err_plain=abs(values[deepest] - exact),
    )
    LOG.info("%s T=%r m=%d: err_extrapolated=%.3e err_plain=%.3e "
             "d_max=%d", config.experiment_id, T, m, row["err_extrapolated"],
             row["err_plain"], row["d_max"])
    return row


def run_error_vs_m(config, T=None, master_seed=0, runner=None, delta=None):
    """
    Error of the extrapolated and the plain estimate for every ``m``.

    A row whose plan or nodes fail is kept with NaN errors and a ``reason``.

    :param ExperimentConfig config: The experiment.
    :param float T: Evolution time, default the config's first time.
    :param int master_seed: Seed of the measurement noise streams.
    :param ExperimentRunner runner: Node evaluator, default one on 2 threads.
    :param float delta: Failure probability when the measurement has none,
        default :data:`trotex.DEFAULT_DELTA`.
    :return list: One row dict per ``m`` holding :data:`CSV_COLUMNS` and
        the nodes, weights, estimate and exact value.
    """
    # pylint: disable=too-many-arguments
    T = config.times[0] if T is None else float(T)
    runner = ExperimentRunner() if runner is None else runner
    delta = trotex.DEFAULT_DELTA if delta is None else delta
    system = build_system(config)
    exact = exact_evolve_expectation(system.terms, T, system.state,
                                     system.obs)
    r_min = min_steps(config, system.terms, T)
    LOG.info("%s T=%r: exact value %.12g, at least %d steps",
             config.experiment_id, T, exact, r_min)
    rows = []
    for m in config.m_values:
        row_ctx = TaskContext('row', "{} T={!r} m={}".format(
            config.experiment_id, T, m))
        row = None
        with trotex_except_handle(row_ctx):
            row = _run_row(config, system, T, m, exact, r_min, master_seed,
                           runner, delta)
        if row_ctx.failed:
            row = _failed_row({
                "experiment_id": config.experiment_id, "T": T, "m": m,
                "d_max": None, "c_trot": None, "method": config.method,
                "measurement": config.measurement["kind"], "exact": exact,
            }, row_ctx.failure)
        rows.append(row)
    return rows


def run_error_vs_m_multi_T(config, master_seed=0, runner=None, delta=None):
    """:func:`run_error_vs_m` for every time of the config, in order."""
    rows = []
    for T in config.times:
        rows.extend(run_error_vs_m(config, T, master_seed, runner, delta))
    return rows


def write_csv(rows, stream):
    """
    Write rows as CSV with the header :data:`CSV_COLUMNS`.

    Floats are written in shortest round-trip form.

    :param list rows: Row dicts, extra keys are ignored.
    :param file stream: Writable text stream.
    """
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS,
                            extrasaction='ignore', lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow({
            key: repr(float(value)) if isinstance(value, float) else value
            for key, value in row.items()
        })


def run_experiment(config, master_seed=0, runner=None, out=None,
                   delta=None):
    """
    Run every time of an experiment and write the CSV.

    :param str out: Output path, overrides ``config.output_path``; stdout
        if neither is set.
    :return list: The rows.
    """
    # pylint: disable=too-many-arguments
    rows = run_error_vs_m_multi_T(config, master_seed, runner, delta)
    path = out or config.output_path
    if path:
        with open(path, 'w', newline='') as file_handle:
            write_csv(rows, file_handle)
        LOG.info("Wrote %d rows to %s", len(rows), path)
    else:
        write_csv(rows, sys.stdout)
    return rows


def _as_float(text):
    try:
        return float(text)
    except (TypeError, ValueError):
        return math.nan


def report(csv_path, stream=None):
    """
    Print a per ``(T, m)`` table and the best extrapolated error of every
    experiment in a CSV written by :func:`write_csv`.

    :param str csv_path: The CSV file.
    :param file stream: Output, default stdout.
    :raises ConfigError: If the file lacks the expected columns.
    :return dict: Best row per experiment id.
    """
    stream = sys.stdout if stream is None else stream
    with open(csv_path, 'r', newline='') as file_handle:
        reader = csv.DictReader(file_handle)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ConfigError(
                "{} is not an experiment CSV, columns: {}".format(
                    csv_path, reader.fieldnames))
        rows = list(reader)
    experiments = collections.OrderedDict()
    for row in rows:
        experiments.setdefault(row["experiment_id"], []).append(row)
    best = {}
    for experiment_id, group in experiments.items():
        stream.write("{} ({}, {})\n".format(
            experiment_id, group[0]["method"], group[0]["measurement"]))
        stream.write("{:>10} {:>4} {:>10} {:>12} {:>12} {:>12}\n".format(
            "T", "m", "d_max", "c_trot", "err_ext", "err_plain"))
        for row in group:
            stream.write(
                "{:>10} {:>4} {:>10} {:>12} {:>12.3e} {:>12.3e}\n".format(
                    row["T"], row["m"], row["d_max"], row["c_trot"],
                    _as_float(row["err_extrapolated"]),
                    _as_float(row["err_plain"]))
            )
        finite = [row for row in group
                  if not math.isnan(_as_float(row["err_extrapolated"]))]
        if finite:
            best[experiment_id] = min(
                finite, key=lambda row: _as_float(row["err_extrapolated"]))
            stream.write("best: {:.3e} at T={} m={}\n\n".format(
                _as_float(best[experiment_id]["err_extrapolated"]),
                best[experiment_id]["T"], best[experiment_id]["m"]))
        else:
            stream.write("best: none, every row failed\n\n")
    return best
