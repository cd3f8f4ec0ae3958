#!/usr/bin/env python3
"""
Parse command line arguments and run Trotter extrapolation experiments.

Type ``trotex -h`` for all command line arguments.

Three commands are available:

 - ``run <config.json>``: run the error versus ``m`` study described by an
   experiment config for each of its times and write the rows as CSV to
   ``--out``, the config's ``output_path`` or stdout.
 - ``suite <dir>``: run the acceptance suite with the
   ``criterion-<id>.json`` overrides found in ``dir`` and write one verdict
   per criterion plus ``summary.json`` to ``--out`` (default
   ``./acceptance``).
 - ``report <out.csv>``: print a summary of a CSV written by ``run``.

Node evaluations are fanned out over ``--threads`` worker threads, see
:mod:`trotex.core.runner`. The exit code is 0 if no errors were logged and
every acceptance verdict passed, 1 otherwise.
"""
import logging
import os
import sys
import configargparse
import trotex
import trotex.core.excepthandler
from trotex.core.acceptance import run_acceptance_suite
from trotex.core.exceptions import ConfigError
from trotex.core.experiment import ExperimentConfig, report, run_experiment
from trotex.core.runner import ExperimentRunner
from trotex.colourlog import ColourFormatter
from trotex.version import __version__, __app_name__
from trotex.util.exitcode import ExitCodeTracker

#: :attr:`logging.format` format string for log files
LOGFORMAT = (
    "%(asctime)s %(levelname)-8s %(name)s (%(threadName)s): "
    "%(message)s"
)
#: :attr:`logging.format` format string for stdout
COLOUR_LOGFORMAT = (
    "{msg}%(asctime)s{reset} {lvl}%(levelname)-8s{reset} "
    "{verdict}%(name)s (%(threadName)s): %(message)s{reset}"
)

#: Timestamps in both formats.
TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S"

#: Handler levels for ``--verbosity`` or the ``-v`` count 0 to 4.
VERBOSITY_LEVELS = (
    logging.CRITICAL, logging.ERROR, logging.WARNING, logging.INFO,
    logging.DEBUG
)

#: Commands accepted as first positional argument.
COMMANDS = ('run', 'suite', 'report')

logger = logging.getLogger('trotex')


def get_cli_arg_parser():
    """
    Build the argument parser of the ``trotex`` command without parsing.

    sphinx-argparse documents the commands from the returned parser.

    :return: Parser with the commands and every option
    :rtype: configargparse.ArgParser
    """
    parser = configargparse.ArgParser(
        default_config_files=trotex.DEFAULT_CONFIG_FILE_LOCATIONS,
        description=(
            "Run Trotter error extrapolation experiments and the acceptance "
            "suite on dense state vector simulations.\n"
        ),
        conflict_handler='resolve',
        epilog=(
            "Every option can also be set in a config file, e.g. "
            "``threads = 4``. Experiment configs themselves are JSON "
            "documents, see the documentation of trotex.core.experiment."
        ),
        prog=__app_name__
    )
    parser.add(
        'command',
        choices=COMMANDS,
        help=(
            "``run`` an experiment config, run the acceptance ``suite`` or "
            "``report`` on a CSV."
        )
    )
    parser.add(
        'target',
        help=(
            "Experiment config for ``run``, override directory for "
            "``suite``, CSV file for ``report``."
        )
    )
    parser.add(
        '-c',
        '--config',
        required=False,
        is_config_file=True,
        help=(
            "Override the default config file locations "
            "(default={})".format(
                ", ".join(trotex.DEFAULT_CONFIG_FILE_LOCATIONS)
            )
        )
    )
    parser.add(
        '--seed',
        type=int,
        default=0,
        help="Master seed of all measurement noise (default=0)."
    )
    parser.add(
        '-t',
        '--threads',
        type=int,
        default=2,
        help="Amount of threads evaluating nodes. (default=2)"
    )
    parser.add(
        '--out',
        type=str,
        default=None,
        help=(
            "Output path: the CSV for ``run`` (overrides the config's "
            "``output_path``), the verdict directory for ``suite``."
        )
    )
    parser.add(
        '--delta',
        type=float,
        default=trotex.DEFAULT_DELTA,
        help=(
            "Overall failure probability of sampled estimates when the "
            "experiment config gives none (default: {}).".format(
                trotex.DEFAULT_DELTA)
        )
    )
    parser.add(
        '--verbosity',
        type=int,
        default=0,
        help=(
            "Log level from 0 (critical only) to 4 (debug), ``-v`` takes "
            "precedence."
        )
    )
    parser.add(
        '-v',
        action='count',
        dest="verbose",
        help=(
            "Log more, e.g. ``-vvv`` for info messages. Overrides "
            "``--verbosity``."
        )
    )
    parser.add(
        '-l',
        '--logdir',
        type=str,
        nargs='?',
        default=None,
        const=trotex.LOG_DIR,
        help=("Write trotex.log to this directory, {} if no directory is "
              "given. Stack traces of unexpected exceptions go there "
              "too.".format(trotex.LOG_DIR))
    )
    parser.add(
        '-q',
        '--quiet',
        action='store_true',
        help="Don't print log messages to stderr."
    )
    parser.add(
        '-V', '--version',
        action='version',
        version="%(app_name)s v%(version)s" % {
            'app_name': __app_name__, 'version': __version__
        },
        help="Show the version number and exit."
    )
    return parser


def init():
    """
    Parse the arguments, configure logging and run the requested command.

    Exits with the code decided by the
    :class:`trotex.util.exitcode.ExitCodeTracker`.
    """
    args = __get_validated_args()

    exit_code_tracker = __init_logging(args)

    runner = ExperimentRunner(threads=args.threads)
    if args.command == 'run':
        config = None
        try:
            config = ExperimentConfig.load(args.target)
        except ConfigError as exc:
            logger.critical("Invalid experiment config: %s", exc)
        if config is not None:
            logger.info("Running %s..", config)
            run_experiment(config, master_seed=args.seed, runner=runner,
                           out=args.out, delta=args.delta)
    elif args.command == 'suite':
        try:
            run_acceptance_suite(config_dir=args.target,
                                 master_seed=args.seed, out_dir=args.out,
                                 runner=runner)
        except ConfigError as exc:
            logger.critical("Can't run the acceptance suite: %s", exc)
    else:
        try:
            report(args.target)
        except (ConfigError, OSError) as exc:
            logger.critical("Can't report on %s: %s", args.target, exc)

    logger.info(str(exit_code_tracker))
    sys.exit(exit_code_tracker.exit_code)


def __make_handler(handler, level, formatter):
    handler.setLevel(level)
    handler.setFormatter(formatter)
    logger.addHandler(handler)


def __init_logging(args):
    """
    Send the ``trotex`` logger to stderr and optionally a log file, and
    attach the exit code tracker.

    :param Namespace args: Parsed arguments.
    :return ExitCodeTracker: Handler counting errors and verdicts.
    """
    verbose = args.verbose or args.verbosity
    level = VERBOSITY_LEVELS[max(0, min(verbose, len(VERBOSITY_LEVELS) - 1))]
    logger.propagate = False
    logger.setLevel(min(level, logging.INFO))

    if not args.quiet:
        __make_handler(logging.StreamHandler(), level,
                       ColourFormatter(COLOUR_LOGFORMAT, TIMESTAMP_FORMAT))
    if args.logdir:
        __make_handler(
            logging.FileHandler(os.path.join(args.logdir, 'trotex.log')),
            level, logging.Formatter(LOGFORMAT, TIMESTAMP_FORMAT))
        trotex.core.excepthandler.LOG_DIR = args.logdir
    # Verdicts are logged at INFO, so the logger passes INFO to the tracker
    # whatever the console verbosity.
    exit_code_tracker = ExitCodeTracker(logging.WARN)
    logger.addHandler(exit_code_tracker)
    return exit_code_tracker


def __get_validated_args():
    """
    Parse the command line and exit with the usage on invalid values.

    :returns Namespace: Parsed arguments.
    """
    parser = get_cli_arg_parser()
    args = parser.parse_args()
    try:
        if args.threads < 0:
            raise ConfigError("`--threads` should be 0 or higher.")
        if args.seed < 0:
            raise ConfigError("`--seed` should be 0 or higher.")
        if not 0 < args.delta < 1:
            raise ConfigError("`--delta` should be between 0 and 1.")
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        logger.critical("Invalid command line argument or value: %s", exc)
        sys.exit(1)
    return args


if __name__ == "__main__":
    try:
        init()
    except Exception:
        logger.critical("trotex stopped on an unexpected exception.")
        raise
