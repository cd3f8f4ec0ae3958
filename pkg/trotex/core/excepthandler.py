"""
Context manager around the evaluation of one node or acceptance check.

Expected trouble (ill-conditioned fits, colliding nodes, computations over
the resource limits, unreadable configs) is logged at the level of the
exception and stored as the failure reason of the task context, so the row
or criterion fails and the rest of the batch carries on.

Anything else is a bug. Its traceback goes to a file in :data:`LOG_DIR` and
the context is marked failed as well, so one bad node does not stop a worker
thread.
"""

from contextlib import contextmanager
import datetime
import logging
import os
import traceback
from trotex.core.exceptions import TrotexError
from trotex.core.exceptions import ConfigError
from trotex.core.exceptions import ResourceLimitError

LOG = logging.getLogger(__name__)

#: Where tracebacks go, set from ``--logdir`` by :mod:`trotex.__main__`.
LOG_DIR = "/var/log/trotex/"

STACK_TRACE_FILENAME = "trotex_exception{:%Y%m%d-%H%M%S%f}.trace"


@contextmanager
def trotex_except_handle(ctx=None):
    """
    Log exceptions raised in the block and record them on ``ctx``.

    :param TaskContext ctx: Context to mark failed, may be None.
    """
    try:
        yield
    except ResourceLimitError as exc:
        LOG.log(exc.log_level, "%s: %s", ctx, exc)
        _record(ctx, "resource limit: {}".format(exc))
    except ConfigError as exc:
        LOG.critical("%s: %s", ctx, exc)
        _record(ctx, "config: {}".format(exc))
    except TrotexError as exc:
        LOG.log(exc.log_level, "%s: %s", ctx, exc)
        _record(ctx, "{}: {}".format(type(exc).__name__, exc))
    except (ArithmeticError, ValueError) as exc:
        LOG.error("%s: numerical failure: %s", ctx, exc)
        _record(ctx, "{}: {}".format(type(exc).__name__, exc))
    except OSError as exc:
        LOG.critical("%s: %s", ctx, exc)
        _record(ctx, "{}: {}".format(type(exc).__name__, exc))
    except Exception as exc:  # pylint: disable=broad-except
        dump_stack_trace(ctx, exc)
        _record(ctx, "uncaught {}: {}".format(type(exc).__name__, exc))


def _record(ctx, reason):
    if ctx is not None:
        ctx.fail(reason)


def dump_stack_trace(ctx, exc):
    """
    Write the traceback of the exception being handled to a file in
    :data:`LOG_DIR` and log where it went, or why it couldn't be written.
    """
    trace_file = os.path.join(
        LOG_DIR, STACK_TRACE_FILENAME.format(datetime.datetime.now()))
    try:
        with open(trace_file, "w") as file_handle:
            traceback.print_exc(file=file_handle)
        where = "Traceback written to {}".format(trace_file)
    except (IOError, OSError) as trace_exc:
        where = "Traceback not written to {}: {}".format(trace_file, trace_exc)
    LOG.critical(
        "Unexpected %s in %s, the context is marked failed. %s. This is a "
        "bug in trotex, please report it with the traceback.",
        type(exc).__name__, ctx, where)
