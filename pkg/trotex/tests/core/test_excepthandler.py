"""
Test the exception handling context manager.
"""

# pylint: disable=no-self-use

import logging
import os
import pytest
from trotex.core import excepthandler
from trotex.core.excepthandler import trotex_except_handle
from trotex.core.exceptions import ConfigError
from trotex.core.exceptions import FitFailureError
from trotex.core.exceptions import ResourceLimitError
from trotex.scheduling import TaskContext

HANDLED_EXCEPTIONS = [
    (ResourceLimitError("too many commutators", log_level=logging.WARNING),
     logging.WARNING, "resource limit: too many commutators"),
    (ConfigError("m must be positive"),
     logging.CRITICAL, "config: m must be positive"),
    (FitFailureError("cond 1e14", condition=1e14),
     logging.ERROR, "FitFailureError: cond 1e14"),
    (ZeroDivisionError("float division by zero"),
     logging.ERROR, "ZeroDivisionError: float division by zero"),
    (OSError("disk full"),
     logging.CRITICAL, "OSError: disk full"),
]


class TestExceptHandle(object):
    """
    Test functionality of trotex_except_handle.
    """
    @pytest.mark.parametrize("exc,level,reason", HANDLED_EXCEPTIONS)
    def test_handled(self, caplog, exc, level, reason):
        """
        Test that known exceptions are swallowed, logged and recorded.
         - The log level matches the kind of exception.
         - The failure reason is recorded on the context.
        """
        ctx = TaskContext('row', 'chain/1.0/3')
        with caplog.at_level(logging.DEBUG, logger='trotex'):
            with trotex_except_handle(ctx):
                raise exc
        assert ctx.failure == reason
        assert any(record.levelno == level for record in caplog.records)

    def test_no_context(self):
        """
        Test that the handler works without a context.
        """
        with trotex_except_handle():
            raise FitFailureError("no context")

    def test_success(self):
        """
        Test that a block without exceptions leaves the context alone.
        """
        ctx = TaskContext('row', 'chain/1.0/3')
        with trotex_except_handle(ctx):
            ctx.result = 1.0
        assert not ctx.failed

    def test_uncaught_dumps_trace(self, tmpdir, monkeypatch):
        """
        Test the last resort handler.
         - A stack trace file is written to the log directory.
         - The context is marked failed.
        """
        monkeypatch.setattr(excepthandler, 'LOG_DIR', str(tmpdir))
        ctx = TaskContext('row', 'chain/1.0/3')
        with trotex_except_handle(ctx):
            raise KeyError('unexpected')
        assert ctx.failure.startswith("uncaught KeyError")
        traces = [name for name in os.listdir(str(tmpdir))
                  if name.endswith('.trace')]
        assert len(traces) == 1

    def test_uncaught_unwritable_logdir(self, tmpdir, monkeypatch):
        """
        Test that an unwritable log directory does not raise.
        """
        missing = os.path.join(str(tmpdir), 'missing')
        monkeypatch.setattr(excepthandler, 'LOG_DIR', missing)
        ctx = TaskContext('row', 'chain/1.0/3')
        with trotex_except_handle(ctx):
            raise KeyError('unexpected')
        assert ctx.failed
