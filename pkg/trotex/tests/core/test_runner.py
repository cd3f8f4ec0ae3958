"""
Test the node evaluation pool.
"""

# pylint: disable=no-self-use

import time
import pytest
from trotex.core.exceptions import ConfigError, EvolutionError
from trotex.core.runner import ExperimentRunner
from trotex.core.taskcontext import NodeTaskContext


def square_job(ctx):
    """Sleep a little longer for earlier nodes, return ``(r**2, r)``."""
    time.sleep(0.01 * (10 - ctx.index) / 10.0)
    return float(ctx.node ** 2), float(ctx.node)


def failing_job(ctx):
    """Fail on negative nodes."""
    if ctx.node < 0:
        raise EvolutionError("Can't evolve r={}".format(ctx.node))
    return square_job(ctx)


def make_contexts(nodes, job):
    return [
        NodeTaskContext(ExperimentRunner.TASK_NAME, node, index, job)
        for index, node in enumerate(nodes)
    ]


class TestExperimentRunner(object):
    """
    Test functionality of ExperimentRunner.
    """
    def test_invalid_threads(self):
        """
        Test that a negative thread count raises ConfigError.
        """
        with pytest.raises(ConfigError, match="can't be negative"):
            ExperimentRunner(-1)

    @pytest.mark.parametrize("threads", [0, 1, 4])
    def test_results_in_order(self, threads):
        """
        Test that results come back in the order the nodes were given.
         - Values and noise free values are stored on the contexts.
         - The same context objects are returned.
        """
        nodes = [21, 8, 5, -5, -8, -21, 3]
        contexts = make_contexts(nodes, square_job)
        evaluated = ExperimentRunner(threads).evaluate(contexts)
        assert evaluated == contexts
        assert [ctx.value for ctx in evaluated] == \
            [float(node ** 2) for node in nodes]
        assert [ctx.exact_value for ctx in evaluated] == \
            [float(node) for node in nodes]
        assert not any(ctx.failed for ctx in evaluated)

    @pytest.mark.parametrize("threads", [0, 3])
    def test_failure_is_recorded(self, threads):
        """
        Test that a failing node doesn't stop the batch.
         - The failing contexts are marked failed with the reason.
         - The other contexts have their results.
        """
        contexts = make_contexts([4, -4, 6], failing_job)
        ExperimentRunner(threads).evaluate(contexts)
        assert [ctx.failed for ctx in contexts] == [False, True, False]
        assert "Can't evolve r=-4" in contexts[1].failure
        assert contexts[2].value == 36.0

    def test_empty_batch(self):
        """
        Test that an empty batch starts no workers.
        """
        assert ExperimentRunner(4).evaluate([]) == []
