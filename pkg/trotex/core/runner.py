"""
This module fans node evaluations out over a pool of
:class:`trotex.core.nodeevaluator.NodeEvaluatorThread` workers.

- A fresh :class:`trotex.scheduling.TaskQueues` with one ``evaluate`` queue
  is made per batch.
- ``threads`` workers are started, every node context is queued, the queue
  is joined and the workers are stopped again.
- Results are read back from the contexts in the order they were passed in,
  so the outcome does not depend on which worker finished first.

With ``threads=0`` the nodes are evaluated in the calling thread, which is
what the tests and the acceptance suite use when they don't need a pool.
"""
import logging
from trotex.core.nodeevaluator import NodeEvaluatorThread
from trotex.core.exceptions import ConfigError
from trotex.scheduling import TaskQueues

LOG = logging.getLogger(__name__)


class ExperimentRunner(object):
    """
    Evaluate batches of node task contexts.

    :ivar int threads: Number of worker threads per batch.
    """

    #: Name of the queue node contexts are put in.
    TASK_NAME = 'evaluate'

    def __init__(self, threads=2):
        """
        :param int threads: Worker threads, 0 evaluates in the caller.
        :raises ConfigError: If ``threads`` is negative.
        """
        if threads < 0:
            raise ConfigError(
                "The number of threads can't be negative, got {}".format(
                    threads)
            )
        self.threads = threads

    def evaluate(self, contexts):
        """
        Evaluate every context and return them in the order given.

        Failures don't raise, they are recorded on the failing context.

        :param list contexts: :class:`~trotex.core.taskcontext.NodeTaskContext`
            instances whose ``task_name`` is :attr:`TASK_NAME`.
        :return list: The same contexts, evaluated.
        """
        contexts = list(contexts)
        if not contexts:
            return contexts
        if self.threads == 0:
            for context in contexts:
                NodeEvaluatorThread.evaluate(context)
            return contexts

        queues = TaskQueues([self.TASK_NAME])
        workers = []
        for tid in range(min(self.threads, len(contexts))):
            worker = NodeEvaluatorThread(
                queues=queues,
                task_name=self.TASK_NAME,
                name="evaluator-{}".format(tid),
            )
            worker.daemon = True
            worker.start()
            workers.append(worker)
        for context in contexts:
            queues.add_task(context)
        queues.join(self.TASK_NAME)
        for worker in workers:
            worker.stop = True
        for worker in workers:
            worker.join()
        LOG.debug("Evaluated %d nodes on %d threads.", len(contexts),
                  len(workers))
        return contexts
