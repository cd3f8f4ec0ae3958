"""
This module takes node task contexts from the ``evaluate`` queue and runs
their evaluation job: a Trotter evolution with ``|r|`` steps followed by the
configured measurement model. The measured value and the noise free value are
stored on the context, failures are recorded on it by
:func:`trotex.core.excepthandler.trotex_except_handle`.
"""

import threading
import logging
import queue
from trotex.core.excepthandler import trotex_except_handle

LOG = logging.getLogger(__name__)


class NodeEvaluatorThread(threading.Thread):
    """
    Evaluates extrapolation nodes until it is told to stop.

    Several of these can consume the same queue, the order in which nodes are
    finished does not matter because every context keeps its own index.
    """

    def __init__(self, *args, **kwargs):
        """
        Initialise the thread's arguments and its parent
        :class:`threading.Thread`.

        :kwarg trotex.scheduling.TaskQueues queues: The queues to take
            ``evaluate`` tasks from **(required)**.
        :kwarg str task_name: Queue to consume (default: ``evaluate``).
        """
        self.stop = False
        self.queues = kwargs.pop('queues', None)
        self.task_name = kwargs.pop('task_name', 'evaluate')

        assert self.queues is not None, \
            "Please pass the task queues to get tasks from."

        super(NodeEvaluatorThread, self).__init__(*args, **kwargs)

    def run(self):
        """
        Start the evaluator thread.
        """
        LOG.debug("Started a node evaluator thread.")
        while not self.stop:
            try:
                context = self.queues.get_task(self.task_name, timeout=0.25)
            except queue.Empty:
                continue
            try:
                self.evaluate(context)
            finally:
                self.queues.task_done(self.task_name)
        LOG.debug("Goodbye cruel world..")

    @staticmethod
    def evaluate(context):
        """
        Run the context's job and store its results on the context.

        :param trotex.core.taskcontext.NodeTaskContext context: The node.
        """
        with trotex_except_handle(context):
            LOG.debug("Evaluating %s..", context)
            context.value, context.exact_value = context.job(context)
            context.result = context.value
