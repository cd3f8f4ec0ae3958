"""
This module defines an extended version of the general purpose
:class:`trotex.scheduling.TaskContext` for evaluating one extrapolation node.
"""
from trotex.scheduling import TaskContext


class NodeTaskContext(TaskContext):
    """
    Adds the following functionality to the
    :class:`trotex.scheduling.TaskContext`:

     - Renames :class:`~trotex.scheduling.TaskContext`'s ``subject``
       argument to ``node`` (the signed number of Trotter steps ``r``).
     - Keeps the position of the node in its plan, so results can be merged
       in node order whatever order the workers finish in.
     - Holds the measured ``value`` and the noise free ``exact_value`` of the
       node after evaluation.
    """
    def __init__(self, task_name, node, index, job, **attributes):
        """
        Initialise a NodeTaskContext.

        :param str task_name: A task name corresponding to an existing queue.
        :param int node: Signed number of Trotter steps, ``s = 1/node``.
        :param int index: Position of the node in its plan.
        :param callable job: ``job(ctx)`` returns ``(value, exact_value)``.
        :param kwargs attributes: Any data you want to assign to the context,
            avoid names already defined in the context.
        """
        self.index = index
        self.job = job
        self.value = None
        self.exact_value = None
        super(NodeTaskContext, self).__init__(
            task_name=task_name,
            subject=node,
            **attributes
        )
        self.node = self.subject

    def __repr__(self):
        return "<NodeTaskContext {} #{}: r={}>".format(
            self.task_name, self.index, self.node)
