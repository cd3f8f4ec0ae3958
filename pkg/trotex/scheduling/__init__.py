"""
Named FIFO queues of :class:`TaskContext` objects shared between the thread
that plans an experiment and the threads that evaluate its nodes.

A producer registers a queue per kind of work, wraps each unit of work in a
:class:`TaskContext` and adds it. Workers take contexts, store a ``result``
or a ``failure`` on them and call :meth:`TaskQueues.task_done`. Completion
order is arbitrary; the producer keeps its own list of contexts and reads it
after :meth:`TaskQueues.join` to get results in submission order.
"""
import logging
from queue import Queue

LOG = logging.getLogger(__name__)


class QueueError(Exception):
    """Unknown or duplicate queue name."""


class TaskContext(object):
    """
    One unit of work and, once a worker is done with it, its outcome.

    :param str task_name: Name of the queue the context goes into.
    :param obj subject: Whatever the worker needs, e.g. a node.
    :param attributes: Extra attributes for the worker. Names already used
        by the context (``queues``, ``task_name``, ``subject``, ``result``,
        ``failure``, ``fail``, ``failed``) raise :class:`AttributeError`.
    """

    # pylint: disable=too-few-public-methods
    def __init__(self, task_name, subject, **attributes):
        #: Set by :meth:`TaskQueues.add_task`.
        self.queues = None
        self.task_name = task_name
        self.subject = subject
        self.result = None
        self.failure = None
        for attr, value in attributes.items():
            if hasattr(TaskContext, attr) or attr in self.__dict__:
                raise AttributeError(
                    "\"{}\" is a reserved attribute name of a task "
                    "context.".format(attr))
            setattr(self, attr, value)

    def fail(self, reason):
        """
        Store why the task has no result.

        :param reason: Message or exception.
        """
        self.failure = str(reason)

    @property
    def failed(self):
        """True once :meth:`fail` was called."""
        return self.failure is not None

    def __repr__(self):
        return "<TaskContext {}: {}>".format(self.task_name, self.subject)


class TaskQueues(object):
    """
    Registry of named :class:`queue.Queue` objects.

    :param iterable queues: Names of queues to create right away.
    :raises QueueError: On a duplicate name.
    """

    def __init__(self, queues=None):
        self._queues = {}
        for name in queues or ():
            self.add_queue(name)

    def _lookup(self, name):
        try:
            return self._queues[name]
        except KeyError:
            raise QueueError("No such queue \"{}\".".format(name))

    def add_queue(self, name, max_size=0):
        """
        Create the queue ``name``.

        :param int max_size: Capacity, 0 for unbounded.
        :raises QueueError: If ``name`` already exists.
        """
        if name in self._queues:
            raise QueueError(
                "A queue with name \"{}\" already exists.".format(name))
        self._queues[name] = Queue(max_size)

    def remove_queue(self, name):
        """
        Drop the queue ``name`` and whatever is still in it.

        :raises QueueError: If there is no such queue.
        """
        self._lookup(name)
        del self._queues[name]

    def queue_exists(self, name):
        """:return bool: True if ``name`` is registered."""
        return name in self._queues

    def is_empty_queue(self, name):
        """
        :return bool: True if nothing is waiting in ``name``.
        :raises QueueError: If there is no such queue.
        """
        return self._lookup(name).empty()

    def add_task(self, ctx):
        """
        Put ``ctx`` in the queue named by its ``task_name``.

        :param TaskContext ctx: The work to add.
        :raises TypeError: If ``ctx`` is no :class:`TaskContext`.
        :raises QueueError: If its queue doesn't exist.
        :raises queue.Full: If a bounded queue is full.
        """
        if not isinstance(ctx, TaskContext):
            raise TypeError("Passed context is not an instance of TaskContext")
        target = self._lookup(ctx.task_name)
        ctx.queues = self
        target.put(ctx)
        LOG.debug("Queued %s", ctx)

    def get_task(self, task_name, blocking=True, timeout=None):
        """
        Take the oldest context from ``task_name``.

        :param bool blocking: Wait for a context if the queue is empty.
        :param float timeout: Seconds to wait, None for no limit.
        :raises queue.Empty: If nothing arrived in time.
        :raises QueueError: If there is no such queue.
        """
        return self._lookup(task_name).get(blocking, timeout)

    def task_done(self, task_name):
        """
        Count one context of ``task_name`` as handled.

        :raises QueueError: If there is no such queue.
        """
        self._lookup(task_name).task_done()

    def join(self, task_name):
        """
        Wait until every context added to ``task_name`` is handled.

        :raises QueueError: If there is no such queue.
        """
        self._lookup(task_name).join()
