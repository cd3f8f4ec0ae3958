"""
Defines a thread safe FIFO cache that keeps results of expensive matrix
computations (eigendecompositions, term exponentials) per key. If a key was
computed before, the stored result is returned instead of computing it again.

Keys are compared with ``==``, which for floats means exact bit equality
(apart from ``0.0 == -0.0``, whose exponentials coincide anyway).
"""
import collections
import threading


class FifoCache(collections.OrderedDict):
    """
    A FIFO cache with a maximum size, shared safely between worker threads.

    .. Note:: Use :meth:`fetch` rather than item assignment:
        .. code::
            exponentials = FifoCache(512)
            matrix = exponentials.fetch((gamma, tau), compute_exponential)
    """
    def __init__(self, max_size=None):
        if max_size == 0:
            max_size = None
        self.max_size = max_size
        self.lock = threading.Lock()
        super(FifoCache, self).__init__()

    def fetch(self, key, factory):
        """
        Return the value for ``key``, computing it with ``factory()`` if it is
        not cached yet.

        The factory runs outside the lock, so two threads may compute the same
        value concurrently; the first stored result wins and both callers get
        identical values since factories are deterministic.

        :param hashable key: Cache key.
        :param callable factory: Zero argument callable producing the value.
        :return: The cached or freshly computed value.
        """
        with self.lock:
            try:
                return self[key]
            except KeyError:
                pass
        value = factory()
        with self.lock:
            if key in self:
                return self[key]
            if self.max_size and len(self) >= self.max_size:
                self.popitem(False)
            self[key] = value
        return value
