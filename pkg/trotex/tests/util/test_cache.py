"""
Test the thread safe FIFO cache.
"""

# pylint: disable=no-self-use

import threading
import numpy as np
from trotex.util.cache import FifoCache


class TestFifoCache(object):
    """
    Test functionality of the FifoCache.
    """
    def test_fetch_computes_once(self):
        """
        Test that a cached value is not computed again.
         - The factory runs on the first fetch only.
         - Both fetches return the same object.
        """
        calls = []
        cache = FifoCache(4)

        def factory():
            calls.append(1)
            return object()

        first = cache.fetch('key', factory)
        second = cache.fetch('key', factory)
        assert first is second
        assert len(calls) == 1

    def test_fifo_eviction(self):
        """
        Test that the oldest entry is evicted when the cache is full.
         - The cache never exceeds its maximum size.
         - The first key inserted is the first one evicted.
        """
        cache = FifoCache(2)
        for key in ('a', 'b', 'c'):
            cache.fetch(key, lambda key=key: key.upper())
        assert list(cache.keys()) == ['b', 'c']

    def test_unbounded(self):
        """
        Test that a size of 0 means unbounded.
        """
        cache = FifoCache(0)
        for key in range(100):
            cache.fetch(key, lambda key=key: key)
        assert len(cache) == 100

    def test_float_keys_are_exact(self):
        """
        Test that float keys use exact equality.
         - Times that differ in the last bit are different entries.
        """
        cache = FifoCache(8)
        neighbour = float(np.nextafter(0.1, 1.0))
        cache.fetch(('exp', 0, 0.1), lambda: 'a')
        assert cache.fetch(('exp', 0, neighbour), lambda: 'b') == 'b'
        assert cache.fetch(('exp', 0, 0.1), lambda: 'c') == 'a'
        assert len(cache) == 2

    def test_concurrent_fetch(self):
        """
        Test fetching from many threads at once.
         - Every thread gets the stored value.
        """
        cache = FifoCache(4)
        results = []

        def worker():
            results.append(cache.fetch('shared', lambda: 42))

        threads = [threading.Thread(target=worker) for _ in range(8)]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
        assert results == [42] * 8
        assert len(cache) == 1
