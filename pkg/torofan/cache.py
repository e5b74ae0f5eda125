#
# cache.py
#
# torofan - Exact computations with fan triples and Danilov forms
# Copyright (c) 2017-2018 Ammon Smith
#
# torofan is available free of charge under the terms of the MIT
# License. You are free to redistribute and/or modify it under those
# terms. It is distributed in the hopes that it will be useful, but
# WITHOUT ANY WARRANTY. See the LICENSE file for more details.
#

from collections import OrderedDict
from collections.abc import MutableMapping
from threading import RLock

__all__ = [
    "DEFAULT_CACHE_SIZE",
    "LruCache",
]

DEFAULT_CACHE_SIZE = 4096


class LruCache(MutableMapping):
    """
    Bounded mapping that forgets the least recently used entry.
    Used to memoize per-face subspaces during degree sweeps, so it
    keeps hit and miss counters and is safe to share between sweep
    threads.
    """

    __slots__ = (
        "store",
        "max_size",
        "hits",
        "misses",
        "lock",
    )

    def __init__(self, max_size=DEFAULT_CACHE_SIZE):
        self.store = OrderedDict()
        self.max_size = max_size
        self.hits = 0
        self.misses = 0
        self.lock = RLock()

    def __getitem__(self, key):
        with self.lock:
            obj = self.store.pop(key)
            self.store[key] = obj
            return obj

    def get(self, key, default=None):
        try:
            return self[key]
        except KeyError:
            return default

    def get_or_compute(self, key, compute):
        with self.lock:
            if key in self.store:
                self.hits += 1
                return self[key]
            self.misses += 1

        value = compute()
        self[key] = value
        return value

    def __setitem__(self, key, value):
        with self.lock:
            self.store.pop(key, None)
            self.store[key] = value

            if self.max_size is not None:
                while len(self.store) > self.max_size:
                    self.store.popitem(last=False)

    def __delitem__(self, key):
        with self.lock:
            del self.store[key]

    def __contains__(self, key):
        return key in self.store

    def __iter__(self):
        return iter(list(self.store))

    def __len__(self):
        return len(self.store)

    def stats(self):
        return {"size": len(self), "hits": self.hits, "misses": self.misses}
