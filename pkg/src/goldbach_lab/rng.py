"""Reproducible 64-bit word stream and unbiased bounded integers.

The generator is Philox-4x64 (counter based, period 2**256) keyed by
``(seed, stream_id)``.  Only the raw word sequence is used, which numpy
guarantees to be stable; bounded integers are derived here by rejection so
results do not depend on numpy's ``Generator`` algorithms.

Every bounded draw consumes words strictly in order: a draw takes the next
word, and if the word is rejected it takes the next one, and so on.  The
vectorized helpers reproduce exactly what repeated scalar calls would return.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError

U64_MAX = (1 << 64) - 1
_REFILL = 4096


def _accept_bound(r: int) -> int:
    """Largest word accepted for range r: floor(2**64 / r) * r - 1."""
    return U64_MAX - ((1 << 64) % r)


class WordStream:
    def __init__(self, seed: int, stream_id: int = 0):
        seed, stream_id = int(seed), int(stream_id)
        if not (0 <= seed <= U64_MAX and 0 <= stream_id <= U64_MAX):
            raise InvalidArgumentError("seed and stream_id must be 64-bit unsigned values")
        self.seed = seed
        self.stream_id = stream_id
        self._bitgen = np.random.Philox(key=(seed << 64) | stream_id)
        self._buf = np.zeros(0, dtype=np.uint64)
        self.words_consumed = 0

    def _take(self, count: int) -> np.ndarray:
        if len(self._buf) < count:
            fresh = self._bitgen.random_raw(max(_REFILL, count - len(self._buf)))
            self._buf = np.concatenate((self._buf, fresh))
        out, self._buf = self._buf[:count], self._buf[count:]
        self.words_consumed += count
        return out

    def _push_back(self, words: np.ndarray) -> None:
        self._buf = np.concatenate((words, self._buf))
        self.words_consumed -= len(words)

    def words(self, count: int) -> np.ndarray:
        return self._take(count).copy()

    def randbelow(self, r: int) -> int:
        """Uniform integer in [0, r)."""
        r = int(r)
        if r < 1:
            raise InvalidArgumentError(f"range must be positive, got {r}")
        bound = _accept_bound(r)
        while True:
            w = int(self._take(1)[0])
            if w <= bound:
                return w % r

    def randbelow_many(self, ranges) -> np.ndarray:
        """Vector of uniform integers, element i in [0, ranges[i])."""
        ranges = np.asarray(ranges, dtype=np.uint64)
        if ranges.ndim != 1:
            raise InvalidArgumentError("ranges must be one-dimensional")
        if len(ranges) and ranges.min() < 1:
            raise InvalidArgumentError("every range must be positive")
        bounds = np.array([_accept_bound(int(r)) for r in np.unique(ranges)], dtype=np.uint64)
        bound_of = bounds[np.searchsorted(np.unique(ranges), ranges)]
        out = np.empty(len(ranges), dtype=np.uint64)
        i = 0
        while i < len(ranges):
            w = self._take(len(ranges) - i)
            ok = w <= bound_of[i:]
            if ok.all():
                out[i:] = w % ranges[i:]
                break
            bad = int(np.argmin(ok))
            out[i : i + bad] = w[:bad] % ranges[i : i + bad]
            # word `bad` was rejected; the rest go back for the retry
            self._push_back(w[bad + 1 :])
            i += bad
        return out

    def randbelow_fixed(self, r: int, count: int) -> np.ndarray:
        return self.randbelow_many(np.full(count, int(r), dtype=np.uint64))
