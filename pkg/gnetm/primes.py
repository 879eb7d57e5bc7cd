# Copyright 2024 The gnetm-toolkit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Prime generation, primality predicates and prime counting.

Every other module builds on the sieves defined here. A `PrimeTable` always
contains 2; the Goldbach matching conventions that exclude it live in the
modules that need them.
"""

import dataclasses
import functools
import logging
import math
import threading

import numpy as np

from gnetm.error import DomainError, PreconditionError, ResourceError
from gnetm.utils.config import DEFAULT_GUARDS
from gnetm.utils.sharding import map_ordered, split_range


LOG = logging.getLogger(__name__)

# Values handled per segment when a range is sieved piecewise.
SEGMENT_SIZE = 1 << 22

# Below this bound `is_prime` answers from the cached sieve.
SMALL_PRIME_BOUND = 1 << 20

# The Miller-Rabin bases below are deterministic for every x under this bound.
MILLER_RABIN_BOUND = 3317044064679887385961981
_MILLER_RABIN_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@dataclasses.dataclass(frozen=True, eq=False)
class PrimeTable:
    """Ordered primes up to `limit` with bit-packed membership."""

    limit: int
    primes: np.ndarray

    @property
    def count(self):
        """Number of primes not greater than `limit`."""
        return int(self.primes.size)

    @functools.cached_property
    def mask(self):
        """Boolean view indexed by value: `mask[x]` is true iff x is prime."""
        mask = np.zeros(self.limit + 1, dtype=bool)
        mask[self.primes] = True
        return mask

    @functools.cached_property
    def bits(self):
        """The membership mask packed eight values per byte, low bit first."""
        return np.packbits(self.mask, bitorder="little")

    def __contains__(self, value):
        """Check membership through the packed bits."""
        value = int(value)
        if value < 0 or value > self.limit:
            return False

        return bool((self.bits[value >> 3] >> (value & 7)) & 1)

    def __len__(self):
        """Return the number of primes."""
        return self.count

    def __iter__(self):
        """Iterate over the primes as Python integers."""
        return iter(self.tolist())

    def __eq__(self, other):
        """Compare limits and prime sequences."""
        if not isinstance(other, PrimeTable):
            return NotImplemented

        return self.limit == other.limit and np.array_equal(self.primes, other.primes)

    __hash__ = None

    def tolist(self):
        """Return the primes as Python integers."""
        return self.primes.tolist()

    def count_upto(self, value):
        """Return π(value) for any value not greater than `limit`."""
        return int(np.searchsorted(self.primes, value, side="right"))


def _dense_sieve(limit):
    """Odd-only sieve of Eratosthenes returning an int64 array of primes <= limit."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)

    # index i stands for the odd number 2i + 1
    flags = np.ones((limit - 1) // 2 + 1, dtype=bool)
    flags[0] = False
    for index in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if flags[index]:
            step = 2 * index + 1
            flags[step * step // 2 :: step] = False

    odd = 2 * np.flatnonzero(flags).astype(np.int64) + 1
    return np.concatenate((np.array([2], dtype=np.int64), odd))


def _segment(lo, hi, base_primes):
    """Primes in [lo, hi], crossing out multiples of `base_primes`."""
    lo = max(lo, 2)
    if hi < lo:
        return np.empty(0, dtype=np.int64)

    flags = np.ones(hi - lo + 1, dtype=bool)
    root = math.isqrt(hi)
    for prime in base_primes:
        prime = int(prime)
        if prime > root:
            break

        first = max(prime * prime, -(-lo // prime) * prime)
        flags[first - lo :: prime] = False

    return np.flatnonzero(flags).astype(np.int64) + lo


def sieve(limit, guards=DEFAULT_GUARDS, threads=1):
    """Build the `PrimeTable` of every prime not greater than `limit`."""
    if limit < 0:
        raise DomainError(f"sieve limit must be nonnegative, got {limit}")

    guards.check("sieve_limit", limit)

    if limit <= guards.dense_sieve_limit:
        LOG.debug("Dense sieve up to %d", limit)
        return PrimeTable(limit, _dense_sieve(limit))

    base = _dense_sieve(math.isqrt(limit))
    shards = split_range(0, limit, -(-(limit + 1) // guards.dense_sieve_limit))
    LOG.debug("Segmented sieve up to %d in %d segments", limit, len(shards))
    parts = map_ordered(lambda shard: _segment(shard[0], shard[1], base), shards, threads)
    return PrimeTable(limit, np.concatenate(list(parts)))


def sieve_segment(lo, hi, base):
    """Return the ascending primes in [lo, hi] using the primes of `base`."""
    if lo > hi:
        raise DomainError(f"empty segment [{lo}, {hi}]")

    if base.limit < math.isqrt(max(hi, 0)):
        raise PreconditionError(
            f"base table up to {base.limit} cannot sieve up to {hi}; "
            f"it needs primes up to {math.isqrt(hi)}"
        )

    lo = max(lo, 0)
    parts = [
        _segment(start, min(hi, start + SEGMENT_SIZE - 1), base.primes)
        for start in range(lo, hi + 1, SEGMENT_SIZE)
    ]
    if not parts:
        return np.empty(0, dtype=np.int64)

    return np.concatenate(parts)


def count_primes(lo, hi, guards=DEFAULT_GUARDS, threads=1):
    """Count the primes in [lo, hi] segment by segment without keeping them."""
    if lo > hi:
        return 0

    guards.check("scan_limit", hi)
    lo = max(lo, 0)
    base = _dense_sieve(math.isqrt(hi))
    shards = split_range(lo, hi, -(-(hi - lo + 1) // SEGMENT_SIZE))
    counts = map_ordered(lambda shard: _segment(shard[0], shard[1], base).size, shards, threads)
    return int(sum(counts))


class _PrimeCache:
    """Thread-safe sieve cache that grows on demand."""

    def __init__(self, initial=1 << 16):
        self._lock = threading.Lock()
        self._table = PrimeTable(initial, _dense_sieve(initial))

    def table(self, limit, guards=DEFAULT_GUARDS):
        """Return a cached table reaching at least `limit`."""
        table = self._table
        if table.limit >= limit:
            return table

        with self._lock:
            if self._table.limit < limit:
                guards.check("dense_sieve_limit", limit)
                doubled = min(2 * self._table.limit, guards.dense_sieve_limit)
                new_limit = max(limit, doubled)
                LOG.debug("Growing prime cache to %d", new_limit)
                self._table = PrimeTable(new_limit, _dense_sieve(new_limit))

            return self._table


_CACHE = _PrimeCache()


def cached_table(limit, guards=DEFAULT_GUARDS):
    """Return a shared table with every prime up to at least `limit`."""
    return _CACHE.table(limit, guards)


def _miller_rabin(x):
    d, s = x - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    for base in _MILLER_RABIN_BASES:
        y = pow(base, d, x)
        if y in (1, x - 1):
            continue

        for _ in range(s - 1):
            y = y * y % x
            if y == x - 1:
                break
        else:
            return False

    return True


def is_prime(x):
    """Return 1 if `x` is prime, otherwise 0."""
    if x < 2:
        return 0

    if x < SMALL_PRIME_BOUND:
        return int(x in cached_table(x))

    for prime in _MILLER_RABIN_BASES:
        if x % prime == 0:
            return int(x == prime)

    if x >= MILLER_RABIN_BOUND:
        raise ResourceError("is_prime", MILLER_RABIN_BOUND - 1, x)

    return int(_miller_rabin(x))


def nth_prime(x, guards=DEFAULT_GUARDS):
    """Return the x-th prime, 2 being the first; `nth_prime(0)` is 0."""
    if x < 0:
        raise DomainError(f"prime index must be nonnegative, got {x}")

    if x == 0:
        return 0

    # Rosser's bound p_x < x (ln x + ln ln x) holds for x >= 6
    estimate = 15 if x < 6 else int(x * (math.log(x) + math.log(math.log(x)))) + 1
    if estimate <= guards.dense_sieve_limit:
        table = cached_table(estimate, guards)
    else:
        LOG.debug("Sieving segments up to %d for prime number %d", estimate, x)
        table = sieve(estimate, guards)

    return int(table.primes[x - 1])


def prime_count(x, guards=DEFAULT_GUARDS):
    """Return π(x), the exact number of primes not greater than `x`."""
    if x < 2:
        return 0

    if x <= guards.dense_sieve_limit >> 2:
        return cached_table(x, guards).count_upto(x)

    return count_primes(0, x, guards)


def pi_approx(x):
    """Return x / ln(x)."""
    if x < 2:
        raise DomainError(f"pi_approx needs x >= 2, got {x}")

    return x / math.log(x)


def interval_prime_count(ne, guards=DEFAULT_GUARDS):
    """Return (π(ne/2), π(ne) − π(ne/2)) for an even ne >= 6."""
    if ne < 6 or ne % 2:
        raise DomainError(f"interval counts need an even number >= 6, got {ne}")

    low = prime_count(ne // 2, guards)
    high = prime_count(ne, guards) - low
    if low < 1 or high < 1:
        LOG.error("No prime in one half of [1, %d]: low=%d high=%d", ne, low, high)

    return low, high
