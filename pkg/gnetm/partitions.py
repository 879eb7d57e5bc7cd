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

"""Goldbach partitions and quasi-partitions of even numbers.

Partitions are unordered prime pairs (p, q), p <= q, p + q = ne. The prime 2
is left out unless `allow_two` is set, so 4 has no partition by default.
"""

import dataclasses
import logging
import math

import numpy as np

from gnetm.error import DomainError
from gnetm.primes import SEGMENT_SIZE, cached_table, sieve, sieve_segment
from gnetm.utils.config import DEFAULT_GUARDS
from gnetm.utils.sharding import map_ordered, split_range


LOG = logging.getLogger(__name__)

# `phi` reads a cached dense mask up to this value and sieves segments above it.
DENSE_PHI_LIMIT = 1 << 22

# `phi_scan` convolves the whole range at once up to this value.
FFT_SCAN_LIMIT = 1 << 21


@dataclasses.dataclass(frozen=True)
class PartitionSet:
    """Goldbach partitions of ne, ascending in p."""

    ne: int
    pairs: tuple[tuple[int, int], ...]

    @property
    def phi(self):
        """Number of partitions."""
        return len(self.pairs)


@dataclasses.dataclass(frozen=True)
class QuasiEntry:
    """A pair (p, ne − p) with p an odd prime; q may be composite."""

    p: int
    q: int
    q_is_prime: bool


@dataclasses.dataclass(frozen=True)
class QuasiSet:
    """Quasi-partitions of ne, one entry per odd prime below ne."""

    ne: int
    entries: tuple[QuasiEntry, ...]

    @property
    def r(self):
        """Number of entries, π(ne − 1) − 1."""
        return len(self.entries)

    def p_set(self):
        """The odd primes p_i."""
        return [entry.p for entry in self.entries]

    def q_set(self):
        """The partners q_j = ne − p_i, prime or not."""
        return [entry.q for entry in self.entries]

    def witnesses(self):
        """Entries whose partner is prime, i.e. the ordered Goldbach pairs."""
        return [entry for entry in self.entries if entry.q_is_prime]


def _check_even(ne, minimum=4):
    if ne % 2 or ne < minimum:
        raise DomainError(f"expected an even number >= {minimum}, got {ne}")


def _report_empty(ne, count):
    if count == 0 and ne >= 6:
        LOG.error("Even number %d has no Goldbach partition", ne)


def goldbach_pairs(ne, allow_two=False, guards=DEFAULT_GUARDS):
    """Return every unordered prime pair adding up to `ne`."""
    _check_even(ne)

    mask = sieve(ne, guards).mask
    candidates = np.arange(3, ne // 2 + 1, 2)
    hits = candidates[mask[candidates] & mask[ne - candidates]]
    pairs = [(int(p), ne - int(p)) for p in hits]
    if allow_two and ne == 4:
        pairs.insert(0, (2, 2))

    _report_empty(ne, len(pairs))
    return PartitionSet(ne, tuple(pairs))


def _phi_dense(ne, guards):
    mask = cached_table(ne, guards).mask
    candidates = np.arange(3, ne // 2 + 1, 2)
    return int(np.count_nonzero(mask[candidates] & mask[ne - candidates]))


def _phi_segmented(ne, guards, threads):
    half = ne // 2
    base = sieve(math.isqrt(ne), guards)
    shards = split_range(3, half, max(threads, -(-half // SEGMENT_SIZE)))

    def count(shard):
        lo, hi = shard
        low = sieve_segment(lo, hi, base)
        high = sieve_segment(ne - hi, ne - lo, base)
        return int(np.count_nonzero(np.isin(ne - low, high, assume_unique=True)))

    return sum(map_ordered(count, shards, threads))


def phi(ne, allow_two=False, guards=DEFAULT_GUARDS, threads=1):
    """Count the Goldbach partitions of `ne` without listing them."""
    _check_even(ne)
    guards.check("scan_limit", ne)

    if ne <= min(DENSE_PHI_LIMIT, guards.dense_sieve_limit):
        count = _phi_dense(ne, guards)
    else:
        LOG.debug("Counting partitions of %d by segments", ne)
        count = _phi_segmented(ne, guards, threads)

    if allow_two and ne == 4:
        count += 1

    _report_empty(ne, count)
    return count


def quasi_pairs(ne, guards=DEFAULT_GUARDS):
    """Pair every odd prime p <= ne − 1 with ne − p."""
    _check_even(ne, 6)

    table = sieve(ne, guards)
    mask = table.mask
    entries = tuple(
        QuasiEntry(p, ne - p, bool(mask[ne - p])) for p in table.tolist() if 2 < p < ne
    )
    return QuasiSet(ne, entries)


def prime_indicator(limit, allow_two=False, guards=DEFAULT_GUARDS):
    """Integer indicator of the primes up to `limit`, 2 cleared unless allowed."""
    indicator = cached_table(limit, guards).mask[: limit + 1].astype(np.int64)
    if not allow_two and limit >= 2:
        indicator[2] = 0

    return indicator


def ordered_counts(limit, allow_two=False, guards=DEFAULT_GUARDS):
    """Ordered prime-pair counts for every sum 0..limit.

    Entry m is the number of ordered pairs (p, q) of primes with p + q = m,
    obtained as the self-convolution of the prime indicator.
    """
    if limit < 0:
        raise DomainError(f"limit must be nonnegative, got {limit}")

    indicator = prime_indicator(limit, allow_two, guards)
    size = 1 << (2 * limit + 1).bit_length()
    spectrum = np.fft.rfft(indicator, size)
    counts = np.fft.irfft(spectrum * spectrum, size)[: limit + 1]
    return np.rint(counts).astype(np.int64)


def unordered_from_ordered(ordered, indicator, evens):
    """Fold ordered counts into unordered partition counts for the given evens."""
    evens = np.asarray(evens, dtype=np.int64)
    return (ordered[evens] + indicator[evens // 2]) // 2


def phi_scan(lo, hi, allow_two=False, guards=DEFAULT_GUARDS, threads=1):
    """Return an iterator of (ne, phi(ne)) for every even ne in [lo, hi], ascending."""
    _check_even(lo)
    _check_even(hi)
    if lo > hi:
        raise DomainError(f"empty scan range [{lo}, {hi}]")

    guards.check("phi_scan_span", (hi - lo) // 2 + 1)
    guards.check("scan_limit", hi)
    return _scan_records(lo, hi, allow_two, guards, threads)


def _scan_records(lo, hi, allow_two, guards, threads):
    if hi <= min(FFT_SCAN_LIMIT, guards.dense_sieve_limit):
        LOG.debug("Scanning [%d, %d] by convolution", lo, hi)
        indicator = prime_indicator(hi, allow_two, guards)
        evens = np.arange(lo, hi + 1, 2)
        counts = unordered_from_ordered(ordered_counts(hi, allow_two, guards), indicator, evens)
        for ne, count in zip(evens.tolist(), counts.tolist()):
            _report_empty(ne, count)
            yield ne, count

        return

    shards = split_range(lo, hi, max(1, threads) * 4, align=2)

    def scan(shard):
        return [(ne, phi(ne, allow_two, guards)) for ne in range(shard[0], shard[1] + 1, 2)]

    for records in map_ordered(scan, shards, threads):
        yield from records
