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

"""Range sharding and an ordered parallel map.

Work is split into contiguous shards, evaluated by a bounded thread pool and
merged back in shard order, so results never depend on the worker count.
"""

import logging
import os
from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar


LOG = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def default_threads():
    """Return the default worker count for this host."""
    return os.cpu_count() or 1


def split_range(lo: int, hi: int, shards: int, align: int = 1) -> list[tuple[int, int]]:
    """Split the closed interval [lo, hi] into at most `shards` contiguous pieces.

    Every piece except the last starts and ends on the `align` grid relative
    to `lo`, so even-only ranges stay even when `align` is 2.
    """
    if hi < lo:
        return []

    shards = max(1, shards)
    span = (hi - lo) // align + 1
    per_shard = -(-span // shards)

    pieces = []
    start = lo
    while start <= hi:
        stop = min(hi, start + (per_shard - 1) * align)
        pieces.append((start, stop))
        start = stop + align

    return pieces


def map_ordered(func: Callable[[T], R], items: Iterable[T], threads: int = 1) -> Iterator[R]:
    """Apply `func` to every item, yielding results in input order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        yield from map(func, items)
        return

    workers = min(threads, len(items))
    LOG.debug("Mapping %d shards over %d workers", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        yield from executor.map(func, items)
