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

"""Timing workloads for the sieve and the partition scan."""

import dataclasses
import logging
import time

from gnetm.error import DomainError
from gnetm.partitions import phi_scan
from gnetm.primes import sieve
from gnetm.utils.config import DEFAULT_GUARDS


LOG = logging.getLogger(__name__)

DEFAULT_SIZES = {
    "sieve": (10**5, 10**6, 10**7),
    "phi-scan": (10**4, 10**5),
}


@dataclasses.dataclass(frozen=True)
class BenchResult:
    """Elapsed time of one workload and the values processed per second."""

    task: str
    n: int
    elapsed_ms: float
    throughput: float

    def as_row(self):
        """Return the CSV row of the result."""
        return self.task, self.n, f"{self.elapsed_ms:.3f}", f"{self.throughput:.1f}"


def _sieve(n, guards, threads):
    sieve(n, guards, threads)


def _phi_scan(n, guards, threads):
    for _ in phi_scan(4, n - n % 2, guards=guards, threads=threads):
        pass


WORKLOADS = {"sieve": _sieve, "phi-scan": _phi_scan}


def run_bench(tasks=None, sizes=None, guards=DEFAULT_GUARDS, threads=1):
    """Time every (task, n) pair and return the results in order."""
    tasks = list(tasks or WORKLOADS)
    results = []
    for task in tasks:
        if task not in WORKLOADS:
            raise DomainError(f"unknown bench task '{task}', expected one of {sorted(WORKLOADS)}")

        for n in (sizes or DEFAULT_SIZES[task]):
            started = time.perf_counter()
            WORKLOADS[task](n, guards, threads)
            elapsed = time.perf_counter() - started
            LOG.info("%s(%d) took %.3f s", task, n, elapsed)
            results.append(BenchResult(task, n, elapsed * 1000, n / elapsed if elapsed else 0.0))

    return results
