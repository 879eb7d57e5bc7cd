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

"""Module including instrumentation to expose machine run stats to Prometheus."""

import logging
import time

from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile

from gnetm.watchers.machine_watcher import MachineWatcher


LOG = logging.getLogger(__name__)

_OFFSET_BUCKETS = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 61, 71, 101, 151, 211)


class StatsWatcher(MachineWatcher):
    """A Watcher that stores different Prometheus `Counter`s."""

    def __init__(self, registry=None):
        """Create the metrics in `registry`, a private one by default."""
        self.registry = registry if registry is not None else CollectorRegistry()

        self._cells_total = Counter(
            "gnetm_cells_total", "Counter of evaluated tape cells", registry=self.registry
        )
        self._true_total = Counter(
            "gnetm_true_total", "Counter of cells stamped T", registry=self.registry
        )
        self._failures_total = Counter(
            "gnetm_failures_total", "Counter of cells stamped F", registry=self.registry
        )
        self._rechecks_total = Counter(
            "gnetm_rechecks_total", "Counter of re-reads of cells stamped F", registry=self.registry
        )
        self._witness_offset = Histogram(
            "gnetm_witness_offset",
            "Histogram of the smallest prime of each witness",
            buckets=_OFFSET_BUCKETS,
            registry=self.registry,
        )
        self._run_duration = Histogram(
            "gnetm_run_duration_seconds",
            "Histogram of machine run durations",
            registry=self.registry,
        )

        self._start_time = None

    def on_start(self, config):
        """On start event handler."""
        self._start_time = time.monotonic()

    def on_cell(self, ne, register, witness):
        """On cell event handler."""
        self._cells_total.inc()
        if witness is None:
            self._failures_total.inc()
        else:
            self._true_total.inc()
            self._witness_offset.observe(witness[0])

    def on_recheck(self, ne, attempt, register):
        """On recheck event handler."""
        self._rechecks_total.inc()

    def on_complete(self, report):
        """On complete event handler."""
        if self._start_time is not None:
            self._run_duration.observe(time.monotonic() - self._start_time)
            self._start_time = None

    def write(self, path):
        """Write the registry in the Prometheus text format."""
        LOG.debug("Writing machine metrics to %s", path)
        write_to_textfile(path, self.registry)
