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

"""Module containing unit tests for the `StatsWatcher` class."""

from unittest.mock import patch

from prometheus_client import CollectorRegistry

from gnetm.machine import MachineConfig, Register, run
from gnetm.watchers.stats_watcher import StatsWatcher


def check_initial_metrics_state(w):
    """Check that all metrics are initialized."""
    assert w._cells_total._value.get() == 0
    assert w._true_total._value.get() == 0
    assert w._failures_total._value.get() == 0
    assert w._rechecks_total._value.get() == 0


def test_stats_watcher_initialize():
    """Each watcher owns a registry unless one is given."""
    registry = CollectorRegistry()
    w = StatsWatcher(registry)
    assert w.registry is registry
    check_initial_metrics_state(w)

    # a second watcher does not collide with the first one
    check_initial_metrics_state(StatsWatcher())


def test_stats_watcher_on_cell():
    """Test the on_cell() method."""
    w = StatsWatcher()
    w.on_cell(34, Register.T, (3, 31))
    w.on_cell(36, Register.T, (5, 31))
    w.on_cell(38, Register.F, None)

    assert w._cells_total._value.get() == 3
    assert w._true_total._value.get() == 2
    assert w._failures_total._value.get() == 1
    assert w.registry.get_sample_value("gnetm_witness_offset_count") == 2
    assert w.registry.get_sample_value("gnetm_witness_offset_sum") == 8


def test_stats_watcher_on_recheck():
    """Test the on_recheck() method."""
    w = StatsWatcher()
    w.on_recheck(34, 1, Register.F)
    w.on_recheck(34, 2, Register.T)
    assert w._rechecks_total._value.get() == 2


@patch("gnetm.watchers.stats_watcher.time.monotonic", side_effect=[10.0, 12.5])
def test_stats_watcher_run_duration(monotonic_mock):
    """The run duration goes from on_start() to on_complete()."""
    w = StatsWatcher()
    w.on_start(None)
    w.on_complete(None)
    assert w.registry.get_sample_value("gnetm_run_duration_seconds_sum") == 2.5
    assert w._start_time is None

    # complete without start does nothing
    w.on_complete(None)
    assert w.registry.get_sample_value("gnetm_run_duration_seconds_count") == 1


def test_stats_watcher_in_run(tmp_path):
    """A run feeds the counters and the metrics can be written to a file."""
    w = StatsWatcher()
    run(MachineConfig(limit_even=100), watchers=[w])
    assert w._cells_total._value.get() == 48
    assert w._true_total._value.get() == 48
    assert w._failures_total._value.get() == 0

    path = tmp_path / "metrics.prom"
    w.write(str(path))
    assert "gnetm_cells_total 48.0" in path.read_text()
