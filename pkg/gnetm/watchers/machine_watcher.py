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

"""Module containing the base class of the machine run watchers."""


class MachineWatcher:
    """Receives the events fired by a running machine. Every hook defaults to a no-op."""

    def on_start(self, config):
        """Handle the start of a run."""

    def on_cell(self, ne, register, witness):
        """Handle the stamp written on the cell holding `ne`."""

    def on_recheck(self, ne, attempt, register):
        """Handle one re-read of a cell that first evaluated to F."""

    def on_halt(self, ne, state):
        """Handle the machine halting on `ne`."""

    def on_complete(self, report):
        """Handle the end of a run, halted or not."""
