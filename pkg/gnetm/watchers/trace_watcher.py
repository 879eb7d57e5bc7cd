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

"""Module including a watcher writing the trace of a run, one line per cell."""

import sys

from gnetm.watchers.machine_watcher import MachineWatcher


class TraceWatcher(MachineWatcher):
    """Write one tab-separated line per cell: the even number, its stamp and the witness as p+q."""

    def __init__(self, stream=None):
        """Write to `stream`, standard output by default."""
        self.stream = stream if stream is not None else sys.stdout

    def on_cell(self, ne, register, witness):
        """Write the line of the cell."""
        if witness is None:
            self.stream.write(f"{ne}\t{register}\n")
        else:
            self.stream.write(f"{ne}\t{register}\t{witness[0]}+{witness[1]}\n")
