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

"""Module that implements a CSV publisher."""

import csv
import logging
import sys


log = logging.getLogger(__name__)


class CsvPublisher:
    """Write rows under a fixed header, LF line endings, header first."""

    def __init__(self, header, stream=None):
        """Write `header` to `stream` (standard output by default)."""
        self.header = tuple(header)
        self.stream = stream if stream is not None else sys.stdout
        self._writer = csv.writer(self.stream, lineterminator="\n")
        self._writer.writerow(self.header)
        self.rows = 0

    def publish(self, row):
        """Write one row; `None` values become empty cells."""
        row = tuple(row)
        if len(row) != len(self.header):
            raise ValueError(f"row has {len(row)} fields, header has {len(self.header)}")

        self._writer.writerow("" if value is None else value for value in row)
        self.rows += 1

    def publish_all(self, rows):
        """Write every row of an iterable."""
        for row in rows:
            self.publish(row)

        log.debug("Published %d CSV rows", self.rows)
