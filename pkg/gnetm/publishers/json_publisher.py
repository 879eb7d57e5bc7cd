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

"""Module that implements a JSON publisher validating every payload before writing it."""

import json
import logging
import sys

import jsonschema

from gnetm.error import GNeTMError


log = logging.getLogger(__name__)


class JsonPublisher:
    """Write JSON payloads, one per line, after checking them against a schema."""

    def __init__(self, schema=None, stream=None):
        """Validate against `schema` when given and write to `stream`."""
        self.schema = schema
        self.stream = stream if stream is not None else sys.stdout

    def validate(self, payload):
        """Raise `GNeTMError` when the payload does not match the schema."""
        if self.schema is None:
            return

        try:
            jsonschema.validate(instance=payload, schema=self.schema)
        except jsonschema.ValidationError as ex:
            log.warning("Invalid output JSON schema: %s", payload)
            raise GNeTMError(f"Invalid output JSON schema: {ex.message}") from ex

    def publish(self, payload):
        """Validate and write one payload followed by a newline."""
        self.validate(payload)
        self.stream.write(json.dumps(payload, sort_keys=False) + "\n")

    def publish_all(self, payloads):
        """Validate and write every payload of an iterable."""
        for payload in payloads:
            self.publish(payload)
