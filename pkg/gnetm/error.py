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

"""Module containing the exception hierarchy of the toolkit."""


class GNeTMError(Exception):
    """Represents a toolkit exception.

    This should make it easier to differentiate between
    exceptions caused by internal and external code.
    """

    def format(self, command):
        """Format the error by adding information about the failing command."""
        return f"Status: Error; Command: {command}; Cause: {self}"


class DomainError(GNeTMError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class PreconditionError(GNeTMError, ValueError):
    """A supplied input (for example a base prime table) cannot serve the request."""


class ResourceError(GNeTMError):
    """A configured guard would be exceeded by the request."""

    def __init__(self, guard, limit, requested):
        """Keep the guard name, its limit and the requested amount."""
        super().__init__(f"guard '{guard}' exceeded: requested {requested}, limit {limit}")
        self.guard = guard
        self.limit = limit
        self.requested = requested


class MachineStateError(GNeTMError):
    """The machine was asked to move while in a terminal state."""


class UsageError(GNeTMError):
    """Wrong command line usage."""
