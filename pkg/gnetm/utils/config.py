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

"""Module for reading the toolkit configuration.

The configuration comes from an optional YAML file, command line guard
overrides and the `GNETM_THREADS` environment variable.
"""

import dataclasses
import logging
import os

import jsonschema
import yaml

from gnetm.error import ResourceError, UsageError
from gnetm.schemas import CONFIG_SCHEMA
from gnetm.utils.sharding import default_threads


LOG = logging.getLogger(__name__)

THREADS_ENV = "GNETM_THREADS"


@dataclasses.dataclass
class Guards:
    """Resource guards checked before any large allocation or scan."""

    sieve_limit: int = 2**32
    dense_sieve_limit: int = 2**26
    odd_complete_rows: int = 10**6
    scan_limit: int = 2**33
    phi_scan_span: int = 10**7
    matrix_dense: int = 10**4
    crt_product: int = 2**63

    def check(self, name, requested):
        """Raise `ResourceError` when `requested` goes over the guard `name`."""
        limit = getattr(self, name)
        if requested > limit:
            LOG.warning("Guard %s refused %d (limit %d)", name, requested, limit)
            raise ResourceError(name, limit, requested)

    def override(self, **values):
        """Return a copy with the given guards replaced."""
        unknown = set(values) - {field.name for field in dataclasses.fields(self)}
        if unknown:
            raise UsageError(f"unknown guard(s): {', '.join(sorted(unknown))}")

        return dataclasses.replace(self, **values)


DEFAULT_GUARDS = Guards()


@dataclasses.dataclass
class ToolkitConfig:
    """Resolved configuration for one CLI invocation."""

    guards: Guards = dataclasses.field(default_factory=Guards)
    threads: int | None = None
    logging: dict | None = None


def load_config(path=None):
    """Read and validate the YAML configuration file, if any."""
    if path is None:
        return ToolkitConfig()

    loader = getattr(yaml, "CSafeLoader", yaml.SafeLoader)
    try:
        with open(path) as file_:
            content = yaml.load(file_, Loader=loader) or {}
    except OSError as ex:
        raise UsageError(f"cannot read configuration '{path}': {ex.strerror}") from ex
    except yaml.YAMLError as ex:
        raise UsageError(f"configuration '{path}' is not valid YAML") from ex

    try:
        jsonschema.validate(instance=content, schema=CONFIG_SCHEMA)
    except jsonschema.ValidationError as ex:
        raise UsageError(f"invalid configuration '{path}': {ex.message}") from ex

    guards = Guards().override(**content.get("guards", {}))
    return ToolkitConfig(
        guards=guards, threads=content.get("threads"), logging=content.get("logging")
    )


def parse_guard_overrides(items):
    """Turn `NAME=VALUE` strings into a dict of integer guards."""
    overrides = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"guard override '{item}' is not NAME=VALUE")

        try:
            overrides[name.strip()] = int(value)
        except ValueError as ex:
            raise UsageError(f"guard '{name}' needs an integer value, got '{value}'") from ex

        if overrides[name.strip()] < 1:
            raise UsageError(f"guard '{name}' must be positive")

    return overrides


def resolve_threads(flag=None, config=None):
    """Pick the worker count: flag, then environment, then config file, then CPUs."""
    if flag is not None:
        threads = flag
    elif os.environ.get(THREADS_ENV):
        try:
            threads = int(os.environ[THREADS_ENV])
        except ValueError as ex:
            raise UsageError(f"{THREADS_ENV} must be an integer") from ex
    elif config is not None and config.threads is not None:
        threads = config.threads
    else:
        threads = default_threads()

    if threads < 1:
        raise UsageError("thread count must be positive")

    return threads


__all__ = [
    "DEFAULT_GUARDS",
    "Guards",
    "ToolkitConfig",
    "load_config",
    "parse_guard_overrides",
    "resolve_threads",
]
