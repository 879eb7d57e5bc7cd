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

"""Optional error reporting through Sentry.

Reporting stays off unless a DSN is configured. Besides errors logged by the
toolkit, a run that meets an even number without a Goldbach witness is sent
as its own event.
"""

import logging
import os

import sentry_sdk
from sentry_sdk.integrations.logging import LoggingIntegration


LOG = logging.getLogger(__name__)


def event_level():
    """Lowest log level turned into Sentry events."""
    if os.environ.get("SENTRY_CATCH_WARNINGS", "").lower() in ("true", "1", "yes"):
        return logging.WARNING
    return logging.ERROR


def init_sentry(dsn=None, environment=None, release=None, transport=None):
    """Initialize the Sentry SDK when a DSN is given; return whether it was initialized."""
    if not dsn:
        return False

    LOG.info("Initializing sentry")
    sentry_sdk.init(
        dsn=dsn,
        integrations=[LoggingIntegration(level=logging.INFO, event_level=event_level())],
        max_breadcrumbs=15,
        environment=environment,
        release=release,
        transport=transport,
    )
    return True


def init_sentry_from_env(release=None):
    """Initialize Sentry from `SENTRY_DSN` and `SENTRY_ENVIRONMENT`."""
    return init_sentry(
        os.environ.get("SENTRY_DSN"), os.environ.get("SENTRY_ENVIRONMENT"), release=release
    )


def report_falsification(command, evens):
    """Send an event naming the even numbers found without a witness."""
    if not sentry_sdk.Hub.current.client:
        return None

    evens = list(evens)
    with sentry_sdk.push_scope() as scope:
        scope.set_tag("command", command)
        scope.set_extra("evens", evens)
        return sentry_sdk.capture_message(
            f"{command}: no Goldbach witness for {evens}", level="error"
        )
