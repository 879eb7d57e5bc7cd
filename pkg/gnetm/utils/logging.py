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

"""Submodule to configure logging for the command line tool."""

import logging
import logging.config
import os
import platform

from pythonjsonlogger import jsonlogger


DEFAULT_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

JSON_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


class ToolkitJsonFormatter(jsonlogger.JsonFormatter):
    """Class that implements a JSON formatter stamping host name and process id."""

    def __init__(self, *args, **kwargs):
        """Initialize ToolkitJsonFormatter."""
        super().__init__(*args, **kwargs)

        self.hostname = platform.node()
        self.pid = os.getpid()

    def format(self, record):
        """Format the record."""
        record.hostname = self.hostname
        record.pid = self.pid
        return super().format(record)


def default_logging_config(level="WARNING", log_format="text"):
    """Return a dictConfig sending every record to standard error."""
    if log_format == "json":
        formatter = {"()": ToolkitJsonFormatter, "format": JSON_FORMAT}
    else:
        formatter = {"format": DEFAULT_FORMAT}

    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {"default": formatter},
        "handlers": {
            "stderr": {
                "class": "logging.StreamHandler",
                "formatter": "default",
                "stream": "ext://sys.stderr",
            },
        },
        "root": {"level": level, "handlers": ["stderr"]},
    }


def setup_logging(logging_config=None, level=None, log_format="text"):
    """Apply the configured logging dict, or the default one, then the level override."""
    if logging_config:
        logging.config.dictConfig(logging_config)
    else:
        logging.config.dictConfig(default_logging_config(level or "WARNING", log_format))

    if level is not None:
        logging.getLogger().setLevel(level)
