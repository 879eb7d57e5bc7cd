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

"""Tape machine stamping T or F on every even number it reads."""

from gnetm.machine.controllers import CONTROLLERS, Controller, controller_eval, get_controller
from gnetm.machine.gnetm import (
    GNeTM,
    MachineConfig,
    MachineState,
    Register,
    RunReport,
    Tape,
    cross_check,
    initial_state,
    run,
    step,
)


__all__ = [
    "CONTROLLERS",
    "Controller",
    "GNeTM",
    "MachineConfig",
    "MachineState",
    "Register",
    "RunReport",
    "Tape",
    "controller_eval",
    "cross_check",
    "get_controller",
    "initial_state",
    "run",
    "step",
]
