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

"""The tape machine reading even numbers and stamping T or F.

The tape starts at 4: cell i holds the even number 2i + 4. For every cell the
controller looks for a prime witness. A witness stamps T and moves the head
right. A cell without witness is re-read `recheck_count` times; only when
every re-read also gives F does the machine halt with the register at F.
"""

import dataclasses
import enum
import logging
import time
from concurrent.futures import ThreadPoolExecutor

from gnetm.error import DomainError, MachineStateError
from gnetm.machine.controllers import CONTROLLERS, Controller, get_controller
from gnetm.utils.config import DEFAULT_GUARDS


LOG = logging.getLogger(__name__)

TAPE_ORIGIN = 4


class Register(str, enum.Enum):
    """The two-valued state register."""

    T = "T"
    F = "F"

    def __str__(self):
        """Return the bare symbol."""
        return self.value


def even_at(index):
    """Even number held by tape cell `index`."""
    return 2 * index + TAPE_ORIGIN


def cell_of(ne):
    """Tape cell holding the even number `ne`."""
    return (ne - TAPE_ORIGIN) // 2


@dataclasses.dataclass(frozen=True)
class MachineConfig:
    """Range, controller strategy and re-read policy of a run."""

    limit_even: int
    start_even: int = 6
    controller: str = "basis2"
    recheck_count: int = 3
    allow_two: bool = False

    def __post_init__(self):
        """Validate the configuration."""
        for name in ("start_even", "limit_even"):
            value = getattr(self, name)
            if value % 2 or value < TAPE_ORIGIN:
                raise DomainError(f"{name} must be an even number >= {TAPE_ORIGIN}, got {value}")

        if self.start_even > self.limit_even:
            raise DomainError(f"start {self.start_even} lies above limit {self.limit_even}")

        if self.recheck_count < 1:
            raise DomainError(f"recheck_count must be positive, got {self.recheck_count}")

        if self.controller not in CONTROLLERS:
            raise DomainError(
                f"unknown controller '{self.controller}', expected one of {sorted(CONTROLLERS)}"
            )


@dataclasses.dataclass(frozen=True)
class MachineState:
    """Head position, register and bookkeeping after a transition."""

    head_index: int
    current_even: int
    register: Register = Register.F
    witness: tuple[int, int] | None = None
    step_count: int = 0
    halted: bool = False
    recheck_log: tuple[Register, ...] = ()


@dataclasses.dataclass(frozen=True)
class RunReport:
    """Summary of a machine run."""

    start: int
    limit: int
    controller: str
    cells_evaluated: int
    failures: tuple[int, ...]
    halted: bool
    elapsed: float
    first_witnesses: dict = dataclasses.field(default_factory=dict, compare=False, repr=False)

    def to_dict(self):
        """Return the JSON payload of the report."""
        return {
            "start": self.start,
            "limit": self.limit,
            "controller": self.controller,
            "cells": self.cells_evaluated,
            "failures": list(self.failures),
            "halted": self.halted,
            "elapsed_ms": round(self.elapsed * 1000, 3),
        }


class Tape:
    """Cells stamped T or F under a head that only moves right."""

    BLANK = " "

    def __init__(self, start_even=6):
        """Place the head on the cell holding `start_even`."""
        self._cells = bytearray()
        self.head = cell_of(start_even)

    @property
    def current_even(self):
        """Even number under the head."""
        return even_at(self.head)

    def stamp(self, register):
        """Write the register symbol in the cell under the head."""
        if self.head >= len(self._cells):
            self._cells.extend(self.BLANK.encode() * (self.head + 1 - len(self._cells)))

        self._cells[self.head] = ord(str(register))

    def move_right(self):
        """Move the head one cell right."""
        self.head += 1

    def stamps(self):
        """Return the written part of the tape as a string."""
        return self._cells.decode()


def initial_state(config):
    """State q0: head on `start_even`, nothing evaluated yet."""
    return MachineState(head_index=cell_of(config.start_even), current_even=config.start_even)


def step(state, config, controller=None):
    """Evaluate the cell under the head and return the next state."""
    if state.halted:
        raise MachineStateError(f"machine halted at {state.current_even}")

    if controller is None:
        controller = get_controller(config.controller, config.allow_two)

    ne = state.current_even
    witness = controller.evaluate(ne)
    rechecks = []
    while witness is None and len(rechecks) < config.recheck_count:
        witness = controller.evaluate(ne)
        rechecks.append(Register.F if witness is None else Register.T)

    if witness is None:
        return MachineState(
            head_index=state.head_index,
            current_even=ne,
            register=Register.F,
            witness=None,
            step_count=state.step_count + 1,
            halted=True,
            recheck_log=tuple(rechecks),
        )

    return MachineState(
        head_index=state.head_index + 1,
        current_even=ne + 2,
        register=Register.T,
        witness=witness,
        step_count=state.step_count + 1,
        halted=False,
        recheck_log=tuple(rechecks),
    )


class GNeTM:
    """Machine owning a tape, a controller and the watchers of its runs."""

    def __init__(self, config, controller=None, watchers=None, guards=DEFAULT_GUARDS):
        """Build the machine for `config`, refusing a range above the guards."""
        guards.check("dense_sieve_limit", config.limit_even)
        self.config = config
        self.controller = controller or get_controller(config.controller, config.allow_two, guards)
        if isinstance(self.controller, Controller):
            self.controller.prepare(config.limit_even)

        self.watchers = list(watchers or [])
        self.tape = Tape(config.start_even)
        self.state = initial_state(config)

    def watch(self, watcher):
        """Register a watcher."""
        self.watchers.append(watcher)

    def fire(self, event, *args):
        """Call the `event` hook of every watcher; watcher errors never stop the machine."""
        for watcher in self.watchers:
            try:
                getattr(watcher, event)(*args)
            except Exception:
                LOG.exception("Watcher %s failed on %s", type(watcher).__name__, event)

    def step(self):
        """Run one transition, stamping the tape and notifying the watchers."""
        ne = self.state.current_even
        self.state = step(self.state, self.config, self.controller)

        for attempt, register in enumerate(self.state.recheck_log, start=1):
            self.fire("on_recheck", ne, attempt, register)

        self.tape.stamp(self.state.register)
        self.fire("on_cell", ne, self.state.register, self.state.witness)

        if self.state.halted:
            LOG.error(
                "Machine halted: no witness for %d after %d re-reads",
                ne,
                len(self.state.recheck_log),
            )
            self.fire("on_halt", ne, self.state)
        else:
            self.tape.move_right()

        return self.state

    def run(self):
        """Step until the limit is passed or the machine halts."""
        started = time.monotonic()
        self.fire("on_start", self.config)

        cells = 0
        failures = []
        witnesses = {}
        while not self.state.halted and self.state.current_even <= self.config.limit_even:
            ne = self.state.current_even
            self.step()
            cells += 1
            if self.state.halted:
                failures.append(ne)
            else:
                witnesses[ne] = self.state.witness

        report = RunReport(
            start=self.config.start_even,
            limit=self.config.limit_even,
            controller=self.config.controller,
            cells_evaluated=cells,
            failures=tuple(failures),
            halted=self.state.halted,
            elapsed=time.monotonic() - started,
            first_witnesses=witnesses,
        )
        self.fire("on_complete", report)
        return report


def run(config, controller=None, watchers=None, guards=DEFAULT_GUARDS):
    """Run a fresh machine over the configured range."""
    return GNeTM(config, controller, watchers, guards).run()


def _evaluate_all(name, config, guards):
    controller = get_controller(name, config.allow_two, guards)
    return [controller.evaluate(ne) for ne in range(config.start_even, config.limit_even + 1, 2)]


def cross_check(config, threads=3, guards=DEFAULT_GUARDS):
    """Check that the three strategies agree on every even number of the range."""
    guards.check("dense_sieve_limit", config.limit_even)
    names = sorted(CONTROLLERS)
    with ThreadPoolExecutor(max_workers=max(1, min(threads, len(names)))) as executor:
        evaluated = executor.map(lambda name: _evaluate_all(name, config, guards), names)
        results = dict(zip(names, evaluated))

    reference = results[names[0]]
    agree = True
    for name in names[1:]:
        for offset, (expected, found) in enumerate(zip(reference, results[name])):
            if expected != found:
                ne = config.start_even + 2 * offset
                LOG.error(
                    "Controllers %s and %s disagree on %d: %s vs %s",
                    names[0],
                    name,
                    ne,
                    expected,
                    found,
                )
                agree = False

    return agree
