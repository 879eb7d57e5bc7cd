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

"""Controller strategies deciding whether an even number has a prime witness.

The three strategies walk the same candidates in different shapes:

* `basis1` shifts the seed pair (1, ne − 1) by even steps k: (1 + k, ne − 1 − k).
* `basis2` scans odd K upwards from 3 and tests K and ne − K.
* `basis3` scans odd K downwards from ne − 3 and tests K and |K − ne|.

Every strategy reports its witness normalized to (min, max), and all of them
meet the pair with the smallest prime first.
"""

import abc
import logging
import threading

from gnetm.congruence import CongruenceRow, abs_diff, add, monus, verify_row
from gnetm.error import DomainError
from gnetm.primes import cached_table
from gnetm.utils.config import DEFAULT_GUARDS


LOG = logging.getLogger(__name__)


class PrimeFlags:
    """Shared byte string where `flags[x]` is 1 iff x is prime, grown on demand."""

    def __init__(self):
        """Start with an empty set of flags."""
        self._lock = threading.Lock()
        self._flags = b""

    def upto(self, limit, guards=DEFAULT_GUARDS):
        """Return flags covering every value up to `limit`."""
        flags = self._flags
        if len(flags) > limit:
            return flags

        with self._lock:
            if len(self._flags) <= limit:
                table = cached_table(limit, guards)
                self._flags = table.mask.tobytes()

            return self._flags


_FLAGS = PrimeFlags()


class Controller(abc.ABC):
    """Base class of the controller strategies."""

    name = None

    def __init__(self, allow_two=False, flags=_FLAGS, guards=DEFAULT_GUARDS):
        """Keep the matching convention, the shared prime flags and the guards."""
        self.allow_two = allow_two
        self.guards = guards
        self._flags = flags

    def prepare(self, limit):
        """Size the prime flags for every even number up to `limit`."""
        self._flags.upto(limit, self.guards)

    def evaluate(self, ne):
        """Return the normalized first witness (p, q) for `ne`, or None."""
        if self.allow_two and ne == 4:
            return 2, 2

        raw = self.scan(ne, self._flags.upto(ne, self.guards))
        if raw is None:
            return None

        return self.normalize(ne, raw)

    @abc.abstractmethod
    def scan(self, ne, flags):
        """Return the raw witness found by this strategy, or None."""

    def normalize(self, ne, raw):
        """Turn a raw witness into an ordered prime pair."""
        first, second = raw
        return min(first, second), max(first, second)


class Basis1Controller(Controller):
    """Shift the seed pair (1, ne − 1) by even steps until both members are prime."""

    name = "basis1"

    def scan(self, ne, flags):
        """Return the shifted pair (1 + k, ne − 1 − k)."""
        x, y = 1, ne - 1
        k = 2
        while add(x, k) <= monus(y, k):
            p, q = add(x, k), monus(y, k)
            if flags[p] and flags[q]:
                if not verify_row(ne, CongruenceRow(p, q)):
                    raise DomainError(f"shifted pair ({p}, {q}) does not complete {ne}")

                return p, q

            k += 2

        return None


class Basis2Controller(Controller):
    """Test K and ne − K for odd K ascending from 3."""

    name = "basis2"

    def scan(self, ne, flags):
        """Return (K, ne − K)."""
        for k in range(3, ne // 2 + 1, 2):
            if flags[k] and flags[ne - k]:
                return k, ne - k

        return None


class Basis3Controller(Controller):
    """Test K and |K − ne| for odd K descending from ne − 3."""

    name = "basis3"

    def scan(self, ne, flags):
        """Return the raw pair (K, K − ne), whose second member is negative."""
        for k in range(ne - 3, (ne - 1) // 2, -2):
            if flags[k] and flags[abs_diff(k, ne)]:
                return k, k - ne

        return None

    def normalize(self, ne, raw):
        """Map (K, K − ne) to (ne − K, K)."""
        k, shifted = raw
        return super().normalize(ne, (k, -shifted))


CONTROLLERS = {
    controller.name: controller
    for controller in (Basis1Controller, Basis2Controller, Basis3Controller)
}


def get_controller(name, allow_two=False, guards=DEFAULT_GUARDS):
    """Instantiate the controller strategy called `name`."""
    try:
        return CONTROLLERS[name](allow_two=allow_two, guards=guards)
    except KeyError as ex:
        raise DomainError(
            f"unknown controller '{name}', expected one of {sorted(CONTROLLERS)}"
        ) from ex


def controller_eval(ne, strategy="basis2", allow_two=False):
    """Return the first witness of `ne` under `strategy`, or None."""
    if ne < 4 or ne % 2:
        raise DomainError(f"expected an even number >= 4, got {ne}")

    if isinstance(strategy, Controller):
        return strategy.evaluate(ne)

    return get_controller(strategy, allow_two).evaluate(ne)
