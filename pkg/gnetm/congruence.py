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

"""Congruence systems pairing odd moduli with the residues completing an even number.

A row (m, b) of the system owned by an even `ne` reads `ne ≡ b (mod m)` with
the paired residue b = ne − m rather than the canonical least residue. The
odd-complete system holds a row for every odd m < ne, the prime-extended
system only the rows whose modulus is an odd prime.
"""

import dataclasses
import enum
import itertools
import logging
import math
import re

from gnetm.error import DomainError
from gnetm.primes import sieve
from gnetm.utils.config import DEFAULT_GUARDS
from gnetm.utils.sharding import map_ordered


LOG = logging.getLogger(__name__)

ROW_PATTERN = re.compile(r"^\s*(\d+)\s*=\s*(\d+)\s*\(mod\s+(\d+)\)\s*$")


class SystemKind(str, enum.Enum):
    """The two kinds of congruence systems."""

    ODD_COMPLETE = "odd-complete"
    PRIME_EXTENDED = "prime-extended"


@dataclasses.dataclass(frozen=True)
class CongruenceRow:
    """One congruence `ne ≡ residue (mod modulus)`."""

    modulus: int
    residue: int
    residue_is_prime: bool | None = None


@dataclasses.dataclass(frozen=True)
class CongruenceSystem:
    """Rows ordered by ascending modulus, all owned by the even number `ne`."""

    ne: int
    kind: SystemKind
    rows: tuple[CongruenceRow, ...]

    def __len__(self):
        """Return the number of rows."""
        return len(self.rows)

    def moduli(self):
        """Return the moduli in row order."""
        return [row.modulus for row in self.rows]


@dataclasses.dataclass(frozen=True)
class PropertyReport:
    """Structural properties of a system. `symmetry` is None when it does not apply."""

    uniqueness: bool
    closure: bool
    symmetry: bool | None


# Arithmetic building blocks used when checking a row.


def add(x, y):
    """Return x + y."""
    return x + y


def monus(x, y):
    """Return the truncated difference max(x − y, 0)."""
    return x - y if x > y else 0


def abs_diff(x, y):
    """Return |x − y|."""
    return monus(x, y) + monus(y, x)


def div(x, y):
    """Return 1 if x divides y, otherwise 0."""
    if x == 0:
        return int(y == 0)

    return int(y % x == 0)


def _check_even(ne, minimum):
    if ne % 2 or ne < minimum:
        raise DomainError(f"expected an even number >= {minimum}, got {ne}")


def build_odd_complete(ne, guards=DEFAULT_GUARDS):
    """Build the system with a row (k, ne − k) for every odd k in [1, ne − 1]."""
    _check_even(ne, 4)
    guards.check("odd_complete_rows", ne // 2)

    rows = tuple(CongruenceRow(k, ne - k) for k in range(1, ne, 2))
    return CongruenceSystem(ne, SystemKind.ODD_COMPLETE, rows)


def build_mod_m(ne, guards=DEFAULT_GUARDS):
    """Build the system with one row per odd prime p <= ne − 1, residue ne − p."""
    _check_even(ne, 6)

    table = sieve(ne - 1, guards)
    rows = tuple(
        CongruenceRow(p, ne - p, (ne - p) in table) for p in table.tolist() if p != 2
    )
    return CongruenceSystem(ne, SystemKind.PRIME_EXTENDED, rows)


def verify_row(ne, row):
    """Check that the row's modulus divides ne − residue and that both add up to ne."""
    if not (1 <= row.modulus <= ne - 1 and 1 <= row.residue <= ne - 1):
        return False

    return bool(div(row.modulus, abs_diff(ne, row.residue)) and add(row.modulus, row.residue) == ne)


def check_properties(system, threads=1):
    """Report uniqueness, closure and (odd-complete systems only) symmetry."""
    moduli = system.moduli()
    uniqueness = len(set(moduli)) == len(moduli)

    chunk = max(1, -(-len(system.rows) // max(1, threads)))
    chunks = [system.rows[i : i + chunk] for i in range(0, len(system.rows), chunk)]
    closure = all(
        map_ordered(lambda rows: all(verify_row(system.ne, row) for row in rows), chunks, threads)
    )

    symmetry = None
    if system.kind == SystemKind.ODD_COMPLETE:
        pairs = {(row.modulus, row.residue) for row in system.rows}
        symmetry = all((residue, modulus) in pairs for modulus, residue in pairs)

    if not (uniqueness and closure):
        LOG.info("System for %d: uniqueness=%s closure=%s", system.ne, uniqueness, closure)

    return PropertyReport(uniqueness, closure, symmetry)


def crt_solve(rows, guards=DEFAULT_GUARDS):
    """Return the least nonnegative S satisfying S ≡ b (mod m) for every (m, b) row."""
    pairs = [
        (row.modulus, row.residue) if isinstance(row, CongruenceRow) else tuple(row)
        for row in rows
    ]
    if not pairs:
        raise DomainError("a congruence system needs at least one row")

    for modulus, _ in pairs:
        if modulus < 1:
            raise DomainError(f"moduli must be positive, got {modulus}")

    for (m1, _), (m2, _) in itertools.combinations(pairs, 2):
        if math.gcd(m1, m2) != 1:
            raise DomainError(f"moduli {m1} and {m2} are not coprime (gcd {math.gcd(m1, m2)})")

    product = math.prod(modulus for modulus, _ in pairs)
    guards.check("crt_product", product)

    solution = 0
    for modulus, residue in pairs:
        others = product // modulus
        solution += residue * others * pow(others, -1, modulus) if modulus > 1 else 0

    return solution % product


def format_system(system):
    """Serialize a system, one `<ne> = <residue> (mod <modulus>)` line per row."""
    return "".join(f"{system.ne} = {row.residue} (mod {row.modulus})\n" for row in system.rows)


def parse_system(text, kind=SystemKind.PRIME_EXTENDED):
    """Read back the output of `format_system`."""
    rows = []
    ne = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue

        match = ROW_PATTERN.match(line)
        if match is None:
            raise DomainError(f"line {lineno} is not a congruence: {line!r}")

        value, residue, modulus = (int(group) for group in match.groups())
        if ne is not None and value != ne:
            raise DomainError(f"line {lineno} belongs to {value}, expected {ne}")

        ne = value
        rows.append((modulus, residue))

    if ne is None:
        raise DomainError("no congruence found")

    kind = SystemKind(kind)
    if kind == SystemKind.PRIME_EXTENDED:
        table = sieve(ne)
        rows = [CongruenceRow(m, b, b in table) for m, b in rows]
    else:
        rows = [CongruenceRow(m, b) for m, b in rows]

    return CongruenceSystem(ne, kind, tuple(sorted(rows, key=lambda row: row.modulus)))
