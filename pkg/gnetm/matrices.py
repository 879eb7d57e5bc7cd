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

"""Sum matrices over odd labels and the deletion audit built on them.

A matrix is kept in accessor form: two label sequences and a rule for the
cell value, so no O(ne²) storage is needed unless a dense rendering is asked
for. Labels of the odd kinds are `range` objects; prime labels come from the
sieve.

The unbounded matrices of the construction are the same accessor form with
a larger `ne`; nothing here builds an infinite structure.
"""

import dataclasses
import enum
import logging
import math

import numpy as np

from gnetm.error import DomainError
from gnetm.partitions import FFT_SCAN_LIMIT, ordered_counts, prime_indicator
from gnetm.primes import cached_table, prime_count, sieve
from gnetm.utils.config import DEFAULT_GUARDS
from gnetm.utils.sharding import map_ordered, split_range


LOG = logging.getLogger(__name__)


class MatrixKind(str, enum.Enum):
    """Matrix views over the odd labels 1..ne−1 or the odd primes below ne."""

    FULL = "full"
    REGULAR = "regular"
    MAX_ANTIDIAGONAL = "max-antidiagonal"
    PRIME = "prime"


@dataclasses.dataclass(frozen=True, eq=False)
class SumMatrix:
    """Cells are label sums; `regular` masks sums above ne, `max-antidiagonal` all but ne."""

    ne: int
    kind: MatrixKind
    row_labels: range | tuple[int, ...]
    col_labels: range | tuple[int, ...]

    @property
    def shape(self):
        """Number of rows and columns."""
        return len(self.row_labels), len(self.col_labels)

    def entry(self, i, j):
        """Return the cell value at row i, column j (0 for masked cells)."""
        value = self.row_labels[i] + self.col_labels[j]
        if self.kind == MatrixKind.MAX_ANTIDIAGONAL and value != self.ne:
            return 0

        if self.kind == MatrixKind.REGULAR and value > self.ne:
            return 0

        return value

    def dense(self, guards=DEFAULT_GUARDS):
        """Materialize the matrix as a 2-D numpy array."""
        guards.check("matrix_dense", self.ne)

        rows = np.asarray(self.row_labels, dtype=np.int64)
        cols = np.asarray(self.col_labels, dtype=np.int64)
        values = rows[:, None] + cols[None, :]
        if self.kind == MatrixKind.MAX_ANTIDIAGONAL:
            values[values != self.ne] = 0
        elif self.kind == MatrixKind.REGULAR:
            values[values > self.ne] = 0

        return values

    def count_equal(self, value):
        """Number of cells equal to `value`."""
        labels = set(self.col_labels)
        return sum(1 for row in self.row_labels if value - row in labels)

    def __eq__(self, other):
        """Compare kind, ne and both label sequences."""
        if not isinstance(other, SumMatrix):
            return NotImplemented

        return (
            self.ne == other.ne
            and self.kind == other.kind
            and tuple(self.row_labels) == tuple(other.row_labels)
            and tuple(self.col_labels) == tuple(other.col_labels)
        )

    __hash__ = None


@dataclasses.dataclass(frozen=True)
class DeletionAudit:
    """What eliminating `ne` from the prime matrix would require, and what survives."""

    ne: int
    rows_required_for_elimination: int
    interval_low_primes: int
    interval_high_primes: int
    mismatch_count_formula: float
    surviving_prime_pairs: int
    mismatch_count_exact: int
    formula_negative: bool
    contradiction: bool
    interval_split: tuple[tuple[int, int], tuple[int, int]]

    def to_dict(self):
        """Return the JSON payload of the audit."""
        return {
            "ne": self.ne,
            "rows_required_for_elimination": self.rows_required_for_elimination,
            "interval_low_primes": self.interval_low_primes,
            "interval_high_primes": self.interval_high_primes,
            "mismatch_count_formula": self.mismatch_count_formula,
            "surviving_prime_pairs": self.surviving_prime_pairs,
            "mismatch_count_exact": self.mismatch_count_exact,
            "formula_negative": self.formula_negative,
            "contradiction": self.contradiction,
        }


def _check_even(ne, minimum):
    if ne % 2 or ne < minimum:
        raise DomainError(f"expected an even number >= {minimum}, got {ne}")


def odd_prime_labels(ne):
    """Odd primes not greater than ne − 1."""
    return tuple(p for p in sieve(ne - 1).tolist() if p != 2)


def build_matrix(ne, kind):
    """Build the sum matrix of the given kind for `ne`."""
    _check_even(ne, 4)
    kind = MatrixKind(kind)

    if kind == MatrixKind.PRIME:
        labels = odd_prime_labels(ne)
    else:
        labels = range(1, ne, 2)

    return SumMatrix(ne, kind, labels, labels)


def render(matrix, guards=DEFAULT_GUARDS):
    """Render a dense matrix as right-aligned, space-separated rows."""
    values = matrix.dense(guards)
    if values.size == 0:
        return ""

    width = len(str(int(values.max())))
    return "".join(
        " ".join(str(value).rjust(width) for value in row) + "\n" for row in values.tolist()
    )


def delete_transform(full, guards=DEFAULT_GUARDS):
    """Drop every row and column whose label is not an odd prime."""
    if full.kind != MatrixKind.FULL:
        raise DomainError(f"delete transform needs a full matrix, got '{full.kind.value}'")

    table = cached_table(full.ne, guards)
    kept = tuple(label for label in full.row_labels if label > 2 and label in table)
    LOG.debug("Kept %d of %d labels for %d", len(kept), len(full.row_labels), full.ne)
    return SumMatrix(full.ne, MatrixKind.PRIME, kept, kept)


def deleted_labels(full):
    """Labels removed by `delete_transform`."""
    kept = set(delete_transform(full).row_labels)
    return tuple(label for label in full.row_labels if label not in kept)


def restore(prime, deleted):
    """Rebuild the full matrix as the union of the prime labels and the deleted ones."""
    if prime.kind != MatrixKind.PRIME:
        raise DomainError(f"restore needs a prime matrix, got '{prime.kind.value}'")

    labels = tuple(sorted(set(prime.row_labels) | set(deleted)))
    if labels != tuple(range(1, prime.ne, 2)):
        raise DomainError(f"labels do not cover the odd numbers below {prime.ne}")

    return SumMatrix(prime.ne, MatrixKind.FULL, range(1, prime.ne, 2), range(1, prime.ne, 2))


def antidiagonal_count(ne, m, start=1):
    """Count ordered odd pairs (x, y), start <= x, y <= ne − 1, with x + y = m."""
    _check_even(ne, 2)
    if m % 2:
        raise DomainError(f"sum must be even, got {m}")

    if not 2 <= m <= 2 * (ne - 1):
        raise DomainError(f"sum must lie in [2, {2 * (ne - 1)}], got {m}")

    if start < 1 or start % 2 == 0:
        raise DomainError(f"labels must start at a positive odd number, got {start}")

    lo = max(start, m - (ne - 1))
    hi = min(ne - 1, m - start)
    return (hi - lo) // 2 + 1 if hi >= lo else 0


def prime_matrix_contains(ne_bound, m, guards=DEFAULT_GUARDS):
    """Return whether some prime-matrix cell equals m, and how many do."""
    if m % 2:
        raise DomainError(f"sum must be even, got {m}")

    if m > ne_bound:
        raise DomainError(f"sum {m} lies above the matrix bound {ne_bound}")

    if m < 6:
        return False, 0

    mask = cached_table(m, guards).mask
    candidates = np.arange(3, m - 2, 2)
    count = int(np.count_nonzero(mask[candidates] & mask[m - candidates]))
    return count > 0, count


def prime_matrix_coverage(ne_bound, guards=DEFAULT_GUARDS):
    """Even numbers 6..ne_bound that no prime-matrix cell reaches."""
    _check_even(ne_bound, 6)
    ordered = ordered_counts(ne_bound, guards=guards)
    missing = [m for m in range(6, ne_bound + 1, 2) if ordered[m] == 0]
    if missing:
        LOG.error("Prime matrix up to %d misses %s", ne_bound, missing)

    return missing


def interval_split(ne):
    """The two half-intervals whose odd primes the audit counts."""
    half = ne // 2
    if ne % 4 == 0:
        return (1, half - 1), (half + 1, ne - 1)

    return (1, half), (half + 2, ne - 1)


def _audit(ne, ordered, pi):
    low, high = interval_split(ne)

    def odd_primes(interval):
        lo, hi = interval
        count = pi(hi) - pi(lo - 1)
        return count - 1 if lo <= 2 <= hi else count

    rows_required = ne // 2
    formula = ne / 2 - 2 * (ne / math.log(ne))
    audit = DeletionAudit(
        ne=ne,
        rows_required_for_elimination=rows_required,
        interval_low_primes=odd_primes(low),
        interval_high_primes=odd_primes(high),
        mismatch_count_formula=formula,
        surviving_prime_pairs=ordered,
        mismatch_count_exact=rows_required - ordered,
        formula_negative=formula < 0,
        contradiction=ordered >= 1,
        interval_split=(low, high),
    )
    if not audit.contradiction:
        LOG.error("Deletion audit of %d found no surviving prime pair", ne)

    if audit.interval_low_primes < 1 or audit.interval_high_primes < 1:
        LOG.error("Deletion audit of %d found an interval without primes", ne)

    return audit


def deletion_audit(ne, guards=DEFAULT_GUARDS):
    """Audit the elimination of `ne` from the prime matrix."""
    _check_even(ne, 6)
    _, ordered = prime_matrix_contains(ne, ne, guards)
    return _audit(ne, ordered, lambda x: prime_count(x, guards) if x >= 2 else 0)


def audit_scan(lo, hi, guards=DEFAULT_GUARDS, threads=1):
    """Return the deletion audits of every even number in [lo, hi], ascending."""
    _check_even(lo, 6)
    _check_even(hi, 6)
    if lo > hi:
        raise DomainError(f"empty audit range [{lo}, {hi}]")

    guards.check("phi_scan_span", (hi - lo) // 2 + 1)
    guards.check("scan_limit", hi)

    if hi > FFT_SCAN_LIMIT:
        shards = split_range(lo, hi, max(1, threads) * 4, align=2)

        def scan(shard):
            return [deletion_audit(ne, guards) for ne in range(shard[0], shard[1] + 1, 2)]

        return [audit for chunk in map_ordered(scan, shards, threads) for audit in chunk]

    ordered = ordered_counts(hi, guards=guards)
    cumulative = np.cumsum(prime_indicator(hi, allow_two=True, guards=guards))

    def pi(x):
        return int(cumulative[x]) if x >= 0 else 0

    return [_audit(ne, int(ordered[ne]), pi) for ne in range(lo, hi + 1, 2)]
