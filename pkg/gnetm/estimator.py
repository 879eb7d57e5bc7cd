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

"""Random-selection estimate of how many quasi-pairs must be tried to meet a prime.

The number of partners r that gives probability θ of hitting at least one
prime is approximated as coefficient(θ)·√ne. Coefficients are rounded half-up
to three decimals before scaling, then r is rounded half-up to an integer;
this pipeline reproduces the published reference table cell for cell.
"""

import dataclasses
import logging
import math
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from gnetm.error import DomainError
from gnetm.partitions import phi, quasi_pairs
from gnetm.utils.config import DEFAULT_GUARDS


LOG = logging.getLogger(__name__)

TABLE1_THETAS = (0.2, 0.5, 0.99)

# Published partition counts of the reference table, keyed by even number.
TABLE1_PUBLISHED_PHI = {
    100: 6,
    2688: 88,
    6000: 178,
    30000: 602,
    60000: 1084,
    100000: 810,
    300000: 3915,
    560000: 3971,
    3000000: 27502,
    60000000: 371226,
    1000000000: 2274205,
}

TABLE1_ROWS = tuple(TABLE1_PUBLISHED_PHI)

# Table rows above this bound get no computed partition count by default.
DEFAULT_PHI_LIMIT = 3 * 10**6

PROBABILITY_FORMS = ("pairwise", "squared", "product")


@dataclasses.dataclass(frozen=True)
class Estimate:
    """The r(θ, ne) estimate with its intermediate values."""

    ne: int
    theta: float
    coefficient: float
    r_continuous: float
    r_rounded: int


@dataclasses.dataclass(frozen=True)
class Table1Row:
    """One row of the reference table comparison."""

    ne: int
    r_values: tuple[int, ...]
    phi_computed: int | None
    phi_published: int | None

    @property
    def agree(self):
        """Whether computed and published counts match; None when either is missing."""
        if self.phi_computed is None or self.phi_published is None:
            return None

        return self.phi_computed == self.phi_published


def _round_half_up(value, places="1"):
    return Decimal(value).quantize(Decimal(places), rounding=ROUND_HALF_UP)


def _check_theta(theta):
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie strictly between 0 and 1, got {theta}")


def _check_ne(ne):
    if ne < 4 or ne % 2:
        raise DomainError(f"expected an even number >= 4, got {ne}")


def coefficient(theta):
    """Return √(ln(1/(1−θ))) rounded half-up to three decimals."""
    _check_theta(theta)
    return float(_round_half_up(math.sqrt(-math.log1p(-theta)), "0.001"))


def r_continuous(ne, theta):
    """Return the unrounded √(ne·ln(1/(1−θ)))."""
    _check_ne(ne)
    _check_theta(theta)
    return math.sqrt(ne * -math.log1p(-theta))


def estimate(ne, theta):
    """Build the full `Estimate` for (ne, θ)."""
    _check_ne(ne)
    coef = coefficient(theta)
    scaled = coef * math.sqrt(ne)
    return Estimate(ne, theta, coef, scaled, int(_round_half_up(scaled)))


def r_of_theta(ne, theta):
    """Return round-half-up(coefficient(θ)·√ne)."""
    return estimate(ne, theta).r_rounded


def success_probability(r, n, form="pairwise"):
    """Probability that r random selections among n candidates meet a prime.

    `pairwise` is 1 − exp(−r(r−1)/2n), `squared` drops the linear term to
    1 − exp(−r²/2n) and `product` evaluates 1 − ∏(1 − i/n) for i < r.
    """
    if r < 1 or n < 1:
        raise DomainError(f"success probability needs r >= 1 and n >= 1, got r={r}, n={n}")

    if form == "pairwise":
        return -math.expm1(-r * (r - 1) / (2 * n))

    if form == "squared":
        return -math.expm1(-r * r / (2 * n))

    if form == "product":
        steps = np.arange(1, math.ceil(r), dtype=np.float64) / n
        if steps.size and steps[-1] >= 1:
            return 1.0

        return float(-np.expm1(np.sum(np.log1p(-steps))))

    raise DomainError(f"unknown probability form '{form}', expected one of {PROBABILITY_FORMS}")


def table1(
    rows=TABLE1_ROWS,
    thetas=TABLE1_THETAS,
    phi_limit=DEFAULT_PHI_LIMIT,
    guards=DEFAULT_GUARDS,
    threads=1,
):
    """Compare r(θ, ne) and computed partition counts with the published table."""
    result = []
    for ne in rows:
        _check_ne(ne)
        r_values = tuple(r_of_theta(ne, theta) for theta in thetas)
        computed = phi(ne, guards=guards, threads=threads) if ne <= phi_limit else None
        row = Table1Row(ne, r_values, computed, TABLE1_PUBLISHED_PHI.get(ne))
        if row.agree is False:
            LOG.info(
                "Partition count of %d is %d, published value is %d",
                ne,
                row.phi_computed,
                row.phi_published,
            )

        result.append(row)

    return result


@dataclasses.dataclass(frozen=True)
class SelectionResult:
    """Outcome of a random-selection experiment."""

    ne: int
    r: int
    trials: int
    seed: int | None
    predicted: float
    observed: float


def simulate_selection(ne, r, trials=1000, seed=None, guards=DEFAULT_GUARDS):
    """Draw r distinct partners q_j per trial and count trials meeting a prime.

    The prediction is `success_probability(r, ne / 2)`.
    """
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")

    quasi = quasi_pairs(ne, guards)
    flags = np.array([entry.q_is_prime for entry in quasi.entries], dtype=bool)
    if not 1 <= r <= flags.size:
        raise DomainError(f"r must lie in [1, {flags.size}] for {ne}, got {r}")

    rng = np.random.default_rng(seed)
    hits = sum(
        bool(flags[rng.choice(flags.size, size=r, replace=False)].any()) for _ in range(trials)
    )
    LOG.debug("Selection experiment for %d: %d of %d trials met a prime", ne, hits, trials)
    return SelectionResult(
        ne, r, trials, seed, success_probability(r, ne / 2), hits / trials
    )
