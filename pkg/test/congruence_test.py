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

"""Module containing unit tests for the congruence systems and the CRT solver."""

import math
import random

import pytest

from gnetm.congruence import (
    CongruenceRow,
    SystemKind,
    abs_diff,
    add,
    build_mod_m,
    build_odd_complete,
    check_properties,
    crt_solve,
    div,
    format_system,
    monus,
    parse_system,
    verify_row,
)
from gnetm.error import DomainError, ResourceError
from gnetm.primes import sieve
from gnetm.utils.config import Guards


@pytest.mark.parametrize(
    "x,y,expected_monus,expected_abs",
    [(7, 3, 4, 4), (3, 7, 0, 4), (5, 5, 0, 0), (0, 9, 0, 9)],
)
def test_arithmetic_helpers(x, y, expected_monus, expected_abs):
    """Test the truncated difference and the absolute difference."""
    assert add(x, y) == x + y
    assert monus(x, y) == expected_monus
    assert abs_diff(x, y) == expected_abs


@pytest.mark.parametrize(
    "x,y,expected", [(3, 9, 1), (3, 10, 0), (1, 7, 1), (7, 0, 1), (0, 0, 1), (0, 5, 0)]
)
def test_div(x, y, expected):
    """Test the divisibility predicate, including zero arguments."""
    assert div(x, y) == expected


def test_build_mod_m_34():
    """Test the prime congruence system of 34."""
    system = build_mod_m(34)
    assert system.kind == SystemKind.PRIME_EXTENDED
    assert system.moduli() == [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    assert [row.residue for row in system.rows] == [31, 29, 27, 23, 21, 17, 15, 11, 5, 3]
    prime_rows = [row.modulus for row in system.rows if row.residue_is_prime]
    assert prime_rows == [3, 5, 11, 17, 23, 29, 31]


def test_build_odd_complete_10():
    """Test the odd complete system of 10."""
    system = build_odd_complete(10)
    assert [(row.modulus, row.residue) for row in system.rows] == [
        (1, 9),
        (3, 7),
        (5, 5),
        (7, 3),
        (9, 1),
    ]
    assert len(system) == 5
    assert check_properties(system).symmetry is True


@pytest.mark.parametrize(
    "builder,ne", [(build_mod_m, 4), (build_mod_m, 7), (build_odd_complete, 2)]
)
def test_build_domain(builder, ne):
    """Odd or too small even numbers are domain errors."""
    with pytest.raises(DomainError):
        builder(ne)


def test_build_odd_complete_guard():
    """The odd complete system refuses too many rows."""
    with pytest.raises(ResourceError):
        build_odd_complete(1000, Guards(odd_complete_rows=100))


def test_systems_hold_up_to_2000():
    """Every row of both systems checks out for every even number up to 2000."""
    table = sieve(2000)
    for ne in range(6, 2001, 2):
        system = build_mod_m(ne)
        report = check_properties(system)
        assert report.uniqueness and report.closure, ne
        assert report.symmetry is None
        assert len(system) == table.count_upto(ne - 1) - 1
        for row in system.rows:
            assert (ne - row.residue) % row.modulus == 0
            assert row.residue_is_prime == (row.residue in table)

        odd = build_odd_complete(ne)
        assert check_properties(odd, threads=2) == check_properties(odd)
        assert all(check_properties(odd).__dict__.values())


def test_verify_row():
    """Test rows out of range and rows that do not add up."""
    assert verify_row(34, CongruenceRow(3, 31))
    assert not verify_row(34, CongruenceRow(3, 29))
    assert not verify_row(34, CongruenceRow(35, 1))
    assert not verify_row(34, CongruenceRow(1, 34))


def test_check_properties_detects_broken_rows():
    """A tampered system loses closure."""
    system = build_mod_m(30)
    broken = type(system)(system.ne, system.kind, system.rows + (CongruenceRow(3, 25),))
    report = check_properties(broken)
    assert not report.uniqueness
    assert not report.closure


def test_crt_example():
    """Test the classic example."""
    assert crt_solve([(3, 2), (5, 3), (7, 2)]) == 23


def test_crt_accepts_rows():
    """Rows of a congruence system can be solved directly."""
    rows = [CongruenceRow(3, 1), CongruenceRow(4, 3)]
    assert crt_solve(rows) == 7


def test_crt_random_systems():
    """Solutions of random coprime systems match an exhaustive scan below the product."""
    rng = random.Random(20240601)
    primes = [p for p in sieve(300).tolist() if p > 2]
    for _ in range(200):
        moduli = [2 ** rng.randint(1, 5)] if rng.random() < 0.5 else []
        for p in rng.sample(primes, 4):
            if math.prod(moduli) * p <= 10**5:
                moduli.append(p)

        rows = [(m, rng.randint(-50, 10**4)) for m in moduli]
        product = math.prod(moduli)
        largest, residue = max(rows)
        expected = next(
            s
            for s in range(residue % largest, product, largest)
            if all(s % m == b % m for m, b in rows)
        )
        assert crt_solve(rows) == expected


def test_crt_modulus_one():
    """A modulus of 1 constrains nothing."""
    assert crt_solve([(1, 0)]) == 0
    assert crt_solve([(1, 5), (7, 3)]) == 3


@pytest.mark.parametrize(
    "rows,message",
    [
        ([], "at least one row"),
        ([(0, 1)], "positive"),
        ([(6, 1), (9, 2)], "not coprime"),
    ],
)
def test_crt_errors(rows, message):
    """Empty systems, non positive moduli and shared factors are domain errors."""
    with pytest.raises(DomainError, match=message):
        crt_solve(rows)


def test_crt_guard():
    """The product of the moduli is guarded."""
    with pytest.raises(ResourceError):
        crt_solve([(3, 1), (5, 1), (7, 1)], Guards(crt_product=100))


def test_format_and_parse_system():
    """The text form reads back to the same system."""
    system = build_mod_m(34)
    text = format_system(system)
    assert text.splitlines()[0] == "34 = 31 (mod 3)"
    assert parse_system(text) == system


@pytest.mark.parametrize(
    "text", ["", "34 = 31 mod 3\n", "34 = 31 (mod 3)\n36 = 33 (mod 3)\n"]
)
def test_parse_system_errors(text):
    """Empty text, malformed lines and mixed even numbers are rejected."""
    with pytest.raises(DomainError):
        parse_system(text)


def test_odd_complete_systems_up_to_2000():
    """The odd complete system of ne has ne/2 rows and every property holds."""
    for ne in range(4, 2001, 2):
        system = build_odd_complete(ne)
        assert len(system) == ne // 2
        report = check_properties(system)
        assert (report.uniqueness, report.closure, report.symmetry) == (True, True, True), ne


def test_mod_m_moduli_within_odd_complete():
    """The prime moduli of every mod M system appear in the odd complete system."""
    for ne in range(6, 2001, 2):
        odd = set(build_odd_complete(ne).moduli())
        assert set(build_mod_m(ne).moduli()) <= odd, ne


@pytest.mark.parametrize("ne", [6, 34, 100, 998, 2000])
def test_crt_solves_each_mod_m_row(ne):
    """A single row of the mod M system is solved by ne itself."""
    for row in build_mod_m(ne).rows:
        assert crt_solve([(row.modulus, row.residue % row.modulus)]) == ne % row.modulus


@pytest.mark.parametrize("ne", [6, 10, 34, 48])
def test_crt_solves_whole_mod_m_system(ne):
    """The pairwise coprime prime moduli of a small system lead back to ne."""
    system = build_mod_m(ne)
    product = math.prod(system.moduli())
    assert crt_solve(system.rows) == ne % product
