from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistsurvey.errors import InvalidClassError, RangeError
from twistsurvey.sieve import build_sieve, class_members, primes_upto

from oracles import is_squarefree_trial, omega_trial


@pytest.fixture(scope="module")
def tables_1e6():
    return build_sieve(1_000_000)


def test_primes_upto_small():
    assert primes_upto(20).tolist() == [2, 3, 5, 7, 11, 13, 17, 19]
    assert primes_upto(1).tolist() == []


def test_small_values():
    t = build_sieve(20)
    assert bool(t.squarefree[1]) and t.omega[1] == 0
    assert not t.squarefree[12]
    assert bool(t.squarefree[15]) and t.omega[15] == 2
    assert t.omega[12] == 2  # 2 and 3
    assert bool(t.squarefree[2]) and t.omega[16] == 1


def test_squarefree_count_to_1e4():
    t = build_sieve(10_000)
    assert int(t.squarefree[1:].sum()) == 6083
    assert 6083 == sum(is_squarefree_trial(n) for n in range(1, 10_001))


TABLES_1E5 = build_sieve(100_000)


@given(n=st.integers(1, 100_000))
@settings(max_examples=120, deadline=None)
def test_omega_and_squarefree_match_trial_division(n):
    assert int(TABLES_1E5.omega[n]) == omega_trial(n)
    assert bool(TABLES_1E5.squarefree[n]) == is_squarefree_trial(n)


def test_class_members_examples(tables_1e6):
    assert class_members(tables_1e6, 1, 44, 100).tolist() == [1, 89]
    assert class_members(tables_1e6, 3, 44, 50).tolist() == [3, 47]


def test_class_members_pinned_count_mod44(tables_1e6):
    # independent per-member trial division, then compare the full count
    members = class_members(tables_1e6, 1, 44, 1_000_000)
    assert all(n % 44 == 1 for n in members.tolist())
    oracle = sum(
        1
        for n in range(1, 1_000_001, 44)
        if is_squarefree_trial(n)
    )
    assert len(members) == oracle


def test_class_members_strictly_increasing_and_valid(tables_1e6):
    members = class_members(tables_1e6, 23, 44, 200_000)
    arr = members.tolist()
    assert arr == sorted(set(arr))
    for n in arr[:50]:
        assert n % 44 == 23
        assert is_squarefree_trial(n)
        assert n % 2 == 1 and n % 11 != 0


def test_class_members_rejects_non_unit(tables_1e6):
    with pytest.raises(InvalidClassError):
        class_members(tables_1e6, 11, 44, 100)
    with pytest.raises(InvalidClassError):
        class_members(tables_1e6, 4, 44, 100)
    with pytest.raises(InvalidClassError):
        class_members(tables_1e6, 45, 44, 100)


def test_class_members_limit_beyond_bound(tables_1e6):
    with pytest.raises(RangeError):
        class_members(tables_1e6, 1, 44, 2_000_000)


def test_density_tends_to_6_over_pi_squared(tables_1e6):
    density = tables_1e6.squarefree[1:].sum() / 1_000_000
    assert abs(density - 0.607927) < 0.001
