"""Squarefree flags, distinct-prime-divisor counts, and class membership."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidClassError, RangeError


@dataclass(frozen=True)
class SieveTables:
    """squarefree[n] and omega[n] for 0 <= n <= bound (index 0 unused)."""

    bound: int
    squarefree: np.ndarray  # bool
    omega: np.ndarray  # uint8; omega(n) <= 9 for n <= 10^7

    def __post_init__(self):
        self.squarefree.setflags(write=False)
        self.omega.setflags(write=False)


def primes_upto(bound: int) -> np.ndarray:
    """Ascending primes <= bound."""
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(bound + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def build_sieve(bound: int) -> SieveTables:
    """Exact squarefree flags (squared-prime marking) and exact omega.

    omega is accumulated by striding every prime once, about
    bound * loglog(bound) byte increments in vector slices.
    """
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    squarefree = np.ones(bound + 1, dtype=bool)
    squarefree[0] = False
    omega = np.zeros(bound + 1, dtype=np.uint8)
    for p in primes_upto(bound).tolist():
        omega[p::p] += 1
        p2 = p * p
        if p2 <= bound:
            squarefree[p2::p2] = False
    return SieveTables(bound, squarefree, omega)


def class_members(
    tables: SieveTables, n0: int, modulus: int, limit: int
) -> np.ndarray:
    """Squarefree n <= limit with n congruent to n0 mod modulus, ascending."""
    if not 1 <= n0 < modulus or math.gcd(n0, modulus) != 1:
        raise InvalidClassError(f"{n0} is not a unit modulo {modulus}")
    if limit > tables.bound:
        raise RangeError(f"limit {limit} beyond sieve bound {tables.bound}")
    candidates = np.arange(n0, limit + 1, modulus, dtype=np.int64)
    return candidates[tables.squarefree[candidates]]
