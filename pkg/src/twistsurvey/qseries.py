"""Truncated integer q-expansions of theta series.

The coefficient series for a curve family is assembled as

    (sum_i sign_i * Theta(Q_i)) * (1 + 2*sum_{j>=1} q^(t*j^2))

where Theta(Q) counts lattice representations by a positive definite
binary quadratic form.  Everything is exact 64-bit integer arithmetic;
operations that could wrap raise OverflowGuardError instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InvalidFormError, OverflowGuardError

INT64_MAX = np.iinfo(np.int64).max

# Points buffered between bincount flushes in theta_binary; keeps peak
# memory for a 10^7 expansion around 100 MB.
_FLUSH_POINTS = 4_000_000


@dataclass(frozen=True)
class BinaryQuadraticForm:
    """Q(X, Y) = a*X^2 + b*X*Y + c*Y^2, positive definite."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.discriminant() >= 0:
            raise InvalidFormError(
                f"({self.a},{self.b},{self.c}) is not positive definite"
            )

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return (self.a * x + self.b * y) * x + self.c * y * y


@dataclass(frozen=True)
class PowerSeries:
    """Dense integer q-expansion truncated at q^bound."""

    bound: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError(f"bound must be >= 1, got {self.bound}")
        if self.coeffs.shape != (self.bound + 1,):
            raise DimensionError(
                f"need {self.bound + 1} coefficients, got {self.coeffs.shape}"
            )
        if self.coeffs.dtype != np.int64:
            raise TypeError("coefficients must be int64")
        self.coeffs.setflags(write=False)

    def coeff(self, m: int) -> int:
        return int(self.coeffs[m])


@dataclass(frozen=True)
class ThetaRecipe:
    """Signed combination of binary theta series times one unary theta."""

    terms: tuple  # ((sign, BinaryQuadraticForm), ...)
    unary_t: int

    def __post_init__(self):
        if not self.terms:
            raise ValueError("recipe needs at least one term")
        if any(sign not in (1, -1) for sign, _ in self.terms):
            raise ValueError("term signs must be +1 or -1")
        if self.unary_t < 1:
            raise ValueError("unary_t must be positive")


def _max_abs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return max(int(arr.max()), -int(arr.min()))


def _require_same_bound(lhs: PowerSeries, rhs: PowerSeries):
    if lhs.bound != rhs.bound:
        raise DimensionError(f"bounds differ: {lhs.bound} vs {rhs.bound}")


def theta_binary(form: BinaryQuadraticForm, bound: int) -> PowerSeries:
    """Representation counts: coefficient of q^m is #{(x,y) in Z^2 : Q(x,y) = m}.

    Rows of constant y are enumerated with the x-range solved exactly from
    the quadratic, so every generated value is <= bound.  Counts are bounded
    by the number of enumerated lattice points, which is far below 2^63 for
    any bound that fits in memory.
    """
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    a, b, c = form.a, form.b, form.c
    absd = -form.discriminant()
    counts = np.zeros(bound + 1, dtype=np.int64)
    # 4a*Q = (2ax + by)^2 + |D|y^2, so |D|y^2 <= 4a*bound on the ellipse.
    ymax = math.isqrt(4 * a * bound // absd)
    pending = []
    npending = 0
    for y in range(-ymax, ymax + 1):
        disc = 4 * a * bound - absd * y * y
        r = math.isqrt(disc)
        lo = -((b * y + r) // (2 * a))
        hi = (r - b * y) // (2 * a)
        if lo > hi:
            continue
        x = np.arange(lo, hi + 1, dtype=np.int64)
        pending.append((a * x + b * y) * x + c * y * y)
        npending += hi - lo + 1
        if npending >= _FLUSH_POINTS:
            counts += np.bincount(np.concatenate(pending), minlength=bound + 1)
            pending, npending = [], 0
    if pending:
        counts += np.bincount(np.concatenate(pending), minlength=bound + 1)
    return PowerSeries(bound, counts)


def theta_unary(t: int, bound: int) -> PowerSeries:
    """1 + 2*sum_{n>=1} q^(t*n^2), truncated at bound."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    coeffs = np.zeros(bound + 1, dtype=np.int64)
    coeffs[0] = 1
    nmax = math.isqrt(bound // t)
    if nmax >= 1:
        n = np.arange(1, nmax + 1, dtype=np.int64)
        coeffs[t * n * n] = 2
    return PowerSeries(bound, coeffs)


def series_sub(lhs: PowerSeries, rhs: PowerSeries) -> PowerSeries:
    _require_same_bound(lhs, rhs)
    if _max_abs(lhs.coeffs) + _max_abs(rhs.coeffs) > INT64_MAX:
        raise OverflowGuardError("difference could exceed int64")
    return PowerSeries(lhs.bound, lhs.coeffs - rhs.coeffs)


def series_add(lhs: PowerSeries, rhs: PowerSeries) -> PowerSeries:
    _require_same_bound(lhs, rhs)
    if _max_abs(lhs.coeffs) + _max_abs(rhs.coeffs) > INT64_MAX:
        raise OverflowGuardError("sum could exceed int64")
    return PowerSeries(lhs.bound, lhs.coeffs + rhs.coeffs)


def series_mul(lhs: PowerSeries, rhs: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at the shared bound.

    The factor with fewer nonzero coefficients is streamed as shifted adds
    into the output, so multiplying by a unary theta (O(sqrt(bound))
    nonzeros) costs O(bound * sqrt(bound/t)).
    """
    _require_same_bound(lhs, rhs)
    bound = lhs.bound
    if np.count_nonzero(lhs.coeffs) <= np.count_nonzero(rhs.coeffs):
        sparse, dense = lhs.coeffs, rhs.coeffs
    else:
        sparse, dense = rhs.coeffs, lhs.coeffs
    idx = np.flatnonzero(sparse)
    # |out[m]| <= sum_i |v_i| * max|dense|, a safe (if conservative) cap.
    budget = sum(abs(int(sparse[i])) for i in idx) * _max_abs(dense)
    if budget > INT64_MAX:
        raise OverflowGuardError("product could exceed int64")
    out = np.zeros(bound + 1, dtype=np.int64)
    scaled = None
    prev = None
    for i in idx.tolist():
        v = int(sparse[i])
        if v != prev:
            scaled = dense * v if v != 1 else dense
            prev = v
        out[i:] += scaled[: bound + 1 - i]
    return PowerSeries(bound, out)


def build_F(recipe: ThetaRecipe, bound: int) -> PowerSeries:
    """Evaluate a recipe: signed sum of binary thetas times the unary theta.

    For the catalogued recipes the binary difference kills the constant
    term (the two forms lie in one genus), leaving a cusp form.
    """
    acc = None
    for sign, form in recipe.terms:
        theta = theta_binary(form, bound)
        if acc is None:
            acc = theta if sign == 1 else PowerSeries(bound, -theta.coeffs)
        else:
            acc = series_add(acc, theta) if sign == 1 else series_sub(acc, theta)
    return series_mul(acc, theta_unary(recipe.unary_t, bound))
