"""Transfer of Selmer orders and L-values across a twist class.

Within one congruence class the Selmer order moves by the exact rational

    #S(E_{-n}) = #S(E_{-n0}) * (a_n^2 / a_n0^2) * (c(n0) / c(n)),

where c(n) = prod_{p | n} c_p and c_p is the Tamagawa number of the
twisted curve at p.  At every odd good p | n the twist acquires Kodaira
type I0*, whose Tamagawa number is the number of Frobenius-fixed
components: 1 + #roots of the 2-division cubic 4x^3+b2x^2+2b4x+b6 mod p
(1, 2 or 4).  The coarser shift 4^(omega(n0)-omega(n)) in d_ratio is the
split-case simplification; the pipeline uses the exact counts.  L-values
move by (a_n^2/a_n0^2) * sqrt(n0/n).

Class members are odd, squarefree and coprime to the conductor, so the
primes hitting c(n) never divide 2N or the cubic's quadratic cofactor
discriminant; the count is well defined everywhere it is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CasselsViolationError, IntegralityError
from .qseries import theta_binary
from .sieve import class_members, primes_upto

POSITIVE_RANK = "positive_rank"
RANK_ZERO = "rank_zero"


@dataclass(frozen=True)
class TwistResult:
    n: int
    a_n: int
    status: str
    selmer: int | None  # present iff rank_zero
    k: int  # 0 iff positive_rank, else selmer / t
    l_value: float | None


def d_ratio(omega_n, omega_n0):
    """Simplified Tamagawa shift 4^(omega_n0 - omega_n), exact rational."""
    return Fraction(4) ** (omega_n0 - omega_n)


def two_division_cubic(spec):
    b2, b4, b6 = spec.b_invariants()
    return 4, b2, 2 * b4, b6


def count_cubic_roots(spec, p):
    """#roots of the 2-division cubic mod p (odd p)."""
    c3, c2, c1, c0 = two_division_cubic(spec)
    x = np.arange(p, dtype=np.int64)
    g = (((c3 * x + c2) % p * x + c1) % p * x + c0) % p
    return int((g == 0).sum())


def tamagawa_cp(spec, p):
    return 1 + count_cubic_roots(spec, p)


def tamagawa_product(spec, n):
    """prod c_p over p | n, by trial division (scalar path)."""
    c = 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            c *= tamagawa_cp(spec, p)
            while m % p == 0:
                m //= p
        p += 1 + (p > 2)
    if m > 1:
        c *= tamagawa_cp(spec, m)
    return c


def _quadratic_cofactor_disc(spec):
    """Discriminant of the cubic's quadratic cofactor (curves with 2-torsion)."""
    from .catalog import rational_cubic_roots

    c3, c2, c1, c0 = two_division_cubic(spec)
    root = rational_cubic_roots(c2, c1 // 2, c0)[0]
    # divide 4x^3+c2x^2+c1x+c0 by (x - root); coefficients stay rational
    q2 = Fraction(4)
    q1 = c2 + q2 * root
    q0 = c1 + q1 * root
    disc = q1 * q1 - 4 * q2 * q0
    assert disc.denominator == 1
    return int(disc)


def _euler_chi(d, ps):
    """kronecker(d, p) for an array of odd primes not dividing d."""
    p = ps.astype(np.int64)
    base = np.remainder(d, p)
    exp = (p - 1) // 2
    result = np.ones_like(p)
    while exp.max() > 0:
        odd = (exp & 1) == 1
        result[odd] = result[odd] * base[odd] % p[odd]
        base = base * base % p
        exp >>= 1
    return np.where(result == 1, 1, -1).astype(np.int64)


@dataclass(frozen=True)
class TamagawaTables:
    curve: str
    bound: int
    cprod: np.ndarray  # int32, prod of c_p over p | n (squarefree queries)

    def __post_init__(self):
        self.cprod.setflags(write=False)


def build_tamagawa(spec, bound):
    """Vectorized c(n) for all n <= bound.

    Per-prime counts come from the recipe's own binary theta series when
    the cubic is irreducible (11a1: principal form represents p <=> the
    cubic splits, the other form <=> no roots, inert <=> one root), and
    from one vectorized Euler criterion on the quadratic cofactor
    discriminant when there is a rational 2-torsion point.
    """
    ps = primes_upto(bound)
    cp = np.ones(ps.size, dtype=np.int64)
    odd = ps > 2
    good = odd & (spec.conductor % ps != 0)
    if spec.family_torsion == 1:
        r1 = theta_binary(spec.recipe.terms[0][1], bound).coeffs[ps]
        r2 = theta_binary(spec.recipe.terms[1][1], bound).coeffs[ps]
        cp[good] = np.where(r1[good] > 0, 4, np.where(r2[good] > 0, 1, 2))
    else:
        disc2 = _quadratic_cofactor_disc(spec)
        use = good & (disc2 % ps != 0)
        cp[use] = 3 + _euler_chi(disc2, ps[use])
    cprod = np.ones(bound + 1, dtype=np.int32)
    for p, c in zip(ps.tolist(), cp.tolist()):
        if c != 1:
            cprod[p::p] *= c
    return TamagawaTables(spec.label, bound, cprod)


def _check_square(k, n, curve_label):
    r = math.isqrt(k)
    if r * r != k:
        raise CasselsViolationError(
            f"{curve_label}: k = {k} at n = {n} is not a perfect square"
        )


def evaluate_twist(n, a_n, baseline, family_torsion, tables=None):
    """Selmer order and propagated L-value of the twist by -n.

    Exact integer arithmetic throughout; a non-integral order means the
    class normalization is wrong and raises IntegralityError.  tables, if
    given, supplies c(n) in O(1); otherwise it is recomputed by trial
    division.
    """
    a_n = int(a_n)
    if a_n == 0:
        return TwistResult(n, 0, POSITIVE_RANK, None, 0, None)
    if tables is not None:
        c_n = int(tables.cprod[n])
    else:
        from .catalog import curve

        c_n = tamagawa_product(curve(baseline.curve), n)
    num = baseline.selmer_n0 * baseline.c_n0 * a_n * a_n
    den = baseline.a_n0 * baseline.a_n0 * c_n
    if num % den:
        raise IntegralityError(
            f"{baseline.curve} class {baseline.n0}: selmer "
            f"{num}/{den} not integral at n = {n}"
        )
    selmer = num // den
    if selmer % family_torsion:
        raise IntegralityError(
            f"{baseline.curve} class {baseline.n0}: selmer {selmer} not "
            f"divisible by t = {family_torsion} at n = {n}"
        )
    k = selmer // family_torsion
    _check_square(k, n, baseline.curve)
    return TwistResult(n, a_n, RANK_ZERO, selmer, k, propagate_l(n, a_n, baseline))


def propagate_l(n, a_n, baseline):
    """L(1) of the twist by -n from the class anchor (exact transfer law)."""
    if a_n == 0:
        raise ValueError("transfer needs a_n != 0")
    ratio = (a_n * a_n) / (baseline.a_n0 * baseline.a_n0)
    return baseline.l_n0 * ratio * math.sqrt(baseline.n0_effective / n)


@dataclass(frozen=True)
class ClassSurvey:
    """Vectorized twist results for every class member up to a bound."""

    curve: str
    n0: int
    bound: int
    members: np.ndarray  # ascending squarefree class members
    a: np.ndarray
    k: np.ndarray  # 0 on the positive-rank bucket
    selmer: np.ndarray  # 0 placeholder where k = 0
    l: np.ndarray  # nan where k = 0
    cassels_checked: bool = True

    def results(self):
        for i in range(self.members.size):
            n = int(self.members[i])
            a_n = int(self.a[i])
            if a_n == 0:
                yield TwistResult(n, 0, POSITIVE_RANK, None, 0, None)
            else:
                yield TwistResult(
                    n, a_n, RANK_ZERO, int(self.selmer[i]), int(self.k[i]),
                    float(self.l[i]),
                )


def survey_class(spec, baseline, coeff_series, sieve_tables, tables, bound):
    """evaluate_twist over every squarefree class member <= bound, vectorized."""
    members = class_members(sieve_tables, baseline.n0, spec.table_modulus, bound)
    a = coeff_series.coeffs[members]
    c = tables.cprod[members].astype(np.int64)
    t = spec.family_torsion
    num = baseline.selmer_n0 * baseline.c_n0 * a * a
    den = baseline.a_n0 * baseline.a_n0 * c
    rem = num % den
    nz = a != 0
    bad = nz & (rem != 0)
    if bad.any():
        n = int(members[bad][0])
        raise IntegralityError(
            f"{spec.label} class {baseline.n0}: non-integral selmer at n = {n}"
        )
    selmer = np.where(nz, num // den, 0)
    if (nz & (selmer % t != 0)).any():
        n = int(members[nz & (selmer % t != 0)][0])
        raise IntegralityError(
            f"{spec.label} class {baseline.n0}: selmer not divisible by t "
            f"at n = {n}"
        )
    k = selmer // t
    root = np.rint(np.sqrt(k.astype(np.float64))).astype(np.int64)
    nonsq = nz & (root * root != k)
    if nonsq.any():
        n = int(members[nonsq][0])
        _check_square(int(k[members == n][0]), n, spec.label)
    af = a.astype(np.float64)
    a0sq = float(baseline.a_n0 * baseline.a_n0)
    with np.errstate(invalid="ignore"):
        l = np.where(
            nz,
            baseline.l_n0 * (af * af / a0sq)
            * np.sqrt(baseline.n0_effective / members.astype(np.float64)),
            np.nan,
        )
    return ClassSurvey(spec.label, baseline.n0, bound, members, a, k, selmer, l)
