"""Independent slow path: weight-two coefficients by point counting,
twisted L(1) by exponentially weighted series, real periods by AGM, and
Selmer orders assembled from the rank-zero BSD formula.

Shares no coefficient machinery with qseries; agreement between the two
paths (the transfer-identity suites) is the strongest end-to-end check
in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    ConvergenceError,
    InvalidClassError,
    NormalizationError,
    NumericError,
)
from .sieve import primes_upto
from .waldspurger import _check_square, tamagawa_product


@dataclass(frozen=True)
class WeightTwoCoefficients:
    bound: int
    b: np.ndarray  # b[m] = m-th coefficient of the weight-2 newform

    def __post_init__(self):
        if int(self.b[1]) != 1:
            raise ValueError("b[1] must be 1")
        self.b.setflags(write=False)


@dataclass(frozen=True)
class TwistLData:
    disc: int
    conductor_twist: int
    l1: float
    terms: int
    tail: float  # bound on the truncation error
    zero_threshold: float
    zero_consistent: bool  # |l1| below threshold: no nonvanishing claim


def count_ap(spec, p):
    """p-th coefficient: p + 1 - #E(F_p); handles good and bad primes.

    Odd good p: character sum over the 2-division cubic.  p = 2 and the
    bad primes (all <= 17 here) are brute-force point counts; at bad p
    the nonsingular count gives the multiplicative/additive coefficient
    in {-1, 0, 1}.
    """
    p = int(p)
    if spec.conductor % p == 0:
        return _ap_bad(spec, p)
    if p == 2:
        return _ap_brute(spec, 2)
    b2, b4, b6 = spec.b_invariants()
    x = np.arange(p, dtype=np.int64)
    g = (((4 * x + b2) % p * x + 2 * b4) % p * x + b6) % p
    qr = np.zeros(p, dtype=np.int8)
    qr[(x * x) % p] = 1
    chi = np.where(g == 0, 0, 2 * qr[g].astype(np.int64) - 1)
    return -int(chi.sum())


def _ap_brute(spec, p):
    a1, a2, a3, a4, a6 = spec.weierstrass
    cnt = 0
    for x in range(p):
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y
                    - (x ** 3 + a2 * x * x + a4 * x + a6)) % p == 0:
                cnt += 1
    return p - cnt


def _ap_bad(spec, p):
    """a_p at bad p from the nonsingular affine count."""
    a1, a2, a3, a4, a6 = spec.weierstrass
    cnt = 0
    for x in range(p):
        for y in range(p):
            f = (y * y + a1 * x * y + a3 * y
                 - (x ** 3 + a2 * x * x + a4 * x + a6)) % p
            if f:
                continue
            fx = (a1 * y - (3 * x * x + 2 * a2 * x + a4)) % p
            fy = (2 * y + a1 * x + a3) % p
            if fx == 0 and fy == 0:
                continue
            cnt += 1
    return p - (cnt + 1)


def expand_b(spec, bound):
    """b[m] for m <= bound via the Euler-product recurrences.

    Good p: b_{p^(k+1)} = b_p b_{p^k} - p b_{p^(k-1)}; bad p: b_{p^k} =
    b_p^k; values combined multiplicatively with one strided pass per
    prime power (indices with p^k exactly dividing m).
    """
    N = spec.conductor
    b = np.ones(bound + 1, dtype=np.int64)
    if bound >= 1:
        b[0] = 0
    for p in primes_upto(bound).tolist():
        ap = count_ap(spec, p)
        good = N % p != 0
        bp = [1, ap]
        while p ** len(bp) <= bound:
            bp.append(ap * bp[-1] - (p * bp[-2] if good else 0))
        pk = p
        k = 1
        while pk <= bound:
            idx = np.arange(pk, bound + 1, pk, dtype=np.int64)
            if pk * p <= bound:
                idx = idx[(idx // pk) % p != 0]
            b[idx] *= bp[k]
            pk *= p
            k += 1
    return WeightTwoCoefficients(bound, b)


@lru_cache(maxsize=32)
def kronecker_table(disc):
    """kronecker(disc, m) for m in [0, |disc|), built prime by prime."""
    q = abs(disc)
    tab = np.ones(q, dtype=np.int64)
    if q == 1:
        # (1/m) = 1 for every m, including m = 0
        tab.setflags(write=False)
        return tab
    tab[0] = 0
    for p in primes_upto(q - 1).tolist() if q > 2 else []:
        if disc % p == 0:
            chip = 0
        elif p == 2:
            chip = 1 if disc % 8 in (1, 7) else -1
        else:
            chip = 1 if pow(disc % p, (p - 1) // 2, p) == 1 else -1
        pk = p
        k = 1
        while pk < q:
            idx = np.arange(pk, q, pk, dtype=np.int64)
            if pk * p < q:
                idx = idx[(idx // pk) % p != 0]
            tab[idx] *= chip ** k
            pk *= p
            k += 1
    out = tab.copy()
    out.setflags(write=False)
    return out


def kronecker_values(disc, bound):
    """kronecker(disc, m) for m = 0..bound (periodic mod |disc|)."""
    tab = kronecker_table(disc)
    reps = bound // abs(disc) + 1
    return np.tile(tab, reps)[: bound + 1]


def kronecker(disc, m):
    return int(kronecker_table(disc)[m % abs(disc)])


def twist_disc(n):
    """Fundamental discriminant of Q(sqrt(-n)), n odd squarefree."""
    return -n if n % 4 == 3 else -4 * n


def _odd_part(n):
    while n % 2 == 0:
        n //= 2
    return n


def conductor_twist(spec, n):
    """Conductor of the twist by -n: odd part is odd(N) * n^2 exactly;
    the 2-part is 2^4 when the twisting discriminant is even (-4n) and
    the curve's own 2-exponent when it is odd (-n).  Pinned numerically
    by the cutoff-independence of the split evaluation (test suite)."""
    v2 = 4 if n % 4 == 1 else (spec.conductor // _odd_part(spec.conductor)
                               ).bit_length() - 1
    return (_odd_part(spec.conductor) * n * n) << v2


def _is_squarefree(n):
    if n % 4 == 0:
        return False
    p = 3
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 2
    return True


def _tail_bound(terms, sqrt_n):
    # |b_m| <= d(m) sqrt(m) and d(m) <= 3 m^0.34 over the ranges used, so
    # the dropped tail is under 6 T^0.34 / T * x^(T+1) / (1-x), x = e^(-2pi/sqrt(N))
    x = math.exp(-2 * math.pi / sqrt_n)
    return 6 * terms ** 0.34 / terms * x ** (terms + 1) / (1 - x)


def terms_needed(spec, n, precision=1e-9):
    sqn = math.sqrt(conductor_twist(spec, n))
    t = int(sqn * (-math.log(precision) + 10) / (2 * math.pi)) + 64
    while _tail_bound(t, sqn) >= precision:
        t = int(t * 1.25) + 64
    return t


def twisted_l1(spec, n, terms=None, precision=1e-9, coeffs=None):
    """L(1) of the twist by -n, by the exponentially weighted series

        L(1) = 2 sum_m (chi_D(m) b_m / m) exp(-2 pi m / sqrt(N_twist))

    (even functional equation on the retained classes).  Refuses n from
    deleted classes, where the sign is -1 and the sum above is wrong.
    A value below zero_threshold is flagged zero_consistent; the oracle
    never asserts vanishing on its own.
    """
    if n < 1 or n % 2 == 0 or math.gcd(n, spec.conductor) != 1:
        raise InvalidClassError(f"twist factor {n} not odd/coprime")
    if not _is_squarefree(n):
        raise InvalidClassError(f"twist factor {n} not squarefree")
    if n % spec.table_modulus not in spec.class_reps:
        raise InvalidClassError(
            f"{n} mod {spec.table_modulus} is a deleted class for {spec.label}"
        )
    ntw = conductor_twist(spec, n)
    sqn = math.sqrt(ntw)
    if terms is None:
        terms = terms_needed(spec, n, precision)
    tail = _tail_bound(terms, sqn)
    if tail >= precision:
        raise ConvergenceError(
            f"{terms} terms give tail {tail:.2e} >= {precision:.2e} "
            f"(conductor {ntw})"
        )
    if coeffs is None:
        coeffs = expand_b(spec, terms)
    if coeffs.bound < terms:
        raise ConvergenceError(
            f"need coefficients to {terms}, have {coeffs.bound}"
        )
    disc = twist_disc(n)
    chi = kronecker_values(disc, terms)
    m = np.arange(terms + 1, dtype=np.float64)
    m[0] = 1.0
    c = (chi * coeffs.b[: terms + 1]).astype(np.float64)
    weights = np.exp((-2 * math.pi / sqn) * m) / m
    l1 = 2.0 * float(np.dot(c, weights))
    # rounding: ~terms float64 fma with values <= max|c_m|/m
    rounding = terms * 1e-16 * float(np.abs(c[1:] / m[1:]).max(initial=1.0))
    threshold = 10.0 * (tail + rounding)
    return TwistLData(disc, ntw, l1, terms, tail, threshold, abs(l1) < threshold)


def _agm(u, v):
    for _ in range(200):
        u, v = (u + v) / 2, np.sqrt(u * v)
        if abs(u - v) < 1e-15 * abs(u):
            return (u + v) / 2
    raise NumericError("AGM did not converge")


def real_period_model(c4, c6, d):
    """Period of y^2 = x^3 - 27 c4 d^2 x - 54 c6 d^3 in the survey's
    normalization: 6 pi / AGM, which is 6 * integral_{e1}^{inf} dx/sqrt(f)
    (equals the minimal-model real period of the connected component at
    d = 1).  Seeds must be anchored at the largest REAL root; with one
    real root the complex-conjugate differences give a real AGM after a
    single step."""
    aa = -27.0 * c4 * d * d
    bb = -54.0 * c6 * d ** 3
    roots = np.roots([1.0, 0.0, aa, bb])
    scale = max(1.0, float(np.abs(roots).max()))
    reals = sorted(z.real for z in roots if abs(z.imag) <= 1e-9 * scale)
    if len(reals) == 3:
        e1 = reals[2]
        m = _agm(
            complex(math.sqrt(e1 - reals[0])), complex(math.sqrt(e1 - reals[1]))
        )
    else:
        e1 = reals[0]
        pair = [z for z in roots if abs(z.imag) > 1e-9 * scale]
        m = _agm(complex(e1 - pair[0]) ** 0.5, complex(e1 - pair[1]) ** 0.5)
    if abs(m.imag) > 1e-9 * abs(m.real):
        raise NumericError(f"AGM limit not real: {m!r}")
    return 6.0 * math.pi / m.real


def real_period(spec, n):
    """Real period of the twist by -n, 1e-9 relative or better."""
    c4, c6 = spec.c_invariants()
    return real_period_model(c4, c6, -n)


def baseline_selmer(spec, n0, coeff_series=None, coeffs=None):
    """#S of the class anchor, assembled from scratch:

        #S = L(1) * t^3 / (period * c(n) * B)

    with L from the series, the period from AGM, c(n) from component
    counts and B the catalogued parity constant.  The result must sit
    within 1e-6 relative of an integer and divide into a perfect square
    by t, or the class normalization is wrong.
    """
    from .catalog import baseline
    from .qseries import build_F
    from .sieve import build_sieve, class_members

    if n0 not in spec.class_reps:
        raise InvalidClassError(f"{spec.label} has no class {n0}")
    # locate the effective anchor independently of the frozen catalog row
    scan = 2048
    if coeff_series is None:
        coeff_series = build_F(spec.recipe, scan)
    members = class_members(
        build_sieve(coeff_series.bound), n0, spec.table_modulus,
        coeff_series.bound,
    )
    hits = members[coeff_series.coeffs[members] != 0]
    if hits.size == 0:
        raise NormalizationError(f"{spec.label} class {n0}: no nonzero member")
    n_eff = int(hits[0])
    ldata = twisted_l1(spec, n_eff, coeffs=coeffs)
    if ldata.zero_consistent:
        raise NormalizationError(
            f"{spec.label} class {n0}: anchor L-value consistent with 0"
        )
    period = real_period(spec, n_eff)
    c = tamagawa_product(spec, n_eff)
    t = spec.family_torsion
    raw = ldata.l1 * t ** 3 / (period * c * spec.bsd_local[n_eff % 4])
    selmer = round(raw)
    if selmer < 1 or abs(raw - selmer) > 1e-6 * selmer:
        raise NormalizationError(
            f"{spec.label} class {n0}: BSD value {raw!r} not near an integer"
        )
    if selmer % t:
        raise NormalizationError(
            f"{spec.label} class {n0}: selmer {selmer} not divisible by {t}"
        )
    _check_square(selmer // t, n_eff, spec.label)
    return selmer


def transfer_defect(spec, n, n0, a_n, a_n0, coeffs=None, precision=1e-7):
    """Relative defect of a_n0^2 sqrt(n) L(-n) = a_n^2 sqrt(n0) L(-n0),
    both L-values from the series (no shared path with the theta engine)."""
    ln = twisted_l1(spec, n, precision=precision, coeffs=coeffs).l1
    ln0 = twisted_l1(spec, n0, precision=precision, coeffs=coeffs).l1
    lhs = a_n0 * a_n0 * math.sqrt(n) * ln
    rhs = a_n * a_n * math.sqrt(n0) * ln0
    return abs(lhs - rhs) / abs(lhs)
