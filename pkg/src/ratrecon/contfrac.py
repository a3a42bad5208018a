"""Continued fractions: expansion, approximants, and single-pair
rational recovery.

The expansion of num/den uses plain floor-division Euclid, so the
leading term may be any integer while every later partial quotient is
positive.  Approximants follow the standard second-order recurrence and
their consecutive numerator/denominator pairs are automatically coprime
(consecutive cross-determinants alternate between +1 and -1).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Optional

from .core import RatreconError


class ZeroDenominator(RatreconError):
    """Continued fraction of n/d requested with d < 1."""


class NoPositiveQuotients(RatreconError):
    """The expansion has no terms beyond the integer part."""


class PreconditionViolated(RatreconError):
    """The modulus is too small for the requested bounds, so uniqueness
    of the reconstructed rational is not guaranteed."""


@dataclass(frozen=True)
class CFExpansion:
    """Partial quotients a_0..a_n of a rational, with the approximant
    r_k/s_k of each truncation [a_0; a_1, ..., a_k].  The final
    approximant equals the expanded rational exactly."""

    partial_quotients: tuple[int, ...]
    approximants: tuple[Fraction, ...]

    @property
    def value(self) -> Fraction:
        return self.approximants[-1]


@dataclass(frozen=True)
class SinglePairSolution:
    """Result of recovering p/q from one combined pair x mod m:
    value = x - m * last_small_approximant, where the approximant (of
    x/m) is the last one under the denominator cap."""

    value: Fraction
    approximant_index: int
    last_small_approximant: Fraction


def quotients_of(num: int, den: int) -> list[int]:
    """Partial quotients of num/den by floor-division Euclid.

    Allocation-light path used by the reconstruction loops; use
    :func:`expand` when the approximants are wanted too.
    """
    if den < 1:
        raise ZeroDenominator(f"denominator must be >= 1, got {den}")
    qs = []
    n, d = num, den
    while d:
        a = n // d
        qs.append(a)
        n, d = d, n - a * d
    return qs


def expand(num: int, den: int) -> CFExpansion:
    """Full continued fraction expansion of num/den with approximants."""
    qs = quotients_of(num, den)
    approx = []
    h0, h1 = 0, 1  # numerators r_{-2}, r_{-1}
    k0, k1 = 1, 0  # denominators s_{-2}, s_{-1}
    for a in qs:
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        approx.append(Fraction(h1, k1))
    return CFExpansion(tuple(qs), tuple(approx))


def remainder_walk(m: int, x: int) -> Iterator[tuple[int, tuple, tuple]]:
    """Extended-Euclid walk on (m, x) shared by the reconstruction loops.

    State rows are triples (coefficient of m, coefficient of x, value),
    starting from u = (1, 0, m), v = (0, 1, x).  Each step computes
    q = floor(u3 / v3), replaces (u, v) by (v, u - q*v) and yields
    (q, u, v).  The linear relation value = c_m * m + c_x * x holds for
    both rows throughout, and -u1/u2 runs through the continued fraction
    approximants of x/m.  The walk ends after yielding the first row
    with value 0.
    """
    u, v = (1, 0, m), (0, 1, x)
    while v[2] != 0:
        q = u[2] // v[2]
        u, v = v, (u[0] - q * v[0], u[1] - q * v[1], u[2] - q * v[2])
        yield q, u, v


def last_approximant_below(cf: CFExpansion, den_cap: int) -> tuple[Fraction, int]:
    """The approximant of greatest index with denominator <= den_cap,
    with its index.  The 0th approximant (denominator 1) always
    qualifies, so the scan cannot come back empty for den_cap >= 1."""
    if den_cap < 1:
        raise ValueError(f"den_cap must be >= 1, got {den_cap}")
    chosen = 0
    for i, a in enumerate(cf.approximants):
        if a.denominator <= den_cap:
            chosen = i
        else:
            break
    return cf.approximants[chosen], chosen


def reconstruct_single(
    x: int,
    m: int,
    num_bound: int,
    den_bound: int,
    bad_cap: int,
) -> Optional[SinglePairSolution]:
    """Recover the unique rational p/q with |p| <= num_bound and
    q <= den_bound hidden in the single pair x mod m, tolerating an
    unreliable factor of m up to bad_cap.

    Requires 2 * num_bound * den_bound * bad_cap**2 < m, which makes the
    answer unique when it exists; raises PreconditionViolated otherwise.
    Returns None when no rational within the bounds fits.
    """
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    if num_bound < 1 or den_bound < 1 or bad_cap < 1:
        raise ValueError("num_bound, den_bound and bad_cap must be >= 1")
    if 2 * num_bound * den_bound * bad_cap * bad_cap >= m:
        raise PreconditionViolated(
            "modulus too small: need 2 * num_bound * den_bound * bad_cap^2 "
            f"< {m}"
        )
    x %= m
    cf = expand(x, m)
    approx, idx = last_approximant_below(cf, den_bound * bad_cap)
    candidate = x - m * approx
    if abs(candidate.numerator) <= num_bound and candidate.denominator <= den_bound:
        return SinglePairSolution(candidate, idx, approx)
    return None


def largest_partial_quotient(cf: CFExpansion) -> tuple[int, int]:
    """Largest partial quotient over indices >= 1 and its index; ties
    go to the smallest index."""
    value, index = _scan_positive(list(cf.partial_quotients[1:]))[0]
    return value, index + 1


def a_max_scan(cf: CFExpansion) -> tuple[int, int]:
    """Largest and second-largest partial quotients over indices >= 1.

    With a single positive-index quotient the runner-up is reported as 1,
    which keeps the ratio test meaningful only when the leader is
    genuinely large.
    """
    ranked = _scan_positive(list(cf.partial_quotients[1:]))
    a_max = ranked[0][0]
    a_next = ranked[1][0] if len(ranked) > 1 else 1
    return a_max, a_next


def _scan_positive(qs: list[int]) -> list[tuple[int, int]]:
    """(value, position) pairs sorted by descending value then position."""
    if not qs:
        raise NoPositiveQuotients("expansion has only its integer part")
    return sorted(((a, i) for i, a in enumerate(qs)), key=lambda t: (-t[0], t[1]))


def max_certifiable_den_bound(p: int, q: int, x: int, m: int) -> int:
    """Test-support quantity: the largest denominator bound that the
    single-pair uniqueness argument certifies for the true value p/q
    hidden in x mod m.

    With g = gcd(p - q*x, m) the reliable part of the modulus, this is
    the greatest integer strictly below g / (2|p| * (m/g)).  The partial
    quotient following the solution approximant is at least this value
    divided by q, minus one.
    """
    if p == 0:
        raise ValueError("defined only for nonzero numerators")
    good = gcd(p - q * x, m)
    bad = m // good
    return (good - 1) // (2 * abs(p) * bad)
