"""Arbitrary-precision foundations: residue-modulus pairs, validated
instances with their combined residue, and modular images of rationals.

Rationals are plain :class:`fractions.Fraction` values throughout the
package; a Fraction is always normalized (positive denominator, coprime
numerator and denominator), which is exactly the canonical form every
algorithm here expects.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Union

Rational = Fraction

RationalLike = Union[Fraction, int]


class RatreconError(Exception):
    """Base class for all errors raised by this package."""


class EmptyInput(RatreconError):
    """No residue-modulus pairs were supplied."""


class DuplicateOrNonCoprimeModuli(RatreconError):
    """Two moduli share a factor greater than 1 (duplicates included)."""


class NonInvertibleDenominator(RatreconError):
    """A denominator has no inverse modulo one of the requested moduli."""

    def __init__(self, index: int, modulus: int):
        super().__init__(
            f"denominator shares a factor with modulus {modulus} (index {index})"
        )
        self.index = index
        self.modulus = modulus


@dataclass(frozen=True)
class ResiduePair:
    """One congruence x mod m.  The residue is canonicalized to [0, m)
    on construction, so negative inputs are accepted."""

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        object.__setattr__(self, "residue", self.residue % self.modulus)


@dataclass(frozen=True)
class Instance:
    """A validated collection of pairwise-coprime pairs, sorted by
    strictly increasing modulus, together with the combined congruence
    ``combined_residue mod combined_modulus`` (0 <= residue < modulus).

    Build instances through :func:`make_instance`; direct construction
    skips validation.
    """

    pairs: tuple[ResiduePair, ...]
    combined_modulus: int
    combined_residue: int

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(p.modulus for p in self.pairs)

    @property
    def residues(self) -> tuple[int, ...]:
        return tuple(p.residue for p in self.pairs)


@dataclass(frozen=True)
class Bounds:
    """Search bounds: |numerator| <= num_bound, denominator <= den_bound,
    and at most max_bad faulty pairs."""

    num_bound: int
    den_bound: int
    max_bad: int = 0

    def __post_init__(self):
        if self.num_bound < 1:
            raise ValueError("num_bound must be >= 1")
        if self.den_bound < 1:
            raise ValueError("den_bound must be >= 1")
        if self.max_bad < 0:
            raise ValueError("max_bad must be >= 0")


PairLike = Union[ResiduePair, tuple]


def _as_pairs(pairs: Iterable[PairLike]) -> list[ResiduePair]:
    out = []
    for p in pairs:
        out.append(p if isinstance(p, ResiduePair) else ResiduePair(*p))
    return out


def make_instance(pairs: Iterable[PairLike]) -> Instance:
    """Validate and combine residue-modulus pairs into an Instance.

    Pairs may be given in any order and as ResiduePair or (residue,
    modulus) tuples.  The combined residue is computed by an incremental
    pairwise fold, one modular inversion per pair.

    Raises EmptyInput on an empty list and DuplicateOrNonCoprimeModuli
    when any two moduli share a factor.
    """
    plist = _as_pairs(pairs)
    if not plist:
        raise EmptyInput("need at least one residue-modulus pair")
    plist.sort(key=lambda p: p.modulus)

    x, m = plist[0].residue, plist[0].modulus
    for i in range(1, len(plist)):
        xi, mi = plist[i].residue, plist[i].modulus
        if gcd(m % mi, mi) != 1:
            offender = next(
                p.modulus for p in plist[:i] if gcd(p.modulus, mi) > 1
            )
            raise DuplicateOrNonCoprimeModuli(
                f"moduli {offender} and {mi} share a factor "
                f"{gcd(offender, mi)}"
            )
        # lift x from mod m to mod m*mi
        t = (xi - x) * pow(m % mi, -1, mi) % mi
        x += m * t
        m *= mi
    return Instance(tuple(plist), m, x)


def residues_of(value: RationalLike, moduli: Iterable[int]) -> list[ResiduePair]:
    """Images of a rational modulo each given modulus.

    Every modulus must be coprime to the denominator; a modulus sharing a
    factor with it cannot hold an image and raises
    NonInvertibleDenominator with the offending index.
    """
    value = Fraction(value)
    num, den = value.numerator, value.denominator
    out = []
    for i, m in enumerate(moduli):
        d = den % m
        if gcd(d, m) != 1:
            raise NonInvertibleDenominator(i, m)
        out.append(ResiduePair(num % m * pow(d, -1, m) % m, m))
    return out


def count_bad(value: RationalLike, inst: Instance) -> list[int]:
    """Indices of pairs inconsistent with the given rational.

    A pair x mod m is good for p/q when q*x = p (mod m); anything else,
    including moduli sharing a factor with q, is bad.
    """
    value = Fraction(value)
    p, q = value.numerator, value.denominator
    return [
        i
        for i, pr in enumerate(inst.pairs)
        if (q * pr.residue - p) % pr.modulus != 0
    ]
