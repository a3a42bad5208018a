"""Fault-tolerant rational reconstruction with explicit bounds (FTRR).

Given bounds on numerator, denominator and the number of faulty pairs,
the algorithm either returns the unique rational consistent with all
but at most that many pairs, or reports that no such rational exists.
The guarantee holds whenever the combined modulus exceeds
2 * num_bound * den_bound * (product of the max_bad largest moduli)^2;
the precondition is enforced rather than silently ignored, because the
uniqueness claim is void without it.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Optional

from .core import Bounds, Instance, RatreconError, count_bad
from .contfrac import PreconditionViolated, remainder_walk


class TooManyBadAllowed(RatreconError):
    """max_bad must be smaller than the number of pairs."""


REASON_GCD_TOO_LARGE = "gcd-too-large"
REASON_INVALID_CANDIDATE = "invalid-candidate"


@dataclass(frozen=True)
class FtrrWitness:
    """Loop certificate: bad_modulus_cap is the product of the max_bad
    largest moduli; final_denominator is |u2| at loop exit, i.e. the
    denominator of the last approximant under the den_bound * cap guard.
    Moduli sharing a factor with final_denominator are exactly the bad
    ones (see identify_bad_moduli)."""

    bad_modulus_cap: int
    final_denominator: int


@dataclass(frozen=True)
class FtrrResult:
    """Outcome of a reconstruction: kind is "value", "zero" or
    "failure".  On "value", bad_indices lists the pairs inconsistent
    with the result (at most max_bad of them) in instance order."""

    kind: str
    value: Optional[Fraction] = None
    bad_indices: tuple[int, ...] = ()
    reason: str = ""
    witness: Optional[FtrrWitness] = None

    @property
    def is_value(self) -> bool:
        return self.kind == "value"


def product_of_largest_moduli(inst: Instance, count: int) -> int:
    """Product of the count largest moduli (1 for count == 0): the worst
    case that faulty pairs can contribute to the combined modulus."""
    if count < 0:
        raise ValueError("count must be >= 0")
    if count >= inst.size:
        raise TooManyBadAllowed(
            f"allowing {count} bad pairs out of {inst.size} leaves nothing "
            "to reconstruct from"
        )
    if count == 0:
        return 1
    return prod(p.modulus for p in inst.pairs[-count:])


def ftrr_precondition(inst: Instance, bounds: Bounds) -> bool:
    """Whether the instance carries enough information for the bounds:
    combined modulus > 2 * num_bound * den_bound * cap^2.  Callers use
    a False result to decide that more pairs are needed."""
    cap = product_of_largest_moduli(inst, bounds.max_bad)
    return inst.combined_modulus > 2 * bounds.num_bound * bounds.den_bound * cap * cap


def ftrr(inst: Instance, bounds: Bounds) -> FtrrResult:
    """Reconstruct a rational from pairs of which at most bounds.max_bad
    are faulty.

    If any rational within the bounds is consistent with all but at most
    max_bad pairs, it is unique and is returned together with the exact
    set of inconsistent pair indices.  Otherwise the result is a
    "failure" carrying the reason.  An all-zero answer is recognized
    directly from the residues before any arithmetic.

    Raises PreconditionViolated when the combined modulus is too small
    for the bounds (add pairs and retry), and TooManyBadAllowed when
    max_bad >= number of pairs.
    """
    cap = product_of_largest_moduli(inst, bounds.max_bad)
    p_bound, q_bound, max_bad = bounds.num_bound, bounds.den_bound, bounds.max_bad
    m, x = inst.combined_modulus, inst.combined_residue
    if m <= 2 * p_bound * q_bound * cap * cap:
        raise PreconditionViolated(
            "combined modulus too small for these bounds: need more pairs"
        )

    zeros = sum(1 for p in inst.pairs if p.residue == 0)
    if zeros >= inst.size - max_bad:
        zero = Fraction(0)
        return FtrrResult("zero", zero, tuple(count_bad(zero, inst)))

    if gcd(x, m) > p_bound * cap:
        return FtrrResult("failure", reason=REASON_GCD_TOO_LARGE)

    guard = q_bound * cap
    for _, u, v in remainder_walk(m, x):
        if abs(v[1]) > guard:
            break
    else:  # cannot happen once the gcd check passed; kept as a tripwire
        raise RatreconError("remainder walk exhausted before the guard")

    candidate = Fraction(x * u[1] + m * u[0], u[1])
    witness = FtrrWitness(cap, abs(u[1]))
    bad = count_bad(candidate, inst)
    if (
        abs(candidate.numerator) <= p_bound
        and candidate.denominator <= q_bound
        and len(bad) <= max_bad
    ):
        return FtrrResult("value", candidate, tuple(bad), witness=witness)
    return FtrrResult("failure", reason=REASON_INVALID_CANDIDATE, witness=witness)


def identify_bad_moduli(inst: Instance, final_denominator: int) -> list[int]:
    """Indices of the faulty pairs, read off a successful run's witness:
    exactly the moduli sharing a factor with the final denominator."""
    return [
        i
        for i, p in enumerate(inst.pairs)
        if gcd(p.modulus, final_denominator) > 1
    ]
