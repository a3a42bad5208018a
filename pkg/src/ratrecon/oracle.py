"""Brute-force reconstruction oracles.

Both routines are deliberately exhaustive and budget-capped: they exist
to certify the fast algorithms on small instances, not to be fast
themselves.  vote_reconstruct runs an exact (zero-fault) reconstruction
on every subset of pairs that could be the all-good set and tallies the
outcomes; exhaustive_reconstruct simply enumerates every in-bounds
rational.  A candidate qualifies when it is consistent with at least
size - max_bad pairs of the full instance.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Mapping, Optional

from .core import Bounds, Instance, RatreconError, count_bad
from .contfrac import PreconditionViolated, reconstruct_single
from .ftrr import TooManyBadAllowed

SUBSET_BUDGET = 10**6
ENUMERATION_BUDGET = 10**6


class SubsetBudgetExceeded(RatreconError):
    """Too many subsets to enumerate (C(size, max_bad) over budget)."""


class EnumerationBudgetExceeded(RatreconError):
    """num_bound * den_bound exceeds the enumeration budget."""


@dataclass(frozen=True)
class VoteTally:
    """Per-candidate support: votes is the number of subsets whose exact
    reconstruction produced the candidate, consistent_pairs the number
    of pairs of the full instance it agrees with."""

    candidates: Mapping[Fraction, tuple[int, int]] = field(default_factory=dict)


@dataclass(frozen=True)
class OracleResult:
    """kind is "value" (exactly one qualifying rational, in values),
    "ambiguous" (several, sorted ascending) or "failure" (none)."""

    kind: str
    values: tuple[Fraction, ...] = ()
    tally: Optional[VoteTally] = None

    @property
    def value(self) -> Optional[Fraction]:
        return self.values[0] if self.kind == "value" else None


def _classify(winners, tally=None) -> OracleResult:
    winners = tuple(sorted(winners))
    if not winners:
        return OracleResult("failure", (), tally)
    if len(winners) == 1:
        return OracleResult("value", winners, tally)
    return OracleResult("ambiguous", winners, tally)


def vote_reconstruct(inst: Instance, bounds: Bounds) -> OracleResult:
    """Voting reconstruction: exact recovery on every subset of
    size - max_bad pairs, then election of the candidates consistent
    with at least that many pairs of the full instance.

    Subsets whose combined modulus is too small for an exact recovery
    within the bounds abstain.  Raises SubsetBudgetExceeded when there
    are more than 10**6 subsets to try.
    """
    s, e = inst.size, bounds.max_bad
    if e >= s:
        raise TooManyBadAllowed(f"max_bad {e} leaves no quorum among {s} pairs")
    if comb(s, e) > SUBSET_BUDGET:
        raise SubsetBudgetExceeded(f"C({s}, {e}) subsets exceed the budget")

    votes: dict[Fraction, int] = {}
    for subset in combinations(inst.pairs, s - e):
        x, m = subset[0].residue, subset[0].modulus
        for p in subset[1:]:
            t = (p.residue - x) * pow(m % p.modulus, -1, p.modulus) % p.modulus
            x += m * t
            m *= p.modulus
        try:
            sol = reconstruct_single(x, m, bounds.num_bound, bounds.den_bound, 1)
        except PreconditionViolated:
            continue
        if sol is not None:
            votes[sol.value] = votes.get(sol.value, 0) + 1

    tally = VoteTally(
        {c: (n, s - len(count_bad(c, inst))) for c, n in votes.items()}
    )
    winners = [c for c, (_, ok) in tally.candidates.items() if ok >= s - e]
    return _classify(winners, tally)


def exhaustive_reconstruct(inst: Instance, bounds: Bounds) -> OracleResult:
    """Flat enumeration of every normalized rational within the bounds,
    keeping those with at most max_bad inconsistent pairs.

    Raises EnumerationBudgetExceeded when num_bound * den_bound exceeds
    10**6.
    """
    if bounds.num_bound * bounds.den_bound > ENUMERATION_BUDGET:
        raise EnumerationBudgetExceeded(
            f"{bounds.num_bound} * {bounds.den_bound} candidates exceed the budget"
        )
    e = bounds.max_bad
    pairs = inst.pairs
    winners = []
    for q in range(1, bounds.den_bound + 1):
        for p in range(-bounds.num_bound, bounds.num_bound + 1):
            if gcd(abs(p), q) != 1:
                continue
            bad = 0
            for pr in pairs:
                if (q * pr.residue - p) % pr.modulus != 0:
                    bad += 1
                    if bad > e:
                        break
            if bad <= e:
                winners.append(Fraction(p, q))
    return _classify(winners)
