"""Heuristic rational reconstruction (HRR): bound-free recovery keyed on
the dominant partial quotient.

The expansion of the combined residue over the combined modulus develops
one outstandingly large partial quotient exactly when enough consistent
pairs have accumulated; the approximant just before it yields the
answer.  A convincingness test on that quotient (absolute threshold by
default, ratio-to-runner-up as an alternative) keeps false positives
rare.  Failure is an ordinary outcome, not an error: callers add pairs
and retry.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from .core import Instance
from .contfrac import _scan_positive, quotients_of, remainder_walk

DEFAULT_A_CRIT = 10**6
DEFAULT_RATIO_THRESHOLD = 4096


@dataclass(frozen=True)
class HrrConfig:
    """Convincingness criterion.  With ratio_threshold unset, a result
    is accepted when the largest partial quotient reaches a_crit; when
    set, acceptance instead requires largest/second-largest >= the
    threshold."""

    a_crit: int = DEFAULT_A_CRIT
    ratio_threshold: Optional[int] = None

    def __post_init__(self):
        if self.a_crit < 2:
            raise ValueError("a_crit must be >= 2")
        if self.ratio_threshold is not None and self.ratio_threshold < 2:
            raise ValueError("ratio_threshold must be >= 2")


@dataclass(frozen=True)
class HrrResult:
    """kind is "value", "zero" or "failure".  On "value", m_bad is the
    part of the combined modulus the result is inconsistent with
    (gcd of the modulus with the final cofactor); it divides the
    combined modulus and is 1 when every pair agrees."""

    kind: str
    value: Optional[Fraction] = None
    m_bad: Optional[int] = None

    @property
    def is_value(self) -> bool:
        return self.kind == "value"


def a_max_scan(quotients) -> tuple[int, int]:
    """Largest and second-largest partial quotients over indices >= 1 of
    an expansion (accepts a CFExpansion or a raw quotient list starting
    at index 0).  With one positive-index quotient the runner-up is 1."""
    qs = list(getattr(quotients, "partial_quotients", quotients))
    ranked = _scan_positive(qs[1:])
    a_max = ranked[0][0]
    a_next = ranked[1][0] if len(ranked) > 1 else 1
    return a_max, a_next


def hrr(inst: Instance, cfg: Optional[HrrConfig] = None) -> HrrResult:
    """Reconstruct a rational from the pairs alone.

    Returns "zero" when the residues are predominantly zero (the square
    of gcd(residue, modulus) exceeds a_crit times the modulus), a
    "failure" when the convincingness criterion rejects the expansion,
    and otherwise the rational determined by the approximant preceding
    the first occurrence of the largest partial quotient.
    """
    cfg = cfg or HrrConfig()
    m, x = inst.combined_modulus, inst.combined_residue
    if x == 0:
        return HrrResult("zero", Fraction(0))
    g = gcd(x, m)
    if g * g > cfg.a_crit * m:
        return HrrResult("zero", Fraction(0))

    qs = quotients_of(x, m)
    a_max, a_next = a_max_scan(qs)
    if cfg.ratio_threshold is None:
        if a_max < cfg.a_crit:
            return HrrResult("failure")
    elif a_max < cfg.ratio_threshold * a_next:
        return HrrResult("failure")

    for q, u, _ in remainder_walk(m, x):
        if q == a_max:
            break
    value = Fraction(x * u[1] + m * u[0], u[1])
    return HrrResult("value", value, gcd(m, u[1]))
