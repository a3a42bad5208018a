"""Lattice-based rational reconstruction (ETL), for comparison with HRR.

The pairs define the planar lattice {(a, b): a = b * X (mod M)} with X
the combined residue and M the combined modulus.  A short vector (a, b)
yields the candidate a/b.  Acceptance demands divisor * ||v1||^2 < M:
a tightening divisor (100 by default) suppresses most false positives
at the cost of a pair or two.  A cross term built from the successor
basis vector was tried and dropped: once a short solution vector exists
the second reduced vector is forced above sqrt(M) in norm, so any test
on its components rejects every successful instance, including the
calibration instance {11,13,15,17,19} / {-4,-4,-4,1,1} whose accepted
answer must be 1.  The optional half-bad check additionally rejects
candidates inconsistent with half or more of the pairs.

This algorithm favours balanced rationals and trusts large moduli over
small ones; prefer hrr for general use.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import Instance, RatreconError, count_bad


class DependentInput(RatreconError):
    """The two basis vectors are linearly dependent."""


REASON_NORM_TOO_LARGE = "norm-too-large"
REASON_HALF_OR_MORE_BAD = "half-or-more-bad"


@dataclass(frozen=True)
class LatticeVec:
    a: int
    b: int

    @property
    def norm_sq(self) -> int:
        return self.a * self.a + self.b * self.b


@dataclass(frozen=True)
class EtlConfig:
    """refinement_a rejects candidates with half or more of the pairs
    bad; refinement_b_divisor tightens the norm acceptance (1 restores
    the plain ||v1||^2 < M test)."""

    refinement_a: bool = True
    refinement_b_divisor: int = 100

    def __post_init__(self):
        if self.refinement_b_divisor < 1:
            raise ValueError("refinement_b_divisor must be >= 1")


@dataclass(frozen=True)
class EtlResult:
    kind: str
    value: Optional[Fraction] = None
    bad_indices: tuple[int, ...] = ()
    reason: str = ""

    @property
    def is_value(self) -> bool:
        return self.kind == "value"


def lagrange_reduce(u: LatticeVec, v: LatticeVec) -> tuple[LatticeVec, LatticeVec]:
    """Reduce a planar lattice basis under the Euclidean norm.

    Returns (v1, v2) with v1 a shortest nonzero lattice vector and v2
    the shortest vector completing a basis: ||v1|| <= ||v2|| and
    2 * |<v1, v2>| <= ||v1||^2 on exit.
    """
    ua, ub, va, vb = u.a, u.b, v.a, v.b
    if ua * vb - ub * va == 0:
        raise DependentInput("basis vectors are linearly dependent")
    if ua * ua + ub * ub < va * va + vb * vb:
        ua, ub, va, vb = va, vb, ua, ub
    while True:
        # project the longer vector onto the shorter, rounding to nearest
        d = ua * va + ub * vb
        n = va * va + vb * vb
        q = (2 * d + n) // (2 * n)
        ua, ub = ua - q * va, ub - q * vb
        if ua * ua + ub * ub >= n:
            return LatticeVec(va, vb), LatticeVec(ua, ub)
        ua, ub, va, vb = va, vb, ua, ub


def etl(inst: Instance, cfg: Optional[EtlConfig] = None) -> EtlResult:
    """Reconstruct a rational via reduction of the instance lattice.

    The basis ((M, 0), (X, 1)) is reduced; the shortest vector (a, b),
    sign-fixed to b > 0, proposes the candidate a/b.  Acceptance:
    divisor * (a^2 + b^2) < M, plus the optional half-bad rejection.
    A zero combined residue short-circuits to the candidate 0/1.
    """
    cfg = cfg or EtlConfig()
    m, x = inst.combined_modulus, inst.combined_residue
    if x == 0:
        return EtlResult("value", Fraction(0), ())

    v1, _ = lagrange_reduce(LatticeVec(m, 0), LatticeVec(x, 1))
    a, b = v1.a, v1.b
    if b == 0:  # shortest vector on the (M, 0) axis: unreachable for m >= 2
        return EtlResult("failure", reason="degenerate-lattice")
    if b < 0:
        a, b = -a, -b
    if cfg.refinement_b_divisor * (a * a + b * b) >= m:
        return EtlResult("failure", reason=REASON_NORM_TOO_LARGE)

    candidate = Fraction(a, b)
    bad = count_bad(candidate, inst)
    if cfg.refinement_a and 2 * len(bad) >= inst.size:
        return EtlResult("failure", reason=REASON_HALF_OR_MORE_BAD)
    return EtlResult("value", candidate, tuple(bad))
