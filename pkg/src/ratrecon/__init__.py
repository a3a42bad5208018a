"""Rational number reconstruction from residue-modulus pairs, tolerant
of faulty pairs.

The portfolio:

* :func:`ftrr` — guaranteed reconstruction given bounds on numerator,
  denominator and fault count; identifies the faulty pairs.
* :func:`hrr` — heuristic reconstruction from the pairs alone
  (recommended general-purpose entry point).
* :func:`etl` — lattice-reduction reconstruction, kept for comparison.
* :mod:`ratrecon.oracle` — brute-force voting and enumeration oracles
  for certifying the fast algorithms on small instances.
* :mod:`ratrecon.harness` — fault-injection benchmark driver.
* :mod:`ratrecon.service` / :mod:`ratrecon.cli` — HTTP API and its
  command-line client.
"""

__version__ = "0.1.0"

from .core import (
    Bounds,
    DuplicateOrNonCoprimeModuli,
    EmptyInput,
    Instance,
    NonInvertibleDenominator,
    Rational,
    RatreconError,
    ResiduePair,
    count_bad,
    make_instance,
    residues_of,
)
from .contfrac import (
    CFExpansion,
    NoPositiveQuotients,
    PreconditionViolated,
    SinglePairSolution,
    ZeroDenominator,
    expand,
    largest_partial_quotient,
    last_approximant_below,
    reconstruct_single,
)
from .ftrr import (
    FtrrResult,
    FtrrWitness,
    TooManyBadAllowed,
    ftrr,
    ftrr_precondition,
    identify_bad_moduli,
)
from .hrr import HrrConfig, HrrResult, a_max_scan, hrr
from .etl import DependentInput, EtlConfig, EtlResult, LatticeVec, etl, lagrange_reduce
from .oracle import (
    EnumerationBudgetExceeded,
    OracleResult,
    SubsetBudgetExceeded,
    VoteTally,
    exhaustive_reconstruct,
    vote_reconstruct,
)

__all__ = [
    "Bounds",
    "CFExpansion",
    "DependentInput",
    "DuplicateOrNonCoprimeModuli",
    "EmptyInput",
    "EnumerationBudgetExceeded",
    "EtlConfig",
    "EtlResult",
    "FtrrResult",
    "FtrrWitness",
    "HrrConfig",
    "HrrResult",
    "Instance",
    "LatticeVec",
    "NoPositiveQuotients",
    "NonInvertibleDenominator",
    "OracleResult",
    "PreconditionViolated",
    "Rational",
    "RatreconError",
    "ResiduePair",
    "SinglePairSolution",
    "SubsetBudgetExceeded",
    "TooManyBadAllowed",
    "VoteTally",
    "ZeroDenominator",
    "a_max_scan",
    "count_bad",
    "etl",
    "exhaustive_reconstruct",
    "expand",
    "ftrr",
    "ftrr_precondition",
    "hrr",
    "identify_bad_moduli",
    "lagrange_reduce",
    "largest_partial_quotient",
    "last_approximant_below",
    "make_instance",
    "reconstruct_single",
    "residues_of",
    "vote_reconstruct",
]
