"""Request/response models for the reconstruction service.

Residues, moduli and bounds travel as decimal strings so that values
beyond 64 bits survive every JSON implementation; plain JSON integers
are accepted too.
"""

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

IntLike = Union[int, str]


def _parse_int(value: IntLike, what: str) -> int:
    if isinstance(value, int):
        return value
    text = value.strip()
    sign = text[1:] if text[:1] in "+-" else text
    if not sign.isdigit():
        raise ValueError(f"{what} must be a decimal integer, got {value!r}")
    return int(text)


class PairModel(BaseModel):
    """One residue-modulus pair; x may be any integer representative."""

    x: IntLike
    m: IntLike

    @field_validator("x", "m")
    @classmethod
    def _decimal(cls, v, info):
        _parse_int(v, info.field_name)
        return v

    def as_ints(self) -> tuple[int, int]:
        return _parse_int(self.x, "x"), _parse_int(self.m, "m")


class FtrrRequest(BaseModel):
    pairs: list[PairModel]
    num_bound: IntLike
    den_bound: IntLike
    max_bad: int = Field(default=0, ge=0)


class VoteRequest(FtrrRequest):
    pass


class HrrRequest(BaseModel):
    pairs: list[PairModel]
    a_crit: int = Field(default=10**6, ge=2)
    ratio_threshold: Optional[int] = Field(default=None, ge=2)


class EtlRequest(BaseModel):
    pairs: list[PairModel]
    refinement_a: bool = True
    b_divisor: int = Field(default=100, ge=1)


class ReconstructResponse(BaseModel):
    """status "value" and "zero" carry the reconstructed rational as
    "p/q" (or "p" for integers) plus the 1-based input-order positions
    of the pairs judged faulty; "failure" carries a reason; "ambiguous"
    (voting only) lists all qualifying candidates."""

    status: Literal["value", "zero", "failure", "ambiguous"]
    value: Optional[str] = None
    bad_moduli: Optional[list[int]] = None
    m_bad: Optional[str] = None
    reason: Optional[str] = None
    candidates: Optional[list[str]] = None


class BenchRequest(BaseModel):
    num_bits: int = Field(ge=0)
    den_bits: int = Field(ge=0)
    bad_prob: float = Field(default=0.0, ge=0.0, lt=1.0)
    algorithms: list[str] = Field(default_factory=lambda: ["hrr"])
    trials: int = Field(default=25, ge=1)
    seed: int = 0
    start_prime: int = Field(default=1013, ge=2)
    etl_divisor: int = Field(default=100, ge=1)
    etl_refinement_a: bool = False


class BenchTrialRow(BaseModel):
    algorithm: str
    num_bits: int
    den_bits: int
    bad_prob: float
    trial: int
    pairs_needed: int
    false_positives: int
    seconds: float


class BenchSummary(BaseModel):
    algorithm: str
    pairs_mean: float
    pairs_min: int
    pairs_max: int
    false_positives: int
    wall_time: float


class BenchResponse(BaseModel):
    rows: list[BenchTrialRow]
    summaries: list[BenchSummary]
    table: str
    csv: str
