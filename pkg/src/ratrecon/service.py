"""HTTP service wrapping the reconstruction library.

POST /reconstruct/{ftrr,hrr,etl,vote} take residue-modulus pairs (and
per-algorithm parameters) and return the outcome; POST /bench runs the
fault-injection harness.  Malformed input (bad integers, non-coprime
moduli, empty pair lists) yields 422; an unsuccessful reconstruction is
a normal 200 response with status "failure" and a reason, since callers
are expected to add pairs and retry.

Faulty-pair positions are reported as 1-based indices into the request
order, not into the internally sorted instance.
"""

from fractions import Fraction
from math import gcd

from fastapi import FastAPI, HTTPException

from . import __version__
from .core import Bounds, Instance, RatreconError, count_bad, make_instance
from .contfrac import PreconditionViolated
from .etl import EtlConfig, etl
from .ftrr import TooManyBadAllowed, ftrr
from .harness import ExperimentSpec, format_table, reports_to_csv, run_experiment
from .hrr import HrrConfig, hrr
from .oracle import (
    EnumerationBudgetExceeded,
    SubsetBudgetExceeded,
    vote_reconstruct,
)
from .schemas import (
    BenchRequest,
    BenchResponse,
    BenchSummary,
    BenchTrialRow,
    EtlRequest,
    FtrrRequest,
    HrrRequest,
    PairModel,
    ReconstructResponse,
    VoteRequest,
    _parse_int,
)

app = FastAPI(
    title="ratrecon",
    version=__version__,
    description="Rational number reconstruction from unreliable residue-modulus pairs",
)

# parameter combinations that cannot be processed but are not malformed:
# the caller should supply more pairs or smaller bounds and retry
_RETRYABLE = (
    PreconditionViolated,
    TooManyBadAllowed,
    SubsetBudgetExceeded,
    EnumerationBudgetExceeded,
)


def _build_instance(pairs: list[PairModel]) -> tuple[Instance, list[int]]:
    try:
        raw = [p.as_ints() for p in pairs]
        inst = make_instance(raw)
    except (RatreconError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return inst, [m for _, m in raw]


def _format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _original_positions(inst: Instance, indices, original_moduli: list[int]) -> list[int]:
    """Map instance-order pair indices to 1-based request-order positions."""
    positions = [
        original_moduli.index(inst.pairs[i].modulus) + 1 for i in indices
    ]
    return sorted(positions)


@app.get("/healthz")
def healthz():
    return {"status": "ok", "version": __version__}


@app.post("/reconstruct/ftrr", response_model=ReconstructResponse)
def reconstruct_ftrr(req: FtrrRequest) -> ReconstructResponse:
    inst, original = _build_instance(req.pairs)
    try:
        bounds = Bounds(
            _parse_int(req.num_bound, "num_bound"),
            _parse_int(req.den_bound, "den_bound"),
            req.max_bad,
        )
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    try:
        res = ftrr(inst, bounds)
    except _RETRYABLE as exc:
        return ReconstructResponse(status="failure", reason=str(exc))
    if res.kind == "failure":
        return ReconstructResponse(status="failure", reason=res.reason)
    return ReconstructResponse(
        status=res.kind,
        value=_format_rational(res.value),
        bad_moduli=_original_positions(inst, res.bad_indices, original),
    )


@app.post("/reconstruct/hrr", response_model=ReconstructResponse)
def reconstruct_hrr(req: HrrRequest) -> ReconstructResponse:
    inst, original = _build_instance(req.pairs)
    try:
        cfg = HrrConfig(a_crit=req.a_crit, ratio_threshold=req.ratio_threshold)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    res = hrr(inst, cfg)
    if res.kind == "failure":
        return ReconstructResponse(status="failure", reason="not-convincing")
    if res.kind == "zero":
        return ReconstructResponse(status="zero", value="0")
    bad = [
        i for i, p in enumerate(inst.pairs) if gcd(p.modulus, res.m_bad) > 1
    ]
    return ReconstructResponse(
        status="value",
        value=_format_rational(res.value),
        m_bad=str(res.m_bad),
        bad_moduli=_original_positions(inst, bad, original),
    )


@app.post("/reconstruct/etl", response_model=ReconstructResponse)
def reconstruct_etl(req: EtlRequest) -> ReconstructResponse:
    inst, original = _build_instance(req.pairs)
    cfg = EtlConfig(
        refinement_a=req.refinement_a, refinement_b_divisor=req.b_divisor
    )
    res = etl(inst, cfg)
    if res.kind == "failure":
        return ReconstructResponse(status="failure", reason=res.reason)
    return ReconstructResponse(
        status="value",
        value=_format_rational(res.value),
        bad_moduli=_original_positions(inst, res.bad_indices, original),
    )


@app.post("/reconstruct/vote", response_model=ReconstructResponse)
def reconstruct_vote(req: VoteRequest) -> ReconstructResponse:
    inst, original = _build_instance(req.pairs)
    try:
        bounds = Bounds(
            _parse_int(req.num_bound, "num_bound"),
            _parse_int(req.den_bound, "den_bound"),
            req.max_bad,
        )
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    try:
        res = vote_reconstruct(inst, bounds)
    except _RETRYABLE as exc:
        return ReconstructResponse(status="failure", reason=str(exc))
    if res.kind == "failure":
        return ReconstructResponse(status="failure", reason="no-consistent-candidate")
    if res.kind == "ambiguous":
        return ReconstructResponse(
            status="ambiguous",
            reason="several candidates qualify",
            candidates=[_format_rational(v) for v in res.values],
        )
    value = res.values[0]
    return ReconstructResponse(
        status="value",
        value=_format_rational(value),
        bad_moduli=_original_positions(inst, count_bad(value, inst), original),
    )


@app.post("/bench", response_model=BenchResponse)
def bench(req: BenchRequest) -> BenchResponse:
    reports = []
    for algorithm in req.algorithms:
        try:
            spec = ExperimentSpec(
                num_bits=req.num_bits,
                den_bits=req.den_bits,
                bad_prob=req.bad_prob,
                algorithm=algorithm.lower(),
                trials=req.trials,
                rng_seed=req.seed,
                start_prime=req.start_prime,
                etl_divisor=req.etl_divisor,
                etl_refinement_a=req.etl_refinement_a,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        reports.append(run_experiment(spec))

    rows = [
        BenchTrialRow(
            algorithm=rep.spec.algorithm,
            num_bits=rep.spec.num_bits,
            den_bits=rep.spec.den_bits,
            bad_prob=rep.spec.bad_prob,
            trial=r.trial,
            pairs_needed=r.pairs_needed,
            false_positives=r.false_positives,
            seconds=r.seconds,
        )
        for rep in reports
        for r in rep.results
    ]
    summaries = [
        BenchSummary(
            algorithm=rep.spec.algorithm,
            pairs_mean=rep.pairs_mean,
            pairs_min=rep.pairs_min,
            pairs_max=rep.pairs_max,
            false_positives=rep.false_positives,
            wall_time=rep.wall_time,
        )
        for rep in reports
    ]
    return BenchResponse(
        rows=rows,
        summaries=summaries,
        table=format_table(reports),
        csv=reports_to_csv(reports),
    )
