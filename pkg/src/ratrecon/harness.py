"""Fault-injection experiment driver.

Hides a random rational, feeds its images modulo successive primes into
a reconstruction algorithm (corrupting each pair independently with a
configurable probability), and records how many pairs the algorithm
needed before convincingly recovering the hidden value.  "Convincingly"
means the first pair count at which the result is correct and stays
correct for the next confirm_checks checks; earlier wrong values are
counted as false positives.

Trials are independent: each derives its own RNG stream from
(rng_seed, trial index), so results never depend on execution order.
Per-trial wall times are measurements and therefore the only
non-reproducible fields of a report.
"""

import csv
import io
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log2
from typing import Callable, Iterator, Optional

from .core import Bounds, Instance, RatreconError, ResiduePair
from .contfrac import PreconditionViolated
from .etl import EtlConfig, etl
from .ftrr import TooManyBadAllowed, ftrr
from .hrr import DEFAULT_A_CRIT, HrrConfig, hrr

ALGORITHMS = ("hrr", "etl", "ftrr")


class PrimeStreamExhausted(RatreconError):
    """The safety cap on pairs was reached without a confirmed result."""


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment cell.

    num_bits/den_bits size the hidden rational (uniform in
    [2^(b-1), 2^b) with uniform sign; 0 numerator bits means a small
    nonzero integer, 0 denominator bits means denominator 1).  Each
    residue is replaced, with probability bad_prob, by a uniformly
    random wrong value (resampled if it matches the true residue, so
    bad_prob is the exact fault rate).  Moduli run through successive
    primes from start_prime, skipping any that divide the hidden
    denominator.  The etl_* and a_crit/ratio_threshold fields configure
    the respective algorithms; the half-bad rejection defaults to off so
    that false-positive counts isolate the norm-divisor refinement.
    """

    num_bits: int
    den_bits: int
    bad_prob: float = 0.0
    algorithm: str = "hrr"
    trials: int = 25
    rng_seed: int = 0
    start_prime: int = 1013
    a_crit: int = DEFAULT_A_CRIT
    ratio_threshold: Optional[int] = None
    etl_divisor: int = 100
    etl_refinement_a: bool = False
    confirm_checks: int = 3
    max_pairs: Optional[int] = None

    def __post_init__(self):
        if self.num_bits < 0 or self.den_bits < 0 or self.num_bits + self.den_bits < 1:
            raise ValueError("need at least one bit across numerator and denominator")
        if not 0 <= self.bad_prob < 1:
            raise ValueError("bad_prob must lie in [0, 1)")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.start_prime < 2:
            raise ValueError("start_prime must be >= 2")


@dataclass(frozen=True)
class TrialResult:
    trial: int
    pairs_needed: int
    false_positives: int
    seconds: float


@dataclass(frozen=True)
class ExperimentReport:
    spec: ExperimentSpec
    results: tuple[TrialResult, ...]
    wall_time: float

    @property
    def pairs_mean(self) -> float:
        return sum(r.pairs_needed for r in self.results) / len(self.results)

    @property
    def pairs_min(self) -> int:
        return min(r.pairs_needed for r in self.results)

    @property
    def pairs_max(self) -> int:
        return max(r.pairs_needed for r in self.results)

    @property
    def false_positives(self) -> int:
        return sum(r.false_positives for r in self.results)


@dataclass(frozen=True)
class Every:
    """Call the reconstructor at every step-th pair."""

    step: int = 1

    def __post_init__(self):
        if self.step < 1:
            raise ValueError("step must be >= 1")

    def checkpoints(self) -> Iterator[int]:
        n = self.step
        while True:
            yield n
            n += self.step


@dataclass(frozen=True)
class Geometric:
    """Call the reconstructor when the pair count reaches successive
    terms of a geometric progression; keeps the number of attempts
    logarithmic at the price of bounded overlift."""

    ratio: float
    start: int = 1

    def __post_init__(self):
        if self.ratio <= 1:
            raise ValueError("ratio must be > 1")
        if self.start < 1:
            raise ValueError("start must be >= 1")

    def checkpoints(self) -> Iterator[int]:
        n = float(self.start)
        current = self.start
        while True:
            yield current
            n *= self.ratio
            current = max(current + 1, ceil(n))


@dataclass(frozen=True)
class CallRecord:
    """One reconstruction attempt in a lifting loop: the pair count at
    the call, the outcome kind, its value if any, and the bit length of
    the combined modulus as a cost proxy."""

    pairs: int
    kind: str
    value: Optional[Fraction]
    modulus_bits: int


def primes_from(start: int) -> Iterator[int]:
    """Successive primes >= start."""
    from sympy import isprime, nextprime  # deferred: sympy is slow to import

    p = start
    if p >= 2 and isprime(p):
        yield p
    while True:
        p = nextprime(p)
        yield p


def _draw_rational(rng: random.Random, num_bits: int, den_bits: int) -> Fraction:
    if num_bits:
        n = rng.getrandbits(num_bits - 1) | (1 << (num_bits - 1)) if num_bits > 1 else 1
    else:
        n = rng.randint(1, 1 << 16)
    if rng.random() < 0.5:
        n = -n
    if den_bits:
        d = rng.getrandbits(den_bits - 1) | (1 << (den_bits - 1)) if den_bits > 1 else 1
    else:
        d = 1
    return Fraction(n, d)


def _default_cap(spec: ExperimentSpec) -> int:
    bits_needed = spec.num_bits + spec.den_bits + 64
    good_margin = max(0.05, 1 - 2 * spec.bad_prob)
    expected = bits_needed / (log2(spec.start_prime) * good_margin)
    return 10 * ceil(expected) + 50


def _image_stream(target: Fraction, spec: ExperimentSpec, rng: random.Random):
    """Yield (pair, corrupted) for successive prime moduli, skipping
    primes dividing the hidden denominator (no image exists there)."""
    den = target.denominator
    num = target.numerator
    for m in primes_from(spec.start_prime):
        d = den % m
        if d == 0:
            continue
        x = num % m * pow(d, -1, m) % m
        corrupted = rng.random() < spec.bad_prob
        if corrupted:
            wrong = rng.randrange(m)
            while wrong == x:
                wrong = rng.randrange(m)
            x = wrong
        yield ResiduePair(x, m), corrupted


class _Accumulator:
    """Incrementally maintained instance: pairs arrive in increasing
    modulus order, so sortedness and coprimality hold by construction
    and the combined residue is lifted one modulus at a time."""

    def __init__(self):
        self.pairs: list[ResiduePair] = []
        self.x = 0
        self.m = 1
        self.bad_indices: list[int] = []

    def add(self, pair: ResiduePair, corrupted: bool):
        if corrupted:
            self.bad_indices.append(len(self.pairs))
        self.pairs.append(pair)
        t = (pair.residue - self.x) % pair.modulus
        t = t * pow(self.m % pair.modulus, -1, pair.modulus) % pair.modulus
        self.x += self.m * t
        self.m *= pair.modulus

    def instance(self) -> Instance:
        return Instance(tuple(self.pairs), self.m, self.x)


def _make_caller(spec: ExperimentSpec) -> Callable:
    """Adapter turning an accumulator state into a ("value"/"failure",
    value) pair for the configured algorithm."""
    if spec.algorithm == "hrr":
        cfg = HrrConfig(a_crit=spec.a_crit, ratio_threshold=spec.ratio_threshold)

        def call(acc: _Accumulator):
            res = hrr(acc.instance(), cfg)
            return ("value", res.value) if res.kind in ("value", "zero") else ("failure", None)

    elif spec.algorithm == "etl":
        cfg = EtlConfig(
            refinement_a=spec.etl_refinement_a,
            refinement_b_divisor=spec.etl_divisor,
        )

        def call(acc: _Accumulator):
            res = etl(acc.instance(), cfg)
            return ("value", res.value) if res.kind == "value" else ("failure", None)

    else:  # ftrr: bounds from the drawn sizes, fault cap from ground truth
        p_bound = 1 << spec.num_bits if spec.num_bits else 1 << 16
        q_bound = 1 << spec.den_bits if spec.den_bits else 1

        def call(acc: _Accumulator):
            bounds = Bounds(p_bound, q_bound, len(acc.bad_indices))
            try:
                res = ftrr(acc.instance(), bounds)
            except (PreconditionViolated, TooManyBadAllowed):
                return ("failure", None)
            return ("value", res.value) if res.kind in ("value", "zero") else ("failure", None)

    return call


def _run_trial(spec: ExperimentSpec, trial: int, value_hook=None) -> TrialResult:
    rng = random.Random(spec.rng_seed * (1 << 32) + trial)
    target = _draw_rational(rng, spec.num_bits, spec.den_bits)
    call = _make_caller(spec)
    cap = spec.max_pairs or _default_cap(spec)

    acc = _Accumulator()
    false_positives = 0
    streak_start = None
    started = time.perf_counter()
    for pair, corrupted in _image_stream(target, spec, rng):
        acc.add(pair, corrupted)
        n = len(acc.pairs)
        kind, value = call(acc)
        if kind == "value" and value_hook is not None:
            value_hook(acc.instance(), value)
        if kind == "value" and value == target:
            if streak_start is None:
                streak_start = n
            if n - streak_start >= spec.confirm_checks:
                return TrialResult(
                    trial, streak_start, false_positives,
                    time.perf_counter() - started,
                )
        else:
            if kind == "value":
                false_positives += 1
            streak_start = None
        if n >= cap:
            raise PrimeStreamExhausted(
                f"no confirmed result within {cap} pairs (trial {trial})"
            )
    raise AssertionError("prime stream is infinite")  # pragma: no cover


def run_experiment(spec: ExperimentSpec, value_hook=None) -> ExperimentReport:
    """Run all trials of a cell and report per-trial pair counts.

    value_hook, when given, is called as value_hook(instance, value) on
    every attempt that produced a value; it exists so invariant checks
    can audit returned values without re-running streams.
    """
    next(primes_from(spec.start_prime))  # pay the sympy import before timing
    started = time.perf_counter()
    results = tuple(
        _run_trial(spec, trial, value_hook) for trial in range(spec.trials)
    )
    return ExperimentReport(spec, results, time.perf_counter() - started)


def lifting_loop(
    target: Fraction,
    strategy,
    spec: ExperimentSpec,
) -> list[CallRecord]:
    """Simulate the iterate-and-reconstruct loop for a known target.

    Pairs accumulate as in run_experiment; the reconstructor
    (spec.algorithm) is invoked only at the strategy's checkpoints.  The
    trace records every call and stops at the first call returning the
    target.
    """
    rng = random.Random(spec.rng_seed * (1 << 32))
    call = _make_caller(spec)
    cap = spec.max_pairs or _default_cap(spec)
    checkpoints = strategy.checkpoints()
    next_check = next(checkpoints)

    trace: list[CallRecord] = []
    acc = _Accumulator()
    for pair, corrupted in _image_stream(target, spec, rng):
        acc.add(pair, corrupted)
        n = len(acc.pairs)
        if n == next_check:
            kind, value = call(acc)
            trace.append(CallRecord(n, kind, value, acc.m.bit_length()))
            if kind == "value" and value == target:
                return trace
            next_check = next(checkpoints)
        if n >= cap:
            raise PrimeStreamExhausted(f"no result within {cap} pairs")
    raise AssertionError("prime stream is infinite")  # pragma: no cover


CSV_COLUMNS = (
    "algorithm", "num_bits", "den_bits", "bad_prob",
    "trial", "pairs_needed", "false_positives", "seconds",
)


def reports_to_csv(reports) -> str:
    """Flatten reports into UTF-8 CSV text, one row per trial.

    All columns except seconds are reproducible for a fixed spec;
    seconds is wall-clock measurement.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rep in reports:
        s = rep.spec
        for r in rep.results:
            writer.writerow([
                s.algorithm, s.num_bits, s.den_bits, f"{s.bad_prob:g}",
                r.trial, r.pairs_needed, r.false_positives, f"{r.seconds:.6f}",
            ])
    return buf.getvalue()


def format_table(reports) -> str:
    """Aligned summary table: one row per (algorithm, fault rate), one
    column per numerator/denominator bit split, cells showing the mean
    pair count with the min-max spread."""
    splits = []
    rows: dict[tuple[str, float], dict[tuple[int, int], str]] = {}
    for rep in reports:
        s = rep.spec
        split = (s.num_bits, s.den_bits)
        if split not in splits:
            splits.append(split)
        key = (s.algorithm.upper(), s.bad_prob)
        cell = f"{rep.pairs_mean:.1f} [{rep.pairs_min}-{rep.pairs_max}]"
        rows.setdefault(key, {})[split] = cell

    header = ["algorithm"] + [f"{nb}/{db} bits" for nb, db in splits]
    lines = [header]
    for (alg, bad), cells in rows.items():
        label = f"{alg} {bad:.0%} bad"
        lines.append([label] + [cells.get(split, "-") for split in splits])

    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
    out = []
    for i, line in enumerate(lines):
        out.append("  ".join(col.ljust(w) for col, w in zip(line, widths)).rstrip())
        if i == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out)
