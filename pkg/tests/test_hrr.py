import random
from fractions import Fraction
from math import gcd, prod

import pytest

from ratrecon.contfrac import NoPositiveQuotients, expand, quotients_of
from ratrecon.core import (
    Bounds,
    Instance,
    ResiduePair,
    count_bad,
    make_instance,
    residues_of,
)
from ratrecon.ftrr import ftrr
from ratrecon.harness import primes_from
from ratrecon.hrr import HrrConfig, a_max_scan, hrr

from conftest import corrupted_instance


def instance_for(value, pair_count, start=1013, corrupt=(), rng=None):
    value = Fraction(value)
    moduli = []
    for m in primes_from(start):
        if value.denominator % m:
            moduli.append(m)
        if len(moduli) == pair_count:
            break
    pairs = residues_of(value, moduli)
    for i in corrupt:
        wrong = rng.randrange(pairs[i].modulus)
        while wrong == pairs[i].residue:
            wrong = rng.randrange(pairs[i].modulus)
        pairs[i] = type(pairs[i])(wrong, pairs[i].modulus)
    return make_instance(pairs)


class TestConfig:
    def test_defaults(self):
        cfg = HrrConfig()
        assert cfg.a_crit == 10**6
        assert cfg.ratio_threshold is None

    def test_validation(self):
        with pytest.raises(ValueError):
            HrrConfig(a_crit=1)
        with pytest.raises(ValueError):
            HrrConfig(ratio_threshold=1)


class TestAMaxScan:
    def test_simple(self):
        assert a_max_scan(expand(355, 113)) == (16, 7)

    def test_golden(self):
        a_max, _ = a_max_scan(expand(7213578109, 101 * 103 * 105 * 107 * 109))
        assert a_max == 2596

    def test_single_quotient_convention(self):
        assert a_max_scan(expand(1, 5)) == (5, 1)

    def test_integer_only_raises(self):
        with pytest.raises(NoPositiveQuotients):
            a_max_scan(expand(7, 1))


class TestHrr:
    def test_recovers_balanced_rational(self):
        rng = random.Random(11)
        num = rng.getrandbits(100) | (1 << 99)
        den = rng.getrandbits(100) | (1 << 99)
        value = Fraction(num, den)
        # enough pairs for the value plus the convincingness margin
        inst = instance_for(value, 30)
        res = hrr(inst)
        assert res.kind == "value"
        assert res.value == value
        assert res.m_bad == 1

    def test_recovers_with_corruption(self):
        rng = random.Random(12)
        num = rng.getrandbits(64) | (1 << 63)
        value = Fraction(num, 9973)
        inst = instance_for(value, 16, corrupt=[3], rng=rng)
        res = hrr(inst)
        assert res.kind == "value"
        assert res.value == value
        assert res.m_bad == inst.pairs[3].modulus
        bad = [i for i, p in enumerate(inst.pairs) if gcd(p.modulus, res.m_bad) > 1]
        assert bad == count_bad(value, inst) == [3]

    def test_mostly_zero_residues(self):
        # sparse nonzero pattern across many similar primes: the shared
        # factor of residue and modulus is overwhelming and the answer is 0
        moduli = []
        for m in primes_from(1013):
            moduli.append(m)
            if len(moduli) == 30:
                break
        pairs = [(7 if i % 5 == 0 else 0, m) for i, m in enumerate(moduli)]
        inst = make_instance(pairs)
        g = gcd(inst.combined_residue, inst.combined_modulus)
        assert g * g > 10**6 * inst.combined_modulus
        res = hrr(inst)
        assert res.kind == "zero"
        assert res.value == 0

    def test_exact_zero(self):
        inst = make_instance([(0, 3), (0, 5)])
        assert hrr(inst).kind == "zero"

    def test_insufficient_pairs_fail(self):
        inst = make_instance(residues_of(Fraction(13, 37), [101, 103]))
        a_max, _ = a_max_scan(expand(inst.combined_residue, inst.combined_modulus))
        assert a_max < 10**6
        assert hrr(inst).kind == "failure"

    def test_ratio_criterion(self):
        value = Fraction(13, 37)
        inst = instance_for(value, 8)
        res = hrr(inst, HrrConfig(ratio_threshold=4096))
        assert res.kind == "value"
        assert res.value == value
        # two pairs cannot carry a convincing ratio either
        small = make_instance(residues_of(value, [101, 103]))
        assert hrr(small, HrrConfig(ratio_threshold=4096)).kind == "failure"

    def test_value_implies_dominant_quotient(self):
        value = Fraction(355, 113)
        inst = instance_for(value, 10)
        res = hrr(inst)
        assert res.kind == "value"
        qs = quotients_of(inst.combined_residue, inst.combined_modulus)
        assert max(qs[1:]) >= 10**6


def test_eventual_correctness_under_corruption():
    # 64-bit rationals, 10% independent faults: once enough pairs are
    # in, the reconstruction locks on and stays locked
    trials = 200
    locked_tail = 12
    for trial in range(trials):
        rng = random.Random(31_000 + trial)
        num = (rng.getrandbits(32) | (1 << 31)) * (-1 if rng.random() < 0.5 else 1)
        den = rng.getrandbits(32) | (1 << 31)
        value = Fraction(num, den)
        pairs = []
        x, m = 0, 1
        locked_at = None
        n = 0
        for prime in primes_from(1013):
            if value.denominator % prime == 0:
                continue
            r = value.numerator % prime * pow(value.denominator % prime, -1, prime) % prime
            if rng.random() < 0.10:
                wrong = rng.randrange(prime)
                while wrong == r:
                    wrong = rng.randrange(prime)
                r = wrong
            t = (r - x) % prime * pow(m % prime, -1, prime) % prime
            x, m = x + m * t, m * prime
            pairs.append((r, prime))
            n += 1
            inst = Instance(tuple(ResiduePair(a, b) for a, b in pairs), m, x)
            res = hrr(inst)
            if res.kind == "value" and res.value == value:
                if locked_at is None:
                    locked_at = n
                if n - locked_at >= locked_tail:
                    break
            else:
                locked_at = None
            assert n < 120, f"trial {trial} did not converge"
        assert locked_at is not None


def test_agreement_with_ftrr(rng):
    # when both algorithms accept an instance they name the same rational
    agreements = 0
    for trial in range(30):
        local = random.Random(7_000 + trial)
        num = local.getrandbits(40) | (1 << 39)
        den = local.getrandbits(20) | (1 << 19)
        value = Fraction(num, den)
        inst = instance_for(value, 12, corrupt=[2], rng=local)
        hres = hrr(inst)
        fres = ftrr(inst, Bounds(1 << 41, 1 << 21, 1))
        if hres.kind == "value" and fres.kind == "value":
            assert hres.value == fres.value == value
            agreements += 1
    assert agreements >= 25
