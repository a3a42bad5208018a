"""Shared helpers for building corrupted instances around a hidden rational."""

import random
from fractions import Fraction
from math import gcd

import pytest

from ratrecon.core import ResiduePair, make_instance, residues_of

SMALL_PRIMES = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
    53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
]


def corrupted_instance(value, moduli, bad_positions, rng):
    """Instance of the images of `value`, with the pairs at the given
    positions (indices into sorted `moduli`) replaced by random wrong
    residues.  Returns (instance, sorted bad positions)."""
    moduli = sorted(moduli)
    pairs = residues_of(Fraction(value), moduli)
    for i in bad_positions:
        true = pairs[i].residue
        m = pairs[i].modulus
        wrong = rng.randrange(m)
        while wrong == true:
            wrong = rng.randrange(m)
        pairs[i] = ResiduePair(wrong, m)
    return make_instance(pairs), sorted(bad_positions)


def random_rational(rng, num_bound, den_bound, modulus_product=1):
    """Normalized p/q with |p| <= num_bound, q <= den_bound and q coprime
    to modulus_product."""
    while True:
        p = rng.randint(-num_bound, num_bound)
        q = rng.randint(1, den_bound)
        g = gcd(abs(p), q)
        p, q = p // g, q // g
        if gcd(q, modulus_product) == 1:
            return Fraction(p, q)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
