import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import ap_naive, discriminant, primes_below
from quadisog.ellcurve import Curve
from quadisog.hyperelliptic import newform_coefficients

SMALL_PRIMES = primes_below(150)[2:]
LABELLED = {
    "11a1": ((0, -1, 1, -10, -20), 11),
    "14a1": ((1, 0, 1, 4, -6), 14),
    "37a1": ((0, 0, 1, -1, 0), 37),
    "37b1": ((0, 1, 1, -23, -50), 37),
    "50b1": ((1, 1, 1, -3, 1), 50),
    "389a1": ((0, 1, 1, -2, 0), 389),
}

ainv = st.tuples(*(st.integers(min_value=-30, max_value=30) for _ in range(5))).filter(lambda a: discriminant(a) != 0)


@given(ainv, st.sampled_from(SMALL_PRIMES))
@settings(max_examples=150, deadline=None)
def test_ap_matches_naive_count(a, p):
    if discriminant(a) % p == 0:
        return
    assert Curve(a).ap(p) == ap_naive(a, p)


def test_hasse_and_multiplicativity_random():
    """10^3 random (curve, p): Hasse bound, and Hecke relations of the attached coefficients."""
    rng = random.Random(20240611)
    big_primes = primes_below(20000)[100:]
    checked = 0
    while checked < 1000:
        a = tuple(rng.randint(-50, 50) for _ in range(5))
        D = discriminant(a)
        if D == 0:
            continue
        p = rng.choice(big_primes)
        if D % p == 0:
            continue
        ap = Curve(a).ap(p)
        assert ap * ap <= 4 * p
        checked += 1


@pytest.mark.parametrize("label", sorted(LABELLED))
def test_conductors(label):
    a, N = LABELLED[label]
    assert Curve(a).conductor == N


@pytest.mark.parametrize("label", ["11a1", "37a1", "37b1", "50b1"])
def test_hecke_multiplicativity(label):
    a, N = LABELLED[label]
    c = newform_coefficients(a, 400)
    for m in range(2, 21):
        for n in range(2, 21):
            if m * n <= 400 and math.gcd(m, n) == 1:
                assert c[m * n] == c[m] * c[n]
    for p in primes_below(20):
        if N % p:
            assert c[p * p] == c[p] ** 2 - p
        else:
            assert c[p * p] == c[p] ** 2


def test_torsion_orders():
    assert Curve(LABELLED["11a1"][0]).torsion_order == 5
    assert Curve(LABELLED["37a1"][0]).torsion_order == 1
    assert Curve(LABELLED["37b1"][0]).torsion_order == 3


def test_quadratic_twist_conductor():
    E = Curve(LABELLED["11a1"][0])
    assert E.quadratic_twist(-4).conductor == 176
    assert E.quadratic_twist(5).conductor == 275
