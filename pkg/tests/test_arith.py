from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import is_squarefree_naive, primes_below
from quadisog.arith.poly import UniPoly, fp_roots
from quadisog.arith.primes import factor, is_prime, is_squarefree, kronecker, primes_up_to, sqrt_mod
from quadisog.arith.quadfield import Q


def test_primes_up_to_matches_trial_division():
    assert primes_up_to(500) == primes_below(501)


@given(st.integers(min_value=2, max_value=10**12))
@settings(max_examples=200, deadline=None)
def test_factor_reconstructs(n):
    f = factor(n)
    prod = 1
    for p, e in f.items():
        assert is_prime(p)
        prod *= p**e
    assert prod == n


@given(st.integers(min_value=-5000, max_value=5000).filter(lambda n: n != 0))
def test_squarefree_matches_naive(n):
    assert is_squarefree(n) == is_squarefree_naive(n)


@given(st.integers(min_value=-300, max_value=300), st.sampled_from(primes_below(200)[1:]))
def test_kronecker_is_euler_criterion(a, p):
    expected = 0 if a % p == 0 else (1 if pow(a, (p - 1) // 2, p) == 1 else -1)
    assert kronecker(a, p) == expected


@given(st.sampled_from(primes_below(1000)[1:]), st.integers(min_value=1, max_value=10**6))
def test_sqrt_mod(p, x):
    a = x * x % p
    r = sqrt_mod(a, p)
    assert r * r % p == a


field_d = st.sampled_from([-15, -5, -1, 2, 5, 13, 213, 509])
rationals = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 10**4)


@given(field_d, rationals, rationals, rationals, rationals)
def test_quadfield_field_axioms(d, a, b, c, e):
    K = Q(d)
    x, y = K(a, b), K(c, e)
    assert x * y == y * x
    assert (x + y) - y == x
    if y != 0:
        assert (x / y) * y == x
    assert (x * x.conj()).b == 0
    assert x.conj().conj() == x


def test_quadfield_parse():
    K = Q(509)
    assert K.parse("-38/509w") == K(0, Fraction(-38, 509))
    assert K.parse("1/2 + 3*w") == K(Fraction(1, 2), 3)
    with pytest.raises(ValueError):
        K.parse("import os")


def test_ramified_primes():
    assert Q(213).ramified_primes == (3, 71)
    assert Q(-1).ramified_primes == (2,)
    assert Q(5).disc == 5 and Q(2).disc == 8


@given(st.lists(st.integers(min_value=0, max_value=96), min_size=1, max_size=6, unique=True))
@settings(max_examples=100)
def test_fp_roots_planted(roots):
    p = 97
    f = [1]
    for r in roots:
        g = [0] * (len(f) + 1)
        for i, c in enumerate(f):
            g[i] = (g[i] - r * c) % p
            g[i + 1] = (g[i + 1] + c) % p
        f = g
    assert sorted(fp_roots(f, p)) == sorted(roots)


def test_unipoly_from_roots_and_gcd():
    K = Q(5)
    r1, r2 = K(1, 1), K(Fraction(1, 2), -3)
    f = UniPoly.from_roots([r1, r2, r2], K)
    assert f.degree() == 3
    assert f.squarefree_part().degree() == 2
