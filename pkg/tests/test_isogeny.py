import random
from fractions import Fraction

import pytest

from quadisog.arith.poly import UniPoly
from quadisog.arith.quadfield import Q
from quadisog.cm import CLASS_NUMBER_ONE, HILBERT_CLASS_POLYNOMIALS, validate_cm_table
from quadisog.isogeny import ModPolyDB, isogeny_graph, k_roots
from quadisog.modpoly_gen import modular_polynomial

A509 = 2140988208276499951039156514868631437312
B509 = 94897633897841092841200334676012564480

# Phi_2 in closed form (coefficients of X^i Y^j, i >= j)
PHI2 = {
    (3, 0): 1, (2, 2): -1, (2, 1): 1488, (2, 0): -162000, (1, 1): 40773375,
    (1, 0): 8748000000, (0, 0): -157464000000000,
}


def test_phi2_closed_form():
    got = {k: v for k, v in ModPolyDB.default().get(2).items() if k[0] >= k[1]}
    assert got == PHI2


def test_generator_reproduces_shipped_phi3():
    assert modular_polynomial(3) == ModPolyDB.default().get(3)


@pytest.mark.parametrize("l", [2, 3, 5, 7, 11, 13, 17, 19])
def test_shipped_polynomials_symmetric(l):
    P = ModPolyDB.default().get(l)
    assert all(P.get((j, i)) == c for (i, j), c in P.items())
    assert P[(l + 1, 0)] == 1


def test_cm_table():
    validate_cm_table()
    assert len(CLASS_NUMBER_ONE) == 13


def test_k_roots_planted_completeness():
    """10^3 polynomials over random quadratic fields with planted roots and an extra quadratic factor."""
    rng = random.Random(7)
    for _ in range(1000):
        d = rng.choice([-15, -5, 2, 3, 5, 13, 213, 509])
        K = Q(d)
        roots = [
            K(Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 50)), Fraction(rng.randint(-10**4, 10**4), rng.randint(1, 20)))
            for _ in range(rng.randint(1, 4))
        ]
        roots += roots[:1] * rng.randint(0, 1)
        extra = UniPoly([-K(rng.randint(1, 9), rng.randint(1, 9)), 0, 1], K)
        f = UniPoly.from_roots(roots, K) * extra
        got = dict(k_roots(f, d))
        for r in got:
            assert f(r) == 0
        expected = {}
        for r in roots:
            expected[r] = expected.get(r, 0) + 1
        for r, m in expected.items():
            assert got.get(r) == m


def test_j509_has_cyclic_125_isogeny():
    K = Q(509)
    j = K(Fraction(-A509, 161051), Fraction(-B509, 161051))
    g = isogeny_graph(j, 509, [5])
    assert 125 in g.cyclic_degrees


def test_unsigned_j509_has_no_5_isogeny():
    K = Q(509)
    j = K(Fraction(A509, 161051), Fraction(B509, 161051))
    g = isogeny_graph(j, 509, [5])
    assert g.cyclic_degrees == {1}


def test_minus_3375_over_q():
    g = isogeny_graph(-3375, 1, [2, 7])
    assert 14 in g.cyclic_degrees
    assert 4 not in g.cyclic_degrees  # the two 2-kernels are only defined over Q(sqrt -7)


def test_minus_3375_over_its_cm_field():
    g = isogeny_graph(-3375, -7, [2])
    assert 4 in g.cyclic_degrees


def _cm_seeds():
    seeds = []
    for D, H in HILBERT_CLASS_POLYNOMIALS.items():
        if len(H) == 3:
            c, b, _ = H
            disc = b * b - 4 * c
            from quadisog.arith.primes import squarefree_part

            d = squarefree_part(disc)
            K = Q(d)
            r = int(round((disc // d) ** 0.5))
            seeds.append((D, d, K(Fraction(-b, 2), Fraction(r, 2))))
    return seeds


def test_graph_conjugation_symmetry():
    """10^2 random (CM seed, prime set): the graph of the conjugate seed is the conjugate graph."""
    rng = random.Random(11)
    seeds = _cm_seeds()
    for _ in range(100):
        D, d, j = rng.choice(seeds)
        primes = sorted(rng.sample([2, 3, 5, 7], rng.randint(1, 2)))
        g1 = isogeny_graph(j, d, primes)
        g2 = isogeny_graph(j.conj(), d, primes)
        assert g1.cyclic_degrees == g2.cyclic_degrees
        assert {x.conj() for x in g1.nodes} == set(g2.nodes)
        e1 = sorted((str(g1.nodes[a].conj()), str(g1.nodes[b].conj()), l, m) for a, b, l, m in g1.edges)
        e2 = sorted((str(g2.nodes[a]), str(g2.nodes[b]), l, m) for a, b, l, m in g2.edges)
        assert e1 == e2


def test_graph_deterministic():
    a = isogeny_graph(-32768, 213, [2, 3, 11])
    b = isogeny_graph(-32768, 213, [2, 3, 11])
    assert a.nodes == b.nodes and a.edges == b.edges and a.cyclic_degrees == b.cyclic_degrees
