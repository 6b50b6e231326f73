"""Independent reference computations used by the tests.

Nothing here imports the package's algorithms; each oracle recomputes its
value the slow, direct way.
"""

from __future__ import annotations

import math
from fractions import Fraction


def primes_below(n: int) -> list[int]:
    return [p for p in range(2, n) if all(p % q for q in range(2, math.isqrt(p) + 1))]


def count_points_naive(ainvs, p: int) -> int:
    """#E(F_p) including infinity, by trying every (x, y)."""
    a1, a2, a3, a4, a6 = (a % p for a in ainvs)
    n = 1
    for x in range(p):
        rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                n += 1
    return n


def ap_naive(ainvs, p: int) -> int:
    return p + 1 - count_points_naive(ainvs, p)


def discriminant(ainvs) -> int:
    a1, a2, a3, a4, a6 = ainvs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def genus_by_counting(N: int) -> int:
    """Genus of X0(N) from a direct count of P^1(Z/N), elliptic points and cusps."""
    # index: number of cyclic subgroups of order N, i.e. points of P^1(Z/NZ)
    pts = set()
    for c in range(N):
        for d in range(N):
            if math.gcd(math.gcd(c, d), N) != 1:
                continue
            # normalise (c : d) by the unit group
            best = min(((u * c) % N, (u * d) % N) for u in range(1, N + 1) if math.gcd(u, N) == 1)
            pts.add(best)
    mu = len(pts)
    nu2 = sum(1 for x in range(N) if (x * x + 1) % N == 0)
    nu3 = sum(1 for x in range(N) if (x * x + x + 1) % N == 0)
    phi = lambda n: sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)  # noqa: E731
    cusps = sum(phi(math.gcd(c, N // c)) for c in range(1, N + 1) if N % c == 0)
    g = 1 + Fraction(mu, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(cusps, 2)
    assert g.denominator == 1
    return int(g)


def is_squarefree_naive(n: int) -> bool:
    n = abs(n)
    return all(n % (k * k) for k in range(2, math.isqrt(n) + 1))


# L(11a1, 1) / Omega(11a1) = 1/5 is the BSD ratio (|Sha| = 1, c_11 = 5, torsion 5).
BSD_RATIO_11A1 = Fraction(1, 5)
L_11A1_AT_1 = 0.2538418608559106843377589233
