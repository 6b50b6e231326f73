"""Classical invariants of X0(N) and the level sets built from them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith.primes import divisors, euler_phi, factor, is_prime, kronecker

# Ogg's list of N for which X0(N) is hyperelliptic.
HYPERELLIPTIC_LEVELS = frozenset({22, 23, 26, 28, 29, 30, 31, 33, 35, 37, 39, 40, 41, 46, 47, 48, 50, 59, 71})

# Prime levels of positive genus admitting rational isogenies over every number field
# considered here (the non-genus-one rational isogeny primes).
AMF_PRIMES = (37, 43, 67, 163)

EXPECTED_AMF = frozenset({26, 35, 37, 39, 43, 50, 65, 67, 91, 125, 163, 169})


class ConsistencyError(RuntimeError):
    pass


@dataclass(frozen=True)
class LevelProfile:
    N: int
    index_mu: int
    nu2: int
    nu3: int
    nu_inf: int
    genus: int
    is_elliptic: bool
    is_hyperelliptic: bool


@lru_cache(maxsize=None)
def level_profile(N: int) -> LevelProfile:
    if N < 1:
        raise ValueError("level must be positive")
    ps = list(factor(N)) if N > 1 else []
    mu = N
    for p in ps:
        mu = mu // p * (p + 1)
    nu2 = 0 if N % 4 == 0 else math.prod(1 + kronecker(-4, p) for p in ps)
    nu3 = 0 if N % 9 == 0 else math.prod(1 + kronecker(-3, p) for p in ps)
    nu_inf = sum(euler_phi(math.gcd(c, N // c)) for c in divisors(N))
    g = 1 + Fraction(mu, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(nu_inf, 2)
    if g.denominator != 1 or g < 0:
        raise ConsistencyError(f"genus formula gave {g} at N = {N}")
    g = int(g)
    return LevelProfile(
        N=N,
        index_mu=mu,
        nu2=nu2,
        nu3=nu3,
        nu_inf=nu_inf,
        genus=g,
        is_elliptic=g == 1,
        is_hyperelliptic=g >= 2 and N in HYPERELLIPTIC_LEVELS,
    )


def genus(N: int) -> int:
    return level_profile(N).genus


def rational_cusps(N: int) -> int:
    """Number of Q-rational cusps: divisors c of N with gcd(c, N/c) <= 2."""
    return sum(1 for c in divisors(N) if math.gcd(c, N // c) <= 2)


# Every minimal positive-genus level divides one of these products of small prime
# powers; genus grows like N/12 so the search bound below is generous.
_SEARCH_BOUND = 1000


@lru_cache(maxsize=1)
def minimal_positive_genus_composites() -> frozenset[int]:
    out = set()
    for N in range(4, _SEARCH_BOUND + 1):
        if is_prime(N) or genus(N) == 0:
            continue
        if all(genus(m) == 0 for m in divisors(N) if m != N):
            out.add(N)
    return frozenset(out)


@lru_cache(maxsize=1)
def amf() -> frozenset[int]:
    comp = {N for N in minimal_positive_genus_composites() if genus(N) >= 2}
    result = frozenset(comp | set(AMF_PRIMES))
    if result != EXPECTED_AMF:
        raise ConsistencyError(f"computed AMF {sorted(result)} differs from {sorted(EXPECTED_AMF)}")
    return result


@lru_cache(maxsize=1)
def genus1_levels() -> tuple[int, ...]:
    return tuple(N for N in range(1, _SEARCH_BOUND + 1) if genus(N) == 1)
