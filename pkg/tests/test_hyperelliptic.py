import pytest

from oracles import primes_below
from quadisog.arith.primes import kronecker
from quadisog.catalogue import CatalogueDB
from quadisog.ellcurve import Curve
from quadisog.hyperelliptic import (
    CUSP_SPACES,
    cm_unramified_primes,
    derive_unramified_lists,
    hyperelliptic_model,
    is_norm_from_primitive_order,
    model_unramified_primes,
)


def _count_affine_and_infinity(F, p):
    n = 0
    for x in range(p):
        v = sum(c * pow(x, i, p) for i, c in enumerate(F)) % p
        n += 1 if v == 0 else (2 if pow(v, (p - 1) // 2, p) == 1 else 0)
    lead = F[-1] % p
    n += 1 if lead == 0 else (2 if pow(lead, (p - 1) // 2, p) == 1 else 0)
    return n


@pytest.mark.parametrize("N", sorted(CUSP_SPACES))
def test_model_point_counts_match_traces(N):
    """#X(F_p) = p + 1 - sum of a_p over the newforms (with multiplicity) at good p."""
    F = hyperelliptic_model(N)
    for p in primes_below(60):
        if p == 2 or N % p == 0 or all(c % p == 0 for c in F):
            continue
        trace = 0
        for _, ainvs, shifts in CUSP_SPACES[N]:
            trace += len(shifts) * Curve(ainvs).ap(p)
        assert _count_affine_and_infinity(F, p) == p + 1 - trace, p


def test_known_model_26():
    assert hyperelliptic_model(26) == (1, -8, 8, -18, 8, -8, 1)


def test_routes_agree_on_split_primes():
    for N in (26, 50):
        F = hyperelliptic_model(N)
        split = [p for p in model_unramified_primes(F) if N % p and kronecker(-N, p) == 1]
        assert split == cm_unramified_primes(N)


def test_norm_forms():
    assert is_norm_from_primitive_order(125, 509)  # 509 = 3^2 + 125 * 2^2
    assert not is_norm_from_primitive_order(65, 3)
    assert is_norm_from_primitive_order(35, 11)  # 4 * 11 = 3^2 + 35 * 1^2


def test_shipped_lists_equal_derivation():
    db = CatalogueDB.default()
    derived = derive_unramified_lists((26, 28, 30, 35, 39, 40, 48, 50))
    for N, info in derived.items():
        assert list(db.trbovic_primes(N)) == info["primes"], N
