import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadisog.arith.primes import squarefree_part
from quadisog.catalogue import (
    ELIMINATED,
    FINITE,
    INCONCLUSIVE,
    OBSTRUCTED,
    ONLY_CUSPS,
    UNRESOLVED,
    CatalogueDB,
    CatalogueError,
    MissingData,
    ozman_sieve,
    parse_coordinates,
    parse_polynomial,
    resolve_level,
    trbovic_filter,
    verify_point_on_model,
)
from quadisog.hyperelliptic import hyperelliptic_model
from quadisog.minimally_finite import compute_mf

P2_509 = ["-38/509w", "21/509w", "-12/509w", "5/509w", "1/509w", "-1/509w", "-1", "1"]


@pytest.fixture(scope="module")
def db():
    return CatalogueDB.default()


def test_parse_polynomial():
    p = parse_polynomial("x1^2 - 21/8*x3*x4 -19*x5^2 + x1*x2", 5)
    terms = {e: c for c, e in p}
    assert terms[(2, 0, 0, 0, 0)] == 1
    assert terms[(0, 0, 1, 1, 0)] == Fraction(-21, 8)
    assert terms[(0, 0, 0, 0, 2)] == -19
    with pytest.raises(ValueError):
        parse_polynomial("x9^2", 5)


def test_cusps_and_tables(db):
    assert verify_point_on_model(125, [1, 0, 0, 0, 0, 0, 1, 0])
    assert verify_point_on_model(125, P2_509, 509)
    assert not verify_point_on_model(125, [2, 0, 0, 0, 0, 0, 1, 0])
    assert len(db.levels[125].points) == 5 and len(db.levels[169].points) == 6


def test_projective_scaling(db):
    K = parse_coordinates(P2_509, 509)[0].field
    pt = [c * K(3, 7) for c in parse_coordinates(P2_509, 509)]
    assert verify_point_on_model(125, pt, 509)


def test_every_single_perturbation_fails(db):
    for N, model in db.models.items():
        pts = [list(c) for c in model.cusps] + [list(parse_coordinates(p.coords, p.d)) for p in db.levels[N].points]
        for pt in pts:
            for i in range(model.ambient_dim):
                for delta in (1, -1):
                    q = list(pt)
                    q[i] = q[i] + delta
                    assert not model.vanishes(q)


def _shipped():
    from importlib import resources

    return resources.files("quadisog.data").joinpath("catalogue.json").read_text("utf-8")


def test_broken_catalogue_is_rejected(tmp_path):
    raw = json.loads(_shipped())
    raw["levels"]["125"]["points"][1]["coords"][0] = "-37/509w"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(CatalogueError):
        CatalogueDB.load(path)
    raw = json.loads(_shipped())
    raw["levels"]["169"]["points"][0]["cm"] = -4
    path.write_text(json.dumps(raw))
    with pytest.raises(CatalogueError):
        CatalogueDB.load(path)


def test_trbovic_filter(db):
    for N in (26, 30, 35, 39, 40, 48, 50):
        assert trbovic_filter(N, 213) == ELIMINATED
    assert trbovic_filter(26, 23) == INCONCLUSIVE  # only 23 ramifies, not on the list
    with pytest.raises(MissingData):
        trbovic_filter(37, 213)


@given(st.sampled_from([26, 30, 40, 48, 50]), st.integers(min_value=2, max_value=5000))
@settings(max_examples=200)
def test_trbovic_monotone(N, m):
    d = squarefree_part(213 * m)
    if d == 1:
        return
    # Q(sqrt d) ramifies at 3 or 71 unless m cancels them; compare ramified sets
    from quadisog.arith.quadfield import Q

    if set(Q(213).ramified_primes) <= set(Q(d).ramified_primes):
        assert trbovic_filter(N, d) == ELIMINATED


def test_ozman(db):
    assert ozman_sieve(65, 213, 1000) == OBSTRUCTED
    assert ozman_sieve(65, 213, 2) == INCONCLUSIVE
    assert ozman_sieve(65, 5 * 13, 1000) == INCONCLUSIVE  # ramified primes divide N


def test_ozman_sound_on_catalogued_points(db):
    for N, rec in db.levels.items():
        for pt in (rec.points or ()) + (rec.exceptional_points or ()):
            assert ozman_sieve(N, pt.d, 10**3) == INCONCLUSIVE


def test_ozman_sound_on_hyperelliptic_pullbacks():
    """On X0(26) the hyperelliptic involution is w_26; (x0, sqrt F(x0)) are non-exceptional points."""
    F = hyperelliptic_model(26)
    rng = random.Random(3)
    for _ in range(300):
        x0 = Fraction(rng.randint(-300, 300), rng.randint(1, 60))
        v = sum(c * x0**i for i, c in enumerate(F))
        n = v.numerator * v.denominator
        d = squarefree_part(n)
        if d == 1:
            continue
        assert ozman_sieve(26, d, 10**4) == INCONCLUSIVE


def test_resolve_213(db):
    mf = compute_mf(213, [])
    out = {}
    for N in sorted(mf.mf):
        r = resolve_level(N, 213, mf, db)
        assert r.kind != UNRESOLVED
        out[N] = r
    assert [str(j) for j in out[37].j_invariants] == ["-9317", "-162677523113838677"]
    assert [str(j) for j in out[163].j_invariants] == ["-262537412640768000"]
    assert out[125].kind == ONLY_CUSPS
    for N, r in out.items():
        from quadisog.modular_geometry import genus

        if genus(N) >= 2:
            if N == 37:
                assert r.kind == FINITE and len(r.j_invariants) == 2
            elif N in (43, 67, 163):
                assert r.kind == FINITE and len(r.j_invariants) == 1
            else:
                assert r.kind == ONLY_CUSPS, N


def test_resolve_catalogue_field(db):
    r = resolve_level(125, 509, None, db)
    assert r.kind == FINITE and len(r.j_invariants) == 1


def test_unknown_level_is_unresolved(db):
    r = resolve_level(289, 5, None, db)
    assert r.kind == UNRESOLVED and "289" in r.reason
