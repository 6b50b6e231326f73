import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadisog.minimally_finite import (
    EXCLUDED_D,
    ExcludedField,
    compute_mf,
    load_s2_table,
    remove_multiples,
)
from quadisog.modular_geometry import amf

MF_MINUS_5 = set(amf()) | {23, 11, 15, 17, 19, 20, 28, 36, 42, 48, 54, 63, 64, 81, 98, 147, 343}
MF_5 = set(amf()) | {23, 47, 11, 14, 15, 19, 20, 21, 24, 34, 36, 49, 51, 54, 64, 81, 85, 119, 221, 289}
MF_213 = set(amf()) | {11, 14, 17, 19, 21, 30, 40, 45, 48, 49, 54, 64, 72, 75, 81}


@given(st.sets(st.integers(min_value=1, max_value=500), max_size=40))
def test_remove_multiples_properties(s):
    r = remove_multiples(s)
    assert r <= s
    assert remove_multiples(r) == r
    for a in r:
        for b in r:
            assert a == b or b % a
    for x in s:
        assert any(x % y == 0 for y in r)


def test_mf_213():
    assert set(compute_mf(213, []).mf) == MF_213


def test_mf_plus_minus_5():
    assert set(compute_mf(-5, [23]).mf) == MF_MINUS_5
    assert set(compute_mf(5, [23, 47]).mf) == MF_5


def test_excluded_fields():
    for d in EXCLUDED_D:
        with pytest.raises(ExcludedField):
            compute_mf(d, [])


def test_s2_table_schema():
    t = load_s2_table()
    assert t[-5].primes == {23}
    assert t[5].primes == {23, 47}
    assert all("GRH" in e.conditional_on for e in t.values())
