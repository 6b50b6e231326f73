import pytest

from oracles import BSD_RATIO_11A1, L_11A1_AT_1
from quadisog.lfunction_rank import (
    NO_GROWTH,
    POSITIVE_RANK,
    RANK_ZERO,
    base_an,
    base_curve,
    central_value,
    rank_over_quadratic,
    torsion_no_growth,
    twist_sign,
    validate_base_models,
)


def test_base_models_validate():
    validate_base_models()


def test_central_value_of_11a1():
    L, err = central_value(11, 1, 1e-12)
    assert abs(L - L_11A1_AT_1) < 1e-10
    assert err < 1e-10
    bc = base_curve(11)
    assert abs(L / bc.real_period - float(BSD_RATIO_11A1)) < 1e-9


def test_coefficients_are_multiplicative():
    a = [0] + base_an(11, 200)  # a[n] = a_n
    assert a[1] == 1 and a[2] == -2 and a[3] == -1 and a[5] == 1
    assert a[6] == a[2] * a[3]
    assert a[4] == a[2] ** 2 - 2


def test_37b1_twist_by_213_has_rank_zero():
    # used to resolve X0(37) over Q(sqrt 213)
    assert rank_over_quadratic("37b1", 213).verdict == RANK_ZERO


@pytest.mark.parametrize("N,d,expected", [(15, 213, POSITIVE_RANK), (11, 213, RANK_ZERO), (49, 213, RANK_ZERO)])
def test_known_decisions(N, d, expected):
    dec = rank_over_quadratic(N, d)
    assert dec.verdict == expected
    assert "BSD" in dec.conditional_on


def test_sign_minus_forces_positive_rank():
    for N in (11, 14, 15, 20):
        for d in (-5, 5, 213, 1545):
            if twist_sign(N, d if d % 4 == 1 else 4 * d) == -1:
                assert rank_over_quadratic(N, d).verdict == POSITIVE_RANK


def test_torsion_no_growth_213():
    for N in (11, 14, 15, 17, 19, 20, 21, 24, 27, 32, 36, 49):
        assert torsion_no_growth(N, 213) == NO_GROWTH


def test_decisions_deterministic():
    a = [rank_over_quadratic(N, 1545) for N in (14, 21, 27)]
    b = [rank_over_quadratic(N, 1545) for N in (14, 21, 27)]
    assert a == b


def test_bad_field():
    with pytest.raises(ValueError):
        rank_over_quadratic(11, 12)
