"""CM j-invariants of small class number and their Hilbert class polynomials."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .arith.primes import factor, squarefree_part
from .arith.quadfield import QuadFieldElem

# Hilbert class polynomials, coefficients low degree first, for the thirteen
# discriminants of class number one and a few of class number two.
HILBERT_CLASS_POLYNOMIALS: dict[int, tuple[int, ...]] = {
    -3: (0, 1),
    -4: (-1728, 1),
    -7: (3375, 1),
    -8: (-8000, 1),
    -11: (32768, 1),
    -12: (-54000, 1),
    -16: (-287496, 1),
    -19: (884736, 1),
    -27: (12288000, 1),
    -28: (-16581375, 1),
    -43: (884736000, 1),
    -67: (147197952000, 1),
    -163: (262537412640768000, 1),
    -15: (-121287375, 191025, 1),
    -20: (-681472000, -1264000, 1),
    -24: (14670139392, -4834944, 1),
    -35: (-134217728000, 117964800, 1),
    -40: (9103145472000, -425692800, 1),
}

CLASS_NUMBER_ONE = {D: -H[0] for D, H in HILBERT_CLASS_POLYNOMIALS.items() if len(H) == 2}


def _eval(H, x):
    acc = 0
    for c in reversed(H):
        acc = acc * x + c
    return acc


def cm_discriminant(j) -> int | None:
    """The CM discriminant of j (rational or in a quadratic field), if tabulated."""
    if isinstance(j, QuadFieldElem):
        for D, H in HILBERT_CLASS_POLYNOMIALS.items():
            if not _eval(H, j):
                return D
        return None
    j = Fraction(j)
    for D, H in HILBERT_CLASS_POLYNOMIALS.items():
        if len(H) == 2 and _eval(H, j) == 0:
            return D
    return None


def fundamental_part(D: int) -> tuple[int, int]:
    """(D0, f) with D = D0 f^2 and D0 a fundamental discriminant."""
    s = squarefree_part(D)
    D0 = s if s % 4 == 1 else 4 * s
    f2 = D // D0
    f = 1
    for p, e in factor(f2).items():
        f *= p ** (e // 2)
    return D0, f


def cm_field_d(D: int) -> int:
    """The squarefree d with Q(sqrt D) = Q(sqrt d)."""
    return squarefree_part(D)


@lru_cache(maxsize=None)
def validate_cm_table(modpolys=None) -> None:
    """Check each polynomial: monic integral, class-number-one roots integral,
    and the two roots of each class-number-two polynomial linked by an isogeny
    of the prime degree represented by the non-principal class."""
    from .arith.quadfield import Q
    from .isogeny import ModPolyDB

    db = modpolys or ModPolyDB.default()
    links = {-15: 2, -20: 2, -24: 2, -35: 5, -40: 2}
    # class number one: self-isogenies by principal primes, and orders of one field
    selfloops = {-3: 3, -4: 2, -7: 2, -8: 2, -11: 11, -12: 3, -16: 5, -19: 19, -27: 7, -28: 11}
    ladders = {(-3, -12): 2, (-3, -27): 3, (-4, -16): 2, (-7, -28): 2}
    for D, l in selfloops.items():
        j = CLASS_NUMBER_ONE[D]
        if db.evaluate(l, j, j):
            raise ValueError(f"CM {D}: j = {j} lacks the expected {l}-self-isogeny")
    for (D1, D2), l in ladders.items():
        if db.evaluate(l, CLASS_NUMBER_ONE[D1], CLASS_NUMBER_ONE[D2]):
            raise ValueError(f"CM {D1}, {D2}: expected {l}-isogeny missing")
    for D, H in HILBERT_CLASS_POLYNOMIALS.items():
        if H[-1] != 1:
            raise ValueError(f"H_{D} is not monic")
        if len(H) == 3:
            c, b, _ = H
            disc = b * b - 4 * c
            K = Q(squarefree_part(disc))
            s = disc // K.d
            r = int(round(abs(s) ** 0.5))
            if r * r != s:
                raise ValueError(f"H_{D}: discriminant {disc} not of the expected shape")
            j1 = K(Fraction(-b, 2), Fraction(r, 2))
            j2 = j1.conj()
            if _eval(H, j1) or db.evaluate(links[D], j1, j2):
                raise ValueError(f"H_{D}: roots fail the isogeny check")
