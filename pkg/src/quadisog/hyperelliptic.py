"""Hyperelliptic models of X0(N) and the primes that stay unramified in fields of new points.

A model y^2 = F(x) comes from a rational basis of S_2(Gamma_0(N)): with the
basis in echelon form, x = f_{g-1}/f_g and y = q dx/dq / f_g satisfy a
polynomial relation of degree 2g + 2.  Only levels whose cusp forms all come
from elliptic curves (newforms and their q -> q^m images) are built this way.

A quadratic point of X0(N) lying over x0 in P^1(Q) is defined over Q(sqrt F(x0)).
If F mod p (p odd) has no zero on P^1(F_p), F(x0) has even p-adic valuation for
every x0, so p cannot ramify there.  Such p form the derived unramified list.

Where the hyperelliptic involution is w_N the Weierstrass points are the CM
points by orders in which sqrt(-N) is primitive.  For p split in Q(sqrt -N)
these reduce to F_p-points exactly when p is a norm from such an order, which
gives an independent second route on split primes.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .arith.primes import factor, kronecker, primes_up_to
from .ellcurve import Curve

# Newforms spanning S_2(N): (label, a-invariants, shifts m for f(q^m)).
CUSP_SPACES: dict[int, tuple[tuple[str, tuple, tuple], ...]] = {
    22: (("11a1", (0, -1, 1, -10, -20), (1, 2)),),
    26: (("26a1", (1, 0, 1, -5, -8), (1,)), ("26b1", (1, -1, 1, -3, 3), (1,))),
    28: (("14a1", (1, 0, 1, 4, -6), (1, 2)),),
    30: (("15a1", (1, 1, 1, -10, -10), (1, 2)), ("30a1", (1, 0, 1, 1, 2), (1,))),
    33: (("11a1", (0, -1, 1, -10, -20), (1, 3)), ("33a1", (1, 1, 0, -11, 0), (1,))),
    37: (("37a1", (0, 0, 1, -1, 0), (1,)), ("37b1", (0, 1, 1, -23, -50), (1,))),
    40: (("20a1", (0, 1, 0, 4, 4), (1, 2)), ("40a1", (0, 0, 0, -7, -6), (1,))),
    48: (("24a1", (0, -1, 0, -4, 4), (1, 2)), ("48a1", (0, 1, 0, -4, -4), (1,))),
    50: (("50a1", (1, 0, 1, -1, -2), (1,)), ("50b1", (1, 1, 1, -3, 1), (1,))),
}

# Levels whose hyperelliptic involution is w_N.
W_N_HYPERELLIPTIC = frozenset({23, 26, 29, 31, 35, 39, 41, 47, 50, 59, 71})

PREC = 160


@lru_cache(maxsize=None)
def newform_coefficients(ainvs: tuple, n: int) -> tuple[int, ...]:
    """a_0 .. a_n of the newform attached to the curve (a_0 = 0)."""
    E = Curve(ainvs)
    a = [0] * (n + 1)
    if n >= 1:
        a[1] = 1
    bad = set(E.bad_primes)
    for p in primes_up_to(n):
        ap = E.ap(p)
        pk, prev, cur = p, 1, ap
        while pk <= n:
            a[pk] = cur
            prev, cur = cur, ap * cur - (0 if p in bad else p * prev)
            pk *= p
    for m in range(6, n + 1):
        f = factor(m)
        if len(f) > 1:
            v = 1
            for p, e in f.items():
                v *= a[p**e]
            a[m] = v
    return tuple(a)


def cusp_form_basis(N: int, prec: int = PREC) -> list[list[int]]:
    """q-expansions (coefficients of q^0..q^(prec-1)) spanning S_2(N)."""
    if N not in CUSP_SPACES:
        raise KeyError(f"no elliptic description of S_2({N})")
    out = []
    for label, ainvs, shifts in CUSP_SPACES[N]:
        E = Curve(ainvs)
        if N % E.conductor:
            raise ValueError(f"{label} has conductor {E.conductor}, not dividing {N}")
        a = newform_coefficients(ainvs, prec)
        for m in shifts:
            s = [0] * prec
            for i in range(1, prec):
                if i * m < prec:
                    s[i * m] = a[i]
            out.append(s)
    return out


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    rows = [r[:] for r in rows]
    piv: list[int] = []
    r = 0
    for c in range(len(rows[0]) if rows else 0):
        k = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                t = rows[i][c]
                rows[i] = [x - t * y for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    return rows[:r], piv


def _mul(a, b, n):
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for k in range(min(len(b), n - i)):
                out[i + k] += x * b[k]
    return out


def _inv(a, n):
    out = [Fraction(0)] * n
    out[0] = 1 / Fraction(a[0])
    for i in range(1, n):
        out[i] = -sum(a[k] * out[i - k] for k in range(1, min(i, len(a) - 1) + 1)) * out[0]
    return out


def hyperelliptic_model(N: int, prec: int = PREC) -> tuple[int, ...]:
    """Integral coefficients (low degree first) of F with X0(N): y^2 = F(x).

    Raises ArithmeticError when the q-expansions do not determine F, which
    also happens if X0(N) is not hyperelliptic.
    """
    basis = cusp_form_basis(N, prec)
    g = len(basis)
    if g < 2:
        raise ValueError(f"X0({N}) has genus {g}")
    E, piv = _rref([[Fraction(x) for x in b] for b in basis])
    fg, fg1 = E[-1], E[-2]
    vg, v1 = piv[-1], piv[-2]
    s = vg - v1
    n = prec - vg - 1
    B = fg[vg : vg + n]
    X = _mul(fg1[v1 : v1 + n], _inv(B, n), n)  # x = q^-s X(q)
    dX = [(k - s) * X[k] for k in range(n)]
    Y = _mul(dX, _inv(B, n), n)  # y = q^(-s-vg) Y(q)
    deg = 2 * g + 2
    Y2 = _mul(Y, Y, n)
    vy = -2 * s - 2 * vg
    cols = []
    Xk = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for k in range(deg + 1):
        cols.append((-k * s, Xk))
        Xk = _mul(Xk, X, n)
    lo = min(vy, -deg * s)
    hi = min(v + n for v, _ in cols + [(vy, Y2)])
    rows = []
    for e in range(lo, hi):
        row = [ser[e - v] if e - v >= 0 else Fraction(0) for v, ser in cols]
        row.append(Y2[e - vy] if e - vy >= 0 else Fraction(0))
        rows.append(row)
    R, piv2 = _rref(rows)
    if deg + 1 in piv2 or len(piv2) < deg + 1:
        raise ArithmeticError(f"no hyperelliptic relation found for X0({N})")
    sol = [R[i][-1] for i in range(deg + 1)]
    den = 1
    for x in sol:
        den = math.lcm(den, x.denominator)
    F = [int(x * den * den) for x in sol]  # a square multiple keeps the field Q(sqrt F(x0))
    cont = 0
    for c in F:
        cont = math.gcd(cont, c)
    # keep the square class of F: divide by the largest square in the content
    sq = 1
    for p, e in factor(cont).items():
        sq *= p ** (e // 2)
    return tuple(c // (sq * sq) for c in F)


def _has_root_p1(F: tuple[int, ...], p: int) -> bool:
    if F[-1] % p == 0:
        return True  # the point at infinity
    for x in range(p):
        acc = 0
        for c in reversed(F):
            acc = (acc * x + c) % p
        if acc == 0:
            return True
    return False


def model_unramified_primes(F: tuple[int, ...], bound: int = 100) -> list[int]:
    """Odd primes p < bound with F primitive at p and no zero of F on P^1(F_p)."""
    out = []
    for p in primes_up_to(bound - 1):
        if p == 2 or all(c % p == 0 for c in F):
            continue
        if not _has_root_p1(F, p):
            out.append(p)
    return out


def is_norm_from_primitive_order(N: int, p: int) -> bool:
    """p = N(a) for some a in an order of Q(sqrt -N) in which sqrt(-N) is primitive."""
    for y in range(0, math.isqrt(4 * p // N) + 1):
        r = p - N * y * y
        if r >= 0 and math.isqrt(r) ** 2 == r:
            return True
        if N % 4 == 3 and y % 2 == 1:
            r4 = 4 * p - N * y * y
            if r4 >= 0:
                x = math.isqrt(r4)
                if x * x == r4 and x % 2 == 1:
                    return True
    return False


def cm_unramified_primes(N: int, bound: int = 100) -> list[int]:
    """Odd split primes p < bound, p not dividing N, not a norm from the w_N-fixed orders."""
    return [
        p
        for p in primes_up_to(bound - 1)
        if p != 2 and N % p and kronecker(-N, p) == 1 and not is_norm_from_primitive_order(N, p)
    ]


def derive_unramified_lists(levels=(26, 30, 35, 39, 40, 48, 50), bound: int = 100) -> dict[int, dict]:
    """{N: {"primes": [...], "route": str, "model": F or None}} for the given levels.

    When both routes apply they must agree on split primes; a disagreement raises.
    """
    out = {}
    for N in levels:
        model = None
        primes: set[int] = set()
        routes = []
        if N in CUSP_SPACES:
            model = hyperelliptic_model(N)
            primes |= set(model_unramified_primes(model, bound))
            routes.append("model")
        if N in W_N_HYPERELLIPTIC:
            cm = set(cm_unramified_primes(N, bound))
            if model is not None:
                split = {p for p in primes if N % p and kronecker(-N, p) == 1}
                if split != cm:
                    raise ArithmeticError(f"X0({N}): model and CM routes disagree on split primes")
            primes |= cm
            routes.append("cm-split")
        if not routes:
            raise KeyError(f"no route for level {N}")
        out[N] = {"primes": sorted(primes), "route": "+".join(routes), "model": model}
    return out
