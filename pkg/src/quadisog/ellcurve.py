"""Elliptic curves over Q: invariants, Tate's algorithm, point counts, torsion.

Only what the rank oracle and the isogeny code need; models are integral
Weierstrass equations ``[a1, a2, a3, a4, a6]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .arith.primes import divisors, factor, kronecker


def _val(n: int, p: int) -> int:
    if n == 0:
        return 10**9
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class LocalData:
    p: int
    kodaira: str
    conductor_exponent: int
    reduction: str  # good, split, nonsplit, additive
    model: tuple | None = None  # a model with good reduction at p, when there is one

    @property
    def ap(self) -> int | None:
        return {"split": 1, "nonsplit": -1, "additive": 0}.get(self.reduction)


class Curve:
    """Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Z."""

    def __init__(self, ainvs):
        ainvs = [int(a) for a in ainvs]
        if len(ainvs) != 5:
            raise ValueError("need five a-invariants")
        self.ainvs = tuple(ainvs)
        if self.disc == 0:
            raise ValueError(f"singular model {ainvs}")

    def __repr__(self):
        return f"Curve({list(self.ainvs)})"

    # -- invariants ------------------------------------------------------
    @cached_property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @cached_property
    def c4(self) -> int:
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @cached_property
    def c6(self) -> int:
        b2, b4, b6, _ = self.b_invariants
        return -(b2**3) + 36 * b2 * b4 - 216 * b6

    @cached_property
    def disc(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @cached_property
    def j_invariant(self) -> Fraction:
        return Fraction(self.c4**3, self.disc)

    @classmethod
    def from_c4c6(cls, c4: int, c6: int) -> "Curve":
        """Integral short model y^2 = x^3 - 27 c4 x - 54 c6."""
        return cls([0, 0, 0, -27 * c4, -54 * c6])

    def quadratic_twist(self, D: int) -> "Curve":
        """A (not necessarily minimal) model of the twist by Q(sqrt D)."""
        return Curve.from_c4c6(self.c4 * D * D, self.c6 * D**3)

    # -- local data ------------------------------------------------------
    def local_data(self, p: int) -> LocalData:
        return _tate(self.ainvs, p)

    @cached_property
    def bad_primes(self) -> list[int]:
        return list(factor(self.disc))

    @cached_property
    def conductor(self) -> int:
        n = 1
        for p in self.bad_primes:
            n *= p ** self.local_data(p).conductor_exponent
        return n

    # -- point counting --------------------------------------------------
    def count_points(self, p: int) -> int:
        """#E(F_p) of the reduction of this model by direct enumeration."""
        a1, a2, a3, a4, a6 = (a % p for a in self.ainvs)
        if p == 2:
            n = 1
            for x in range(2):
                for y in range(2):
                    if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2 == 0:
                        n += 1
            return n
        b2, b4, b6, _ = self.b_invariants
        xs = np.arange(p, dtype=np.int64)
        f = (((4 * xs + b2 % p) % p * xs + (2 * b4) % p) % p * xs + b6 % p) % p
        sq = np.zeros(p, dtype=np.int64)
        sq[(xs * xs) % p] = 1
        # 1 + legendre(f) solutions in y for each x
        nsol = np.where(f == 0, 1, np.where(sq[f] == 1, 2, 0))
        return 1 + int(nsol.sum())

    def ap(self, p: int) -> int:
        """a_p from point counting at good p, from the reduction type otherwise."""
        if self.disc % p == 0:
            ld = self.local_data(p)
            if ld.reduction != "good":
                return ld.ap
            return p + 1 - Curve(ld.model).count_points(p)
        return p + 1 - self.count_points(p)

    # -- rational points -------------------------------------------------
    def is_on(self, P) -> bool:
        if P is None:
            return True
        x, y = P
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6

    def neg(self, P):
        if P is None:
            return None
        a1, _, a3, _, _ = self.ainvs
        x, y = P
        return (x, -y - a1 * x - a3)

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        a1, a2, a3, a4, a6 = self.ainvs
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return None
            lam = Fraction(3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1, 2 * y1 + a1 * x1 + a3)
        else:
            lam = Fraction(y2 - y1) / (x2 - x1)
        nu = y1 - lam * x1
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return (x3, y3)

    def mul(self, n: int, P):
        if n < 0:
            return self.mul(-n, self.neg(P))
        R, Qp = None, P
        while n:
            if n & 1:
                R = self.add(R, Qp)
            Qp = self.add(Qp, Qp)
            n >>= 1
        return R

    def point_order(self, P, bound: int = 12) -> int | None:
        R = P
        for n in range(1, bound + 1):
            if R is None:
                return n
            R = self.add(R, P)
        return None

    @cached_property
    def torsion_points(self) -> list:
        """All rational torsion points (including None for O), via Nagell-Lutz."""
        A, B = -27 * self.c4, -54 * self.c6
        D = 4 * A**3 + 27 * B * B
        ys = [0] + [y for y in divisors(D) if D % (y * y) == 0]
        found = []
        for Y in ys:
            for sY in ((Y,) if Y == 0 else (Y, -Y)):
                for X in _integer_roots_cubic(A, B - sY * sY):
                    found.append((X, sY))
        b2 = self.b_invariants[0]
        a1, _, a3, _, _ = self.ainvs
        pts = [None]
        for X, Y in found:
            x = Fraction(X - 3 * b2, 36)
            y = (Fraction(Y, 108) - a1 * x - a3) / 2
            P = (x, y)
            if self.is_on(P) and self.point_order(P) is not None:
                pts.append(P)
        return pts

    @cached_property
    def torsion_order(self) -> int:
        return len(self.torsion_points)

    # -- real period -----------------------------------------------------
    @cached_property
    def real_period(self) -> float:
        """Omega = integral of |dx/(2y + a1 x + a3)| over E(R), by AGM."""
        b2, b4, b6, _ = self.b_invariants
        roots = np.roots([4.0, float(b2), 2.0 * b4, float(b6)])
        real = sorted(r.real for r in roots if abs(r.imag) < 1e-9 * max(1.0, abs(r)))
        if self.disc > 0:
            e3, e2, e1 = real
            return 2 * math.pi / _agm(math.sqrt(e1 - e3), math.sqrt(e1 - e2))
        e1 = max(real)
        # remaining complex pair z, conj(z) with 4(x - e1)(x^2 - 2Re(z)x + |z|^2)
        a = 3 * e1 + b2 / 4
        b = math.sqrt(3 * e1 * e1 + b2 * e1 / 2 + b4 / 2)
        return 2 * math.pi / _agm(2 * math.sqrt(b), math.sqrt(2 * b + a))


def _agm(a: float, b: float) -> float:
    for _ in range(100):
        if abs(a - b) <= 1e-16 * abs(a):
            break
        a, b = (a + b) / 2, math.sqrt(a * b)
    return a


def _integer_roots_cubic(A: int, C: int) -> list[int]:
    """Integer roots of X^3 + A X + C."""
    out = set()
    for r in np.roots([1.0, 0.0, float(A), float(C)]):
        if abs(r.imag) > 1e-6 * max(1.0, abs(r)):
            continue
        base = int(round(r.real))
        for X in range(base - 2, base + 3):
            if X**3 + A * X + C == 0:
                out.add(X)
    return sorted(out)


# ---------------------------------------------------------------------------
# Tate's algorithm


def _transform(a, r=0, s=0, t=0):
    a1, a2, a3, a4, a6 = a
    return (
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    )


def _binv(a):
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return b2, b4, b6, b8, c4, c6, disc


def _tate(ainvs, p: int) -> LocalData:
    a = tuple(ainvs)
    while True:
        b2, b4, b6, b8, c4, c6, disc = _binv(a)
        n = _val(disc, p)
        if n == 0:
            return LocalData(p, "I0", 0, "good", a)
        # move the singular point to (0, 0)
        if p == 2:
            if b2 % 2 == 0:
                r = a[3] % 2
                t = (r * (1 + a[1] + a[3]) + a[4]) % 2
            else:
                r = a[2] % 2
                t = (r + a[3]) % 2
        elif p == 3:
            r = (-b6) % 3 if b2 % 3 == 0 else (-b2 * b4) % 3
            t = (a[0] * r + a[2]) % 3
        else:
            inv12 = pow(12, -1, p)
            if c4 % p == 0:
                r = (-inv12 * b2) % p
            else:
                r = (-inv12 * (c6 * pow(c4, -1, p) + b2)) % p
            t = (-pow(2, -1, p) * (a[0] * r + a[2])) % p
        a = _transform(a, r=r, t=t)
        b2, b4, b6, b8, c4, c6, disc = _binv(a)
        assert a[2] % p == 0 and a[3] % p == 0 and a[4] % p == 0
        if b2 % p:
            if p == 2:
                split = a[1] % 2 == 0
            else:
                split = kronecker(b2, p) == 1
            return LocalData(p, f"I{n}", 1, "split" if split else "nonsplit")
        if _val(a[4], p) < 2:
            return LocalData(p, "II", n, "additive")
        if _val(b8, p) < 3:
            return LocalData(p, "III", n - 1, "additive")
        if _val(b6, p) < 3:
            return LocalData(p, "IV", n - 2, "additive")
        # make p | a1, a2; p^2 | a3, a4; p^3 | a6
        if p == 2:
            s = a[1] % 2
            t = 2 * ((a[4] // 4) % 2)
        else:
            half = pow(2, -1, p)
            s = (-a[0] * half) % p
            t = (-(a[2] // p) * half) % p * p
        a = _transform(a, s=s)
        a = _transform(a, t=t)
        pp = p * p
        assert a[0] % p == 0 and a[1] % p == 0 and a[2] % pp == 0 and a[3] % pp == 0 and a[4] % (pp * p) == 0, a
        b = a[1] // p
        c = a[3] // pp
        d = a[4] // (pp * p)
        w = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
        x = 3 * c - b * b
        if w % p:
            return LocalData(p, "I0*", n - 4, "additive")
        if x % p:
            # I_m^*: move the double root to 0 and peel off layers
            if p == 2:
                r0 = c % 2
            elif p == 3:
                r0 = (b * c) % 3
            else:
                r0 = ((b * c - 9 * d) * pow(2 * x, -1, p)) % p
            a = _transform(a, r=p * r0)
            ix, iy, mx, my = 3, 3, pp, pp
            while True:
                xa2 = a[1] // p
                xa3 = a[2] // my
                xa4 = a[3] // (p * mx)
                xa6 = a[4] // (mx * my)
                if (xa3 * xa3 + 4 * xa6) % p:
                    break
                tt = my * (xa6 % 2) if p == 2 else my * ((-xa3 * pow(2, -1, p)) % p)
                a = _transform(a, t=tt)
                my *= p
                iy += 1
                xa2 = a[1] // p
                xa3 = a[2] // my
                xa4 = a[3] // (p * mx)
                xa6 = a[4] // (mx * my)
                if (xa4 * xa4 - 4 * xa2 * xa6) % p:
                    break
                rr = mx * ((xa6 * xa2) % 2) if p == 2 else mx * ((-xa4 * pow(2 * xa2, -1, p)) % p)
                a = _transform(a, r=rr)
                mx *= p
                ix += 1
            m = ix + iy - 5
            return LocalData(p, f"I{m}*", n - m - 4, "additive")
        # triple root: move it to 0
        if p == 2:
            r0 = b % 2
        elif p == 3:
            r0 = (-d) % 3
        else:
            r0 = (-b * pow(3, -1, p)) % p
        a = _transform(a, r=p * r0)
        x3 = a[2] // pp
        x6 = a[4] // (pp * pp)
        if (x3 * x3 + 4 * x6) % p:
            return LocalData(p, "IV*", n - 6, "additive")
        tt = pp * (x6 % 2) if p == 2 else pp * ((-x3 * pow(2, -1, p)) % p)
        a = _transform(a, t=tt)
        if _val(a[3], p) < 4:
            return LocalData(p, "III*", n - 7, "additive")
        if _val(a[4], p) < 6:
            return LocalData(p, "II*", n - 8, "additive")
        # non-minimal at p: scale down and start again
        a = (a[0] // p, a[1] // pp, a[2] // (pp * p), a[3] // (pp * pp), a[4] // (pp * pp * pp))
