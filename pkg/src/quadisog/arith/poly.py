"""Dense univariate polynomials over Q(sqrt d) and small helpers over F_p.

Coefficients are kept low degree first.  Polynomials over Q use the
degenerate field ``Q(1)``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

from .quadfield import Q, QuadField, QuadFieldElem


class UniPoly:
    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Iterable, field: QuadField | None = None):
        field = field if field is not None else Q(1)
        cs = [field.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def from_roots(cls, roots: Sequence, field: QuadField) -> "UniPoly":
        p = cls([1], field)
        for r in roots:
            p = p * cls([-field.coerce(r), 1], field)
        return p

    @classmethod
    def x(cls, field: QuadField) -> "UniPoly":
        return cls([0, 1], field)

    # -- basic queries ---------------------------------------------------
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> QuadFieldElem:
        return self.coeffs[-1]

    def __getitem__(self, i) -> QuadFieldElem:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            cs = f"({c})" if c.b else str(c)
            terms.append(cs if i == 0 else f"{cs}*Y^{i}")
        return " + ".join(terms)

    # -- arithmetic ------------------------------------------------------
    def _lift(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly([other], self.field)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self[i] + other[i] for i in range(n)], self.field)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            c = self.field.coerce(other)
            return UniPoly([a * c for a in self.coeffs], self.field)
        if not self.coeffs or not other.coeffs:
            return UniPoly([], self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out, self.field)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        r = UniPoly([1], self.field)
        x = self
        while n:
            if n & 1:
                r = r * x
            x = x * x
            n >>= 1
        return r

    def __divmod__(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree()
        inv = other.lc().inverse()
        quot = [self.field.zero] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv
            if not c:
                continue
            quot[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = rem[k - dq + j] - c * b
        return UniPoly(quot, self.field), UniPoly(rem[:dq], self.field)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly([c * i for i, c in enumerate(self.coeffs)][1:], self.field)

    def monic(self) -> "UniPoly":
        return self * self.lc().inverse()

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def squarefree_part(self) -> "UniPoly":
        g = self.gcd(self.derivative())
        return self // g if g.degree() > 0 else self

    def conj(self) -> "UniPoly":
        return UniPoly([c.conj() for c in self.coeffs], self.field)


# ---------------------------------------------------------------------------
# Polynomials over F_p as lists of ints, low degree first.


def fp_trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def fp_mul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return fp_trim([c % p for c in out])


def fp_divmod(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    f = [c % p for c in f]
    g = fp_trim([c % p for c in g])
    if not g:
        raise ZeroDivisionError
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - dg, 0)
    for k in range(len(f) - 1, dg - 1, -1):
        c = f[k] * inv % p
        if c:
            q[k - dg] = c
            for j, b in enumerate(g):
                f[k - dg + j] = (f[k - dg + j] - c * b) % p
    return fp_trim(q), fp_trim(f[:dg])


def fp_gcd(f: list[int], g: list[int], p: int) -> list[int]:
    f, g = fp_trim([c % p for c in f]), fp_trim([c % p for c in g])
    while g:
        f, g = g, fp_divmod(f, g, p)[1]
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def fp_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = fp_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = fp_divmod(fp_mul(result, base, p), mod, p)[1]
        base = fp_divmod(fp_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def fp_derivative(f: list[int], p: int) -> list[int]:
    return fp_trim([i * c % p for i, c in enumerate(f)][1:])


def fp_roots(f: list[int], p: int, rng: random.Random | None = None) -> list[int]:
    """Distinct roots in F_p of f (p odd prime)."""
    f = fp_trim([c % p for c in f])
    if len(f) <= 1:
        return []
    rng = rng or random.Random(p)
    xp = fp_powmod([0, 1], p, f, p)
    h = fp_gcd(f, _sub_x(xp, p), p)
    roots: list[int] = []
    stack = [h]
    while stack:
        g = stack.pop()
        if len(g) <= 1:
            continue
        if len(g) == 2:
            roots.append((-g[0] * pow(g[1], -1, p)) % p)
            continue
        while True:
            a = rng.randrange(p)
            t = fp_powmod([a, 1], (p - 1) // 2, g, p) or [0]
            t[0] = (t[0] - 1) % p
            u = fp_gcd(g, fp_trim(t), p)
            if 1 < len(u) < len(g):
                stack.append(u)
                stack.append(fp_divmod(g, u, p)[0])
                break
    return sorted(roots)


def _sub_x(xp: list[int], p: int) -> list[int]:
    r = list(xp) + [0] * max(0, 2 - len(xp))
    r[1] = (r[1] - 1) % p
    return fp_trim(r)


def eval_fp(f: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def frac_mod(x: Fraction, m: int) -> int:
    return x.numerator * pow(x.denominator, -1, m) % m
