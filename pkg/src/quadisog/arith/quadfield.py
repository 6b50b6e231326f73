"""Exact arithmetic in Q(sqrt d).

Elements are stored as a pair of reduced fractions ``(a, b)`` standing for
``a + b*w`` with ``w = sqrt(d)``.  ``d = 1`` is accepted as a degenerate
field equal to Q, in which every element is normalised to ``b = 0``.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .primes import factor, fundamental_discriminant, is_squarefree


@dataclass(frozen=True)
class QuadField:
    d: int
    disc: int = field(init=False, compare=False)
    ramified_primes: tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        d = int(self.d)
        if d == 1:
            object.__setattr__(self, "disc", 1)
            object.__setattr__(self, "ramified_primes", ())
            return
        if d == 0 or not is_squarefree(d):
            raise ValueError(f"d = {d} must be a squarefree integer other than 0")
        disc = fundamental_discriminant(d)
        object.__setattr__(self, "disc", disc)
        object.__setattr__(self, "ramified_primes", tuple(factor(disc)))

    @property
    def is_rational(self) -> bool:
        return self.d == 1

    def __call__(self, a=0, b=0) -> "QuadFieldElem":
        return QuadFieldElem(a, b, self)

    @property
    def zero(self) -> "QuadFieldElem":
        return QuadFieldElem(0, 0, self)

    @property
    def one(self) -> "QuadFieldElem":
        return QuadFieldElem(1, 0, self)

    @property
    def gen(self) -> "QuadFieldElem":
        return QuadFieldElem(0, 1, self)

    def coerce(self, x) -> "QuadFieldElem":
        if isinstance(x, QuadFieldElem):
            if x.field != self:
                if x.b == 0:
                    return QuadFieldElem(x.a, 0, self)
                raise ValueError(f"element of Q(sqrt {x.field.d}) is not in Q(sqrt {self.d})")
            return x
        return QuadFieldElem(Fraction(x), 0, self)

    def parse(self, text: str) -> "QuadFieldElem":
        """Parse an expression in integers, ``w`` (= sqrt d), ``+ - * / **``.

        ``sqrt(d)`` is accepted as a synonym of ``w`` and a coefficient may be
        glued to ``w`` as in ``1/2w``.
        """
        return _parse(self, text)

    def __repr__(self):
        return f"QuadField({self.d})"


@lru_cache(maxsize=None)
def Q(d: int) -> QuadField:
    """Cached field constructor."""
    return QuadField(d)


class QuadFieldElem:
    __slots__ = ("a", "b", "field")

    def __init__(self, a, b, field: QuadField):
        a = a if isinstance(a, Fraction) else Fraction(a)
        b = b if isinstance(b, Fraction) else Fraction(b)
        if field.d == 1:
            a, b = a + b, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("QuadFieldElem is immutable")

    # -- structure -------------------------------------------------------
    def _other(self, y):
        if isinstance(y, QuadFieldElem):
            if y.field.d != self.field.d:
                if y.b == 0:
                    return y.a, Fraction(0)
                if self.b == 0:
                    return NotImplemented
                raise ValueError("mixing elements of different quadratic fields")
            return y.a, y.b
        if isinstance(y, (int, Fraction)):
            return Fraction(y), Fraction(0)
        return NotImplemented

    def __add__(self, y):
        o = self._other(y)
        if o is NotImplemented:
            return y.__radd__(self) if isinstance(y, QuadFieldElem) else NotImplemented
        return QuadFieldElem(self.a + o[0], self.b + o[1], self.field)

    __radd__ = __add__

    def __neg__(self):
        return QuadFieldElem(-self.a, -self.b, self.field)

    def __sub__(self, y):
        o = self._other(y)
        if o is NotImplemented:
            return (-y).__radd__(self) if isinstance(y, QuadFieldElem) else NotImplemented
        return QuadFieldElem(self.a - o[0], self.b - o[1], self.field)

    def __rsub__(self, y):
        return (-self).__add__(y)

    def __mul__(self, y):
        o = self._other(y)
        if o is NotImplemented:
            return y.__rmul__(self) if isinstance(y, QuadFieldElem) else NotImplemented
        c, e = o
        a, b, d = self.a, self.b, self.field.d
        if e == 0:
            return QuadFieldElem(a * c, b * c, self.field)
        return QuadFieldElem(a * c + d * b * e, a * e + b * c, self.field)

    __rmul__ = __mul__

    def conj(self) -> "QuadFieldElem":
        return QuadFieldElem(self.a, -self.b, self.field)

    def norm(self) -> Fraction:
        return self.a * self.a - self.field.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> "QuadFieldElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in a quadratic field")
        return QuadFieldElem(self.a / n, -self.b / n, self.field)

    def __truediv__(self, y):
        if isinstance(y, (int, Fraction)):
            y = Fraction(y)
            return QuadFieldElem(self.a / y, self.b / y, self.field)
        if isinstance(y, QuadFieldElem):
            return self * y.inverse()
        return NotImplemented

    def __rtruediv__(self, y):
        return self.inverse() * y

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        r = QuadFieldElem(1, 0, self.field)
        x = self
        while n:
            if n & 1:
                r = r * x
            x = x * x
            n >>= 1
        return r

    def __eq__(self, y):
        if isinstance(y, QuadFieldElem):
            return self.a == y.a and self.b == y.b and (self.b == 0 or self.field.d == y.field.d)
        if isinstance(y, (int, Fraction)):
            return self.b == 0 and self.a == y
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.field.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def to_rational(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is not rational")
        return self.a

    def denominator(self) -> int:
        """Least positive m with m*x having integer coordinates in the (1, w) basis."""
        from math import lcm

        return lcm(self.a.denominator, self.b.denominator)

    def __float__(self):
        if self.field.d < 0 and self.b:
            raise TypeError("non-real element")
        return float(self.a) + float(self.b) * self.field.d ** 0.5

    def sort_key(self):
        return (self.a, self.b)

    def __repr__(self):
        return str(self)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        bs = "w" if self.b == 1 else "-w" if self.b == -1 else f"{self.b}*w"
        if self.a == 0:
            return bs
        if bs.startswith("-"):
            return f"{self.a} - {bs[1:]}"
        return f"{self.a} + {bs}"


_GLUE = re.compile(r"(\d)\s*(w|sqrt)")


def _parse(field: QuadField, text: str) -> QuadFieldElem:
    src = _GLUE.sub(r"\1*\2", text.strip())
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return field.coerce(node.value)
        if isinstance(node, ast.Name) and node.id == "w":
            return field.gen
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt":
            if len(node.args) != 1:
                raise ValueError("sqrt takes one argument")
            arg = ev(node.args[0])
            if arg.b or arg.a != field.d:
                raise ValueError(f"only sqrt({field.d}) is available in {field}")
            return field.gen
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            l, r = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return l + r
            if isinstance(node.op, ast.Sub):
                return l - r
            if isinstance(node.op, ast.Mult):
                return l * r
            if isinstance(node.op, ast.Div):
                return l / r
            if isinstance(node.op, ast.Pow):
                if r.b or r.a.denominator != 1:
                    raise ValueError("exponent must be an integer")
                return l ** int(r.a)
        raise ValueError(f"cannot parse {text!r}")

    return ev(tree)
