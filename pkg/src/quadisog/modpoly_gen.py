"""Classical modular polynomials from q-expansions.

Phi_l(X, j(q)) = (X - j(q^l)) * prod_k (X - j(zeta^k q^(1/l))).  The power
sums of the l conjugates j(zeta^k q^(1/l)) are l times the q^(ln) part of
j(q)^m, so the product comes from Newton's identities.  Each coefficient in X
is then a Laurent series in q with pole order at most l + 1 and is rewritten
as a polynomial in j(q) by peeling off leading poles.

Run ``python -m quadisog.modpoly_gen OUTDIR 2 3 5 ...`` to write files.
"""

from __future__ import annotations

import sys
from pathlib import Path


class Laurent:
    """Truncated Laurent series: coeffs[i] is the coefficient of q^(val + i), known below prec."""

    __slots__ = ("val", "coeffs")

    def __init__(self, val: int, coeffs: list[int]):
        self.val = val
        self.coeffs = coeffs

    @property
    def prec(self) -> int:
        return self.val + len(self.coeffs)

    def coeff(self, e: int) -> int:
        i = e - self.val
        if i < 0:
            return 0
        if i >= len(self.coeffs):
            raise IndexError(f"q^{e} is beyond the precision q^{self.prec}")
        return self.coeffs[i]

    def truncate(self, prec: int) -> "Laurent":
        return Laurent(self.val, self.coeffs[: max(0, prec - self.val)])

    def __mul__(self, other: "Laurent") -> "Laurent":
        if isinstance(other, int):
            return Laurent(self.val, [c * other for c in self.coeffs])
        prec = min(self.prec + other.val, other.prec + self.val)
        val = self.val + other.val
        n = prec - val
        a, b = self.coeffs, other.coeffs
        out = [0] * max(n, 0)
        for i, x in enumerate(a[:n]):
            if x:
                lim = min(len(b), n - i)
                for k in range(lim):
                    out[i + k] += x * b[k]
        return Laurent(val, out)

    __rmul__ = __mul__

    def __add__(self, other: "Laurent") -> "Laurent":
        val = min(self.val, other.val)
        prec = min(self.prec, other.prec)
        return Laurent(val, [self._get(e) + other._get(e) for e in range(val, prec)])

    def __neg__(self):
        return Laurent(self.val, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def _get(self, e):
        i = e - self.val
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def exact_div(self, k: int) -> "Laurent":
        out = []
        for c in self.coeffs:
            if c % k:
                raise ArithmeticError("series not divisible")
            out.append(c // k)
        return Laurent(self.val, out)


def _sigma(k: int, n: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def j_series(prec: int) -> Laurent:
    """j(q) = E4^3 / Delta to precision q^prec."""
    n = prec + 2
    e4 = [1] + [240 * _sigma(3, m) for m in range(1, n)]
    # Delta / q = prod (1 - q^m)^24
    d = [1] + [0] * (n - 1)
    for m in range(1, n):
        for _ in range(24):
            for i in range(n - 1, m - 1, -1):
                d[i] -= d[i - m]
    e4_3 = Laurent(0, e4) * Laurent(0, e4) * Laurent(0, e4)
    # invert d (constant term 1)
    inv = [0] * n
    inv[0] = 1
    for i in range(1, n):
        inv[i] = -sum(d[k] * inv[i - k] for k in range(1, i + 1))
    prod = e4_3 * Laurent(0, inv)
    return Laurent(-1, prod.coeffs).truncate(prec)


def modular_polynomial(l: int, margin: int = 6) -> dict[tuple[int, int], int]:
    """Coefficients {(i, t): c} of Phi_l(X, Y) = sum c X^i Y^t."""
    need = 2 * l + margin + 2  # precision of the power sums in q
    J = j_series(l * need + l)
    powers = [Laurent(0, [1] + [0] * (J.prec - 1)), J]
    for _ in range(2, l + 2):
        powers.append(powers[-1] * J)
    # power sums p_m = l * sum_n c^{(m)}_{l n} q^n
    psums = []
    for m in range(1, l + 1):
        s = powers[m]
        lo = -((m + l - 1) // l)
        coeffs = [l * s.coeff(l * e) for e in range(lo, need)]
        psums.append(Laurent(lo, coeffs))
    # Newton: k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i
    e = [Laurent(0, [1] + [0] * (need + l))]
    for k in range(1, l + 1):
        acc = None
        for i in range(1, k + 1):
            term = e[k - i] * psums[i - 1]
            if i % 2 == 0:
                term = -term
            acc = term if acc is None else acc + term
        e.append(acc.exact_div(k))
    # prod_k (X - j_k) = sum_k (-1)^k e_k X^(l-k); then times (X - j(q^l))
    jl_coeffs = [0] * (l * (J.prec + 1))
    for ex in range(J.val, J.prec):
        jl_coeffs[(ex - J.val) * l] = J.coeff(ex)
    jl = Laurent(-l, jl_coeffs[: l * J.prec + l])
    inner = {l - k: (e[k] if k % 2 == 0 else -e[k]) for k in range(l + 1)}
    coeffsX: dict[int, Laurent] = {}
    for i in range(l + 2):
        parts = []
        if i - 1 in inner:
            parts.append(inner[i - 1])
        if i in inner:
            parts.append(-(inner[i] * jl))
        acc = parts[0]
        for part in parts[1:]:
            acc = acc + part
        coeffsX[i] = acc
    out: dict[tuple[int, int], int] = {}
    for i, series in coeffsX.items():
        res = series
        for t in range(l + 1, -1, -1):
            b = res.coeff(-t)
            if b:
                out[(i, t)] = b
                res = res - powers[t] * b
        tail = [res.coeff(x) for x in range(res.val, min(res.prec, 3))]
        if any(tail):
            raise ArithmeticError(f"coefficient of X^{i} is not a polynomial in j")
    return out


def write_modpoly(l: int, path: Path) -> None:
    coeffs = modular_polynomial(l)
    for (i, t), c in coeffs.items():
        if coeffs.get((t, i)) != c:
            raise ArithmeticError(f"Phi_{l} is not symmetric at ({i}, {t})")
    lines = [f"# classical modular polynomial, l = {l}", "# format: i j c  (coefficient c of X^i Y^j, i >= j)"]
    for (i, t), c in sorted(coeffs.items(), reverse=True):
        if i >= t:
            lines.append(f"{i} {t} {c}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    out = Path(argv[0])
    out.mkdir(parents=True, exist_ok=True)
    for s in argv[1:]:
        l = int(s)
        write_modpoly(l, out / f"phi_{l}.txt")
        print(f"wrote phi_{l}.txt")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
