"""Isogeny graphs over Q(sqrt d) from classical modular polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .arith.poly import UniPoly, fp_derivative, fp_gcd, fp_roots, fp_trim
from .arith.primes import is_prime, kronecker, next_prime, sqrt_mod
from .arith.quadfield import Q, QuadField, QuadFieldElem
from .cm import CLASS_NUMBER_ONE, cm_discriminant, cm_field_d

NODE_CAP = 200


class ModPolyError(ValueError):
    pass


class MissingModPoly(KeyError):
    pass


class NodeCapExceeded(RuntimeError):
    pass


class ReconstructionFailure(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# modular polynomials

# (l, j1, j2) with Phi_l(j1, j2) = 0, from CM theory
VALIDATION_VECTORS = (
    (2, 0, 54000),
    (2, 1728, 287496),
    (2, -3375, 16581375),
    (2, 8000, 8000),
    (3, 0, -12288000),
    (3, -32768, -32768),
)


def parse_modpoly(text: str, l: int) -> dict[tuple[int, int], int]:
    coeffs: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ModPolyError(f"line {lineno}: expected 'i j c', got {raw!r}")
        try:
            i, j, c = (int(x) for x in parts)
        except ValueError as exc:
            raise ModPolyError(f"line {lineno}: {exc}") from None
        if i < j:
            raise ModPolyError(f"line {lineno}: need i >= j")
        for key in {(i, j), (j, i)}:
            if key in coeffs and coeffs[key] != c:
                raise ModPolyError(f"symmetry violation at X^{key[0]} Y^{key[1]}")
            coeffs[key] = c
    deg = max((i for i, _ in coeffs), default=-1)
    if deg != l + 1 or coeffs.get((l + 1, 0)) != 1:
        raise ModPolyError(f"degree mismatch: Phi_{l} must be monic of degree {l + 1}, found {deg}")
    return coeffs


class ModPolyDB:
    def __init__(self, directory: Path | None = None):
        self.directory = Path(directory) if directory else None
        self._polys: dict[int, dict[tuple[int, int], int]] = {}

    @classmethod
    @lru_cache(maxsize=1)
    def default(cls) -> "ModPolyDB":
        return cls(None)

    def _read(self, l: int) -> str | None:
        name = f"phi_{l}.txt"
        if self.directory is not None:
            path = self.directory / name
            if path.exists():
                return path.read_text("utf-8")
        res = resources.files("quadisog.data").joinpath("modpoly", name)
        return res.read_text("utf-8") if res.is_file() else None

    def available(self, l: int) -> bool:
        return l in self._polys or self._read(l) is not None

    def get(self, l: int) -> dict[tuple[int, int], int]:
        if l not in self._polys:
            text = self._read(l)
            if text is None:
                raise MissingModPoly(l)
            self._polys[l] = load_modpoly(l, text)
        return self._polys[l]

    def evaluate(self, l: int, x, y):
        acc = 0
        for (i, j), c in self.get(l).items():
            acc = acc + c * x**i * y**j
        return acc

    def specialize(self, l: int, j: QuadFieldElem) -> UniPoly:
        """Phi_l(j, Y) as a polynomial in Y over the field of j."""
        P = self.get(l)
        K = j.field
        jp = [K.one]
        for _ in range(l + 1):
            jp.append(jp[-1] * j)
        cs = [K.zero] * (l + 2)
        for (i, t), c in P.items():
            cs[t] = cs[t] + jp[i] * c
        return UniPoly(cs, K)


def load_modpoly(l: int, source) -> dict[tuple[int, int], int]:
    """Parse and validate Phi_l from a path or from file text."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).exists()):
        source = Path(source).read_text("utf-8")
    coeffs = parse_modpoly(source, l)
    for ll, a, b in VALIDATION_VECTORS:
        if ll == l and sum(c * a**i * b**j for (i, j), c in coeffs.items()) != 0:
            raise ModPolyError(f"Phi_{l} fails validation at ({a}, {b})")
    return coeffs


# ---------------------------------------------------------------------------
# roots in K


def _to_fp(x: QuadFieldElem, s: int, m: int) -> int:
    num = (x.a.numerator * x.b.denominator + x.b.numerator * x.a.denominator * s) % m
    return num * pow(x.a.denominator * x.b.denominator, -1, m) % m


def _hensel_sqrt(d: int, s: int, p: int, k: int) -> int:
    m = p
    while m < p**k:
        m = min(m * m, p**k)
        s = (s - (s * s - d) * pow(2 * s, -1, m)) % m
    return s % p**k


def _hensel_root(f: list[int], r: int, p: int, k: int) -> int:
    target = p**k
    df = [i * c for i, c in enumerate(f)][1:]
    m = p
    while m < target:
        m = min(m * m, target)
        fv = _ev(f, r, m)
        dv = _ev(df, r, m)
        r = (r - fv * pow(dv, -1, m)) % m
    return r


def _ev(f, x, m):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % m
    return acc


def _cauchy_bound(g: UniPoly) -> int:
    """Integer upper bound for |sigma(r)| over roots r and embeddings sigma of K.

    Uses |sigma(x)| <= |a| + |b| sqrt|d| and, for the leading coefficient,
    |sigma(c)| >= |N(c)| / max|sigma(c)|, so no cancellation can mislead it.
    """
    K = g.field
    with localcontext() as ctx:
        ctx.prec = 40
        sd = Decimal(abs(K.d)).sqrt() * (1 + Decimal(10) ** -30)

        def dec(x: Fraction) -> Decimal:
            return Decimal(abs(x.numerator)) / Decimal(x.denominator)

        def upper(x: QuadFieldElem) -> Decimal:
            return dec(x.a) + dec(x.b) * sd

        lc = g.lc()
        low = dec(abs(lc.norm())) / upper(lc) if lc.b else dec(lc.a)
        ratio = max((upper(c) for c in g.coeffs[:-1]), default=Decimal(0)) / low
        return int((1 + ratio) * (1 + Decimal(10) ** -20)) + 1


def _clear(g: UniPoly) -> UniPoly:
    den = 1
    for c in g.coeffs:
        den = math.lcm(den, c.a.denominator, c.b.denominator)
    return g * den


def _multiplicity(f: UniPoly, r: QuadFieldElem) -> int:
    m = 0
    h = f
    while not h.is_zero() and h(r) == 0:
        m += 1
        h = h.derivative()
    return m


def _squarefree_mod(g: list[int], p: int) -> bool:
    g = fp_trim([c % p for c in g])
    if len(g) <= 1:
        return True
    return len(fp_gcd(g, fp_derivative(g, p), p)) == 1


def k_roots(f: UniPoly, d: int | None = None, max_primes: int = 30) -> list[tuple[QuadFieldElem, int]]:
    """Roots of f in its coefficient field, with multiplicities, sorted."""
    if f.is_zero():
        raise ValueError("k_roots of the zero polynomial")
    K = f.field if d is None else Q(d)
    if f.field != K:
        f = UniPoly([K.coerce(c) for c in f.coeffs], K)
    if f.degree() == 0:
        return []
    g = _squarefree(f)
    roots = _simple_roots(g, max_primes)
    out = [(r, _multiplicity(f, r)) for r in roots]
    return sorted(out, key=lambda t: t[0].sort_key())


def _squarefree(f: UniPoly) -> UniPoly:
    # cheap certificate first: squarefree modulo a good prime implies squarefree
    K = f.field
    gi = _clear(f)
    p = 10007
    for _ in range(6):
        p = next_prime(p)
        ok, embs = _embeddings(gi, K, p)
        if ok and all(_squarefree_mod(e, p) for e in embs):
            return f
    return f.squarefree_part()


def _embeddings(g: UniPoly, K: QuadField, p: int, k: int = 1):
    """Images of g under the embeddings K -> Z/p^k (p split, good); (False, None) if unsuitable."""
    if K.d != 1 and (K.disc % p == 0 or kronecker(K.d, p) != 1):
        return False, None
    dens = [c.a.denominator * c.b.denominator for c in g.coeffs]
    if any(x % p == 0 for x in dens):
        return False, None
    m = p**k
    if K.d == 1:
        e = [_to_fp(c, 0, m) for c in g.coeffs]
        return (e[-1] % p != 0), [e]
    s = _hensel_sqrt(K.d, sqrt_mod(K.d, p), p, k)
    e1 = [_to_fp(c, s, m) for c in g.coeffs]
    e2 = [_to_fp(c, -s % m, m) for c in g.coeffs]
    if e1[-1] % p == 0 or e2[-1] % p == 0:
        return False, None
    return True, [e1, e2]


def _symmetric(x: int, m: int) -> int:
    x %= m
    return x - m if x > m // 2 else x


def _simple_roots(g: UniPoly, max_primes: int) -> list[QuadFieldElem]:
    K = g.field
    gi = _clear(g)
    # D * r has integral coordinates in (1, w) for every root r
    lc = gi.lc()
    D = 2 * abs(lc.norm()) if K.d != 1 else abs(lc.a)
    D = int(D)
    # |a|, |b| <= bound (|d| >= 2 gives |b| <= bound / sqrt|d|)
    need = 2 * D * (_cauchy_bound(gi) + 1) + 1
    p = 1000
    for _ in range(max_primes):
        p = next_prime(p)
        ok, embs = _embeddings(gi, K, p)
        if not ok or not all(_squarefree_mod(e, p) for e in embs):
            continue
        k = 1
        while p**k <= need:
            k += 1
        m = p**k
        _, embk = _embeddings(gi, K, p, k)
        lifted = []
        for e_small, e_big in zip(embs, embk):
            rs = fp_roots(e_small, p)
            lifted.append([_hensel_root(e_big, r, p, k) for r in rs])
        found = []
        if K.d == 1:
            for r1 in lifted[0]:
                a = Fraction(_symmetric(r1 * D, m), D)
                x = K(a, 0)
                if not gi(x):
                    found.append(x)
            return found
        s = _hensel_sqrt(K.d, sqrt_mod(K.d, p), p, k)
        inv2 = pow(2, -1, m)
        inv2s = pow(2 * s, -1, m)
        for r1 in lifted[0]:
            for r2 in lifted[1]:
                A = _symmetric((r1 + r2) * inv2 * D, m)
                B = _symmetric((r1 - r2) * inv2s * D, m)
                x = K(Fraction(A, D), Fraction(B, D))
                if not gi(x):
                    found.append(x)
        if len(found) > g.degree():
            raise ReconstructionFailure("more roots than the degree")
        return found
    raise ReconstructionFailure(f"no suitable auxiliary prime among {max_primes} tried")


# ---------------------------------------------------------------------------
# graphs


@dataclass
class IsogGraph:
    d: int
    nodes: list
    edges: list  # (i, j, l, multiplicity)
    cyclic_degrees: set
    max_degree: int
    notes: list = field(default_factory=list)

    def neighbours(self, i: int, l: int) -> dict[int, int]:
        return {b: m for a, b, ll, m in self.edges if a == i and ll == l}

    def index(self, j) -> int:
        return self.nodes.index(j)


def cm_isogenies(j: QuadFieldElem, l: int) -> list[tuple[QuadFieldElem, int]]:
    """K-rational l-isogenies from a class-number-one CM point, for large l.

    For l not dividing the conductor of the CM order: a ramified l gives one
    isogeny back to the same j; a split l gives two isogenies back to j, defined
    over the CM field only; descending isogenies land in a ring class field of
    degree > 2 once l >= 7, so they are never defined over a quadratic field.
    """
    D = cm_discriminant(j.a) if j.is_rational() else None
    if D is None or D not in CLASS_NUMBER_ONE:
        raise ValueError(f"{j} is not a class-number-one CM j-invariant")
    if l < 7:
        raise ValueError("the CM fast path is only used for l >= 7")
    K = j.field
    chi = kronecker(D, l)
    if chi == 0:
        return [(j, 1)]
    if chi == 1 and K.d != 1 and cm_field_d(D) == K.d:
        return [(j, 2)]
    return []


def isogeny_graph(
    j0,
    d: int,
    prime_set,
    modpolys: ModPolyDB | None = None,
    known_pairs: dict | None = None,
    max_degree: int = 10**4,
    node_cap: int = NODE_CAP,
) -> IsogGraph:
    """Breadth-first K-rational isogeny graph of j0 and its cyclic degrees.

    Primes without a modular polynomial use the CM fast path at CM nodes and
    ``known_pairs[l]`` (pairs (j, j') from the known K-points of X0(l)) elsewhere.
    """
    db = modpolys or ModPolyDB.default()
    K = Q(d)
    j0 = K.parse(j0) if isinstance(j0, str) else K.coerce(j0)
    known_pairs = known_pairs or {}
    primes = sorted(set(int(l) for l in prime_set))
    for l in primes:
        if not is_prime(l):
            raise ValueError(f"{l} is not prime")
    nodes = [j0]
    idx = {j0: 0}
    edges = []
    queue = [0]
    notes = []
    while queue:
        i = queue.pop(0)
        j = nodes[i]
        for l in primes:
            nbrs = _neighbours(j, l, db, known_pairs, K)
            for jj, mult in nbrs:
                if jj not in idx:
                    if len(nodes) >= node_cap:
                        raise NodeCapExceeded(f"more than {node_cap} nodes")
                    idx[jj] = len(nodes)
                    nodes.append(jj)
                    queue.append(idx[jj])
                edges.append((i, idx[jj], l, mult))
    g = IsogGraph(d, nodes, edges, set(), max_degree, notes)
    g.cyclic_degrees = cyclic_degrees(g, 0, primes, max_degree)
    return g


class UndeterminedCM(RuntimeError):
    pass


def _cm_field_of(j: QuadFieldElem) -> int | None:
    D = cm_discriminant(j.a) if j.is_rational() else cm_discriminant(j)
    return None if D is None else cm_field_d(D)


def _rational_multiplicity(j: QuadFieldElem, jj: QuadFieldElem, m: int, K: QuadField) -> int:
    """Number of K-rational kernels among the m kernels from j with image jj.

    A root of multiplicity >= 2 only occurs at CM points.  Away from j = 0, 1728
    the kernels are conjugate ideals (or ideal classes) and are individually
    K-rational exactly when K is the CM field.  At j = 1728 the orbits of [i]
    have size two and a suitable quartic twist makes a whole orbit rational;
    at j = 0 an orbit of [zeta_3] of size three has at most one rational member.
    """
    if m == 1:
        return 1
    if j == 0 or j == 1728:
        cmd = -3 if j == 0 else -1
        if K.d == cmd or jj == j:
            return m if K.d == cmd else 0
        return m if j == 1728 else m // 3
    cmd = _cm_field_of(j)
    if cmd is None:
        if K.d > 0 or K.d == 1:
            return 0  # a real field never contains the CM field
        raise UndeterminedCM(f"repeated isogenous root at {j} with unknown CM order")
    return m if K.d == cmd else 0


def _neighbours(j: QuadFieldElem, l: int, db: ModPolyDB, known_pairs: dict, K: QuadField):
    if db.available(l):
        out = []
        for jj, m in k_roots(db.specialize(l, j)):
            r = _rational_multiplicity(j, jj, m, K)
            if r:
                out.append((jj, r))
        return out
    if j.is_rational() and cm_discriminant(j.a) in CLASS_NUMBER_ONE:
        return cm_isogenies(j, l)
    if l in known_pairs:
        out: dict = {}
        for a, b in known_pairs[l]:
            if K.coerce(a) == j:
                jb = K.coerce(b)
                out[jb] = out.get(jb, 0) + 1
        return sorted(out.items(), key=lambda t: t[0].sort_key())
    raise MissingModPoly(l)


def _longest_path(g: IsogGraph, start: int, l: int, cap: int) -> int:
    """Longest non-backtracking walk (up to cap) from start in the l-subgraph.

    Arriving at v along an edge uses up one unit of the multiplicity of v -> u
    (the dual isogeny); the remaining multiplicity may still be walked.
    """
    adj: dict[int, dict[int, int]] = {}
    for a, b, ll, m in g.edges:
        if ll == l:
            adj.setdefault(a, {})[b] = adj.setdefault(a, {}).get(b, 0) + m
    best = 0
    stack = [(start, None, 0)]
    seen = set()
    while stack:
        v, prev, depth = stack.pop()
        best = max(best, depth)
        if best >= cap:
            return cap
        if (v, prev, depth) in seen:
            continue
        seen.add((v, prev, depth))
        for w, m in adj.get(v, {}).items():
            if w == prev:
                m -= 1
            if m > 0:
                stack.append((w, v, depth + 1))
    return best


def cyclic_degrees(g: IsogGraph, start: int, primes, max_degree: int) -> set[int]:
    exps = {}
    for l in primes:
        cap = 0
        while l ** (cap + 1) <= max_degree:
            cap += 1
        exps[l] = _longest_path(g, start, l, cap)
    degs = {1}
    for l, e in exps.items():
        degs = {x * l**k for x in degs for k in range(e + 1) if x * l**k <= max_degree}
    return degs


def unrecorded_isogenies(
    resolutions: dict,
    d: int,
    mf,
    prime_set,
    modpolys: ModPolyDB | None = None,
    known_pairs: dict | None = None,
    max_degree: int = 10**4,
):
    """Cyclic degrees that are proper multiples of a member of mf.

    ``resolutions`` maps N to the finite list of j-invariants of the K-points on
    X0(N).  Returns (findings, blocked) where findings lists (j, degree, N).
    """
    mf = set(mf)
    primes = set(prime_set)
    findings = []
    blocked = []
    done: dict = {}
    for N in sorted(resolutions):
        for j in resolutions[N]:
            key = str(j)
            try:
                if key not in done:
                    done[key] = isogeny_graph(j, d, primes, modpolys, known_pairs, max_degree)
                g = done[key]
            except (MissingModPoly, NodeCapExceeded, ReconstructionFailure, UndeterminedCM) as exc:
                blocked.append((str(j), f"{type(exc).__name__}: {exc}"))
                continue
            for deg in sorted(g.cyclic_degrees):
                for M in sorted(mf):
                    if deg != M and deg % M == 0:
                        findings.append((str(j), deg, M))
    return sorted(set(findings)), blocked
