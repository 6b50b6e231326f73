"""Analytic rank of genus one X0(N) over Q(sqrt d), via quadratic twists.

rank E(K) = rank E(Q) + rank E^D(Q), and every base curve here has rank 0
over Q, so the decision is about L(E^D, 1).  Verdicts are conditional on BSD.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np

from .apcount import ap_short_many, extend_multiplicative
from .arith.primes import factor, fundamental_discriminant, is_squarefree, kronecker, primes_up_to
from .ellcurve import Curve
from .modular_geometry import genus1_levels, rational_cusps

# Global minimal models of X0(N) for the genus one levels, plus the curve 37b1
# used for the quotient of X0(37).
BASE_MODELS: dict[int, tuple[str, tuple[int, ...]]] = {
    11: ("11a1", (0, -1, 1, -10, -20)),
    14: ("14a1", (1, 0, 1, 4, -6)),
    15: ("15a1", (1, 1, 1, -10, -10)),
    17: ("17a1", (1, -1, 1, -1, -14)),
    19: ("19a1", (0, 1, 1, -9, -15)),
    20: ("20a1", (0, 1, 0, 4, 4)),
    21: ("21a1", (1, 0, 0, -4, -1)),
    24: ("24a1", (0, -1, 0, -4, 4)),
    27: ("27a1", (0, 0, 1, 0, -7)),
    32: ("32a1", (0, 0, 0, 4, 0)),
    36: ("36a1", (0, 0, 0, 0, 1)),
    49: ("49a1", (1, -1, 0, -2, -1)),
}
AUX_MODELS: dict[str, tuple[int, ...]] = {"37b1": (0, 1, 1, -23, -50)}

NAIVE_BELOW = 1000
TERM_BUDGET = 10**8
DEFAULT_BITS = 40
MAX_BITS = 45  # double precision summation

RANK_ZERO = "rank_zero"
POSITIVE_RANK = "positive_rank"
INDETERMINATE = "indeterminate"


class IndeterminateSign(RuntimeError):
    pass


class PrecisionExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class BaseCurve:
    level: int
    label: str
    weierstrass: tuple[int, ...]

    @cached_property
    def curve(self) -> Curve:
        return Curve(self.weierstrass)

    @property
    def conductor(self) -> int:
        return self.curve.conductor

    @cached_property
    def torsion_order(self) -> int:
        return self.curve.torsion_order

    @cached_property
    def real_period(self) -> float:
        return self.curve.real_period

    @cached_property
    def root_number(self) -> int:
        return _numeric_sign(self, 1)

    def validate(self) -> None:
        if self.conductor != self.level:
            raise ValueError(f"{self.label}: conductor {self.conductor} != {self.level}")


@lru_cache(maxsize=None)
def base_curve(key: int | str) -> BaseCurve:
    if isinstance(key, str):
        if key in AUX_MODELS:
            return BaseCurve(int(key[:2]), key, AUX_MODELS[key])
        key = int(key)
    if key not in BASE_MODELS:
        raise ValueError(f"no genus one base curve at level {key}")
    label, ainvs = BASE_MODELS[key]
    return BaseCurve(key, label, ainvs)


# ---------------------------------------------------------------------------
# coefficients


def cache_dir() -> Path | None:
    env = os.environ.get("QUADISOG_CACHE")
    if env == "":
        return None
    return Path(env) if env else Path.home() / ".cache" / "quadisog" / "an"


_lock = threading.Lock()
_an_cache: dict[str, np.ndarray] = {}


def _compute_an(bc: BaseCurve, n_max: int) -> np.ndarray:
    E = bc.curve
    A, B = -27 * E.c4, -54 * E.c6
    ps = np.array(primes_up_to(max(n_max, 2)), dtype=np.int64)
    bad = set(factor(E.disc))
    ap = np.zeros(max(n_max, 2) + 1, dtype=np.int64)
    good = np.zeros(max(n_max, 2) + 1, dtype=np.bool_)
    normal = ps[(ps > 3) & np.array([int(p) not in bad for p in ps], dtype=bool)] if len(ps) else ps
    if len(normal):
        ap[normal] = ap_short_many(A, B, normal, NAIVE_BELOW)
        good[normal] = True
    for p in ps[(ps <= 3)].tolist() + sorted(q for q in bad if q <= n_max):
        ap[p] = E.ap(p)
        good[p] = E.local_data(p).reduction == "good" if E.disc % p == 0 else True
    return extend_multiplicative(ap, good, n_max)


def _cache_file(bc: BaseCurve) -> Path | None:
    d = cache_dir()
    return None if d is None else d / f"{bc.label}.txt"


def _load_cached(bc: BaseCurve, n_max: int) -> np.ndarray | None:
    path = _cache_file(bc)
    if path is None or not path.exists():
        return None
    try:
        data = np.loadtxt(path, dtype=np.int64, ndmin=2)
    except (OSError, ValueError):
        return None
    if data.shape[0] < n_max or data.shape[1] != 2:
        return None
    ns, an = data[:, 0], data[:, 1]
    if not np.array_equal(ns, np.arange(1, len(ns) + 1)):
        return None
    out = np.concatenate([[0], an])
    check_coefficients(out, bc.level)
    return out


def _store_cached(bc: BaseCurve, an: np.ndarray) -> None:
    path = _cache_file(bc)
    if path is None:
        return
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        ns = np.arange(1, len(an), dtype=np.int64)
        np.savetxt(tmp, np.column_stack([ns, an[1:]]), fmt="%d")
        tmp.replace(path)
    except OSError:
        pass


def check_coefficients(an: np.ndarray, level: int, samples: int = 2000) -> None:
    """Hasse bound at primes and multiplicativity on a sample of coprime pairs."""
    n_max = len(an) - 1
    ps = np.array(primes_up_to(n_max), dtype=np.int64)
    if len(ps) and np.any(an[ps] ** 2 > 4 * ps):
        raise ValueError("cached coefficients violate the Hasse bound")
    rng = np.random.default_rng(level)
    for _ in range(samples):
        m = int(rng.integers(2, max(3, math.isqrt(n_max))))
        n = int(rng.integers(2, max(3, n_max // m)))
        if math.gcd(m, n) == 1 and m * n <= n_max and an[m * n] != an[m] * an[n]:
            raise ValueError(f"cached coefficients not multiplicative at {m}*{n}")


def _base_an_array(bc: BaseCurve, n_max: int) -> np.ndarray:
    with _lock:
        cur = _an_cache.get(bc.label)
        if cur is not None and len(cur) > n_max:
            return cur
        target = max(n_max, 1000, 0 if cur is None else 2 * (len(cur) - 1))
        arr = _load_cached(bc, target)
        if arr is None:
            arr = _compute_an(bc, target)
            _store_cached(bc, arr)
        arr.setflags(write=False)
        _an_cache[bc.label] = arr
        return arr


def base_an(level: int | str, n_max: int) -> list[int]:
    """a_1..a_{n_max} of the newform attached to the base curve at this level."""
    bc = base_curve(level)
    if isinstance(level, int) and level not in genus1_levels():
        raise ValueError(f"{level} is not a genus one level")
    return [int(x) for x in _base_an_array(bc, n_max)[1 : n_max + 1]]


# ---------------------------------------------------------------------------
# twists


@dataclass(frozen=True)
class TwistData:
    D: int
    conductor: int
    special: dict  # p | gcd(D, N) -> (a_p of the twist, good reduction?)


@lru_cache(maxsize=None)
def twist_data(bc: BaseCurve, D: int) -> TwistData:
    if D == 1:
        return TwistData(1, bc.conductor, {})
    T = bc.curve.quadratic_twist(D)
    N = 1
    special = {}
    for p in factor(6 * bc.level * D):
        ld = T.local_data(p)
        N *= p**ld.conductor_exponent
        if bc.level % p == 0 and D % p == 0:
            special[p] = (T.ap(p), ld.reduction == "good")
    return TwistData(D, N, special)


def _chi_table(D: int) -> np.ndarray:
    m = abs(D)
    return np.array([kronecker(D, r) for r in range(m)], dtype=np.int64)


def twisted_an(bc: BaseCurve, D: int, n_max: int) -> np.ndarray:
    """Coefficients of E^D as an array indexed 0..n_max."""
    base = _base_an_array(bc, n_max)[: n_max + 1]
    if D == 1:
        return base.copy()
    chi = _chi_table(D)
    tw = base * chi[np.arange(n_max + 1) % abs(D)]
    for p, (ap, good) in twist_data(bc, D).special.items():
        if ap == 0:
            continue
        apk = [1, ap]
        while p ** len(apk) <= n_max:
            nxt = ap * apk[-1] - (p * apk[-2] if good else 0)
            apk.append(nxt)
        for k in range(1, len(apk)):
            pk = p**k
            ms = np.arange(1, n_max // pk + 1)
            ms = ms[ms % p != 0]
            tw[pk * ms] = apk[k] * tw[ms]
    return tw


def _terms_needed(c: float, eps: float) -> int:
    # tail of 2*sum_{n>M} (a_n/n) e^{-cn} is at most 4 e^{-c(M+1)} / (1 - e^{-c})
    return max(10, math.ceil(math.log(4.0 / (-math.expm1(-c) * eps)) / c))


def _tail_bound(c: float, M: int) -> float:
    return 4.0 * math.exp(-c * (M + 1)) / -math.expm1(-c)


def _partial_sum(an: np.ndarray, c: float, M: int) -> tuple[float, float]:
    """sum_{n<=M} a_n/n e^{-cn} and a rounding error bound."""
    n = np.arange(1, M + 1, dtype=np.float64)
    terms = an[1 : M + 1] / n * np.exp(-c * n)
    s = math.fsum(terms.tolist())
    return s, 4e-16 * float(np.abs(terms).sum()) + 1e-300


def _numeric_sign(bc: BaseCurve, D: int, t: float = 1.2, eps: float = 1e-12) -> int:
    """Root number from agreement of the two sides of the functional equation.

    With G(u) = sum a_n/n exp(-2 pi n u / sqrt N'), L(1) = G(u) + w G(1/u) for
    every u > 0; compare u = t with u = 1.
    """
    Np = twist_data(bc, D).conductor
    c = 2 * math.pi / math.sqrt(Np)
    M_small = _terms_needed(c / t, eps)
    if M_small > TERM_BUDGET:
        raise PrecisionExhausted(f"{M_small} terms needed")
    an = twisted_an(bc, D, M_small)
    vals = {}
    errs = {}
    for u in (t, 1.0, 1.0 / t):
        M = _terms_needed(c * u, eps)
        s, r = _partial_sum(an, c * u, M)
        vals[u], errs[u] = s, r + _tail_bound(c * u, M) / 2
    err = errs[t] + errs[1.0] + errs[1.0 / t]
    plus = abs(vals[t] + vals[1.0 / t] - 2 * vals[1.0])
    minus = abs(vals[t] - vals[1.0 / t])
    tol = 10 * err
    if plus < tol and minus > 1e3 * tol:
        return 1
    if minus < tol and plus > 1e3 * tol:
        return -1
    if minus < tol and plus < tol:
        # G(1) ~ 0 makes both hypotheses consistent; L(1) vanishes either way
        raise IndeterminateSign(f"both signs consistent (|G(1)| ~ {abs(vals[1.0]):.2e})")
    raise IndeterminateSign(f"functional equation test failed (+: {plus:.2e}, -: {minus:.2e})")


def _sign(bc: BaseCurve, D: int) -> int:
    if D == 1:
        return bc.root_number
    if math.gcd(D, bc.level) == 1:
        return kronecker(D, -bc.level) * bc.root_number
    return _numeric_sign(bc, D)


def twist_sign(level: int | str, D: int) -> int:
    return _sign(base_curve(level), D)


def central_value(level: int | str, D: int, eps: float) -> tuple[float, float]:
    """L(E^D, 1) with an error bound, for twists of sign +1."""
    return _central_value(base_curve(level), D, eps)


def _central_value(bc: BaseCurve, D: int, eps: float) -> tuple[float, float]:
    if eps <= 0:
        raise ValueError("eps must be positive")
    if _sign(bc, D) != 1:
        raise ValueError("central value requested for a twist of sign -1")
    Np = twist_data(bc, D).conductor
    c = 2 * math.pi / math.sqrt(Np)
    M = _terms_needed(c, eps)
    if M > TERM_BUDGET:
        raise PrecisionExhausted(f"{M} terms needed for eps = {eps}")
    an = twisted_an(bc, D, M)
    s, r = _partial_sum(an, c, M)
    return 2 * s, 2 * r + _tail_bound(c, M)


# ---------------------------------------------------------------------------
# decisions


@dataclass(frozen=True)
class TwistRankDecision:
    level: int
    d: int
    disc_used: int
    sign: int
    l_value: float
    error_bound: float
    verdict: str
    conditional_on: frozenset = field(default_factory=lambda: frozenset({"BSD"}))
    note: str = ""


def rank_over_quadratic(level: int | str, d: int, bits: int = DEFAULT_BITS) -> TwistRankDecision:
    if d in (0, 1) or not is_squarefree(d):
        raise ValueError(f"d = {d} must be squarefree and not 0 or 1")
    bc = base_curve(level)
    D = fundamental_discriminant(d)
    tags = frozenset({"BSD"})
    try:
        sign = _sign(bc, D)
    except (IndeterminateSign, PrecisionExhausted) as exc:
        return TwistRankDecision(bc.level, d, D, 0, math.nan, math.inf, INDETERMINATE, tags, str(exc))
    if sign == -1:
        return TwistRankDecision(bc.level, d, D, -1, 0.0, 0.0, POSITIVE_RANK, tags)
    scale = bc.real_period / math.sqrt(abs(D))
    eps = scale * 2.0 ** -min(bits, MAX_BITS)
    try:
        L, err = _central_value(bc, D, eps)
    except PrecisionExhausted as exc:
        return TwistRankDecision(bc.level, d, D, 1, math.nan, math.inf, INDETERMINATE, tags, str(exc))
    if L > max(1e3 * err, 1e-3 * scale):
        verdict = RANK_ZERO
    elif abs(L) < 1e-8 * scale and err < 1e-9 * scale:
        verdict = POSITIVE_RANK
    else:
        verdict = INDETERMINATE
    return TwistRankDecision(bc.level, d, D, 1, L, err, verdict, tags)


NO_GROWTH = "no_growth"
POSSIBLE_GROWTH = "possible_growth"


def torsion_bound(bc: BaseCurve, d: int, count: int = 20) -> int:
    """gcd of #E(F_q^2) over inert q and #E(F_q) over split q (odd, good)."""
    D = fundamental_discriminant(d)
    E = bc.curve
    g = 0
    inert = split = 0
    q = 3
    while inert < count or split < count:
        if E.disc % q and D % q:
            aq = E.ap(q)
            if kronecker(D, q) == -1:
                g = math.gcd(g, q * q + 1 - (aq * aq - 2 * q))
                inert += 1
            else:
                g = math.gcd(g, q + 1 - aq)
                split += 1
        q += 2
        while any(q % r == 0 for r in range(3, math.isqrt(q) + 1, 2)):
            q += 2
    return g


def torsion_no_growth(level: int | str, d: int) -> str:
    bc = base_curve(level)
    return NO_GROWTH if torsion_bound(bc, d) == bc.torsion_order else POSSIBLE_GROWTH


def validate_base_models() -> None:
    """Conductor equals level; torsion equals rational cusps plus known points."""
    for N in genus1_levels():
        bc = base_curve(N)
        bc.validate()
        if bc.torsion_order < rational_cusps(N):
            raise ValueError(f"{bc.label}: torsion {bc.torsion_order} below the cusp count")
    base_curve("37b1").validate()
