"""Catalogue of quadratic points, ramification filters and per-level resolution over Q(sqrt d).

The data file (``data/catalogue.json``, schema ``quadisog.catalogue/1``) holds:

* ``models``: canonical models as lists of quadrics in x1..xn with exact
  rational coefficients, and the rational cusps;
* ``levels``: one record per level of genus >= 2 with its status, the
  j-invariants of the noncuspidal rational points, optional point tables
  (coordinates as strings in ``w`` = sqrt d), Trbovic prime lists and
  per-field results taken from the literature;
* ``rational_jinvariants``: j-invariants of the noncuspidal rational points
  on the genus one curves X0(N);
* ``plus_part_records``: per (N, d), whether the K-points of X0(N) are known
  to be pullbacks of rational points of X0+(N).

Every record with coordinates is checked on the model when loaded, and every
CM claim against the embedded Hilbert class polynomials.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable

from .arith.primes import is_prime, kronecker, squarefree_part
from .arith.quadfield import Q, QuadFieldElem
from .cm import cm_discriminant
from .hyperelliptic import is_norm_from_primitive_order
from .lfunction_rank import NO_GROWTH, POSITIVE_RANK, RANK_ZERO, rank_over_quadratic, torsion_no_growth
from .modular_geometry import HYPERELLIPTIC_LEVELS, genus

SCHEMA = "quadisog.catalogue/1"

STATUSES = ("all_quadratic_points_known", "only_cusps_over_Q_and_filterable", "special")

ELIMINATED = "eliminated"
INCONCLUSIVE = "inconclusive"
OBSTRUCTED = "obstructed"


class CatalogueError(ValueError):
    """A catalogue record failed a load-time check."""


class MissingData(KeyError):
    """The catalogue has no record needed for the query."""


# -- models -------------------------------------------------------------

_VAR = re.compile(r"x(\d+)(?:\^(\d+))?$")
_NUM = re.compile(r"\d+(?:/\d+)?$")


def parse_polynomial(text: str, nvars: int) -> tuple[tuple[Fraction, tuple[int, ...]], ...]:
    """Parse a polynomial such as ``x1^2 - 21/8*x3*x4`` into (coefficient, exponents) terms."""
    src = text.replace(" ", "")
    if not src:
        raise ValueError("empty polynomial")
    chunks = re.findall(r"[+-]?[^+-]+", src)
    terms: dict[tuple[int, ...], Fraction] = {}
    for chunk in chunks:
        sign = -1 if chunk.startswith("-") else 1
        body = chunk.lstrip("+-")
        coef = Fraction(sign)
        exps = [0] * nvars
        for f in body.split("*"):
            if _NUM.match(f):
                coef *= Fraction(f)
                continue
            m = _VAR.match(f)
            if not m:
                raise ValueError(f"cannot parse factor {f!r} in {text!r}")
            i = int(m.group(1))
            if not 1 <= i <= nvars:
                raise ValueError(f"variable x{i} outside 1..{nvars}")
            exps[i - 1] += int(m.group(2) or 1)
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + coef
    return tuple((c, e) for e, c in sorted(terms.items(), reverse=True) if c)


@dataclass(frozen=True)
class CurveModel:
    level: int
    ambient_dim: int
    equations: tuple[str, ...]
    cusps: tuple[tuple[Fraction, ...], ...]
    polys: tuple = field(default=(), compare=False, repr=False)

    @classmethod
    def from_record(cls, level: int, rec: dict) -> "CurveModel":
        n = int(rec["ambient_dim"])
        eqs = tuple(rec["equations"])
        polys = tuple(parse_polynomial(e, n) for e in eqs)
        for e, p in zip(eqs, polys):
            if any(sum(x) != 2 for _, x in p):
                raise CatalogueError(f"X0({level}): {e!r} is not a quadric")
        cusps = tuple(tuple(Fraction(c) for c in pt) for pt in rec["cusps"])
        return cls(level, n, eqs, cusps, polys)

    def vanishes(self, point: Iterable) -> bool:
        pt = list(point)
        if len(pt) != self.ambient_dim:
            raise ValueError(f"point has {len(pt)} coordinates, model lives in P^{self.ambient_dim - 1}")
        if all(c == 0 for c in pt):
            return False
        for poly in self.polys:
            acc = 0
            for c, exps in poly:
                t = c
                for x, e in zip(pt, exps):
                    if e:
                        t = t * x**e
                acc = acc + t
            if acc != 0:
                return False
        return True


def parse_coordinates(coords: Iterable[str], d: int) -> tuple[QuadFieldElem, ...]:
    K = Q(d)
    return tuple(K.parse(c) for c in coords)


# -- records ------------------------------------------------------------


@dataclass(frozen=True)
class PointRecord:
    level: int
    label: str
    d: int
    coords: tuple[str, ...] | None
    j: QuadFieldElem
    cm: int | None  # None marks a non-CM point
    note: str = ""


@dataclass(frozen=True)
class FieldResult:
    noncusp_j: tuple[str, ...]
    provenance: str


@dataclass(frozen=True)
class LevelRecord:
    level: int
    status: str
    method: str
    rational_noncusp_j: tuple[Fraction, ...]
    points: tuple[PointRecord, ...] | None
    exceptional_points: tuple[PointRecord, ...] | None
    trbovic_primes: tuple[int, ...] | None
    trbovic_provenance: str
    quotient_involution: int | None
    field_results: dict
    provenance: str
    isogeny_pairs: tuple = ()


@dataclass(frozen=True)
class CatalogueDB:
    version: str
    models: dict
    levels: dict
    rational_jinvariants: dict
    plus_part_records: dict
    plus_quotients: dict

    @classmethod
    def load(cls, path=None) -> "CatalogueDB":
        if path is None:
            text = resources.files("quadisog.data").joinpath("catalogue.json").read_text("utf-8")
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        db = cls.from_json(json.loads(text))
        db.verify()
        return db

    @classmethod
    def from_json(cls, raw: dict) -> "CatalogueDB":
        if raw.get("schema") != SCHEMA:
            raise CatalogueError(f"unrecognised catalogue schema {raw.get('schema')!r}")
        models = {int(N): CurveModel.from_record(int(N), m) for N, m in raw["models"].items()}
        levels = {int(N): _level_record(int(N), r) for N, r in raw["levels"].items()}
        rj = {int(N): tuple(Fraction(j) for j in r["j"]) for N, r in raw["rational_jinvariants"].items()}
        pp = {}
        for N, rec in raw["plus_part_records"].items():
            for d, entry in rec["fields"].items():
                pp[(int(N), int(d))] = (bool(entry["holds"]), entry["provenance"])
        return cls(raw["version"], models, levels, rj, pp, raw.get("plus_quotients", {}))

    @classmethod
    def default(cls) -> "CatalogueDB":
        global _DEFAULT
        if _DEFAULT is None:
            _DEFAULT = cls.load()
        return _DEFAULT

    # -- checks ---------------------------------------------------------
    def verify(self) -> list[str]:
        """Run every load-time check; raise CatalogueError on the first failure.

        Returns a list of human-readable lines describing what was checked.
        """
        done = []
        for N, model in sorted(self.models.items()):
            for cusp in model.cusps:
                if not model.vanishes(cusp):
                    raise CatalogueError(f"X0({N}): cusp {cusp} is not on the model")
            done.append(f"model X0({N}): {len(model.equations)} quadrics, {len(model.cusps)} cusps verified")
        for N, rec in sorted(self.levels.items()):
            if rec.status not in STATUSES:
                raise CatalogueError(f"level {N}: unknown status {rec.status!r}")
            for pt in (rec.points or ()) + (rec.exceptional_points or ()):
                if pt.coords is not None:
                    if N not in self.models:
                        raise CatalogueError(f"level {N}: point {pt.label} has coordinates but no model")
                    if not self.verify_point(N, pt.coords, pt.d):
                        raise CatalogueError(f"X0({N}): point {pt.label} over Q(sqrt {pt.d}) is not on the model")
                found = cm_discriminant(pt.j)
                if found != pt.cm:
                    raise CatalogueError(f"X0({N}) {pt.label}: CM {pt.cm} claimed, table gives {found}")
            if rec.points:
                done.append(f"level {N}: {len(rec.points)} catalogued points verified")
            if rec.trbovic_primes is not None:
                bad = [p for p in rec.trbovic_primes if not (is_prime(p) and p < 100)]
                if bad:
                    raise CatalogueError(f"level {N}: Trbovic entries {bad} are not primes below 100")
        for (N, d), (holds, _) in self.plus_part_records.items():
            if N not in (43, 67, 163):
                raise CatalogueError(f"plus-part record for unexpected level {N}")
            for j in self.levels[N].rational_noncusp_j:
                if cm_discriminant(j) is None:
                    raise CatalogueError(f"X0({N}): rational point j = {j} expected to be CM")
        done.append(f"{len(self.plus_part_records)} plus-part records checked")
        return done

    def verify_point(self, level: int, coords, d: int) -> bool:
        if level not in self.models:
            raise MissingData(f"no model for X0({level})")
        pt = parse_coordinates(coords, d) if coords and isinstance(coords[0], str) else tuple(coords)
        return self.models[level].vanishes(pt)

    def known_pairs(self, levels: Iterable[int] | None = None) -> dict[int, list]:
        """{p: [(j, j'), ...]} for prime levels with catalogued isogenous pairs."""
        wanted = None if levels is None else set(levels)
        out = {}
        for N, rec in self.levels.items():
            if rec.isogeny_pairs and (wanted is None or N in wanted):
                out[N] = list(rec.isogeny_pairs)
        return out

    def trbovic_primes(self, N: int) -> tuple[int, ...]:
        rec = self.levels.get(N)
        if rec is None or rec.trbovic_primes is None:
            raise MissingData(f"no Trbovic prime list for level {N}")
        return rec.trbovic_primes


_DEFAULT: CatalogueDB | None = None


def _point(N: int, raw: dict) -> PointRecord:
    d = int(raw["d"])
    coords = tuple(raw["coords"]) if raw.get("coords") is not None else None
    K = Q(d)
    j = K.parse(raw["j"])
    cm = raw.get("cm")
    return PointRecord(N, raw.get("label", ""), d, coords, j, None if cm is None else int(cm), raw.get("note", ""))


def _level_record(N: int, r: dict) -> LevelRecord:
    points = tuple(_point(N, p) for p in r["points"]) if r.get("points") is not None else None
    exc = tuple(_point(N, p) for p in r["exceptional_points"]) if r.get("exceptional_points") is not None else None
    trb = r.get("trbovic")
    fr = {int(d): FieldResult(tuple(v["noncusp_j"]), v["provenance"]) for d, v in r.get("field_results", {}).items()}
    return LevelRecord(
        level=N,
        status=r["status"],
        method=r.get("method", ""),
        rational_noncusp_j=tuple(Fraction(j) for j in r.get("rational_noncusp_j", [])),
        points=points,
        exceptional_points=exc,
        trbovic_primes=tuple(trb["primes"]) if trb else None,
        trbovic_provenance=trb["provenance"] if trb else "",
        quotient_involution=r.get("quotient_involution"),
        field_results=fr,
        provenance=r.get("provenance", ""),
        isogeny_pairs=tuple((Fraction(a), Fraction(b)) for a, b in r.get("isogeny_pairs", [])),
    )


def verify_point_on_model(level: int, point, d: int = 1, db: CatalogueDB | None = None) -> bool:
    """True iff every quadric of the model vanishes at the point (projective, exact).

    ``point`` is a sequence of strings in ``w`` = sqrt d, or of exact numbers.
    """
    db = db or CatalogueDB.default()
    return db.verify_point(level, tuple(point), d)


# -- filters ------------------------------------------------------------


def trbovic_filter(N: int, d: int, db: CatalogueDB | None = None) -> str:
    """``eliminated`` when a prime of the level's list ramifies in Q(sqrt d)."""
    db = db or CatalogueDB.default()
    primes = db.trbovic_primes(N)
    ram = set(Q(d).ramified_primes)
    return ELIMINATED if ram.intersection(primes) else INCONCLUSIVE


def ozman_witness(N: int, d: int, prime_bound: int) -> int | None:
    """A prime p <= prime_bound obstructing non-exceptional points over Q(sqrt d), if any.

    Non-exceptional points here are pullbacks of rational points of
    X0(N)/w_N, i.e. P with w_N(P) equal to the conjugate of P.  At a prime p
    ramified in K with p not dividing 2N, such a point reduces to a
    w_N-fixed point of X0(N) over F_p.  For squarefree N > 4 no cusp is
    fixed and the fixed points carry an endomorphism sqrt(-N) with cyclic
    kernel.  When p splits in Q(sqrt -N) these are ordinary, and they are
    defined over F_p exactly when p is a norm from an order in which
    sqrt(-N) is primitive.  Inert p are never used: supersingular fixed
    points may be F_p-rational.
    """
    if N <= 4 or squarefree_part(N) != N:
        return None
    for p in Q(d).ramified_primes:
        if p > prime_bound or p == 2 or N % p == 0:
            continue
        if kronecker(-N, p) == 1 and not is_norm_from_primitive_order(N, p):
            return p
    return None


def ozman_sieve(N: int, d: int, prime_bound: int) -> str:
    return OBSTRUCTED if ozman_witness(N, d, prime_bound) is not None else INCONCLUSIVE


# -- resolution ---------------------------------------------------------

INFINITE = "infinite"
FINITE = "finite"
ONLY_CUSPS = "only_cusps"
UNRESOLVED = "unresolved"

OZMAN_BOUND = 1000


@dataclass(frozen=True)
class LevelResolution:
    level: int
    kind: str
    j_invariants: tuple = ()
    method: str = ""
    reason: str = ""
    tags: frozenset = frozenset()

    @property
    def count(self) -> int | None:
        if self.kind == INFINITE:
            return None
        return len(self.j_invariants)


def _points_result(N, js, method, tags=frozenset()) -> LevelResolution:
    js = tuple(js)
    return LevelResolution(N, FINITE if js else ONLY_CUSPS, js, method, tags=frozenset(tags))


def _rank_decision(N: int, d: int, mf_context):
    for dec in getattr(mf_context, "decisions", ()) or ():
        if dec.level == N:
            return dec
    return rank_over_quadratic(N, d)


def resolve_level(N: int, d: int, mf_context=None, db: CatalogueDB | None = None) -> LevelResolution:
    """Decide X0(N)(Q(sqrt d)) as far as the computations and catalogue allow."""
    db = db or CatalogueDB.default()
    g = genus(N)
    if g == 0:
        return LevelResolution(N, INFINITE, method="genus 0")
    if g == 1:
        return _resolve_genus_one(N, d, mf_context, db)
    rec = db.levels.get(N)
    if rec is None:
        return LevelResolution(N, UNRESOLVED, reason=f"no-catalogue-record:{N}")
    rational = rec.rational_noncusp_j
    if rec.trbovic_primes is not None and trbovic_filter(N, d, db) == ELIMINATED:
        return _points_result(N, rational, "trbovic")
    fallback = f"no-method:{N}:{d}"
    if rec.method == "quotient-37b1":
        res = _resolve_37(N, d, rec)
        if res.kind != UNRESOLVED:
            return res
        fallback = res.reason
    if rec.points is not None:
        extra = [p.j for p in rec.points if p.d == d]
        return _points_result(N, list(rational) + extra, "catalogue-points", {"ingested-catalogue"})
    if rec.quotient_involution == N and rec.exceptional_points is not None:
        if ozman_sieve(N, d, OZMAN_BOUND) == OBSTRUCTED:
            extra = [p.j for p in rec.exceptional_points if p.d == d]
            return _points_result(N, list(rational) + extra, "ozman+exceptional", {"ingested-catalogue"})
    if (N, d) in db.plus_part_records:
        holds, _ = db.plus_part_records[(N, d)]
        if holds:
            # pullbacks of X0+(N)(Q): cusps and CM points; non-rational CM
            # pullbacks live over class-number-one fields, which are excluded
            return _points_result(N, rational, "plus-part", {"ingested-catalogue"})
    if d in rec.field_results:
        fr = rec.field_results[d]
        js = [Q(d).parse(j) if "w" in j else Fraction(j) for j in fr.noncusp_j]
        return LevelResolution(
            N, FINITE if js else ONLY_CUSPS, tuple(js), f"field-record ({fr.provenance})", tags=frozenset({"ingested-catalogue"})
        )
    return LevelResolution(N, UNRESOLVED, reason=fallback)


def _resolve_genus_one(N: int, d: int, mf_context, db: CatalogueDB) -> LevelResolution:
    dec = _rank_decision(N, d, mf_context)
    tags = frozenset({"BSD"})
    if dec.verdict == POSITIVE_RANK:
        return LevelResolution(N, INFINITE, method="rank oracle", tags=tags)
    if dec.verdict != RANK_ZERO:
        return LevelResolution(N, UNRESOLVED, reason=f"rank-indeterminate:{N}:{d}", tags=tags)
    if torsion_no_growth(N, d) != NO_GROWTH:
        return LevelResolution(N, UNRESOLVED, reason=f"possible-torsion-growth:{N}:{d}", tags=tags)
    if N not in db.rational_jinvariants:
        return LevelResolution(N, UNRESOLVED, reason=f"no-rational-j-list:{N}", tags=tags)
    return _points_result(N, db.rational_jinvariants[N], "rank 0, no torsion growth", tags)


def _resolve_37(N: int, d: int, rec: LevelRecord) -> LevelResolution:
    # X0(37) -> 37b1 has degree 2; E(Q) has three points, whose preimages are
    # four rational points and a pair over Q(sqrt 37).
    if d == 37:
        return LevelResolution(N, UNRESOLVED, reason="quotient-preimages-over-K:37")
    dec = rank_over_quadratic("37b1", d)
    tags = frozenset({"BSD"})
    if dec.verdict != RANK_ZERO:
        return LevelResolution(N, UNRESOLVED, reason=f"37b1-rank-{dec.verdict}:{d}", tags=tags)
    if torsion_no_growth("37b1", d) != NO_GROWTH:
        return LevelResolution(N, UNRESOLVED, reason=f"37b1-torsion-growth:{d}", tags=tags)
    return _points_result(N, rec.rational_noncusp_j, "quotient 37b1", tags)


def is_hyperelliptic(N: int) -> bool:
    return N in HYPERELLIPTIC_LEVELS
