"""Per-field solve, convenient-field search and report emission."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from importlib import resources
from pathlib import Path

from .arith.primes import is_prime, is_squarefree, prime_divisors
from .catalogue import FINITE, INFINITE, ONLY_CUSPS, UNRESOLVED, CatalogueDB, resolve_level
from .isogeny import ModPolyDB, unrecorded_isogenies
from .lfunction_rank import DEFAULT_BITS, rank_over_quadratic
from .minimally_finite import EXCLUDED_D, IndeterminateOracle, check_field, compute_mf, load_s2_table
from .modular_geometry import genus

REPORT_SCHEMA = "quadisog.report/1"
GROWTH_SCHEMA = "quadisog.plusgrowth/1"

GENUS_ZERO = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25)

COMPLETE = "complete"
BLOCKED = "blocked"


class MissingOracleData(LookupError):
    """Raised by the search when data for some (condition, d) pairs is absent."""

    def __init__(self, pairs):
        self.pairs = sorted(pairs, key=lambda t: (t[1], t[0]))
        shown = ", ".join(f"({c}, {d})" for c, d in self.pairs[:8])
        more = f" and {len(self.pairs) - 8} more" if len(self.pairs) > 8 else ""
        super().__init__(f"missing oracle data for {shown}{more}")


@dataclass(frozen=True)
class SearchConfig:
    d_range: tuple[int, int] = (-10**4, 10**4)
    s2_path: str | None = None
    growth_path: str | None = None
    catalogue_path: str | None = None
    known_threshold: int = 100
    allowed_large: frozenset = frozenset({125, 163, 169})
    modpoly_dir: str | None = None
    threads: int = 1
    precision: int = DEFAULT_BITS

    def __post_init__(self):
        lo, hi = self.d_range
        if not (isinstance(lo, int) and isinstance(hi, int)) or lo > hi:
            raise ValueError(f"bad d range {self.d_range}")
        if self.known_threshold < 1:
            raise ValueError("known-levels threshold must be at least 1")


@dataclass(frozen=True)
class TableRow:
    N: int
    genus: int
    nu: int | None  # None means infinitely many
    j_invariants: tuple[str, ...] = ()


@dataclass(frozen=True)
class ResolutionRow:
    N: int
    kind: str
    j_invariants: tuple[str, ...]
    method: str
    reason: str


@dataclass(frozen=True)
class FieldReport:
    d: int
    status: str
    blockers: tuple[str, ...]
    tags: tuple[str, ...]
    s2: tuple[int, ...]
    mf: tuple[int, ...]
    beyond_q_infinite: tuple[int, ...]
    resolutions: tuple[ResolutionRow, ...]
    unrecorded: tuple[tuple[str, int, int], ...] | None
    rows: tuple[TableRow, ...] = field(default=())

    def table(self) -> list[tuple[str, int, str]]:
        """Rows as printed: genus-0 levels up to 10 collapse into one row."""
        out = []
        small = {r.N for r in self.rows if r.N <= 10 and r.genus == 0 and r.nu is None}
        collapse = small == set(range(2, 11))
        if collapse:
            out.append(("<=10", 0, "inf"))
        for r in self.rows:
            if collapse and r.N in small:
                continue
            out.append((str(r.N), r.genus, "inf" if r.nu is None else str(r.nu)))
        return out


def _catalogue(config: SearchConfig) -> CatalogueDB:
    return CatalogueDB.load(config.catalogue_path) if config.catalogue_path else CatalogueDB.default()


def _modpolys(config: SearchConfig) -> ModPolyDB:
    return ModPolyDB(config.modpoly_dir) if config.modpoly_dir else ModPolyDB.default()


def _oracle(config: SearchConfig):
    if config.precision == DEFAULT_BITS:
        return rank_over_quadratic
    return partial(rank_over_quadratic, bits=config.precision)


def solve_field(d: int, config: SearchConfig | None = None) -> FieldReport:
    """Steps (a) and (b) of the strategy for Q(sqrt d)."""
    config = config or SearchConfig()
    check_field(d)
    db = _catalogue(config)
    s2_table = load_s2_table(config.s2_path)
    blockers: list[str] = []
    tags = {"BSD"}
    if d not in s2_table:
        return FieldReport(d, BLOCKED, (f"missing-s2:{d}",), tuple(sorted(tags)), (), (), (), (), None, ())
    entry = s2_table[d]
    if "GRH" in entry.conditional_on:
        tags.add("GRH")
    try:
        mf = compute_mf(d, entry.primes, _oracle(config))
    except IndeterminateOracle as exc:
        mf = exc.args[1]
        blockers.extend(f"rank-indeterminate:{N}:{d}" for N in sorted(mf.indeterminate_levels))
    resolutions: dict[int, ResolutionRow] = {}
    finite: dict[int, list] = {}
    for N in sorted(mf.mf):
        res = resolve_level(N, d, mf, db)
        tags |= set(res.tags)
        resolutions[N] = ResolutionRow(N, res.kind, tuple(str(j) for j in res.j_invariants), res.method, res.reason)
        if res.kind == UNRESOLVED:
            blockers.append(res.reason)
        elif res.kind in (FINITE, ONLY_CUSPS) and res.j_invariants:
            finite[N] = list(res.j_invariants)
    # genus-one levels outside MF are positive rank (infinite); record them too
    for dec in mf.decisions:
        if dec.level not in resolutions:
            res = resolve_level(dec.level, d, mf, db)
            resolutions[dec.level] = ResolutionRow(
                dec.level, res.kind, tuple(str(j) for j in res.j_invariants), res.method, res.reason
            )
            if res.kind == UNRESOLVED:
                blockers.append(res.reason)
    rows = _table_rows(resolutions)
    unrecorded = None
    if not blockers:
        prime_set = set(entry.primes)
        for r in rows:
            prime_set |= set(prime_divisors(r.N)) if r.N > 1 else set()
        known = db.known_pairs({p for p in prime_set if is_prime(p)})
        findings, blocked = unrecorded_isogenies(finite, d, mf.mf, sorted(prime_set), _modpolys(config), known)
        blockers.extend(f"isogeny-graph:{j}:{why}" for j, why in blocked)
        unrecorded = tuple(findings)
        if findings:
            blockers.append("unrecorded-isogenies")
    status = COMPLETE if not blockers else BLOCKED
    return FieldReport(
        d=d,
        status=status,
        blockers=tuple(blockers),
        tags=tuple(sorted(tags)),
        s2=tuple(sorted(entry.primes)),
        mf=tuple(sorted(mf.mf)),
        beyond_q_infinite=tuple(sorted(mf.b)),
        resolutions=tuple(resolutions[N] for N in sorted(resolutions)),
        unrecorded=unrecorded,
        rows=tuple(rows),
    )


def _table_rows(resolutions: dict[int, ResolutionRow]) -> list[TableRow]:
    """Levels with infinitely many or with noncuspidal K-points, ordered by (genus, N)."""
    rows = [TableRow(N, 0, None) for N in GENUS_ZERO]
    for N, r in resolutions.items():
        if r.kind == INFINITE and genus(N) > 0:
            rows.append(TableRow(N, genus(N), None))
        elif r.kind == FINITE:
            rows.append(TableRow(N, genus(N), len(r.j_invariants), r.j_invariants))
    rows = [r for r in rows if r.N > 1]
    rows.sort(key=lambda r: (r.genus, r.N))
    return rows


# -- emission -----------------------------------------------------------


def report_to_dict(report: FieldReport) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "d": report.d,
        "status": report.status,
        "blockers": list(report.blockers),
        "assumptions": list(report.tags),
        "s2": list(report.s2),
        "mf": list(report.mf),
        "beyond_q_infinite": list(report.beyond_q_infinite),
        "resolutions": [
            {"N": r.N, "kind": r.kind, "j": list(r.j_invariants), "method": r.method, "reason": r.reason}
            for r in report.resolutions
        ],
        "unrecorded": None if report.unrecorded is None else [list(u) for u in report.unrecorded],
        "table": [
            {"N": r.N, "genus": r.genus, "nu": "inf" if r.nu is None else r.nu, "j": list(r.j_invariants)}
            for r in report.rows
        ],
    }


def report_from_dict(raw: dict) -> FieldReport:
    if raw.get("schema") != REPORT_SCHEMA:
        raise ValueError(f"unrecognised report schema {raw.get('schema')!r}")
    return FieldReport(
        d=int(raw["d"]),
        status=raw["status"],
        blockers=tuple(raw["blockers"]),
        tags=tuple(raw["assumptions"]),
        s2=tuple(raw["s2"]),
        mf=tuple(raw["mf"]),
        beyond_q_infinite=tuple(raw["beyond_q_infinite"]),
        resolutions=tuple(
            ResolutionRow(r["N"], r["kind"], tuple(r["j"]), r["method"], r["reason"]) for r in raw["resolutions"]
        ),
        unrecorded=None if raw["unrecorded"] is None else tuple((a, int(b), int(c)) for a, b, c in raw["unrecorded"]),
        rows=tuple(
            TableRow(r["N"], r["genus"], None if r["nu"] == "inf" else int(r["nu"]), tuple(r["j"])) for r in raw["table"]
        ),
    )


def emit_report(report: FieldReport, fmt: str = "text") -> str:
    if fmt == "structured":
        return json.dumps(report_to_dict(report), indent=1, sort_keys=True) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [
        f"# cyclic isogenies over Q(sqrt {report.d})",
        f"status\t{report.status}",
        f"assumptions\t{', '.join(report.tags)}",
        f"S2\t{_join(report.s2)}",
        f"MF\t{_join(report.mf)}",
        f"beyond-Q infinite\t{_join(report.beyond_q_infinite)}",
        f"unrecorded\t{'not computed' if report.unrecorded is None else _join(report.unrecorded) or 'none'}",
    ]
    for b in report.blockers:
        lines.append(f"blocker\t{b}")
    lines += ["", "N\tg\tnu"]
    lines += [f"{n}\t{g}\t{nu}" for n, g, nu in report.table()]
    lines += ["", "N\tj"]
    for r in report.rows:
        for j in r.j_invariants:
            lines.append(f"{r.N}\t{j}")
    lines += ["", "N\tresolution\tmethod\treason"]
    for r in report.resolutions:
        lines.append(f"{r.N}\t{r.kind}\t{r.method}\t{r.reason}")
    return "\n".join(lines) + "\n"


def parse_report(document: str) -> FieldReport:
    """Inverse of ``emit_report(..., "structured")``."""
    return report_from_dict(json.loads(document))


def _join(xs) -> str:
    return ", ".join(str(x) for x in xs)


# -- search -------------------------------------------------------------


def load_growth_table(path=None) -> dict[int, bool]:
    """{d: True if J0+(163) gains rank or torsion over Q(sqrt d)}."""
    if path is None:
        res = resources.files("quadisog.data").joinpath("plus_growth_163.json")
        if not res.is_file():
            return {}
        text = res.read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    raw = json.loads(text)
    if raw.get("schema") != GROWTH_SCHEMA:
        raise ValueError("unrecognised growth data schema")
    return {int(e["d"]): bool(e["grows"]) for e in raw["entries"]}


@dataclass(frozen=True)
class SearchTrace:
    d: int
    passed: bool
    conditions: tuple[tuple[str, bool, str], ...]


def _candidates(lo: int, hi: int) -> list[int]:
    return [d for d in range(lo, hi + 1) if d not in (0, 1) and is_squarefree(d)]


def _condition_two(d: int, s2, config: SearchConfig, complete: frozenset) -> tuple[bool, str]:
    try:
        mf = compute_mf(d, s2, _oracle(config))
    except IndeterminateOracle as exc:
        return False, f"rank-indeterminate {sorted(exc.args[0])}"
    large = sorted(N for N in mf.mf if N > config.known_threshold)
    bad = [N for N in large if N not in config.allowed_large and N not in complete]
    return not bad, f"large levels {large}" + (f", unhandled {bad}" if bad else "")


def _trace(args) -> SearchTrace:
    d, s2, grows, config, complete = args
    conds = []
    c1 = d not in EXCLUDED_D
    conds.append(("1", c1, "" if c1 else "imaginary class number one"))
    if not c1:
        return SearchTrace(d, False, tuple(conds))
    ok2, why2 = _condition_two(d, s2, config, complete)
    conds.append(("2", ok2, why2))
    ok3 = not grows
    conds.append(("3", ok3, "J0+(163) grows" if grows else "no growth"))
    return SearchTrace(d, c1 and ok2 and ok3, tuple(conds))


def search_convenient(d_range: tuple[int, int] | None = None, config: SearchConfig | None = None) -> list[SearchTrace]:
    """Convenient d in the range, with one trace per candidate, ordered by d."""
    config = config or SearchConfig()
    lo, hi = d_range or config.d_range
    s2_table = load_s2_table(config.s2_path)
    growth = load_growth_table(config.growth_path)
    cands = _candidates(lo, hi)
    missing = []
    for d in cands:
        if d in EXCLUDED_D:
            continue
        if d not in s2_table:
            missing.append(("S2", d))
        if d not in growth:
            missing.append(("J0+(163) growth", d))
    if missing:
        raise MissingOracleData(missing)
    db = _catalogue(config)
    complete = frozenset(N for N, r in db.levels.items() if r.status == "all_quadratic_points_known" and r.points is not None)
    work = [(d, s2_table[d].primes if d in s2_table else frozenset(), growth.get(d, False), config, complete) for d in cands]
    if config.threads > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            traces = list(pool.map(_trace, work, chunksize=16))
    else:
        traces = [_trace(w) for w in work]
    return sorted(traces, key=lambda t: t.d)


def default_threads() -> int:
    return max(1, (os.cpu_count() or 1))


def write_text(path: Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
