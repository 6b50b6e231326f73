"""The minimally finite level set MF(K) for K = Q(sqrt d)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Iterable

from .arith.primes import is_squarefree
from .lfunction_rank import INDETERMINATE, POSITIVE_RANK, RANK_ZERO, TwistRankDecision, rank_over_quadratic
from .modular_geometry import amf, genus1_levels

# d for which Q(sqrt d) is an imaginary quadratic field of class number one; such a
# field is its own Hilbert class field and is excluded.
EXCLUDED_D = frozenset({-1, -2, -3, -7, -11, -19, -43, -67, -163})

# Primes that are degrees of rational isogenies for infinitely many j over Q.
S3_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)


class ExcludedField(ValueError):
    pass


class IndeterminateOracle(RuntimeError):
    def __init__(self, levels, partial):
        super().__init__(f"rank oracle indeterminate at levels {sorted(levels)}")
        self.levels = sorted(levels)
        self.partial = partial


@dataclass(frozen=True)
class MFResult:
    d: int
    s1: frozenset
    b: frozenset
    s2: frozenset
    s3: frozenset
    mf: frozenset
    indeterminate_levels: frozenset = frozenset()
    decisions: tuple = field(default=(), compare=False)


def remove_multiples(s: Iterable[int]) -> set[int]:
    items = sorted(set(s))
    out: list[int] = []
    for x in items:
        if not any(x % y == 0 for y in out):
            out.append(x)
    return set(out)


def check_field(d: int) -> None:
    if d in (0, 1) or not is_squarefree(d):
        raise ValueError(f"d = {d} must be squarefree and not 0 or 1")
    if d in EXCLUDED_D:
        raise ExcludedField(f"Q(sqrt {d}) is an imaginary quadratic field of class number one")


def compute_mf(
    d: int,
    s2: Iterable[int],
    oracle: Callable[[int, int], TwistRankDecision] = rank_over_quadratic,
) -> MFResult:
    check_field(d)
    s2 = frozenset(int(p) for p in s2)
    decisions = tuple(oracle(N, d) for N in genus1_levels())
    s1 = frozenset(x.level for x in decisions if x.verdict == RANK_ZERO)
    b = frozenset(x.level for x in decisions if x.verdict == POSITIVE_RANK)
    undecided = frozenset(x.level for x in decisions if x.verdict == INDETERMINATE)
    s3 = frozenset(p * n for p in S3_PRIMES for n in b)
    mf = frozenset(remove_multiples(s1 | s2 | s3 | amf()))
    result = MFResult(d, s1, b, s2, s3, mf, undecided, decisions)
    if undecided:
        raise IndeterminateOracle(undecided, result)
    return result


@dataclass(frozen=True)
class S2Entry:
    d: int
    primes: frozenset
    provenance: str
    conditional_on: tuple = ("GRH",)


def load_s2_table(path=None) -> dict[int, S2Entry]:
    if path is None:
        text = resources.files("quadisog.data").joinpath("s2.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    raw = json.loads(text)
    if raw.get("schema") != "quadisog.s2/1":
        raise ValueError("unrecognised S2 data schema")
    return {
        int(e["d"]): S2Entry(int(e["d"]), frozenset(e["primes"]), e["provenance"], tuple(e.get("conditional_on", ())))
        for e in raw["entries"]
    }
