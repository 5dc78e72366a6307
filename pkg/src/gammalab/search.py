"""Brute-force oracles: exhaustive small-instance search and cross-checks.

The search enumerates a frozen catalog of candidate witnesses (tail sets
first, then arithmetic progressions, each upgraded to a witness via its
tails) in a documented deterministic order, validates each candidate with
the same machinery the combinators are checked against, and returns the
first hit.  Level families get their own catalog of point-set sections.
Budgets are hard caps; existence, not the identity of the witness, is the
stable outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .cantor import Clopen
from .covers import (
    AInfWitness,
    CoverFamily,
    IndexFamily,
    Universe,
    a_infinity,
)
from .errors import GammaLabError, InputError
from .natsets import NatSet
from .smz import HullSection, LevelFamily, LevelWitness, section_covers_point

__all__ = [
    "SearchSpace",
    "SearchOutcome",
    "CrossCheckReport",
    "enumerate_clopens",
    "catalog_index_sets",
    "search_ainf_witness",
    "search_power_witness",
    "search_level_witness",
    "cross_check",
]

MAX_DEPTH = 4
MAX_TAIL = 8
MAX_ARITH = 8
MAX_HORIZON = 64

TARGETS = ("cover", "omega", "gamma")


@dataclass(frozen=True)
class SearchSpace:
    depth: int = 2
    tail_bound: int = 4
    arith_bound: int = 4
    horizon: int = 32

    def __post_init__(self):
        if self.depth > MAX_DEPTH:
            raise InputError(f"depth capped at {MAX_DEPTH}")
        if self.tail_bound > MAX_TAIL:
            raise InputError(f"tail starts capped at {MAX_TAIL}")
        if self.arith_bound > MAX_ARITH:
            raise InputError(f"progression moduli capped at {MAX_ARITH}")
        if self.horizon > MAX_HORIZON:
            raise InputError(f"horizon capped at {MAX_HORIZON}")

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "tail_bound": self.tail_bound,
            "arith_bound": self.arith_bound,
            "horizon": self.horizon,
        }


def enumerate_clopens(depth: int) -> list[Clopen]:
    """All clopen sets of the given depth, by subset mask of depth-d words."""
    if depth > MAX_DEPTH:
        raise InputError(f"depth capped at {MAX_DEPTH}")
    if depth < 0:
        raise InputError("depth must be a natural")
    leaves = [format(i, f"0{depth}b") if depth else "" for i in range(2**depth)]
    out = []
    for mask in range(2 ** len(leaves)):
        words = [w for i, w in enumerate(leaves) if mask >> i & 1]
        out.append(Clopen.from_words(words))
    return out


def catalog_index_sets(space: SearchSpace) -> list[NatSet]:
    """Frozen candidate order: tails by start, then progressions by modulus."""
    out = [NatSet.tail(a) for a in range(space.tail_bound + 1)]
    for q in range(1, space.arith_bound + 1):
        for a in range(q):
            out.append(NatSet.arith(a, q))
    return out


@dataclass(frozen=True)
class SearchOutcome:
    found: AInfWitness | None
    tried: int
    space: SearchSpace

    @property
    def ok(self) -> bool:
        return self.found is not None

    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "tried": self.tried,
            "found": self.found is not None,
            "witness": None
            if self.found is None
            else self.found.index_sets.to_json(),
        }


def _meets(report, target: str) -> bool:
    if target not in TARGETS:
        raise InputError(f"target must be one of {TARGETS}")
    return getattr(report, "is_" + target).is_true


def search_ainf_witness(
    cover: CoverFamily,
    universe: Universe,
    target: str,
    space: SearchSpace | None = None,
) -> SearchOutcome:
    """First catalog witness whose derived family meets the target."""
    space = space or SearchSpace()
    tried = 0
    for base in catalog_index_sets(space):
        tried += 1
        witness = AInfWitness(cover, IndexFamily.set_tails(base))
        try:
            res = a_infinity(cover, witness, universe, horizon=space.horizon)
        except GammaLabError:
            continue
        if _meets(res.report, target):
            return SearchOutcome(witness, tried, space)
    return SearchOutcome(None, tried, space)


def search_power_witness(
    cover: CoverFamily,
    universe: Universe,
    k: int,
    space: SearchSpace | None = None,
) -> SearchOutcome:
    """First catalog witness covering every point set of size at most k."""
    space = space or SearchSpace()
    if k < 1:
        raise InputError("power must be >= 1")
    incs = {x: cover.incidence(x) for x in universe}
    tried = 0
    for base in catalog_index_sets(space):
        tried += 1
        idx = IndexFamily.set_tails(base)
        ok = True
        for combo in universe.nonempty_subsets(max_size=k):
            common = NatSet.full()
            for x in combo:
                common = common & incs[x]
            s = idx.support(common)
            if s is None or s.is_empty:
                ok = False
                break
        if ok:
            return SearchOutcome(AInfWitness(cover, idx), tried, space)
    return SearchOutcome(None, tried, space)


def search_level_witness(
    family: LevelFamily,
    universe: Universe,
    space: SearchSpace | None = None,
) -> tuple[LevelWitness | None, int]:
    """Smallest point-set section list whose traces cover the universe.

    Single sections are tried in (size, position, start) order; the full
    universe section always succeeds, so the search is total.
    """
    space = space or SearchSpace()
    tried = 0
    for size in range(1, len(universe) + 1):
        for combo in combinations(universe.points, size):
            for start in range(space.tail_bound + 1):
                tried += 1
                section = HullSection(tuple(combo), max(1, start))
                if all(
                    section_covers_point(family, section, x) for x in universe
                ):
                    return LevelWitness((section,)), tried
    return None, tried


@dataclass(frozen=True)
class CrossCheckReport:
    consistent: bool
    combinator_ok: bool
    search_found: bool
    tried: int
    note: str

    def to_json(self) -> dict:
        return {
            "consistent": self.consistent,
            "combinator_ok": self.combinator_ok,
            "search_found": self.search_found,
            "tried": self.tried,
            "note": self.note,
        }


def cross_check(
    witness: AInfWitness,
    cover: CoverFamily,
    universe: Universe,
    target: str,
    space: SearchSpace | None = None,
) -> CrossCheckReport:
    """Re-validate a combinator's witness and compare with the search.

    Never raises: discrepancies and too-small search spaces are reported.
    """
    space = space or SearchSpace()
    try:
        res = a_infinity(cover, witness, universe, horizon=space.horizon)
        combinator_ok = _meets(res.report, target)
        note = "" if combinator_ok else f"combinator witness fails {target}"
    except GammaLabError as exc:
        combinator_ok = False
        note = f"combinator witness invalid: {exc}"
    try:
        outcome = search_ainf_witness(cover, universe, target, space)
    except GammaLabError as exc:
        return CrossCheckReport(False, combinator_ok, False, 0, f"search failed: {exc}")
    if combinator_ok and outcome.ok:
        return CrossCheckReport(True, True, True, outcome.tried, "consistent")
    if combinator_ok and not outcome.ok:
        return CrossCheckReport(
            True, True, False, outcome.tried, "search space too small"
        )
    if not combinator_ok and outcome.ok:
        return CrossCheckReport(
            False, False, True, outcome.tried, note or "search succeeds where the combinator failed"
        )
    return CrossCheckReport(False, False, False, outcome.tried, note or "both failed")
