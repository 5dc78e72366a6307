"""Executable selection combinators over cover families.

Each function here realizes one constructive argument as an input-output
transformation whose claimed postcondition is re-verified on the spot.
Oracles and witnesses are distrusted: whatever property the construction
is supposed to guarantee is checked against the incidence algebra, and a
failed check is an error rather than a silent wrong answer.  Tie-breaking
is deterministic everywhere (least admissible index first), so runs are
reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .covers import (
    AInfResult,
    AInfWitness,
    CoverFamily,
    IndexFamily,
    KindReport,
    Universe,
    Verdict,
    a_infinity,
    classify,
)
from .errors import InputError, ValidationError
from .natsets import (
    FamilyDiagnostics,
    NatFamily,
    NatSet,
    family_diagnostics,
    from_periodic_test,
    pseudo_intersection_verify,
)

__all__ = [
    "Selection",
    "SelectResult",
    "SelectorOracle",
    "CapinfProblem",
    "CapinfResult",
    "tails_gamma",
    "select_from_witness",
    "default_gamma_selector",
    "capinf_gg",
    "MarczewskiResult",
    "marczewski_map",
    "Decomposition",
    "omochar_forward",
    "omochar_backward",
]


# ---------------------------------------------------------------------------
# selections


@dataclass(frozen=True)
class Selection:
    """Pick sequence: explicit prefix, optionally an affine tail rule.

    With a tail rule the selection is total: pick(n) = slope*n + offset for
    n past the prefix.  Without one it is finite evidence.
    """

    prefix: tuple[int, ...]
    tail_slope: int | None = None
    tail_offset: int = 0

    @property
    def rule_based(self) -> bool:
        return self.tail_slope is not None

    def pick(self, n: int) -> int:
        if n < 0:
            raise InputError("selection index must be a natural")
        if n < len(self.prefix):
            return self.prefix[n]
        if self.tail_slope is None:
            raise InputError(f"selection has no pick {n} (evidence only)")
        return self.tail_slope * n + self.tail_offset

    def picks(self, stop: int) -> list[int]:
        return [self.pick(n) for n in range(stop)]

    def to_json(self) -> dict:
        out: dict = {"prefix": list(self.prefix)}
        if self.tail_slope is not None:
            out["tail"] = [self.tail_slope, self.tail_offset]
        return out


# ---------------------------------------------------------------------------
# tails witnesses (shrinking tails of one enumerated gamma cover)


def tails_gamma(cover: CoverFamily, universe: Universe) -> AInfWitness:
    """Witness a gamma cover by its enumeration tails."""
    if not cover.bijective:
        raise InputError("tails witness needs a bijectively enumerated family")
    report = classify(cover, universe)
    if not report.is_gamma.is_true:
        raise InputError(
            "input is not a gamma cover relative to the universe: "
            + (report.is_gamma.reason or "undecided")
        )
    return AInfWitness(cover, IndexFamily.tails())


# ---------------------------------------------------------------------------
# least-element choice from a witness


def _pick_function(idx: IndexFamily) -> Callable[[int], int]:
    def pick(n: int) -> int:
        m = idx.set_at(n).min_element()
        assert m is not None, "index sets were validated infinite"
        return m

    return pick


def _pullback(idx: IndexFamily, target: NatSet) -> NatSet:
    """Exact {n : min(A_n) in target} for every index-family kind."""
    if idx.kind == "tails":
        return target
    if idx.kind == "constant":
        assert idx.base is not None
        m = idx.base.min_element()
        return NatSet.full() if (m is not None and m in target) else NatSet.empty()
    if idx.kind == "set_tails":
        assert idx.base is not None
        a = idx.base
        L = max(len(a.pre), len(target.pre))
        P = math.lcm(len(a.per), len(target.per))

        def hit(n: int) -> bool:
            m = a.min_element_at_least(n)
            return m is not None and m in target

        return from_periodic_test(hit, L, P)
    if idx.kind == "block_tails":
        assert idx.blocks is not None
        b = len(idx.blocks)
        L = max([len(s.pre) for s in idx.blocks] + [len(target.pre)])
        P = math.lcm(*[len(s.per) for s in idx.blocks], len(target.per))

        def hit(k: int) -> bool:
            m = idx.blocks[k % b].min_element_at_least(k // b)
            return m is not None and m in target

        return from_periodic_test(hit, b * L, b * P)
    if idx.kind == "explicit":
        assert idx.sets_ is not None
        hits = []
        for n, s in enumerate(idx.sets_):
            m = s.min_element()
            if m is not None and m in target:
                hits.append(n)
        return NatSet.from_elements(hits)
    raise InputError(f"unknown index family kind {idx.kind!r}")


@dataclass(frozen=True)
class SelectResult:
    selection: Selection
    picked: CoverFamily
    derived_report: KindReport
    picked_report: KindReport
    preserved: Mapping[str, bool]

    @property
    def all_preserved(self) -> bool:
        return all(self.preserved.values())

    def to_json(self) -> dict:
        return {
            "selection": self.selection.to_json(),
            "derived_report": self.derived_report.to_json(),
            "picked_report": self.picked_report.to_json(),
            "preserved": dict(self.preserved),
        }


def select_from_witness(
    witness: AInfWitness,
    cover: CoverFamily,
    universe: Universe,
    horizon: int = 24,
) -> SelectResult:
    """Choose the least member of each index set and classify the result.

    The picked members form a subfamily of the input; every True kind
    verdict of the derived family is expected to survive, and whether it
    did is reported rather than assumed.
    """
    if witness.base is not cover and witness.base.label != cover.label:
        raise InputError("witness was built for a different family")
    witness.validate()
    if not cover.is_rule_based:
        raise InputError("selection needs a rule-based family")

    idx = witness.index_sets
    pick = _pick_function(idx)

    if idx.kind == "tails":
        selection = Selection((), 1, 0)
    elif idx.kind == "constant":
        selection = Selection((), 0, pick(0))
    else:
        stop = horizon if idx.length is None else min(horizon, idx.length)
        selection = Selection(tuple(pick(n) for n in range(stop)))

    def member(n: int):
        return cover.member_at(pick(n))

    def incidence(x):
        return _pullback(idx, cover.incidence(x))

    fulls = None
    if cover.full_indices is not None:
        fulls = _pullback(idx, cover.full_indices)

    if idx.kind == "tails":
        distinct = cover.infinite_distinct
    elif idx.kind in ("set_tails", "block_tails"):
        distinct = True if cover.bijective else None
    elif idx.kind == "constant":
        distinct = False
    else:
        distinct = None

    picked = CoverFamily(
        label=cover.label + ":picked",
        kind="picked",
        member_fn=member,
        incidence_fn=incidence,
        full_indices=fulls,
        bijective=cover.bijective and idx.kind == "tails",
        infinite_distinct=distinct,
        params={"base": cover.label, "rule": idx.kind},
    )

    derived = a_infinity(cover, witness, universe, horizon).report
    picked_report = classify(picked, universe)
    preserved = {}
    for kind in ("is_cover", "is_omega", "is_gamma"):
        d, p = getattr(derived, kind), getattr(picked_report, kind)
        preserved[kind] = (not d.is_true) or p.is_true
    return SelectResult(selection, picked, derived, picked_report, preserved)


# ---------------------------------------------------------------------------
# the two-cover principle: interleaved shifted rounds plus regrouping


@dataclass(frozen=True, eq=False)
class CapinfProblem:
    """Round-robin presentation of shifted gamma covers.

    Slot m draws from family number fiber_index(m), with members below m
    masked off.  The fiber map is the ruler function (2-adic valuation of
    m+1) truncated to the family count, so every fiber is an arithmetic
    progression and stays inside the exact set algebra.
    """

    families: tuple[CoverFamily, ...]
    universe: Universe

    def __post_init__(self):
        if not 1 <= len(self.families) <= 8:
            raise InputError("between 1 and 8 input families supported")
        labels = [f.label for f in self.families]
        if len(set(labels)) != len(labels):
            raise InputError("input families must carry distinct labels")

    @property
    def fiber_count(self) -> int:
        return len(self.families)

    def fiber_index(self, m: int) -> int:
        v = ((m + 1) & -(m + 1)).bit_length() - 1  # 2-adic valuation of m+1
        return min(v, len(self.families) - 1)

    def fiber_set(self, n: int) -> NatSet:
        k = len(self.families)
        if n < 0 or n >= k:
            raise InputError("no such fiber")
        if n < k - 1:
            return NatSet.arith(2**n - 1, 2 ** (n + 1))
        return NatSet.arith(2 ** (k - 1) - 1, 2 ** (k - 1))

    def slot_family(self, m: int) -> CoverFamily:
        return self.families[self.fiber_index(m)]


SelectorOracle = Callable[[CapinfProblem], Selection]


def default_gamma_selector(problem: CapinfProblem) -> Selection:
    """Honest single-selection oracle for sequences of gamma covers.

    For slot n it picks the least admissible index >= n whose member
    contains every universe point, keeping picks strictly increasing
    within each source family.  The picked family is a gamma cover by
    construction; the walk always reaches an affine tail.
    """
    k = problem.fiber_count
    allowed: list[NatSet] = []
    thresholds: list[int] = []
    for fam in problem.families:
        common = NatSet.full()
        for x in problem.universe:
            common = common & fam.incidence(x)
        if not common.is_cofinite:
            raise InputError(
                f"family {fam.label!r} is not a gamma cover over the universe"
            )
        missing = ~common
        worst = missing.max_element() if not missing.is_empty else None
        allowed.append(common)
        thresholds.append(0 if worst is None else worst + 1)

    last = [-1] * k
    offsets: list[int | None] = [None] * k
    prefix: list[int] = []
    m = 0
    cap = 64 + 4 * (2**k) * (max(thresholds) + 2)
    while True:
        n = problem.fiber_index(m)
        p = allowed[n].min_element_at_least(max(m, last[n] + 1))
        assert p is not None
        prefix.append(p)
        last[n] = p
        if m >= thresholds[n]:
            # in the cofinite region the offset p - m can only shrink
            # (fiber gaps are >= 2 whenever there are >= 2 fibers)
            offsets[n] = p - m
        target = 0 if k >= 2 else None
        done = all(
            off is not None and (target is None or off == target) for off in offsets
        )
        m += 1
        if done:
            break
        if m > cap:
            raise AssertionError("selector failed to stabilize")
    tail_offset = offsets[0] if k == 1 else 0
    assert tail_offset is not None
    return Selection(tuple(prefix), 1, tail_offset)


@dataclass(frozen=True)
class CapinfResult:
    selection: Selection
    pick_sets: tuple[NatSet, ...]
    witnesses: tuple[AInfWitness, ...]
    reports: tuple[KindReport, ...]
    evidence_only: bool

    def to_json(self) -> dict:
        return {
            "selection": self.selection.to_json(),
            "pick_sets": [s.to_json() for s in self.pick_sets],
            "reports": [r.to_json() for r in self.reports],
            "evidence_only": self.evidence_only,
        }


def capinf_gg(
    families: Sequence[CoverFamily],
    oracle: SelectorOracle,
    universe: Universe,
    horizon: int = 32,
) -> CapinfResult:
    """Turn a single-selection oracle into per-family infinite subfamilies.

    The oracle runs on the interleaved shifted rounds; its output is
    validated (strictly increasing per fiber, picks eventually containing
    every point), then regrouped by source family.  Each family gets the
    infinite set of indices picked from it, upgraded to a full witness via
    its tails, and the derived gamma verdict is re-verified exactly.
    """
    families = tuple(families)
    problem = CapinfProblem(families, universe)
    for fam in families:
        rep = classify(fam, universe)
        if not rep.is_gamma.is_true:
            raise InputError(
                f"family {fam.label!r} is not a gamma cover: "
                + (rep.is_gamma.reason or "undecided")
            )

    sel = oracle(problem)
    _validate_capinf_selection(problem, sel)

    k = problem.fiber_count
    if not sel.rule_based:
        # finite evidence: regroup the prefix only and flag the witnesses
        groups: list[list[int]] = [[] for _ in range(k)]
        for m, p in enumerate(sel.prefix):
            groups[problem.fiber_index(m)].append(p)
        pick_sets = tuple(NatSet.from_elements(g) for g in groups)
        witnesses = tuple(
            AInfWitness(families[n], IndexFamily.constant(pick_sets[n]), True)
            for n in range(k)
        )
        reports = tuple(
            a_infinity(families[n], witnesses[n], universe, horizon).report
            for n in range(k)
        )
        return CapinfResult(sel, pick_sets, witnesses, reports, True)

    m0 = len(sel.prefix)
    a, b = sel.tail_slope, sel.tail_offset
    assert a is not None
    pick_sets = []
    for n in range(k):
        explicit = [
            p for m, p in enumerate(sel.prefix) if problem.fiber_index(m) == n
        ]
        tail_slots = problem.fiber_set(n) & NatSet.tail(m0)
        group = NatSet.from_elements(explicit) | tail_slots.affine_image(a, b)
        if not group.is_infinite:
            raise ValidationError(f"picks from family {n} form a finite set")
        pick_sets.append(group)

    witnesses = tuple(
        AInfWitness(families[n], IndexFamily.set_tails(pick_sets[n]))
        for n in range(k)
    )
    reports = []
    for n in range(k):
        res = a_infinity(families[n], witnesses[n], universe, horizon)
        if not res.report.is_gamma.is_true:
            raise ValidationError(
                f"regrouped picks for family {n} fail the gamma check: "
                + res.report.is_gamma.reason
            )
        reports.append(res.report)
    return CapinfResult(sel, tuple(pick_sets), witnesses, tuple(reports), False)


def _validate_capinf_selection(problem: CapinfProblem, sel: Selection) -> None:
    k = problem.fiber_count
    last = [-1] * k
    for m, p in enumerate(sel.prefix):
        n = problem.fiber_index(m)
        if p < m:
            raise ValidationError(f"pick {p} at slot {m} ignores the shift")
        if p <= last[n]:
            raise ValidationError(
                f"picks within family {n} are not strictly increasing"
            )
        last[n] = p
    if not sel.rule_based:
        return
    a, b = sel.tail_slope, sel.tail_offset
    assert a is not None
    if a < 1:
        raise ValidationError(
            "tail slope below 1: the picked family has finitely many members"
        )
    m0 = len(sel.prefix)
    if a * m0 + b < m0:
        raise ValidationError("tail picks ignore the shift at the boundary")
    for n in range(k):
        first = problem.fiber_set(n).min_element_at_least(m0)
        assert first is not None
        if a * first + b <= last[n]:
            raise ValidationError(
                f"tail picks for family {n} do not extend the prefix picks"
            )
    # eventual containment of every point: the bad slots must be finite
    for n, fam in enumerate(problem.families):
        slots = problem.fiber_set(n) & NatSet.tail(m0)
        for x in problem.universe:
            bad = slots & (~fam.incidence(x)).affine_preimage(a, b)
            if not bad.is_finite:
                raise ValidationError(
                    f"picked members from family {n} miss a point cofinally"
                )


# ---------------------------------------------------------------------------
# incidence images of a bijectively enumerated cover


@dataclass(frozen=True)
class MarczewskiResult:
    image: NatFamily
    diagnostics: FamilyDiagnostics
    omega_checked: bool

    def to_json(self) -> dict:
        return {
            "image": self.image.to_json(),
            "diagnostics": self.diagnostics.to_json(),
            "omega_checked": self.omega_checked,
        }


def marczewski_map(
    cover: CoverFamily, universe: Universe, horizon: int = 24
) -> MarczewskiResult:
    """Incidence sets of all universe points, with family diagnostics.

    Requires a bijective enumeration; duplicate members within the horizon
    are rejected.  When the family is an omega cover the image must be
    centered, and this is checked rather than assumed.
    """
    if not cover.bijective:
        raise InputError("incidence image needs a bijectively enumerated family")
    stop = horizon if cover.length is None else min(horizon, cover.length)
    members = [cover.member_at(n) for n in range(stop)]
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            if members[i] == members[j]:
                raise InputError(
                    f"members {i} and {j} coincide: enumeration is not bijective"
                )
    image = NatFamily(tuple(cover.incidence(x) for x in universe))
    diags = family_diagnostics(image)
    report = classify(cover, universe)
    omega_checked = False
    if report.is_omega.is_true:
        if not diags.centered:
            raise ValidationError(
                "omega cover whose incidence image is not centered: "
                "the family confines common indices to a finite prefix"
            )
        omega_checked = True
    return MarczewskiResult(image, diags, omega_checked)


# ---------------------------------------------------------------------------
# decomposition characterization, forward and backward


@dataclass(frozen=True)
class Decomposition:
    """Blocks (A_n, F_n): an index set and the incidence sets it pins down."""

    blocks: tuple[tuple[NatSet, NatFamily], ...]

    def to_json(self) -> dict:
        return {
            "blocks": [
                {"set": a.to_json(), "family": fam.to_json()}
                for a, fam in self.blocks
            ]
        }


def omochar_forward(
    witness: AInfWitness,
    cover: CoverFamily,
    universe: Universe,
    horizon: int = 64,
) -> Decomposition:
    """From a covering witness to a decomposition of the incidence image.

    Block n collects the incidence sets containing the witness's n-th index
    set; every point's incidence set must land in some block, and each
    nonempty block admits its index set as a pseudo-intersection.  Both
    facts are verified.
    """
    res = a_infinity(cover, witness, universe, horizon)
    if not res.report.is_cover.is_true:
        raise InputError(
            "witness derived family does not cover the universe: "
            + (res.report.is_cover.reason or "undecided")
        )
    mus = {x: cover.incidence(x) for x in universe}
    firsts = []
    for x in universe:
        good = res.good_sets.get(x)
        if good is None or good.is_empty:
            raise InputError("covering witness lacks a decidable block per point")
        m = good.min_element()
        assert m is not None
        firsts.append(m)
    count = max(firsts) + 1
    idx = witness.index_sets
    blocks = []
    for n in range(count):
        a = idx.set_at(n)
        fam = NatFamily(tuple(mus[x] for x in universe if a.issubset(mus[x])))
        if len(fam) and not pseudo_intersection_verify(a, fam):
            raise ValidationError(f"index set {n} is not a pseudo-intersection")
        blocks.append((a, fam))
    covered = set()
    for n, (_, fam) in enumerate(blocks):
        covered.update(fam.members)
    missing = [x for x in universe if mus[x] not in covered]
    if missing:
        raise ValidationError("decomposition blocks miss some incidence sets")
    return Decomposition(tuple(blocks))


def omochar_backward(
    decomposition: Decomposition,
    cover: CoverFamily,
    universe: Universe,
    horizon: int = 24,
) -> tuple[AInfWitness, AInfResult]:
    """From a decomposition back to a covering witness.

    Index sets are the block sets cut at every finite start, paired across
    blocks; the derived family must cover the universe, and does whenever
    each block set is a pseudo-intersection of its block.
    """
    problems = []
    for n, (a, fam) in enumerate(decomposition.blocks):
        if not a.is_infinite:
            problems.append(f"block {n}: index set is finite")
            continue
        if not pseudo_intersection_verify(a, fam):
            problems.append(f"block {n}: not a pseudo-intersection of its family")
    mus = {x: cover.incidence(x) for x in universe}
    block_sets = [fam for _, fam in decomposition.blocks]
    for x in universe:
        if not any(mus[x] in fam.members for fam in block_sets):
            problems.append(f"point {x!r}: incidence set outside every block")
    if problems:
        raise InputError("; ".join(problems))

    witness = AInfWitness(
        cover,
        IndexFamily.block_tails(tuple(a for a, _ in decomposition.blocks)),
    )
    res = a_infinity(cover, witness, universe, horizon)
    if not res.report.is_cover.is_true:
        raise ValidationError(
            "reconstructed witness fails to cover: "
            + (res.report.is_cover.reason or "undecided")
        )
    return witness, res
