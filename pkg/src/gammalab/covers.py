"""Countably indexed clopen cover families over a finite point sample.

The load-bearing design is the incidence oracle: a rule-based family knows,
for every point, the exact eventually periodic set of indices whose member
contains the point.  Classification (cover / omega / gamma), the
infinite-subfamily operator, derefinement, and finite powers all reduce to
NatSet algebra on incidence sets, so the infinitary definitions become
decidable checks relative to the sample.

Classification of a base family reads "gamma" set-theoretically (the family
must have infinitely many distinct members); classification of a derived
family produced by a witness reads it sequence-wise (membership for all but
finitely many indices).  Explicit families are finite evidence prefixes and
yield Unknown verdicts past their length instead of guesses.

Everything here is immutable and pure; per-point work is independent, and
output order is fixed by the universe order regardless of evaluation order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .cantor import Clopen, Point
from .errors import InputError, ValidationError
from .natsets import NatSet

__all__ = [
    "Verdict",
    "KindReport",
    "Universe",
    "CoverFamily",
    "IndexFamily",
    "AInfWitness",
    "AInfResult",
    "PowersResult",
    "explicit_family",
    "tail_cylinder",
    "schedule_family",
    "hull_tail",
    "interleave",
    "classify",
    "a_infinity",
    "derefine",
    "derefine_union",
    "derefine_shift",
    "powers_lift",
    "check_incidence_consistency",
]

OMEGA_UNIVERSE_CAP = 12


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    value: bool | None
    reason: str = ""
    budget: int | None = None

    @classmethod
    def true(cls) -> "Verdict":
        return cls(True)

    @classmethod
    def false(cls, reason: str = "") -> "Verdict":
        return cls(False, reason)

    @classmethod
    def unknown(cls, reason: str, budget: int | None = None) -> "Verdict":
        return cls(None, reason, budget)

    @classmethod
    def of(cls, flag: bool, reason: str = "") -> "Verdict":
        return cls.true() if flag else cls.false(reason)

    @property
    def is_true(self) -> bool:
        return self.value is True

    @property
    def is_false(self) -> bool:
        return self.value is False

    @property
    def is_unknown(self) -> bool:
        return self.value is None

    def to_json(self):
        if self.value is True:
            return "true"
        if self.value is False:
            return {"value": "false", "reason": self.reason} if self.reason else "false"
        return {"value": "unknown", "reason": self.reason, "budget": self.budget}

    def __repr__(self) -> str:
        if self.value is None:
            return f"Verdict(unknown: {self.reason})"
        return f"Verdict({self.value})"


@dataclass(frozen=True)
class KindReport:
    is_cover: Verdict
    is_omega: Verdict
    is_gamma: Verdict
    proper: Verdict
    horizon: int
    strict: bool = False

    def true_kinds(self) -> set[str]:
        out = set()
        for name in ("is_cover", "is_omega", "is_gamma", "proper"):
            if getattr(self, name).is_true:
                out.add(name)
        return out

    def to_json(self) -> dict:
        return {
            "is_cover": self.is_cover.to_json(),
            "is_omega": self.is_omega.to_json(),
            "is_gamma": self.is_gamma.to_json(),
            "proper": self.proper.to_json(),
            "horizon": self.horizon,
            "strict": self.strict,
        }


# ---------------------------------------------------------------------------
# universe


@dataclass(frozen=True)
class Universe:
    points: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise InputError("universe must be nonempty")
        if len(set(self.points)) != len(self.points):
            raise InputError("universe points must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def nonempty_subsets(self, max_size: int | None = None):
        """Nonempty subsets in deterministic (size, position) order."""
        top = len(self.points) if max_size is None else min(max_size, len(self.points))
        for size in range(1, top + 1):
            for combo in itertools.combinations(self.points, size):
                yield combo

    def to_json(self) -> list:
        return [p.to_json() for p in self.points]


# ---------------------------------------------------------------------------
# cover families


@dataclass(frozen=True, eq=False)
class CoverFamily:
    """A countably indexed family of clopen sets with an incidence oracle.

    ``members`` holds finite evidence for explicit families; rule-based
    families carry total ``member_fn`` and exact ``incidence_fn`` instead.
    ``full_indices`` is the exact set of indices whose member is the whole
    space (None when the rule cannot say).  The monotonicity and
    distinctness flags are constructor knowledge used by classification and
    by derefinement; they are never guessed.
    """

    label: str
    kind: str
    members: tuple[Clopen, ...] | None = None
    member_fn: Callable[[int], Clopen] | None = None
    incidence_fn: Callable[[Point], NatSet] | None = None
    full_indices: NatSet | None = None
    bijective: bool = False
    infinite_distinct: bool | None = None
    monotone_decreasing: bool = False
    strictly_decreasing: bool = False
    limit_points: tuple[Point, ...] | None = None
    params: dict = field(default_factory=dict)

    @property
    def is_rule_based(self) -> bool:
        return self.members is None

    @property
    def length(self) -> int | None:
        return None if self.members is None else len(self.members)

    def member_at(self, n: int) -> Clopen:
        if n < 0:
            raise InputError("member index must be a natural")
        if self.members is not None:
            if n >= len(self.members):
                raise InputError(
                    f"explicit family {self.label!r} has no member {n}"
                )
            return self.members[n]
        assert self.member_fn is not None
        return self.member_fn(n)

    def incidence(self, x: Point) -> NatSet:
        """Exact incidence set for rule-based families.

        For explicit families this is the evidence set over the family's
        finite length; indices past the length are not claimed.
        """
        if self.members is not None:
            return NatSet.from_elements(
                n for n, m in enumerate(self.members) if m.contains_point(x)
            )
        assert self.incidence_fn is not None
        return self.incidence_fn(x)

    def __repr__(self) -> str:
        return f"CoverFamily({self.label!r}, kind={self.kind!r})"


def explicit_family(
    members: Sequence[Clopen], label: str = "explicit", bijective: bool = False
) -> CoverFamily:
    return CoverFamily(
        label=label,
        kind="explicit",
        members=tuple(members),
        bijective=bijective,
        infinite_distinct=None,
    )


def tail_cylinder(word: str, label: str = "tail_cylinder") -> CoverFamily:
    """Members [word . 0^n]: a strictly shrinking run of cylinders."""

    def member(n: int) -> Clopen:
        return Clopen.cylinder(word + "0" * n)

    def incidence(x: Point) -> NatSet:
        if not x.starts_with(word):
            return NatSet.empty()
        j = x.first_one_at_or_after(len(word))
        if j is None:
            return NatSet.full()
        return NatSet.tail(0) - NatSet.tail(j - len(word) + 1)

    return CoverFamily(
        label=label,
        kind="tail_cylinder",
        member_fn=member,
        incidence_fn=incidence,
        full_indices=NatSet.from_elements([0]) if word == "" else NatSet.empty(),
        bijective=True,
        infinite_distinct=True,
        monotone_decreasing=True,
        strictly_decreasing=True,
        limit_points=(Point(word, "0"),),
        params={"word": word},
    )


def schedule_family(
    initial: Sequence[Clopen], cycle: Sequence[Clopen], label: str = "schedule"
) -> CoverFamily:
    """Explicit members for a prefix, then a repeating cycle of members.

    Incidence sets are eventually periodic by construction, making this the
    generic finitely-presented family with fully general prefixes.  The set
    of distinct members is finite, so a schedule is never a gamma family,
    though it can be a cover or an omega cover.
    """
    initial = tuple(initial)
    cycle = tuple(cycle)
    if not cycle:
        raise InputError("schedule needs a nonempty cycle")

    def member(n: int) -> Clopen:
        if n < len(initial):
            return initial[n]
        return cycle[(n - len(initial)) % len(cycle)]

    def incidence(x: Point) -> NatSet:
        pre = "".join("1" if m.contains_point(x) else "0" for m in initial)
        per = "".join("1" if m.contains_point(x) else "0" for m in cycle)
        return NatSet(pre, per)

    full = NatSet(
        "".join("1" if m.is_full else "0" for m in initial),
        "".join("1" if m.is_full else "0" for m in cycle),
    )
    return CoverFamily(
        label=label,
        kind="schedule",
        member_fn=member,
        incidence_fn=incidence,
        full_indices=full,
        bijective=False,
        infinite_distinct=False,
        params={"initial": len(initial), "cycle": len(cycle)},
    )


def hull_tail(
    points: Sequence[Point], extra: int = 0, label: str = "hull_tail"
) -> CoverFamily:
    """Members are unions of depth-(n + d) cylinders around the given points.

    The base depth d is past every pairwise separation, so members shrink
    strictly and the enumeration is injective.  Universe points listed here
    get full incidence; any other point falls out after finitely many steps.
    """
    points = tuple(points)
    if not points:
        raise InputError("hull needs at least one point")
    if extra < 0:
        raise InputError("extra depth must be >= 0")
    maxsep = 0
    for i, p in enumerate(points):
        for q in points[i + 1 :]:
            s = p.separation(q)
            if s is None:
                raise InputError("hull points must be pairwise distinct")
            maxsep = max(maxsep, s + 1)
    depth = max(1, maxsep) + extra

    def member(n: int) -> Clopen:
        return Clopen.from_words({p.prefix(n + depth) for p in points})

    if member(0).is_full:
        raise InputError("hull at base depth is the full space; increase extra")

    def incidence(x: Point) -> NatSet:
        best = -1
        for p in points:
            s = x.separation(p)
            if s is None:
                return NatSet.full()
            best = max(best, s)
        if best < depth:
            return NatSet.empty()
        return NatSet.from_elements(range(best - depth + 1))

    return CoverFamily(
        label=label,
        kind="hull_tail",
        member_fn=member,
        incidence_fn=incidence,
        full_indices=NatSet.empty(),
        bijective=True,
        infinite_distinct=True,
        monotone_decreasing=True,
        strictly_decreasing=True,
        limit_points=points,
        params={"depth": depth, "points": [p.to_json() for p in points]},
    )


def interleave(
    families: Sequence[CoverFamily],
    label: str = "interleaved",
    members_disjoint: bool = False,
) -> CoverFamily:
    """Round-robin merge: member kB+i comes from the i-th input at index k."""
    families = tuple(families)
    if not families:
        raise InputError("interleave needs at least one family")
    if any(not f.is_rule_based for f in families):
        raise InputError("interleave expects rule-based inputs")
    k = len(families)

    def member(n: int) -> Clopen:
        return families[n % k].member_at(n // k)

    def incidence(x: Point) -> NatSet:
        out = NatSet.empty()
        for i, f in enumerate(families):
            out = out | f.incidence(x).affine_image(k, i)
        return out

    fulls: NatSet | None = NatSet.empty()
    for i, f in enumerate(families):
        if f.full_indices is None:
            fulls = None
            break
        fulls = fulls | f.full_indices.affine_image(k, i)

    flags = [f.infinite_distinct for f in families]
    if any(v is True for v in flags):
        distinct: bool | None = True
    elif any(v is None for v in flags):
        distinct = None
    else:
        distinct = False

    return CoverFamily(
        label=label,
        kind="interleaved",
        member_fn=member,
        incidence_fn=incidence,
        full_indices=fulls,
        bijective=all(f.bijective for f in families) and members_disjoint,
        infinite_distinct=distinct,
        params={"parts": [f.label for f in families]},
    )


def check_incidence_consistency(
    cover: CoverFamily, points: Iterable[Point], horizon: int = 16
) -> None:
    """Sampled consistency: incidence agrees with direct membership."""
    stop = horizon if cover.length is None else min(horizon, cover.length)
    for x in points:
        inc = cover.incidence(x)
        for n in range(stop):
            if (n in inc) != cover.member_at(n).contains_point(x):
                raise ValidationError(
                    f"incidence of {cover.label!r} disagrees with member {n}"
                )


# ---------------------------------------------------------------------------
# index families and witnesses


@dataclass(frozen=True, eq=False)
class IndexFamily:
    """The indexed collection of index sets carried by a witness.

    Rule kinds provide ``support(I)``, the exact set of positions n with
    A_n contained in I, which is what turns derived-family classification
    into NatSet algebra.  Explicit lists are finite evidence.
    """

    kind: str
    sets_: tuple[NatSet, ...] | None = None
    base: NatSet | None = None
    blocks: tuple[NatSet, ...] | None = None

    @classmethod
    def explicit(cls, sets: Sequence[NatSet]) -> "IndexFamily":
        return cls(kind="explicit", sets_=tuple(sets))

    @classmethod
    def tails(cls) -> "IndexFamily":
        return cls(kind="tails")

    @classmethod
    def set_tails(cls, base: NatSet) -> "IndexFamily":
        return cls(kind="set_tails", base=base)

    @classmethod
    def constant(cls, base: NatSet) -> "IndexFamily":
        return cls(kind="constant", base=base)

    @classmethod
    def block_tails(cls, blocks: Sequence[NatSet]) -> "IndexFamily":
        blocks = tuple(blocks)
        if not blocks:
            raise InputError("block_tails needs at least one block")
        return cls(kind="block_tails", blocks=blocks)

    @property
    def length(self) -> int | None:
        return None if self.sets_ is None else len(self.sets_)

    def set_at(self, n: int) -> NatSet:
        if n < 0:
            raise InputError("index must be a natural")
        if self.kind == "explicit":
            assert self.sets_ is not None
            if n >= len(self.sets_):
                raise InputError(f"explicit index family has no set {n}")
            return self.sets_[n]
        if self.kind == "tails":
            return NatSet.tail(n)
        if self.kind == "set_tails":
            assert self.base is not None
            return self.base & NatSet.tail(n)
        if self.kind == "constant":
            assert self.base is not None
            return self.base
        if self.kind == "block_tails":
            assert self.blocks is not None
            b = len(self.blocks)
            return self.blocks[n % b] & NatSet.tail(n // b)
        raise InputError(f"unknown index family kind {self.kind!r}")

    def all_infinite(self) -> bool:
        if self.kind == "explicit":
            assert self.sets_ is not None
            return all(s.is_infinite for s in self.sets_)
        if self.kind == "tails":
            return True
        if self.kind in ("set_tails", "constant"):
            assert self.base is not None
            return self.base.is_infinite
        if self.kind == "block_tails":
            assert self.blocks is not None
            return all(b.is_infinite for b in self.blocks)
        raise InputError(f"unknown index family kind {self.kind!r}")

    def support(self, inc: NatSet) -> NatSet | None:
        """Exact {n : A_n subset of inc}; None when no closed form exists."""
        if self.kind == "explicit":
            assert self.sets_ is not None
            return NatSet.from_elements(
                n for n, s in enumerate(self.sets_) if s.issubset(inc)
            )
        if self.kind == "tails":
            missing = ~inc
            if not missing.is_finite:
                return NatSet.empty()
            worst = missing.max_element()
            return NatSet.tail(0 if worst is None else worst + 1)
        if self.kind == "set_tails":
            assert self.base is not None
            stray = self.base - inc
            if not stray.is_finite:
                return NatSet.empty()
            worst = stray.max_element()
            return NatSet.tail(0 if worst is None else worst + 1)
        if self.kind == "constant":
            assert self.base is not None
            return NatSet.full() if self.base.issubset(inc) else NatSet.empty()
        if self.kind == "block_tails":
            assert self.blocks is not None
            b = len(self.blocks)
            out = NatSet.empty()
            for i, block in enumerate(self.blocks):
                stray = block - inc
                if not stray.is_finite:
                    continue
                worst = stray.max_element()
                m0 = 0 if worst is None else worst + 1
                out = out | NatSet.arith(i + b * m0, b)
            return out
        return None

    def to_json(self) -> dict:
        out: dict = {"variant": self.kind}
        if self.sets_ is not None:
            out["sets"] = [s.to_json() for s in self.sets_]
        if self.base is not None:
            out["set"] = self.base.to_json()
        if self.blocks is not None:
            out["blocks"] = [s.to_json() for s in self.blocks]
        return out


@dataclass(frozen=True, eq=False)
class AInfWitness:
    """Data certifying a family admits infinite subfamilies of a given kind.

    ``evidence_only`` marks witnesses whose index sets were observed on a
    finite horizon only (their infinitude is Unknown rather than checked).
    """

    base: CoverFamily
    index_sets: IndexFamily
    evidence_only: bool = False

    def validate(self) -> None:
        if self.evidence_only:
            return
        if not self.index_sets.all_infinite():
            raise InputError("finite index set: not a valid witness")


@dataclass(frozen=True)
class AInfResult:
    report: KindReport
    traces: tuple[frozenset[Point], ...]
    good_sets: Mapping[Point, NatSet]
    exact: bool

    def trace_lists(self, universe: "Universe") -> list[list[dict]]:
        out = []
        for tr in self.traces:
            out.append([p.to_json() for p in universe if p in tr])
        return out


# ---------------------------------------------------------------------------
# classification


def _check_universe(universe: Universe) -> None:
    if len(universe) > OMEGA_UNIVERSE_CAP:
        raise InputError(
            f"universe larger than {OMEGA_UNIVERSE_CAP} points: "
            "the omega check enumerates all subsets"
        )


def classify(
    cover: CoverFamily, universe: Universe, budget: int = 64, strict: bool = False
) -> KindReport:
    """Kind verdicts for a base family, relative to the universe."""
    _check_universe(universe)
    incs = {x: cover.incidence(x) for x in universe}

    if cover.is_rule_based:
        is_cover = Verdict.of(
            all(not incs[x].is_empty for x in universe),
            "some point lies in no member",
        )
        omega_ok = True
        for combo in universe.nonempty_subsets():
            common = NatSet.full()
            for x in combo:
                common = common & incs[x]
            if common.is_empty:
                omega_ok = False
                break
        is_omega = Verdict.of(omega_ok, "a finite subset fits in no member")

        if cover.infinite_distinct is None:
            is_gamma: Verdict = Verdict.unknown(
                "distinct-member count unknown for this rule", budget
            )
        elif not cover.infinite_distinct:
            is_gamma = Verdict.false("finitely many distinct members")
        else:
            is_gamma = Verdict.of(
                all(incs[x].is_cofinite for x in universe),
                "some incidence set is not cofinite",
            )
        proper = _proper_rule_based(cover, budget)
    else:
        L = len(cover.members or ())
        is_cover = (
            Verdict.true()
            if all(not incs[x].is_empty for x in universe)
            else Verdict.unknown("point uncovered within evidence", L)
        )
        omega_ok = True
        for combo in universe.nonempty_subsets():
            common = NatSet.full()
            for x in combo:
                common = common & incs[x]
            if common.is_empty:
                omega_ok = False
                break
        is_omega = (
            Verdict.true()
            if omega_ok
            else Verdict.unknown("finite subset unwitnessed within evidence", L)
        )
        is_gamma = Verdict.unknown("finite evidence cannot decide gamma", L)
        fulls = [n for n, m in enumerate(cover.members or ()) if m.is_full]
        proper = (
            Verdict.false(f"member {fulls[0]} is the full space")
            if fulls
            else Verdict.true()
        )

    if strict and proper.is_true:
        common = NatSet.full()
        for x in universe:
            common = common & incs[x]
        if not common.is_empty:
            n0 = common.min_element()
            proper = Verdict.false(f"member {n0} traces onto the whole universe")

    return KindReport(is_cover, is_omega, is_gamma, proper, budget, strict)


def _proper_rule_based(cover: CoverFamily, budget: int) -> Verdict:
    if cover.full_indices is not None:
        if cover.full_indices.is_empty:
            return Verdict.true()
        n0 = cover.full_indices.min_element()
        return Verdict.false(f"member {n0} is the full space")
    for n in range(budget):
        if cover.member_at(n).is_full:
            return Verdict.false(f"member {n} is the full space")
    return Verdict.unknown("no full member within budget", budget)


# ---------------------------------------------------------------------------
# the infinite-subfamily operator


def a_infinity(
    cover: CoverFamily,
    witness: AInfWitness,
    universe: Universe,
    horizon: int = 24,
) -> AInfResult:
    """Derived family of a witness and its kind report, relative to X.

    The derived member for index set A has trace {x : A subset of
    incidence(x)}.  Derived families are classified sequence-wise; with a
    rule index family every verdict is exact, with explicit evidence the
    undecided ones degrade to Unknown.
    """
    _check_universe(universe)
    if witness.base is not cover and witness.base.label != cover.label:
        raise InputError("witness was built for a different family")
    witness.validate()

    if not cover.is_rule_based:
        unknown = Verdict.unknown(
            "explicit family: incidence beyond evidence unknown", cover.length
        )
        report = KindReport(unknown, unknown, unknown, unknown, horizon)
        return AInfResult(report, (), {}, exact=False)

    if witness.evidence_only:
        unknown = Verdict.unknown("evidence-only witness: infinitude unchecked", None)
        traces = _derived_traces(cover, witness.index_sets, universe, horizon)
        return AInfResult(
            KindReport(unknown, unknown, unknown, unknown, horizon),
            traces,
            {},
            exact=False,
        )

    idx = witness.index_sets
    incs = {x: cover.incidence(x) for x in universe}
    good: dict[Point, NatSet] = {}
    supported = True
    for x in universe:
        s = idx.support(incs[x])
        if s is None:
            supported = False
            break
        good[x] = s

    if not supported:
        # no closed-form support: scan the horizon
        return _a_infinity_scanned(cover, idx, universe, incs, horizon)

    explicit = idx.kind == "explicit"
    L = idx.length

    def exists(s: NatSet) -> Verdict:
        if not s.is_empty:
            return Verdict.true()
        if explicit:
            return Verdict.unknown("not witnessed within explicit index list", L)
        return Verdict.false("no index set fits")

    is_cover = _all_verdicts(exists(good[x]) for x in universe)

    omega_parts = []
    for combo in universe.nonempty_subsets():
        common = NatSet.full()
        for x in combo:
            common = common & incs[x]
        s = idx.support(common)
        assert s is not None
        omega_parts.append(exists(s))
    is_omega = _all_verdicts(omega_parts)

    if explicit:
        is_gamma: Verdict = Verdict.unknown(
            "explicit index list cannot decide gamma", L
        )
    else:
        is_gamma = Verdict.of(
            all(good[x].is_cofinite for x in universe),
            "derived membership is not cofinite for some point",
        )

    proper = _derived_proper(cover, idx, horizon)
    traces = _derived_traces(cover, idx, universe, horizon)
    report = KindReport(is_cover, is_omega, is_gamma, proper, horizon)
    return AInfResult(report, traces, good, exact=not explicit)


def _all_verdicts(parts: Iterable[Verdict]) -> Verdict:
    worst: Verdict = Verdict.true()
    for v in parts:
        if v.is_false:
            return v
        if v.is_unknown:
            worst = v
    return worst


def _derived_traces(
    cover: CoverFamily, idx: IndexFamily, universe: Universe, horizon: int
) -> tuple[frozenset[Point], ...]:
    incs = {x: cover.incidence(x) for x in universe}
    stop = horizon if idx.length is None else min(horizon, idx.length)
    out = []
    for n in range(stop):
        a = idx.set_at(n)
        out.append(frozenset(x for x in universe if a.issubset(incs[x])))
    return tuple(out)


def _derived_proper(cover: CoverFamily, idx: IndexFamily, horizon: int) -> Verdict:
    fulls = cover.full_indices
    if fulls is None:
        return Verdict.unknown("member fullness unknown for this rule", horizon)
    if fulls.is_finite:
        # an infinite index set cannot consist of full members only
        stop = idx.length if idx.length is not None else 0
        for n in range(min(stop, horizon)):
            if idx.set_at(n).issubset(fulls):
                return Verdict.false(f"derived member {n} is the full space")
        return Verdict.true()
    stop = horizon if idx.length is None else min(horizon, idx.length)
    for n in range(stop):
        if idx.set_at(n).issubset(fulls):
            return Verdict.false(f"derived member {n} is the full space")
    return Verdict.unknown("fullness undecided past horizon", horizon)


def _a_infinity_scanned(
    cover: CoverFamily,
    idx: IndexFamily,
    universe: Universe,
    incs: Mapping[Point, NatSet],
    horizon: int,
) -> AInfResult:
    traces = _derived_traces(cover, idx, universe, horizon)
    covered = {x: any(x in tr for tr in traces) for x in universe}
    is_cover = (
        Verdict.true()
        if all(covered.values())
        else Verdict.unknown("not witnessed within horizon", horizon)
    )
    omega_ok = all(
        any(set(combo) <= tr for tr in traces)
        for combo in universe.nonempty_subsets()
    )
    is_omega = (
        Verdict.true()
        if omega_ok
        else Verdict.unknown("not witnessed within horizon", horizon)
    )
    is_gamma = Verdict.unknown("no closed-form support for this index rule", horizon)
    proper = _derived_proper(cover, idx, horizon)
    return AInfResult(
        KindReport(is_cover, is_omega, is_gamma, proper, horizon),
        traces,
        {},
        exact=False,
    )


# ---------------------------------------------------------------------------
# derefinement


def derefine(
    cover: CoverFamily, expansion: CoverFamily, horizon: int = 24
) -> CoverFamily:
    """Replace each member by the given superset member; checked pointwise.

    The expansion must come with its own incidence rule (it is itself a
    family); containment and non-fullness are verified within the horizon,
    and exactly when the expansion knows its full members.
    """
    if expansion.full_indices is not None and not expansion.full_indices.is_empty:
        n0 = expansion.full_indices.min_element()
        raise InputError(f"expansion member {n0} is the full space")
    lengths = [L for L in (cover.length, expansion.length) if L is not None]
    stop = min([horizon] + lengths)
    for n in range(stop):
        m, e = cover.member_at(n), expansion.member_at(n)
        if e.is_full:
            raise InputError(f"expansion member {n} is the full space")
        if not m.issubset(e):
            raise InputError(f"expansion member {n} does not contain the original")
    return expansion


def derefine_union(
    cover: CoverFamily, extra: Clopen, label: str | None = None
) -> CoverFamily:
    """Expansion map U_n -> U_n | extra, with exact incidence bookkeeping."""
    if extra.is_full:
        raise InputError("expansion by the full space is not allowed")
    label = label or cover.label + "+patch"

    if not cover.is_rule_based:
        assert cover.members is not None
        return explicit_family([m | extra for m in cover.members], label)

    if cover.kind == "schedule":
        init = cover.params["initial"]
        cyc = cover.params["cycle"]
        return schedule_family(
            [cover.member_at(n) | extra for n in range(init)],
            [cover.member_at(init + i) | extra for i in range(cyc)],
            label,
        )

    def member(n: int) -> Clopen:
        return cover.member_at(n) | extra

    def incidence(x: Point) -> NatSet:
        if extra.contains_point(x):
            return NatSet.full()
        return cover.incidence(x)

    fulls = _union_full_indices(cover, extra)
    distinct = cover.infinite_distinct
    if cover.strictly_decreasing and cover.limit_points is not None:
        absorbed = all(extra.contains_point(p) for p in cover.limit_points)
        distinct = not absorbed
    elif cover.infinite_distinct is False:
        distinct = False
    else:
        distinct = None

    return CoverFamily(
        label=label,
        kind="derefined_union",
        member_fn=member,
        incidence_fn=incidence,
        full_indices=fulls,
        bijective=False,
        infinite_distinct=distinct,
        monotone_decreasing=cover.monotone_decreasing,
        params={"base": cover.label},
    )


def _union_full_indices(cover: CoverFamily, extra: Clopen, cap: int = 512):
    if cover.full_indices is None:
        return None
    rest = ~extra
    if rest.is_empty:
        return None  # unreachable: extra full is rejected earlier
    if not cover.monotone_decreasing:
        return None
    # members shrink, so {n : rest subset of member n} is a prefix of N
    hits = []
    for n in range(cap):
        if rest.issubset(cover.member_at(n)):
            hits.append(n)
        else:
            break
    else:
        return None
    return NatSet.from_elements(hits) | cover.full_indices


def derefine_shift(cover: CoverFamily, k: int, label: str | None = None) -> CoverFamily:
    """Expansion map U_n -> U_(max(0, n-k)) for monotone shrinking families."""
    if k < 0:
        raise InputError("shift must be >= 0")
    if not cover.is_rule_based or not cover.monotone_decreasing:
        raise InputError("shift expansion needs a monotone rule-based family")
    label = label or cover.label + f"<<{k}"

    def member(n: int) -> Clopen:
        return cover.member_at(max(0, n - k))

    def transform(s: NatSet) -> NatSet:
        out = s.shift(k)
        if 0 in s:
            out = out | NatSet.from_elements(range(k + 1))
        return out

    def incidence(x: Point) -> NatSet:
        return transform(cover.incidence(x))

    fulls = None if cover.full_indices is None else transform(cover.full_indices)
    return CoverFamily(
        label=label,
        kind="derefined_shift",
        member_fn=member,
        incidence_fn=incidence,
        full_indices=fulls,
        bijective=False,
        infinite_distinct=cover.infinite_distinct,
        monotone_decreasing=True,
        strictly_decreasing=False,
        limit_points=cover.limit_points,
        params={"base": cover.label, "shift": k},
    )


# ---------------------------------------------------------------------------
# finite powers


@dataclass(frozen=True)
class PowersResult:
    per_k: Mapping[int, Verdict]
    is_omega_up_to: Verdict
    k_max: int
    sample_traces: tuple[tuple[tuple[int, int], frozenset[Point]], ...]

    def to_json(self, universe: Universe) -> dict:
        return {
            "k_max": self.k_max,
            "per_k": {str(k): v.to_json() for k, v in self.per_k.items()},
            "is_omega_up_to": self.is_omega_up_to.to_json(),
            "sample_traces": [
                {
                    "k": k,
                    "n": n,
                    "trace": [p.to_json() for p in universe if p in tr],
                }
                for (k, n), tr in self.sample_traces
            ],
        }


def powers_lift(
    witnesses: Mapping[int, AInfWitness],
    cover: CoverFamily,
    universe: Universe,
    k_max: int,
    horizon: int = 16,
) -> PowersResult:
    """Assemble per-power witnesses into one family of index sets.

    A tuple of points lies in a power of a member exactly when every
    coordinate does, so the k-th power incidence of a tuple is the
    intersection of the coordinate incidences, and tuples with repetition
    reduce to nonempty subsets of size at most k.  The witness for power k
    must cover all such subsets; the assembled family is then an omega
    cover up to size k_max, which is verified, not assumed.
    """
    _check_universe(universe)
    if k_max < 1:
        raise InputError("power bound must be >= 1")
    for k in range(1, k_max + 1):
        if k not in witnesses:
            raise InputError(f"witness list missing k={k}")
    if not cover.is_rule_based:
        raise InputError("powers need a rule-based family")

    incs = {x: cover.incidence(x) for x in universe}
    per_k: dict[int, Verdict] = {}
    sample: list[tuple[tuple[int, int], frozenset[Point]]] = []

    for k in range(1, k_max + 1):
        w = witnesses[k]
        if w.base is not cover and w.base.label != cover.label:
            raise InputError(f"witness for k={k} was built for a different family")
        w.validate()
        idx = w.index_sets
        verdict = Verdict.true()
        for combo in universe.nonempty_subsets(max_size=k):
            common = NatSet.full()
            for x in combo:
                common = common & incs[x]
            s = idx.support(common)
            if s is None:
                verdict = Verdict.unknown("no closed-form support", horizon)
                break
            if s.is_empty:
                verdict = Verdict.false(
                    f"size-{len(combo)} subset not covered by power-{k} witness"
                )
                break
        if verdict.is_false:
            raise ValidationError(
                f"witness for k={k} fails the power cover: {verdict.reason}"
            )
        per_k[k] = verdict
        for n in range(min(horizon, 4)):
            a = idx.set_at(n)
            sample.append(
                ((k, n), frozenset(x for x in universe if a.issubset(incs[x])))
            )

    assembled = _all_verdicts(per_k.values())
    return PowersResult(per_k, assembled, k_max, tuple(sample))
