"""Single selections from omega-cover rounds via a combined-family witness.

The input is an eventually periodic schedule of omega covers together with
a finite window of member indices per round.  Flattening the windows gives
one combined family whose incidence sets stay eventually periodic, so a
witness over it can be validated exactly.  The selection step assigns to
each witness set a strictly increasing round whose window it meets, picks
the least such member, fills the remaining rounds with their first member,
and verifies that the resulting single-selection family is an omega cover
relative to the universe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cantor import Clopen
from .covers import (
    AInfWitness,
    CoverFamily,
    KindReport,
    Universe,
    a_infinity,
    classify,
    explicit_family,
)
from .errors import HorizonError, InputError, ValidationError
from .natsets import NatSet, from_periodic_test

__all__ = ["SakaiProblem", "SakaiResult", "sakai_s1"]

ASSIGNMENT_CAP = 512


@dataclass(frozen=True, eq=False)
class SakaiProblem:
    """Rounds of omega covers with a finite selection window per round.

    Round n draws from ``bases[schedule(n)]``; its window is the member
    index range [sel_slope*n + sel_offset, .. + window).  Flat index
    n*window + j names the j-th windowed member of round n.
    """

    bases: tuple[CoverFamily, ...]
    schedule_pre: tuple[int, ...] = ()
    schedule_cycle: tuple[int, ...] = (0,)
    window: int = 1
    sel_slope: int = 1
    sel_offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(self.bases))
        object.__setattr__(self, "schedule_pre", tuple(self.schedule_pre))
        object.__setattr__(self, "schedule_cycle", tuple(self.schedule_cycle))
        if not self.bases:
            raise InputError("need at least one base family")
        if any(not f.is_rule_based for f in self.bases):
            raise InputError("base families must be rule based")
        labels = [f.label for f in self.bases]
        if len(set(labels)) != len(labels):
            raise InputError("base families must carry distinct labels")
        if not self.schedule_cycle:
            raise InputError("schedule cycle must be nonempty")
        ids = list(self.schedule_pre) + list(self.schedule_cycle)
        if any(i < 0 or i >= len(self.bases) for i in ids):
            raise InputError("schedule entry outside the base list")
        if self.window < 1:
            raise InputError("empty selection rows are not allowed")
        if self.sel_slope < 0 or self.sel_offset < 0:
            raise InputError("window rule must map naturals to naturals")

    def schedule_at(self, n: int) -> int:
        if n < len(self.schedule_pre):
            return self.schedule_pre[n]
        return self.schedule_cycle[
            (n - len(self.schedule_pre)) % len(self.schedule_cycle)
        ]

    def round_family(self, n: int) -> CoverFamily:
        return self.bases[self.schedule_at(n)]

    def window_start(self, n: int) -> int:
        return self.sel_slope * n + self.sel_offset

    def member_of_flat(self, t: int) -> Clopen:
        n, j = divmod(t, self.window)
        return self.round_family(n).member_at(self.window_start(n) + j)

    def flat_family(self) -> CoverFamily:
        """The combined windowed family with exact incidence sets."""
        w = self.window
        L0 = len(self.schedule_pre)
        cyc = len(self.schedule_cycle)

        def natset_of(test_sets: list[NatSet]) -> NatSet:
            # position slope*n + offset + j of the round's set, flattened
            period_c = math.lcm(cyc, *[len(s.per) for s in test_sets])
            if self.sel_slope >= 1:
                # rounds past lstar read every set inside its periodic tail
                need = max(len(s.pre) for s in test_sets)
                lstar = max(L0, -(-(need - self.sel_offset) // self.sel_slope), 0)
            else:
                lstar = L0

            def flat_test(t: int) -> bool:
                n, j = divmod(t, w)
                s = test_sets[self.schedule_at(n)]
                return self.window_start(n) + j in s

            return from_periodic_test(flat_test, w * lstar, w * period_c)

        def incidence(x):
            return natset_of([b.incidence(x) for b in self.bases])

        fulls = None
        if all(b.full_indices is not None for b in self.bases):
            fulls = natset_of([b.full_indices for b in self.bases])

        return CoverFamily(
            label=self.flat_label(),
            kind="sakai_flat",
            member_fn=self.member_of_flat,
            incidence_fn=incidence,
            full_indices=fulls,
            bijective=False,
            infinite_distinct=None,
            params={
                "bases": [b.label for b in self.bases],
                "window": self.window,
                "sel": [self.sel_slope, self.sel_offset],
            },
        )

    def flat_label(self) -> str:
        return "flat(" + ",".join(b.label for b in self.bases) + ")"


@dataclass(frozen=True)
class SakaiResult:
    assignments: tuple[tuple[int, int, int], ...]  # (witness n, round m_n, flat t)
    picked_report: KindReport
    refinement_ok: bool
    rounds_shown: int

    @property
    def assigned_rounds(self) -> tuple[int, ...]:
        return tuple(m for _, m, _ in self.assignments)

    def to_json(self) -> dict:
        return {
            "assignments": [list(a) for a in self.assignments],
            "picked_report": self.picked_report.to_json(),
            "refinement_ok": self.refinement_ok,
            "rounds_shown": self.rounds_shown,
        }


def sakai_s1(
    problem: SakaiProblem,
    witness: AInfWitness,
    universe: Universe,
    horizon: int = 64,
) -> SakaiResult:
    """Greedy increasing assignment of witness sets to selection windows.

    Every witness index set is infinite while each window is finite, so an
    admissible strictly increasing assignment always exists for rule-based
    witnesses; running out of evidence is reported as a horizon problem,
    distinct from validation failures.
    """
    flat = problem.flat_family()
    if witness.base is not flat and witness.base.label != flat.label:
        raise InputError("witness was built for a different combined family")
    witness.validate()
    res = a_infinity(flat, witness, universe, horizon)
    if res.report.is_omega.is_false:
        raise ValidationError(
            "witness derived family is not an omega cover over the universe: "
            + res.report.is_omega.reason
        )
    if res.report.is_omega.is_unknown:
        raise HorizonError(
            "witness evidence cannot confirm the omega property: "
            + res.report.is_omega.reason
        )

    idx = witness.index_sets
    incs = {x: flat.incidence(x) for x in universe}

    # rounds needed so that every finite subset is witnessed by an assigned pick
    need = 0
    for combo in universe.nonempty_subsets():
        common = NatSet.full()
        for x in combo:
            common = common & incs[x]
        s = idx.support(common)
        if s is None or s.is_empty:
            raise ValidationError("support vanished after the omega check")
        m = s.min_element()
        assert m is not None
        need = max(need, m + 1)
    if need > ASSIGNMENT_CAP:
        raise HorizonError(f"assignment needs {need} rounds, cap is {ASSIGNMENT_CAP}")

    w = problem.window
    assignments: list[tuple[int, int, int]] = []
    prev = -1
    for n in range(need):
        a = idx.set_at(n)
        hits = NatSet.empty()
        for j in range(w):
            hits = hits | a.affine_preimage(w, j)
        m_n = hits.min_element_at_least(prev + 1)
        if m_n is None:
            raise HorizonError(
                f"index set {n} meets no selection window past round {prev}: "
                "invalid witness or too small a horizon"
            )
        t = next(m_n * w + j for j in range(w) if m_n * w + j in a)
        assignments.append((n, m_n, t))
        prev = m_n

    rounds_shown = prev + 1
    assigned = {m: t for _, m, t in assignments}
    members = []
    for k in range(rounds_shown):
        if k in assigned:
            members.append(problem.member_of_flat(assigned[k]))
        else:
            members.append(problem.round_family(k).member_at(0))
    picked = explicit_family(members, label=problem.flat_label() + ":selected")
    report = classify(picked, universe)
    if not report.is_omega.is_true:
        raise ValidationError(
            "selected members do not form an omega cover over the universe"
        )

    refinement_ok = True
    for n, m_n, t in assignments:
        derived_trace = frozenset(
            x for x in universe if idx.set_at(n).issubset(incs[x])
        )
        member_trace = problem.member_of_flat(t).trace(universe)
        if not derived_trace <= member_trace:
            refinement_ok = False
    if not refinement_ok:
        raise ValidationError("picked members do not refine the derived family")

    return SakaiResult(tuple(assignments), report, refinement_ok, rounds_shown)
