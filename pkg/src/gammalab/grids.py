"""Doubly indexed clopen grids with exact per-point row thresholds.

Row n of a :class:`GridFamily` grows toward the whole space by removing an
ever-deeper cylinder around a designated escape point; the escape points
follow the grid's anchor points at linearly growing depths.  A point
enters row n for good at the index where it separates from the escape
point, so the threshold function is computed exactly and, as a function of
the row, is eventually affine per anchor class.  The row-tail selections
and their covering conditions ("the threshold is dominated infinitely
often") are then decided by sequence algebra instead of sampling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .affine import AffineSeq
from .cantor import Clopen, Point
from .covers import CoverFamily, Universe, Verdict
from .errors import HorizonError, InputError
from .natsets import NatSet

__all__ = [
    "GridFamily",
    "BorelResult",
    "borel_gamma_select",
    "borel_omega_select",
]


@dataclass(frozen=True, eq=False)
class GridFamily:
    """Rows U^n_m = complement of the depth-(m+1) cylinder at escape(n)."""

    anchors: tuple[Point, ...]
    slope: int = 1
    offset: int = 1
    label: str = "function_grid"

    def __post_init__(self):
        object.__setattr__(self, "anchors", tuple(self.anchors))
        if not self.anchors:
            raise InputError("grid needs at least one anchor point")
        if self.slope < 1 or self.offset < 0:
            raise InputError("escape depths must grow: slope >= 1, offset >= 0")

    def anchor(self, n: int) -> Point:
        return self.anchors[n % len(self.anchors)]

    def escape_depth(self, n: int) -> int:
        return self.slope * n + self.offset

    def escape(self, n: int) -> Point:
        a = self.anchor(n)
        r = self.escape_depth(n)
        flip = "1" if a.bit(r) == "0" else "0"
        return Point(a.prefix(r) + flip, "0")

    def member(self, n: int, m: int) -> Clopen:
        return ~Clopen.cylinder(self.escape(n).prefix(m + 1))

    def row(self, n: int) -> CoverFamily:
        e = self.escape(n)

        def member(m: int) -> Clopen:
            return ~Clopen.cylinder(e.prefix(m + 1))

        def incidence(x: Point) -> NatSet:
            s = x.separation(e)
            if s is None:
                return NatSet.empty()
            return NatSet.tail(s)

        return CoverFamily(
            label=f"{self.label}:row{n}",
            kind="grid_row",
            member_fn=member,
            incidence_fn=incidence,
            full_indices=NatSet.empty(),
            bijective=True,
            infinite_distinct=True,
            params={"row": n},
        )

    def validate_rows(self, universe: Universe) -> None:
        """Every row must be a gamma cover over the universe.

        The only failure mode is a universe point equal to some escape
        point; escapes at depth past the point's structure cannot collide,
        so a finite scan is exact.
        """
        worst = 0
        for x in universe:
            for a in self.anchors:
                s = x.separation(a)
                if s is not None:
                    worst = max(worst, s + 1)
            if x.eventually_zero:
                worst = max(worst, len(x.pre) + 1)
        n_cap = max(1, -(-(worst - self.offset) // self.slope) + len(self.anchors) + 1)
        for n in range(n_cap):
            e = self.escape(n)
            for x in universe:
                if x == e:
                    raise InputError(
                        f"row {n} is not a gamma cover: its escape point "
                        "is a universe point"
                    )

    def threshold(self, x: Point, n: int) -> int:
        """Least m such that x lies in every row-n member from m on."""
        s = x.separation(self.escape(n))
        if s is None:
            raise InputError(f"point equals the escape point of row {n}")
        return s

    def psi(self, x: Point) -> AffineSeq:
        """The full threshold function of a point, exactly.

        Once the escape depth passes the separation from the class anchor,
        the threshold freezes at that separation; rows anchored at the
        point itself keep the escape depth as threshold.  Everything before
        that is finitely many rows, listed explicitly.
        """
        c = len(self.anchors)
        coeffs: list[tuple[int, int]] = []
        cut = 0
        for i, a in enumerate(self.anchors):
            s = x.separation(a)
            if s is None:
                coeffs.append((self.slope, self.offset))
            else:
                coeffs.append((0, s))
                # rows with escape depth <= s + 1 need explicit values
                n_i = -(-(s + 2 - self.offset) // self.slope)
                cut = max(cut, n_i)
        prefix = tuple(self.threshold(x, n) for n in range(max(cut, 0)))
        return AffineSeq(prefix, c, tuple(coeffs))


@dataclass(frozen=True)
class BorelResult:
    mode: str
    bound: AffineSeq
    psi_table: Mapping[Point, AffineSeq]
    per_item: tuple[tuple[tuple[Point, ...], Verdict], ...]
    covering: Verdict
    bound_searched: bool

    def row_tail_start(self, n: int) -> int:
        return self.bound.value(n)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "bound": self.bound.to_json(),
            "per_item": [
                {
                    "points": [p.to_json() for p in pts],
                    "verdict": v.to_json(),
                }
                for pts, v in self.per_item
            ],
            "covering": self.covering.to_json(),
            "bound_searched": self.bound_searched,
        }


def _search_bound(
    targets: list[AffineSeq], max_const: int = 12, max_slope: int = 2
) -> AffineSeq | None:
    candidates = [AffineSeq.constant(c) for c in range(max_const + 1)]
    for a in range(1, max_slope + 1):
        candidates.extend(AffineSeq.affine(a, b) for b in range(max_const + 1))
    for g in candidates:
        if all(t.dominated_infinitely_often(g) for t in targets):
            return g
    return None


def borel_gamma_select(
    grid: GridFamily,
    universe: Universe,
    bound: AffineSeq | None = None,
) -> BorelResult:
    """Row tails at a non-dominating bound; per-point covering verdicts.

    A point is covered when its threshold drops to the bound infinitely
    often, decided exactly on the eventually affine data.  Without a given
    bound a small deterministic catalog is searched.
    """
    grid.validate_rows(universe)
    psi = {x: grid.psi(x) for x in universe}
    searched = bound is None
    if bound is None:
        bound = _search_bound(list(psi.values()))
        if bound is None:
            raise HorizonError("no bounding function within the search catalog")
    items = []
    for x in universe:
        ok = psi[x].dominated_infinitely_often(bound)
        items.append(
            (
                (x,),
                Verdict.of(
                    ok, "covering fails: the bound dominates the threshold nowhere"
                ),
            )
        )
    covering = Verdict.of(
        all(v.is_true for _, v in items),
        "some point is in only finitely many selected tails",
    )
    return BorelResult("gamma", bound, psi, tuple(items), covering, searched)


def borel_omega_select(
    grid: GridFamily,
    universe: Universe,
    bound: AffineSeq | None = None,
) -> BorelResult:
    """As the gamma selection, but quantified over finite point sets.

    A finite set is covered when the pointwise max of its thresholds is
    dominated infinitely often; all nonempty subsets of the universe are
    checked.
    """
    grid.validate_rows(universe)
    psi = {x: grid.psi(x) for x in universe}
    group_targets = []
    combos = list(universe.nonempty_subsets())
    for combo in combos:
        t = psi[combo[0]]
        for x in combo[1:]:
            t = t.pointwise_max(psi[x])
        group_targets.append(t)
    searched = bound is None
    if bound is None:
        bound = _search_bound(group_targets)
        if bound is None:
            raise HorizonError("no bounding function within the search catalog")
    items = []
    for combo, t in zip(combos, group_targets):
        ok = t.dominated_infinitely_often(bound)
        items.append(
            (
                tuple(combo),
                Verdict.of(ok, "covering fails for this finite set"),
            )
        )
    covering = Verdict.of(
        all(v.is_true for _, v in items),
        "some finite set shares no selected tail cofinally",
    )
    return BorelResult("omega", bound, psi, tuple(items), covering, searched)
