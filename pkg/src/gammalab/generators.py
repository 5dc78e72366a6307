"""Deterministic randomized instance generators for tests and sweeps.

All generators draw from a caller-supplied ``random.Random`` so runs are
reproducible from the seed.  Gamma covers come out of point hulls (every
universe point has full incidence), omega covers out of subset-hull
schedules (every finite subset recurs in the cycle), and both get optional
derefinement wrappers for variety.
"""

from __future__ import annotations

import itertools
import random

from .cantor import Clopen, Point
from .covers import (
    CoverFamily,
    Universe,
    derefine_union,
    hull_tail,
    interleave,
    schedule_family,
)
from .grids import GridFamily
from .pencil import AffinePencil, SelectionRows

__all__ = [
    "random_point",
    "random_universe",
    "random_clopen",
    "random_natset_words",
    "random_gamma_cover",
    "random_omega_schedule",
    "random_bijective_omega_cover",
    "random_grid",
    "random_pencil_instance",
]


def random_point(rng: random.Random, max_pre: int = 4, max_per: int = 3) -> Point:
    pre = "".join(rng.choice("01") for _ in range(rng.randint(0, max_pre)))
    per = "".join(rng.choice("01") for _ in range(rng.randint(1, max_per)))
    return Point(pre, per)


def random_universe(rng: random.Random, size: int, max_pre: int = 4) -> Universe:
    points: list[Point] = []
    guard = 0
    while len(points) < size:
        p = random_point(rng, max_pre=max_pre)
        if p not in points:
            points.append(p)
        guard += 1
        if guard > 500:
            raise AssertionError("could not draw enough distinct points")
    return Universe(tuple(points))


def random_clopen(rng: random.Random, depth: int = 3, density: float = 0.4) -> Clopen:
    words = [
        format(i, f"0{depth}b") for i in range(2**depth) if rng.random() < density
    ]
    return Clopen.from_words(words)


def random_natset_words(rng: random.Random, max_pre: int = 6, max_per: int = 6):
    pre = "".join(rng.choice("01") for _ in range(rng.randint(0, max_pre)))
    per = "".join(rng.choice("01") for _ in range(rng.randint(1, max_per)))
    return pre, per


def random_gamma_cover(
    rng: random.Random, universe: Universe, label: str
) -> CoverFamily:
    """A bijectively enumerated gamma cover over the universe.

    Point hulls shrink around all universe points; optionally the family is
    pushed through a shift or a union expansion that provably preserves the
    distinct-member count.
    """
    fam = hull_tail(universe.points, extra=rng.randint(0, 2), label=label)
    if rng.random() < 0.5:
        return fam
    patch = _clopen_avoiding(rng, universe)
    if patch.is_full or patch.is_empty:
        return fam
    expanded = derefine_union(fam, patch, label=label + "~patch")
    # the patch misses every hull point, so past the patch depth each member
    # sheds a ring outside the patch and the run stays strictly shrinking;
    # only the few members at or above the patch depth can collide, and
    # those are checked directly
    probe = [expanded.member_at(n) for n in range(6)]
    if expanded.infinite_distinct and len(set(probe)) == len(probe):
        return CoverFamily(
            label=expanded.label,
            kind=expanded.kind,
            member_fn=expanded.member_fn,
            incidence_fn=expanded.incidence_fn,
            full_indices=expanded.full_indices,
            bijective=True,
            infinite_distinct=True,
            monotone_decreasing=True,
            strictly_decreasing=False,
            params=expanded.params,
        )
    return fam


def _clopen_avoiding(rng: random.Random, universe: Universe) -> Clopen:
    """A random clopen set containing no universe point."""
    depth = 3
    words = []
    for i in range(2**depth):
        w = format(i, f"0{depth}b")
        if any(x.starts_with(w) for x in universe):
            continue
        if rng.random() < 0.5:
            words.append(w)
    return Clopen.from_words(words)


def subset_hulls(universe: Universe, depth_extra: int = 0) -> list[Clopen]:
    """One clopen hull per nonempty subset, deep enough to separate points."""
    sep = 1
    pts = universe.points
    for i, p in enumerate(pts):
        for q in pts[i + 1 :]:
            s = p.separation(q)
            assert s is not None
            sep = max(sep, s + 1)
    depth = sep + depth_extra
    hulls = []
    for size in range(1, len(pts) + 1):
        for combo in itertools.combinations(pts, size):
            hull = Clopen.from_words({p.prefix(depth) for p in combo})
            if hull.is_full:
                hull = Clopen.from_words({p.prefix(depth + 1) for p in combo})
            hulls.append(hull)
    return hulls


def random_omega_schedule(
    rng: random.Random, universe: Universe, label: str
) -> CoverFamily:
    """An omega cover cycling the hulls of every nonempty subset."""
    hulls = subset_hulls(universe, depth_extra=rng.randint(0, 1))
    rng.shuffle(hulls)
    initial = [random_clopen(rng) for _ in range(rng.randint(0, 2))]
    initial = [c for c in initial if not c.is_full]
    return schedule_family(initial, hulls, label=label)


def random_bijective_omega_cover(
    rng: random.Random, universe: Universe, label: str
) -> CoverFamily:
    """A bijective omega cover: full hulls interleaved with subset decoys.

    Part 0 shrinks around all points (so every finite subset recurs
    cofinally); part 1 shrinks around a proper subset.  Members of the two
    parts differ in which points they capture, and each part is strictly
    shrinking, so the merge is injective.
    """
    full = hull_tail(universe.points, extra=rng.randint(0, 1), label=label + "/all")
    if len(universe) == 1:
        return full
    size = rng.randint(1, len(universe) - 1)
    sub = tuple(rng.sample(list(universe.points), size))
    decoy = hull_tail(sub, extra=rng.randint(2, 3), label=label + "/sub")
    return interleave([full, decoy], label=label, members_disjoint=True)


def random_grid(
    rng: random.Random, universe: Universe, label: str
) -> GridFamily:
    """A grid whose escape points avoid the universe."""
    anchors = list(universe.points)
    rng.shuffle(anchors)
    anchors = anchors[: rng.randint(1, len(anchors))]
    slope = rng.randint(1, 3)
    offset = rng.randint(1, 3)
    for bump in range(12):
        grid = GridFamily(tuple(anchors), slope, offset + bump, label=label)
        try:
            grid.validate_rows(universe)
            return grid
        except Exception:
            continue
    raise AssertionError("could not place escape points off the universe")


def random_pencil_instance(rng: random.Random):
    """A pencil plus compatible selection rows with a tracked block range."""
    base_slope = rng.randint(1, 3)
    base_offset = rng.randint(0, 3)
    prefix_len = rng.randint(0, 3)
    prefix = []
    v = rng.randint(0, 2)
    for _ in range(prefix_len):
        prefix.append(v)
        v += rng.randint(1, 2)
    while prefix and prefix[-1] >= base_slope * prefix_len + base_offset:
        base_offset += prefix[-1] - (base_slope * prefix_len + base_offset) + 1
    pencil = AffinePencil(
        base_prefix=tuple(prefix),
        base_slope=base_slope,
        base_offset=base_offset,
        slope_prefix=(),
        slope_const=rng.randint(1, 2),
    )
    start = rng.randint(0, 2)
    margin = rng.randint(2, 6)
    selections = SelectionRows(
        start=start,
        explicit=(),
        window_slope=base_slope,
        window_offset=base_offset + margin * pencil.slope_const,
        window_width=rng.randint(1, 3),
    )
    return pencil, start, selections, margin
