"""Level families of cylinder unions and the small-diameter cover pipeline.

Level m of a :class:`LevelFamily` consists of the unions of at most m
cylinders whose words all have the prescribed depth; depths grow strictly
with the level, so no level member is the whole space and the combined
family is an omega cover of any finite universe.  Levels are huge, so the
family is never flattened: an infinite subfamily is presented as a
*section*, one member per level from some level on, generated from a point
set (the prefixes of the points, padded with the lexicographically least
unused words to the exact level size).

Whether a point belongs to every member of a section from its start on is
decidable: the point either is one of the section's points (always in the
hull part), has a one somewhere (its prefix value outgrows the padding
ranks), or is the all-zero point (eventually the least pad word).  This
is what makes the witness validation exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cantor import Clopen, Point
from .covers import KindReport, Universe, Verdict
from .errors import InputError, ValidationError

__all__ = [
    "LevelFamily",
    "HullSection",
    "LevelWitness",
    "Piece",
    "SmzResult",
    "classify_level",
    "smz_pipeline",
]


@dataclass(frozen=True)
class LevelFamily:
    """Levels m >= 1 of unions of at most m cylinders of depth k(m)."""

    k_slope: int = 1
    k_offset: int = 0
    label: str = "smz_level"

    def __post_init__(self):
        if self.k_slope < 1:
            raise InputError("depth schedule must be strictly increasing")
        if self.k_offset < 0 or self.depth(1) < 1:
            raise InputError("depth schedule must start at depth >= 1")

    def depth(self, level: int) -> int:
        return self.k_slope * level + self.k_offset


@dataclass(frozen=True)
class HullSection:
    """One member per level: point prefixes padded to the exact level size."""

    points: tuple[Point, ...]
    start: int = 1

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise InputError("section needs at least one point")
        if len(set(self.points)) != len(self.points):
            raise InputError("section points must be distinct")
        if self.start < 1:
            raise InputError("levels are numbered from 1")

    def effective_start(self) -> int:
        return max(self.start, len(self.points))


@dataclass(frozen=True)
class LevelWitness:
    sections: tuple[HullSection, ...]

    def __post_init__(self):
        object.__setattr__(self, "sections", tuple(self.sections))
        if not self.sections:
            raise InputError("witness needs at least one section")


@dataclass(frozen=True)
class Piece:
    """A level member as presented: distinct words of one fixed depth."""

    level: int
    words: tuple[str, ...]

    def clopen(self) -> Clopen:
        return Clopen.from_words(self.words)

    def cylinder_count(self) -> int:
        return len(self.words)

    def word_length(self) -> int:
        return len(self.words[0]) if self.words else 0

    def diameter(self) -> Fraction:
        return Fraction(1, 2 ** self.word_length())

    def to_json(self) -> dict:
        return {"level": self.level, "words": list(self.words)}


def section_member(family: LevelFamily, section: HullSection, level: int) -> Piece:
    """The section's member at a level: hull words plus least unused pads."""
    if level < section.effective_start():
        raise InputError("section undefined below its effective start")
    k = family.depth(level)
    prefixes = sorted({p.prefix(k) for p in section.points})
    pad_needed = level - len(prefixes)
    prefix_vals = {int(w, 2) for w in prefixes}
    pads = []
    v = 0
    while len(pads) < pad_needed:
        if v not in prefix_vals:
            pads.append(format(v, f"0{k}b"))
        v += 1
        if v > 2**k:
            raise AssertionError("ran out of words below the level size")
    return Piece(level, tuple(sorted(prefixes + pads)))


def section_contains(
    family: LevelFamily, section: HullSection, x: Point, level: int
) -> bool:
    return x.prefix(family.depth(level)) in section_member(family, section, level).words


def section_covers_point(family: LevelFamily, section: HullSection, x: Point) -> bool:
    """Exact test: does x lie in every section member from the start on?

    Section points always do.  A point with a one anywhere eventually
    leaves both the hull part (prefixes separate) and the pad part (its
    prefix value outgrows the pad rank), so the answer is no.  The
    all-zero point ends up as the least pad word from a computable level
    on; the finitely many earlier levels are checked directly.
    """
    if x in section.points:
        return True
    if x != Point.zeros():
        return False
    # x is the all-zero point: find where 0^k leaves the prefix set for good
    lead_zeros = []
    for p in section.points:
        f = p.first_one_at_or_after(0)
        assert f is not None, "distinct from all-zero point"
        lead_zeros.append(f)
    worst = max(lead_zeros)
    m1 = 1
    while family.depth(m1) <= worst:
        m1 += 1
    threshold = max(section.effective_start(), m1, len(section.points) + 1)
    for level in range(section.effective_start(), threshold):
        if not section_contains(family, section, x, level):
            return False
    return True


def classify_level(family: LevelFamily, universe: Universe) -> KindReport:
    """Kind verdicts for the combined level family, relative to X.

    Every verdict is backed by a constructed witness: subset hulls for the
    omega direction, per-level avoiding members against gamma, and the
    level-size bound (m cylinders cannot exhaust depth k(m) >= m) for
    properness.
    """
    omega_ok = True
    for combo in universe.nonempty_subsets():
        level = max(len(combo), 1)
        piece = section_member(family, HullSection(tuple(combo)), level)
        if not all(piece.clopen().contains_point(x) for x in combo):
            omega_ok = False
            break
    is_cover = Verdict.of(omega_ok, "a point escaped its own hull")
    is_omega = Verdict.of(omega_ok, "a finite subset escaped its own hull")

    # at each level some member avoids any given point (levels never
    # exhaust their depth), so no point lies in all but finitely many members
    is_gamma = Verdict.false("members avoiding a point exist at every level")
    # a level-m member carries at most m words of depth k(m), and
    # m < 2^k(m) throughout since depths grow at least linearly
    proper = Verdict.of(
        all(m < 2 ** family.depth(m) for m in range(1, 16)),
        "some level can exhaust its depth",
    )
    return KindReport(is_cover, is_omega, is_gamma, proper, horizon=16)


@dataclass(frozen=True)
class SmzResult:
    levels: tuple[int, ...]
    pieces: tuple[Piece, ...]
    covered: Verdict
    sizes_exact: bool

    def to_json(self) -> dict:
        return {
            "levels": list(self.levels),
            "pieces": [p.to_json() for p in self.pieces],
            "covered": self.covered.to_json(),
            "sizes_exact": self.sizes_exact,
            "diameters": [f"2^-{p.word_length()}" for p in self.pieces],
        }


def smz_pipeline(
    universe: Universe, family: LevelFamily, witness: LevelWitness
) -> SmzResult:
    """Pick one member per section at strictly increasing levels.

    Levels are finite while each section is infinite, so the greedy
    least-level assignment always succeeds; the picked pieces must cover
    the universe, which holds exactly when the witness's derived traces do,
    and both facts are verified.
    """
    for x in universe:
        if not any(
            section_covers_point(family, s, x) for s in witness.sections
        ):
            raise ValidationError(
                f"derived family does not cover the universe: {x!r} escapes"
            )

    levels: list[int] = []
    pieces: list[Piece] = []
    prev = 0
    for section in witness.sections:
        level = max(prev + 1, section.effective_start())
        piece = section_member(family, section, level)
        levels.append(level)
        pieces.append(piece)
        prev = level

    missing = [
        x
        for x in universe
        if not any(p.clopen().contains_point(x) for p in pieces)
    ]
    if missing:
        raise ValidationError(f"selected pieces miss {missing[0]!r}: invalid witness")

    sizes_exact = all(
        p.cylinder_count() == lv and p.word_length() == family.depth(lv)
        for p, lv in zip(pieces, levels)
    )
    if not sizes_exact:
        raise ValidationError("a selected piece has the wrong size or depth")

    return SmzResult(tuple(levels), tuple(pieces), Verdict.true(), sizes_exact)
