"""Exact points, cylinders, and clopen sets of Cantor space {0,1}^N.

Points are eventually periodic binary sequences, so every prefix is
extractable and equality is decidable.  A clopen set is kept as a
prefix-antichain of cylinder words in canonical form (sibling pairs merged
to their parent, covered words dropped), which makes equality, emptiness,
and fullness plain comparisons.  Boolean operations recurse on the binary
tree and never expand to a fixed depth, so deep cylinders stay cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .bitseq import bit_at, canonical, check_bits, prefix as word_prefix
from .errors import InputError

__all__ = ["Point", "Cylinder", "Clopen", "clopen_op", "parse_point", "parse_clopen"]


@dataclass(frozen=True)
class Point:
    """Eventually periodic element of Cantor space, canonical form."""

    pre: str
    per: str

    def __post_init__(self):
        check_bits(self.pre)
        check_bits(self.per, allow_empty=False)
        pre, per = canonical(self.pre, self.per)
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    @classmethod
    def zeros(cls) -> "Point":
        return cls("", "0")

    @classmethod
    def ones(cls) -> "Point":
        return cls("", "1")

    def bit(self, i: int) -> str:
        return bit_at(self.pre, self.per, i)

    def prefix(self, k: int) -> str:
        return word_prefix(self.pre, self.per, k)

    def starts_with(self, word: str) -> bool:
        return self.prefix(len(word)) == word

    def separation(self, other: "Point") -> int | None:
        """Index of the first disagreement; None when the points are equal."""
        if self == other:
            return None
        horizon = max(len(self.pre), len(other.pre)) + math.lcm(
            len(self.per), len(other.per)
        )
        for i in range(horizon):
            if self.bit(i) != other.bit(i):
                return i
        raise AssertionError("distinct canonical points must disagree in horizon")

    def first_one_at_or_after(self, i: int) -> int | None:
        """Least position >= i carrying a 1, or None if the tail is all zeros."""
        stop = max(i, len(self.pre)) + len(self.per)
        for j in range(i, stop):
            if self.bit(j) == "1":
                return j
        if "1" in self.per:
            raise AssertionError("periodic tail with a 1 must show one per period")
        return None

    @property
    def eventually_zero(self) -> bool:
        return "1" not in self.per

    def to_json(self) -> dict:
        return {"pre": self.pre, "per": self.per}

    def sort_key(self) -> tuple[str, str]:
        return (self.pre, self.per)

    def __repr__(self) -> str:
        return f"Point({self.pre!r}+{self.per!r}...)"


@dataclass(frozen=True)
class Cylinder:
    """Set of points extending a finite word; the empty word is the space."""

    word: str

    def __post_init__(self):
        check_bits(self.word)

    def diameter(self) -> Fraction:
        return Fraction(1, 2 ** len(self.word))

    def contains(self, x: Point) -> bool:
        return x.starts_with(self.word)

    def as_clopen(self) -> "Clopen":
        return Clopen.from_words([self.word])


def _drop_covered(words: set[str]) -> set[str]:
    return {
        w for w in words if not any(w[:k] in words for k in range(len(w)))
    }


def _merge_siblings(words: set[str]) -> frozenset[str]:
    ws = set(words)
    changed = True
    while changed:
        changed = False
        for w in sorted(ws, key=lambda w: (-len(w), w)):
            if w and w.endswith("0") and w[:-1] + "1" in ws:
                ws.discard(w)
                ws.discard(w[:-1] + "1")
                ws.add(w[:-1])
                changed = True
    return frozenset(ws)


def _restrict(words: frozenset[str], c: str) -> frozenset[str]:
    # Antichain of the subtree under child c, in child-relative words.
    if "" in words:
        return frozenset([""])
    return frozenset(w[1:] for w in words if w[0] == c)


def _join(left: frozenset[str], right: frozenset[str]) -> frozenset[str]:
    if left == frozenset([""]) and right == frozenset([""]):
        return frozenset([""])
    return frozenset("0" + w for w in left) | frozenset("1" + w for w in right)


def _const(words: frozenset[str]) -> bool | None:
    if not words:
        return False
    if words == frozenset([""]):
        return True
    return None


def _complement(words: frozenset[str]) -> frozenset[str]:
    c = _const(words)
    if c is not None:
        return frozenset() if c else frozenset([""])
    return _join(_complement(_restrict(words, "0")), _complement(_restrict(words, "1")))


def _binop(a: frozenset[str], b: frozenset[str], fn) -> frozenset[str]:
    ca, cb = _const(a), _const(b)
    if ca is not None and cb is not None:
        return frozenset([""]) if fn(ca, cb) else frozenset()
    if ca is not None:
        if fn(ca, False) == fn(ca, True):
            return frozenset([""]) if fn(ca, False) else frozenset()
        return b if fn(ca, True) else _complement(b)
    if cb is not None:
        if fn(False, cb) == fn(True, cb):
            return frozenset([""]) if fn(False, cb) else frozenset()
        return a if fn(True, cb) else _complement(a)
    return _join(
        _binop(_restrict(a, "0"), _restrict(b, "0"), fn),
        _binop(_restrict(a, "1"), _restrict(b, "1"), fn),
    )


@dataclass(frozen=True)
class Clopen:
    """Clopen subset of Cantor space as a canonical prefix-antichain."""

    words: frozenset[str]

    def __post_init__(self):
        for w in self.words:
            check_bits(w)
        object.__setattr__(self, "words", _merge_siblings(_drop_covered(set(self.words))))

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "Clopen":
        return cls(frozenset(words))

    @classmethod
    def cylinder(cls, word: str) -> "Clopen":
        return cls(frozenset([word]))

    @classmethod
    def empty(cls) -> "Clopen":
        return cls(frozenset())

    @classmethod
    def full(cls) -> "Clopen":
        return cls(frozenset([""]))

    # -- predicates -----------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.words

    @property
    def is_full(self) -> bool:
        return self.words == frozenset([""])

    def contains_point(self, x: Point) -> bool:
        return any(x.starts_with(w) for w in self.words)

    def __contains__(self, x: Point) -> bool:
        return self.contains_point(x)

    @property
    def depth(self) -> int:
        return max((len(w) for w in self.words), default=0)

    def measure(self) -> Fraction:
        return sum((Fraction(1, 2 ** len(w)) for w in self.words), Fraction(0))

    # -- algebra ---------------------------------------------------------------

    def __and__(self, other: "Clopen") -> "Clopen":
        return Clopen(_binop(self.words, other.words, lambda a, b: a and b))

    def __or__(self, other: "Clopen") -> "Clopen":
        return Clopen(_binop(self.words, other.words, lambda a, b: a or b))

    def __sub__(self, other: "Clopen") -> "Clopen":
        return Clopen(_binop(self.words, other.words, lambda a, b: a and not b))

    def __invert__(self) -> "Clopen":
        return Clopen(_complement(self.words))

    def issubset(self, other: "Clopen") -> bool:
        return (self - other).is_empty

    # -- traces and serialization ----------------------------------------------

    def trace(self, points: Iterable[Point]) -> frozenset[Point]:
        return frozenset(x for x in points if self.contains_point(x))

    def sorted_words(self) -> list[str]:
        return sorted(self.words, key=lambda w: (len(w), w))

    def to_json(self):
        if self.is_full:
            return "full"
        return self.sorted_words()

    def __repr__(self) -> str:
        if self.is_full:
            return "Clopen(full)"
        if self.is_empty:
            return "Clopen(empty)"
        return f"Clopen({'|'.join(self.sorted_words())})"


def clopen_op(kind: str, a: Clopen, b: Clopen | None = None) -> Clopen:
    """Dispatch by operation name; complement ignores ``b``."""
    if kind == "union":
        assert b is not None
        return a | b
    if kind == "intersect":
        assert b is not None
        return a & b
    if kind == "difference":
        assert b is not None
        return a - b
    if kind == "complement":
        return ~a
    raise InputError(f"unknown clopen operation {kind!r}")


def parse_point(spec) -> Point:
    if isinstance(spec, Point):
        return spec
    if isinstance(spec, dict):
        extra = set(spec) - {"pre", "per"}
        if extra:
            raise InputError(f"unknown point fields {sorted(extra)}")
        try:
            return Point(spec["pre"], spec["per"])
        except (KeyError, ValueError) as exc:
            raise InputError(f"bad point literal: {exc}") from exc
    raise InputError(f"cannot parse point from {spec!r}")


def parse_clopen(spec) -> Clopen:
    if isinstance(spec, Clopen):
        return spec
    if spec == "full":
        return Clopen.full()
    if spec == "empty":
        return Clopen.empty()
    if isinstance(spec, list):
        try:
            return Clopen.from_words(spec)
        except ValueError as exc:
            raise InputError(f"bad cylinder word: {exc}") from exc
    raise InputError(f"cannot parse clopen set from {spec!r}")
