"""Exact algebra of eventually periodic subsets of the naturals.

A :class:`NatSet` is the indicator sequence of a subset of ℕ, stored as a
preperiod word plus a repeating period word.  This class of sets is closed
under all Boolean operations, under shifts and affine maps, and it makes
the questions the rest of the library keeps asking decidable: membership,
infinitude, cofiniteness, and almost-inclusion (inclusion up to a finite
difference).  Index sets of covers, incidence sets of points, and
pseudo-intersections are all values of this one type.

Values are immutable and canonicalized on construction (shortest
preperiod, then shortest period), so ``==`` is extensional equality.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .bitseq import agree_horizon, bit_at, canonical, check_bits
from .errors import InputError

__all__ = [
    "NatSet",
    "NatFamily",
    "FamilyDiagnostics",
    "bool_op",
    "almost_subset",
    "family_diagnostics",
    "pseudo_intersection_verify",
    "from_periodic_test",
    "parse_natset",
]


@dataclass(frozen=True)
class NatSet:
    """Eventually periodic subset of ℕ in canonical form."""

    pre: str
    per: str

    def __post_init__(self):
        check_bits(self.pre)
        check_bits(self.per, allow_empty=False)
        pre, per = canonical(self.pre, self.per)
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    # -- constructors ------------------------------------------------------

    @classmethod
    def empty(cls) -> "NatSet":
        return cls("", "0")

    @classmethod
    def full(cls) -> "NatSet":
        return cls("", "1")

    @classmethod
    def tail(cls, a: int) -> "NatSet":
        """All naturals >= a."""
        if a < 0:
            raise InputError("tail start must be >= 0")
        return cls("0" * a, "1")

    @classmethod
    def arith(cls, a: int, d: int) -> "NatSet":
        """Arithmetic progression a, a+d, a+2d, ..."""
        if a < 0 or d < 1:
            raise InputError("progression needs a >= 0 and d >= 1")
        return cls("0" * a, "1" + "0" * (d - 1))

    @classmethod
    def evens(cls) -> "NatSet":
        return cls("", "10")

    @classmethod
    def from_elements(cls, elems: Iterable[int]) -> "NatSet":
        """Finite set from an explicit element list."""
        elems = sorted(set(elems))
        if elems and elems[0] < 0:
            raise InputError("elements must be naturals")
        if not elems:
            return cls.empty()
        bits = ["0"] * (elems[-1] + 1)
        for e in elems:
            bits[e] = "1"
        return cls("".join(bits), "0")

    # -- membership and size -----------------------------------------------

    def __contains__(self, n: int) -> bool:
        if n < 0:
            return False
        return bit_at(self.pre, self.per, n) == "1"

    @property
    def is_infinite(self) -> bool:
        return "1" in self.per

    @property
    def is_finite(self) -> bool:
        return "1" not in self.per

    @property
    def is_cofinite(self) -> bool:
        return "0" not in self.per

    @property
    def is_empty(self) -> bool:
        return "1" not in self.pre and "1" not in self.per

    @property
    def is_full(self) -> bool:
        return "0" not in self.pre and "0" not in self.per

    def elements_below(self, bound: int) -> list[int]:
        return [n for n in range(bound) if n in self]

    def iter_elements(self) -> Iterator[int]:
        """Ascending elements; infinite iterator for infinite sets."""
        for n in itertools.count():
            if n in self:
                yield n
            elif self.is_finite and n >= len(self.pre):
                return

    def first_elements(self, k: int) -> list[int]:
        return list(itertools.islice(self.iter_elements(), k))

    def min_element(self) -> int | None:
        return self.min_element_at_least(0)

    def min_element_at_least(self, m: int) -> int | None:
        """Least member >= m, or None when the set is finite and exhausted."""
        if m < 0:
            m = 0
        stop = max(m, len(self.pre)) + len(self.per)
        for n in range(m, stop):
            if n in self:
                return n
        return None

    def max_element(self) -> int | None:
        """Largest member of a finite set; None when empty.

        Raises on infinite sets since no maximum exists.
        """
        if self.is_infinite:
            raise InputError("max_element of an infinite set")
        last = self.pre.rfind("1")
        return None if last < 0 else last

    def count(self) -> int:
        """Cardinality of a finite set."""
        if self.is_infinite:
            raise InputError("count of an infinite set")
        return self.pre.count("1")

    # -- boolean algebra ----------------------------------------------------

    def _combine(self, other: "NatSet", fn) -> "NatSet":
        L = max(len(self.pre), len(other.pre))
        p = math.lcm(len(self.per), len(other.per))
        pre = "".join("1" if fn(n in self, n in other) else "0" for n in range(L))
        per = "".join(
            "1" if fn(L + i in self, L + i in other) else "0" for i in range(p)
        )
        return NatSet(pre, per)

    def __and__(self, other: "NatSet") -> "NatSet":
        return self._combine(other, lambda a, b: a and b)

    def __or__(self, other: "NatSet") -> "NatSet":
        return self._combine(other, lambda a, b: a or b)

    def __sub__(self, other: "NatSet") -> "NatSet":
        return self._combine(other, lambda a, b: a and not b)

    def __invert__(self) -> "NatSet":
        flip = str.maketrans("01", "10")
        return NatSet(self.pre.translate(flip), self.per.translate(flip))

    def issubset(self, other: "NatSet") -> bool:
        return (self - other).is_empty

    def almost_subset_of(self, other: "NatSet") -> bool:
        """True iff self minus other is finite (inclusion mod finite)."""
        return (self - other).is_finite

    # -- structure-preserving maps ------------------------------------------

    def shift(self, k: int) -> "NatSet":
        """{a + k : a in self}."""
        if k < 0:
            raise InputError("shift must be >= 0")
        return NatSet("0" * k + self.pre, self.per)

    def affine_image(self, a: int, b: int) -> "NatSet":
        """{a*n + b : n in self} for a >= 1, b >= 0."""
        if a < 1 or b < 0:
            raise InputError("affine image needs a >= 1, b >= 0")
        L = b + a * len(self.pre)
        p = a * len(self.per)

        def member(q: int) -> bool:
            return q >= b and (q - b) % a == 0 and (q - b) // a in self

        pre = "".join("1" if member(q) else "0" for q in range(L))
        per = "".join("1" if member(L + i) else "0" for i in range(p))
        return NatSet(pre, per)

    def affine_preimage(self, a: int, b: int) -> "NatSet":
        """{n : a*n + b in self} for a >= 1, b >= 0."""
        if a < 1 or b < 0:
            raise InputError("affine preimage needs a >= 1, b >= 0")
        L = max(0, -(-(len(self.pre) - b) // a))  # ceil((len(pre)-b)/a)
        p = len(self.per)
        pre = "".join("1" if a * n + b in self else "0" for n in range(L))
        per = "".join("1" if a * (L + i) + b in self else "0" for i in range(p))
        return NatSet(pre, per)

    # -- misc -----------------------------------------------------------------

    def agrees_with(self, other: "NatSet", horizon: int) -> bool:
        return all((n in self) == (n in other) for n in range(horizon))

    def sufficient_horizon(self, other: "NatSet") -> int:
        return agree_horizon(self.pre, self.per, other.pre, other.per)

    def to_json(self) -> dict:
        return {"pre": self.pre, "per": self.per}

    def describe(self) -> str:
        if self.is_empty:
            return "{}"
        if self.is_full:
            return "N"
        head = ", ".join(str(n) for n in self.first_elements(6))
        return "{" + head + (", ..." if self.is_infinite else "") + "}"

    def __repr__(self) -> str:
        return f"NatSet(pre={self.pre!r}, per={self.per!r})"


def bool_op(kind: str, a: NatSet, b: NatSet | None = None) -> NatSet:
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
    raise InputError(f"unknown boolean operation {kind!r}")


def almost_subset(a: NatSet, b: NatSet) -> bool:
    return a.almost_subset_of(b)


@dataclass(frozen=True)
class NatFamily:
    """Finite ordered list of NatSets; order is part of the identity."""

    members: tuple[NatSet, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    @property
    def has_duplicates(self) -> bool:
        return len(set(self.members)) < len(self.members)

    def to_json(self) -> list:
        return [m.to_json() for m in self.members]


@dataclass(frozen=True)
class FamilyDiagnostics:
    centered: bool
    total_intersection: NatSet
    free: bool

    def to_json(self) -> dict:
        return {
            "centered": self.centered,
            "free": self.free,
            "total_intersection": self.total_intersection.to_json(),
        }


def family_diagnostics(family: NatFamily) -> FamilyDiagnostics:
    """Centeredness and freeness of a finite family.

    For a finite list every sub-intersection contains the total
    intersection, so centered (every finite sub-intersection infinite)
    reduces to the total intersection being infinite.
    """
    total = NatSet.full()
    for m in family:
        total = total & m
    return FamilyDiagnostics(
        centered=total.is_infinite,
        total_intersection=total,
        free=total.is_empty,
    )


def pseudo_intersection_verify(a: NatSet, family: NatFamily) -> bool:
    """True iff ``a`` is infinite and almost contained in every member."""
    return a.is_infinite and all(a.almost_subset_of(b) for b in family)


def from_periodic_test(fn, pre_len: int, period: int) -> NatSet:
    """Assemble a NatSet from a membership test known to be periodic.

    The caller is responsible for ``fn(n) == fn(n + period)`` holding for
    all ``n >= pre_len``; the constructor only evaluates one window.
    """
    if period < 1:
        raise InputError("period must be >= 1")
    bits = ["1" if fn(n) else "0" for n in range(pre_len + period)]
    return NatSet("".join(bits[:pre_len]), "".join(bits[pre_len:]))


_SHORTHANDS = {"evens": NatSet.evens, "full": NatSet.full, "empty": NatSet.empty}


def parse_natset(spec) -> NatSet:
    """Parse the serialized forms: {"pre","per"} dicts and named shorthands.

    Accepted shorthands: "tail:a", "arith:a,d", "evens", "full", "empty".
    """
    if isinstance(spec, NatSet):
        return spec
    if isinstance(spec, dict):
        extra = set(spec) - {"pre", "per"}
        if extra:
            raise InputError(f"unknown set fields {sorted(extra)}")
        try:
            return NatSet(spec["pre"], spec["per"])
        except (KeyError, ValueError) as exc:
            raise InputError(f"bad set literal: {exc}") from exc
    if isinstance(spec, str):
        if spec in _SHORTHANDS:
            return _SHORTHANDS[spec]()
        if spec.startswith("tail:"):
            return NatSet.tail(_parse_ints(spec[5:], 1)[0])
        if spec.startswith("arith:"):
            a, d = _parse_ints(spec[6:], 2)
            return NatSet.arith(a, d)
    raise InputError(f"cannot parse natural-number set from {spec!r}")


def _parse_ints(text: str, n: int) -> list[int]:
    parts = text.split(",")
    if len(parts) != n:
        raise InputError(f"expected {n} integers, got {text!r}")
    try:
        return [int(p) for p in parts]
    except ValueError as exc:
        raise InputError(f"bad integer in {text!r}") from exc
