"""Eventually affine integer sequences, exact by residue class.

An :class:`AffineSeq` stores explicit values on a finite prefix and, beyond
it, one affine rule ``a*n + b`` per residue class of ``n`` modulo a fixed
period.  This is the shape taken by every numeric sequence the grid and
pencil constructions produce (row thresholds, bounding functions), and it
is closed under pointwise max and difference, so comparisons like
"s(n) <= g(n) for infinitely many n" are decided exactly rather than
sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError
from .natsets import NatSet

__all__ = ["AffineSeq"]


@dataclass(frozen=True)
class AffineSeq:
    prefix: tuple[int, ...]
    period: int
    coeffs: tuple[tuple[int, int], ...]  # per class i: value(n) = a_i*n + b_i

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(v) for v in self.prefix))
        object.__setattr__(
            self, "coeffs", tuple((int(a), int(b)) for a, b in self.coeffs)
        )
        if self.period < 1 or len(self.coeffs) != self.period:
            raise InputError("need one coefficient pair per residue class")

    @classmethod
    def constant(cls, v: int) -> "AffineSeq":
        return cls((), 1, ((0, v),))

    @classmethod
    def affine(cls, a: int, b: int, prefix: tuple[int, ...] = ()) -> "AffineSeq":
        return cls(tuple(prefix), 1, ((a, b),))

    def value(self, n: int) -> int:
        if n < 0:
            raise InputError("sequences are indexed by naturals")
        if n < len(self.prefix):
            return self.prefix[n]
        a, b = self.coeffs[n % self.period]
        return a * n + b

    def __call__(self, n: int) -> int:
        return self.value(n)

    def values(self, stop: int) -> list[int]:
        return [self.value(n) for n in range(stop)]

    @property
    def stable_from(self) -> int:
        return len(self.prefix)

    def _aligned(self, other: "AffineSeq") -> tuple[int, int]:
        """Common period and a start beyond both prefixes and all crossovers.

        Beyond the returned start, within each common residue class both
        sequences follow a single affine rule and their order never changes
        again.
        """
        period = math.lcm(self.period, other.period)
        start = max(len(self.prefix), len(other.prefix))
        for i in range(period):
            a1, b1 = self.coeffs[i % self.period]
            a2, b2 = other.coeffs[i % other.period]
            if a1 != a2:
                # last n with sign(a1*n+b1 - a2*n-b2) undecided: (b2-b1)/(a1-a2)
                cross = (b2 - b1) / (a1 - a2)
                start = max(start, math.floor(cross) + 1)
        return period, max(start, 0)

    def pointwise_max(self, other: "AffineSeq") -> "AffineSeq":
        period, start = self._aligned(other)
        prefix = tuple(max(self.value(n), other.value(n)) for n in range(start))
        coeffs = []
        for i in range(period):
            # probe index in class i, past both prefixes and all crossovers,
            # where the order of the two rules is already final
            n = start + ((i - start) % period)
            if self.value(n) >= other.value(n):
                coeffs.append(self.coeffs[n % self.period])
            else:
                coeffs.append(other.coeffs[n % other.period])
        return AffineSeq(prefix, period, tuple(coeffs))

    def leq_set(self, other: "AffineSeq") -> NatSet:
        """Exact set {n : self(n) <= other(n)} as a NatSet."""
        period, start = self._aligned(other)
        pre = "".join(
            "1" if self.value(n) <= other.value(n) else "0" for n in range(start)
        )
        per = "".join(
            "1" if self.value(start + i) <= other.value(start + i) else "0"
            for i in range(period)
        )
        return NatSet(pre, per)

    def dominated_infinitely_often(self, bound: "AffineSeq") -> bool:
        """True iff self(n) <= bound(n) for infinitely many n."""
        return self.leq_set(bound).is_infinite

    def to_json(self) -> dict:
        return {
            "prefix": list(self.prefix),
            "period": self.period,
            "coeffs": [list(c) for c in self.coeffs],
        }

    @classmethod
    def parse(cls, spec) -> "AffineSeq":
        if isinstance(spec, AffineSeq):
            return spec
        if isinstance(spec, int):
            return cls.constant(spec)
        if isinstance(spec, dict):
            if set(spec) == {"affine"}:
                a, b = spec["affine"]
                return cls.affine(a, b)
            extra = set(spec) - {"prefix", "period", "coeffs"}
            if extra:
                raise InputError(f"unknown sequence fields {sorted(extra)}")
            try:
                return cls(
                    tuple(spec.get("prefix", ())),
                    spec["period"],
                    tuple(tuple(c) for c in spec["coeffs"]),
                )
            except (KeyError, TypeError) as exc:
                raise InputError(f"bad sequence literal: {exc}") from exc
        raise InputError(f"cannot parse sequence from {spec!r}")
