"""Affine pencils of increasing functions and the bounded-image check.

A pencil presents the infinite function family f_j(n) = base(n) + j *
slope(n): the smallest finitely presented family in which the column sets
{f : f(n) <= m} are increasing in m and no column set is everything.
Given finite column selections per row (their max is the bounding function
g) and witness index sets over the selected diagonal, the blocks
{j : f_j(n) <= g(n) on the witness rows} are computed exactly, their
boundedness is re-verified by enumeration, and the blocks must jointly
exhaust the requested range of pencil indices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .affine import AffineSeq
from .covers import Verdict
from .errors import InputError, ValidationError
from .natsets import NatSet

__all__ = [
    "AffinePencil",
    "SelectionRows",
    "HurewiczBlock",
    "HurewiczResult",
    "hurewicz_bound",
]


@dataclass(frozen=True)
class AffinePencil:
    """f_j(n) = base(n) + j*slope(n); base strictly increasing, slope >= 1.

    The base is an explicit prefix joined to one affine rule; the slope is
    an explicit prefix joined to one constant.  Strict growth of the base
    keeps every f_j increasing, which is checked, not assumed.
    """

    base_prefix: tuple[int, ...] = ()
    base_slope: int = 1
    base_offset: int = 0
    slope_prefix: tuple[int, ...] = ()
    slope_const: int = 1

    def __post_init__(self):
        object.__setattr__(self, "base_prefix", tuple(self.base_prefix))
        object.__setattr__(self, "slope_prefix", tuple(self.slope_prefix))
        if self.base_slope < 1:
            raise InputError("base must grow strictly")
        if any(v < 0 for v in self.base_prefix):
            raise InputError("base values must be naturals")

    def base(self, n: int) -> int:
        if n < len(self.base_prefix):
            return self.base_prefix[n]
        return self.base_slope * n + self.base_offset

    def slope(self, n: int) -> int:
        if n < len(self.slope_prefix):
            return self.slope_prefix[n]
        return self.slope_const

    def value(self, j: int, n: int) -> int:
        return self.base(n) + j * self.slope(n)

    def stable_from(self) -> int:
        return max(len(self.base_prefix), len(self.slope_prefix))

    def validate_increasing(self, horizon: int = 32) -> None:
        for j in (0, 1, 2, 17):
            for n in range(horizon):
                if self.value(j, n + 1) <= self.value(j, n):
                    raise InputError(
                        f"pencil function j={j} is not increasing at n={n}"
                    )

    def validate_slopes(self, start: int) -> None:
        for n in range(start, len(self.slope_prefix)):
            if self.slope(n) < 1:
                raise InputError(
                    f"slope vanishes at n={n}: some column set is everything"
                )
        if self.slope_const < 1:
            raise InputError("slope vanishes cofinally: premise violated")


@dataclass(frozen=True)
class SelectionRows:
    """Finite nonempty column selections per row from some start row on."""

    start: int
    explicit: tuple[tuple[int, ...], ...] = ()
    window_slope: int = 1
    window_offset: int = 0
    window_width: int = 1

    def __post_init__(self):
        object.__setattr__(
            self, "explicit", tuple(tuple(r) for r in self.explicit)
        )
        if self.start < 0:
            raise InputError("start row must be a natural")
        if any(len(r) == 0 for r in self.explicit):
            raise InputError("empty selection row")
        if self.window_width < 1:
            raise InputError("empty selection row in the window rule")
        if self.window_slope < 0 or self.window_offset < 0:
            raise InputError("window rule must produce natural columns")

    def columns(self, n: int) -> tuple[int, ...]:
        if n < self.start:
            raise InputError("no selection below the start row")
        k = n - self.start
        if k < len(self.explicit):
            return self.explicit[k]
        base = self.window_slope * n + self.window_offset
        return tuple(base + j for j in range(self.window_width))

    def bound(self, n: int) -> int:
        return max(self.columns(n))

    def bound_seq(self, upto: int) -> AffineSeq:
        """The bounding function as an explicit-plus-affine sequence."""
        cut = max(upto, self.start + len(self.explicit))
        prefix = tuple(
            self.bound(n) if n >= self.start else 0 for n in range(cut)
        )
        return AffineSeq(
            prefix,
            1,
            ((self.window_slope, self.window_offset + self.window_width - 1),),
        )


@dataclass(frozen=True)
class HurewiczBlock:
    index: int
    rows: NatSet
    vacuous: bool
    top: int | None  # largest pencil index in the block; None when empty

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "rows": self.rows.to_json(),
            "vacuous": self.vacuous,
            "top": self.top,
        }


@dataclass(frozen=True)
class HurewiczResult:
    bound: AffineSeq
    blocks: tuple[HurewiczBlock, ...]
    covering: Verdict
    bounded_ok: bool

    def to_json(self) -> dict:
        return {
            "bound": self.bound.to_json(),
            "blocks": [b.to_json() for b in self.blocks],
            "covering": self.covering.to_json(),
            "bounded_ok": self.bounded_ok,
        }


def _block_top(
    pencil: AffinePencil, bound: AffineSeq, rows: NatSet, start: int
) -> int | None:
    """Exact max j with f_j(n) <= bound(n) for every row n in the set.

    Per row the bound on j is floor((g(n) - base(n)) / slope(n)); the
    minimum over an infinite row set is reached within a computable scan
    because past all prefixes the per-row bound is a single affine ratio:
    rising ratios stop mattering once they clear the current minimum,
    a falling ratio empties the block.
    """
    stable = max(pencil.stable_from(), bound.stable_from, len(rows.pre), start)
    alpha = bound.coeffs[0][0] - pencil.base_slope
    if alpha < 0:
        # caps fall without bound on the infinitely many stable rows
        return None

    def row_cap(n: int) -> int:
        num = bound.value(n) - pencil.base(n)
        if num < 0:
            return -1
        return num // pencil.slope(n)

    best: int | None = None
    n = rows.min_element_at_least(start)
    while n is not None:
        cap = row_cap(n)
        if cap < 0:
            return None
        best = cap if best is None else min(best, cap)
        if n >= stable:
            # caps are nondecreasing (alpha > 0) or frozen (alpha == 0) now
            break
        n = rows.min_element_at_least(n + 1)
    return best


def hurewicz_bound(
    pencil: AffinePencil,
    start_row: int,
    selections: SelectionRows,
    witness_sets: tuple[NatSet, ...],
    j_horizon: int = 8,
    n_horizon: int = 48,
) -> HurewiczResult:
    """Blocks of pencil indices bounded by the selection maxima.

    Witness set m restricted to the usable rows gives the row set I_m; the
    block is every pencil index whose function stays below the bound on
    those rows.  The boundedness of each block is re-verified by direct
    enumeration, and the blocks must cover all indices up to j_horizon.
    """
    if selections.start != start_row:
        raise InputError("selection rows must begin at the start row")
    pencil.validate_slopes(start_row)
    pencil.validate_increasing()
    if not witness_sets:
        raise InputError("need at least one witness index set")

    bound = selections.bound_seq(start_row + 8)
    blocks: list[HurewiczBlock] = []
    for m, a in enumerate(witness_sets):
        rows = a & NatSet.tail(start_row)
        if not rows.is_infinite:
            blocks.append(HurewiczBlock(m, rows, True, None))
            continue
        top = _block_top(pencil, bound, rows, start_row)
        blocks.append(HurewiczBlock(m, rows, False, top))

    # independent re-check of the boundedness invariant by enumeration
    bounded_ok = True
    for b in blocks:
        if b.vacuous or b.top is None:
            continue
        for j in range(0, min(b.top, j_horizon) + 1):
            for n in b.rows.elements_below(n_horizon):
                if pencil.value(j, n) > bound.value(n):
                    bounded_ok = False
    if not bounded_ok:
        raise ValidationError("a block member escapes the bound on its rows")

    tops = [b.top for b in blocks if not b.vacuous and b.top is not None]
    covered = max(tops, default=-1)
    covering = Verdict.of(
        covered >= j_horizon,
        f"blocks reach pencil index {covered} but the horizon is {j_horizon}",
    )
    return HurewiczResult(bound, tuple(blocks), covering, bounded_ok)
