"""Low-level helpers for eventually periodic 0/1 sequences.

A sequence is stored as a pair of bit words ``(pre, per)``: position ``i``
reads ``pre[i]`` for ``i < len(pre)`` and ``per[(i - len(pre)) % len(per)]``
afterwards.  Both the set type in :mod:`gammalab.natsets` and the point type
in :mod:`gammalab.cantor` are thin wrappers over this representation, and
both rely on the same canonical form: shortest preperiod, then shortest
period.  Canonical forms are unique, so equality of wrappers reduces to
string comparison.
"""

from __future__ import annotations

_BITS = frozenset("01")


def check_bits(word: str, *, allow_empty: bool = True) -> str:
    if not isinstance(word, str) or not set(word) <= _BITS:
        raise ValueError(f"not a bit word: {word!r}")
    if not allow_empty and not word:
        raise ValueError("bit word must be nonempty")
    return word


def minimal_period_word(per: str) -> str:
    """Shortest word whose repetition equals the repetition of ``per``."""
    p = len(per)
    for d in range(1, p + 1):
        if p % d == 0 and all(per[i] == per[i % d] for i in range(p)):
            return per[:d]
    return per


def canonical(pre: str, per: str) -> tuple[str, str]:
    """Canonical (minimal preperiod, minimal period) form of a sequence.

    The minimal eventual period does not depend on where the periodic tail
    is cut, so the period word is minimized once and only rotated while
    preperiod bits are absorbed into it.
    """
    per = minimal_period_word(per)
    while pre and pre[-1] == per[-1]:
        per = per[-1] + per[:-1]
        pre = pre[:-1]
    return pre, per


def bit_at(pre: str, per: str, i: int) -> str:
    if i < 0:
        raise IndexError("negative position")
    if i < len(pre):
        return pre[i]
    return per[(i - len(pre)) % len(per)]


def prefix(pre: str, per: str, k: int) -> str:
    """First ``k`` bits of the sequence as a word."""
    if k <= len(pre):
        return pre[:k]
    reps = (k - len(pre)) // len(per) + 1
    return (pre + per * reps)[:k]


def agree_horizon(pre_a: str, per_a: str, pre_b: str, per_b: str) -> int:
    """Bound H such that agreement on positions < H implies equality.

    Two eventually periodic sequences that agree up to the longer preperiod
    plus one common period are equal everywhere.
    """
    import math

    return max(len(pre_a), len(pre_b)) + math.lcm(len(per_a), len(per_b))
