"""Wave predicates and wave search inside integer sets.

A pattern wave for pi in S_k is an increasing integer sequence
x_1 < ... < x_{k+1} whose consecutive gaps compare exactly the way pi's
values compare: d_i > d_j if and only if pi(i) > pi(j).  The "if and only
if" forces the gaps to be pairwise distinct, so the strict predicate is
equivalent to ``normalize(gaps) == pi``.  The weak-difference variant only
demands the one-directional pi(i) > pi(j) => d_i >= d_j and therefore
admits ties; every strict wave is a weak wave.

``find_wave`` searches an :class:`IntSet` for the lexicographically least
witness by depth-first extension over increasing subsequences, pruning any
prefix whose gaps already contradict the pattern.  The pruning is lossless:
a genuine wave has every prefix order-compatible with the pattern, so the
first complete sequence the search reaches is the least witness.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from .perm import Permutation, normalize

__all__ = [
    "IntSet",
    "WaveWitness",
    "Mode",
    "differences",
    "is_pi_wave",
    "is_weak_pi_wave",
    "prefix_feasible",
    "find_wave",
    "BITMASK_UNIVERSE_CAP",
]

Mode = Literal["strict", "weak"]

# Above this universe size IntSet skips the membership bitmask and falls
# back to a frozenset; successor queries stay index-based either way.
BITMASK_UNIVERSE_CAP = 1 << 20


def _check_mode(mode: str) -> None:
    if mode not in ("strict", "weak"):
        raise ValueError(f"mode must be 'strict' or 'weak', got {mode!r}")


@dataclass(frozen=True)
class IntSet:
    """Strictly increasing positive integers inside the universe [n].

    >>> s = IntSet((1, 2, 4, 8), universe=8)
    >>> 4 in s, 5 in s, s.successor(4)
    (True, False, 8)
    """

    elements: tuple[int, ...]
    universe: int

    def __post_init__(self) -> None:
        els = tuple(self.elements)
        object.__setattr__(self, "elements", els)
        if self.universe < 1:
            raise ValueError("universe must be >= 1")
        if els:
            if els[0] < 1:
                raise ValueError("elements must be positive")
            if els[-1] > self.universe:
                raise ValueError(
                    f"element {els[-1]} exceeds universe {self.universe}"
                )
            if any(a >= b for a, b in zip(els, els[1:])):
                raise ValueError("elements must be strictly increasing")

    @classmethod
    def from_iterable(cls, it: Iterable[int], universe: int | None = None) -> "IntSet":
        els = tuple(sorted(set(it)))
        if not els:
            raise ValueError("integer set must be non-empty")
        return cls(els, universe if universe is not None else els[-1])

    @classmethod
    def parse(cls, text: str, universe: int | None = None) -> "IntSet":
        try:
            vals = [int(p) for p in text.strip().split(",")]
        except ValueError:
            raise ValueError(f"cannot parse integer set from {text!r}") from None
        return cls.from_iterable(vals, universe)

    @functools.cached_property
    def _members(self) -> int | frozenset[int]:
        if self.universe <= BITMASK_UNIVERSE_CAP:
            mask = 0
            for e in self.elements:
                mask |= 1 << e
            return mask
        return frozenset(self.elements)

    def __contains__(self, x: int) -> bool:
        m = self._members
        if isinstance(m, int):
            return 0 < x <= self.universe and bool(m >> x & 1)
        return x in m

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __str__(self) -> str:
        return ",".join(str(e) for e in self.elements)

    def successor(self, x: int) -> int | None:
        """Least element strictly above x, or None."""
        import bisect

        i = bisect.bisect_right(self.elements, x)
        return self.elements[i] if i < len(self.elements) else None

    def reflected(self) -> "IntSet":
        """The mirror image {n+1-s} in the same universe."""
        n = self.universe
        return IntSet(tuple(n + 1 - e for e in reversed(self.elements)), n)


def differences(points: Sequence[int]) -> tuple[int, ...]:
    """Consecutive gaps of a strictly increasing sequence.

    >>> differences((1, 2, 6, 9))
    (1, 4, 3)
    """
    if len(points) < 2:
        raise ValueError("need at least two points to take differences")
    if any(a >= b for a, b in zip(points, points[1:])):
        raise ValueError(f"points must be strictly increasing: {tuple(points)}")
    return tuple(b - a for a, b in zip(points, points[1:]))


def is_pi_wave(points: Sequence[int], pi: Permutation) -> bool:
    """Total predicate: is ``points`` a strict pattern wave for ``pi``?

    Malformed input (wrong length, not increasing, tied gaps) is simply not
    a wave; the predicate never raises.

    >>> is_pi_wave((1, 3, 4), Permutation((2, 1)))
    True
    >>> is_pi_wave((1, 2, 3), Permutation((1, 2)))
    False
    """
    k = len(pi)
    points = tuple(points)
    if len(points) != k + 1:
        return False
    if any(a >= b for a, b in zip(points, points[1:])):
        return False
    diffs = tuple(b - a for a, b in zip(points, points[1:]))
    if len(set(diffs)) != k:
        return False
    return normalize(diffs) == pi


def is_weak_pi_wave(points: Sequence[int], pi: Permutation) -> bool:
    """Total predicate for the weak-difference variant (gap ties allowed).

    >>> is_weak_pi_wave((1, 2, 3), Permutation((2, 1)))
    True
    >>> is_weak_pi_wave((1, 2, 4), Permutation((2, 1)))
    False
    """
    k = len(pi)
    points = tuple(points)
    if len(points) != k + 1:
        return False
    if any(a >= b for a, b in zip(points, points[1:])):
        return False
    diffs = [b - a for a, b in zip(points, points[1:])]
    vals = pi.values
    for i in range(k):
        for j in range(k):
            if vals[i] > vals[j] and diffs[i] < diffs[j]:
                return False
    return True


def wave_predicate(mode: Mode):
    """The point-sequence predicate for the given mode."""
    _check_mode(mode)
    return is_pi_wave if mode == "strict" else is_weak_pi_wave


@dataclass(frozen=True)
class WaveWitness:
    """A verified wave: construction fails unless the predicate holds."""

    pattern: Permutation
    points: tuple[int, ...]
    mode: Mode = "strict"

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        _check_mode(self.mode)
        if not wave_predicate(self.mode)(self.points, self.pattern):
            raise ValueError(
                f"points {self.points} are not a {self.mode} wave for {self.pattern}"
            )

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.points)


def prefix_feasible(partial: Sequence[int], pi: Permutation, mode: Mode = "strict") -> bool:
    """Can ``partial`` still be the start of a wave for ``pi``?

    True iff the gaps present so far relate exactly as the first values of
    the pattern relate (strict mode: order-isomorphic with distinct gaps;
    weak mode: the one-directional condition).  Total: malformed input is
    simply infeasible.
    """
    _check_mode(mode)
    partial = tuple(partial)
    if not partial or len(partial) > len(pi) + 1:
        return False
    if any(a >= b for a, b in zip(partial, partial[1:])):
        return False
    diffs = [b - a for a, b in zip(partial, partial[1:])]
    vals = pi.values
    for i in range(len(diffs)):
        for j in range(i + 1, len(diffs)):
            if not _gap_pair_ok(vals[i], vals[j], diffs[i], diffs[j], mode == "strict"):
                return False
    return True


def _gap_pair_ok(pi_i: int, pi_j: int, d_i: int, d_j: int, strict: bool) -> bool:
    if strict:
        # ties are never allowed: the gap order must mirror the value order
        return d_i != d_j and (d_i > d_j) == (pi_i > pi_j)
    if pi_i > pi_j and d_i < d_j:
        return False
    if pi_j > pi_i and d_j < d_i:
        return False
    return True


def find_wave(
    s: IntSet,
    pi: Permutation,
    mode: Mode = "strict",
    *,
    prune: bool = True,
) -> WaveWitness | None:
    """Lexicographically least wave among the elements of ``s``, or None.

    Depth-first search over increasing subsequences, extending by elements
    in ascending order, so the first completed sequence is the least
    witness.  ``prune=False`` disables the prefix-feasibility cut (used to
    test that pruning is lossless); results are identical either way.
    """
    _check_mode(mode)
    k = len(pi)
    need = k + 1
    els = s.elements
    m = len(els)
    if m < need:
        return None
    strict = mode == "strict"
    vals = pi.values
    full_pred = wave_predicate(mode)
    stackpts: list[int] = []
    stackdiffs: list[int] = []

    def extend(start: int) -> tuple[int, ...] | None:
        depth = len(stackpts)
        for idx in range(start, m):
            x = els[idx]
            if depth > 0:
                d = x - stackpts[-1]
                if prune:
                    ok = all(
                        _gap_pair_ok(vals[i], vals[depth - 1], stackdiffs[i], d, strict)
                        for i in range(depth - 1)
                    )
                    if not ok:
                        continue
                stackdiffs.append(d)
            stackpts.append(x)
            if len(stackpts) == need:
                pts = tuple(stackpts)
                if full_pred(pts, pi):
                    return pts
            else:
                got = extend(idx + 1)
                if got is not None:
                    return got
            stackpts.pop()
            if depth > 0:
                stackdiffs.pop()
        return None

    pts = extend(0)
    if pts is None:
        return None
    return WaveWitness(pattern=pi, points=pts, mode=mode)
