"""Independent oracles for the test suite.

Everything here works straight from the definitions with plain enumeration:
no pruning tables, no bounds, no search-order tricks.  The package under
test must agree with these on every instance small enough to enumerate.
"""

from __future__ import annotations

import itertools
from itertools import permutations

from wavelab import Permutation


def naive_is_wave(points, pi: Permutation, weak: bool = False) -> bool:
    """Definition-literal wave predicate over all index pairs."""
    pts = tuple(points)
    k = len(pi)
    if len(pts) != k + 1:
        return False
    if any(a >= b for a, b in zip(pts, pts[1:])):
        return False
    d = [b - a for a, b in zip(pts, pts[1:])]
    vals = pi.values
    for i in range(k):
        for j in range(k):
            if weak:
                if vals[i] > vals[j] and d[i] < d[j]:
                    return False
            else:
                if (d[i] > d[j]) != (vals[i] > vals[j]):
                    return False
    return True


def oracle_least_wave(elements, pi: Permutation, weak: bool = False):
    """First wave among sorted (k+1)-combinations, i.e. the lex-least one."""
    els = sorted(elements)
    for combo in itertools.combinations(els, len(pi) + 1):
        if naive_is_wave(combo, pi, weak):
            return combo
    return None


def wave_list(n: int, pi: Permutation, weak: bool = False):
    """All waves inside [n] as (points, bitmask) pairs in lex order."""
    out = []
    for combo in itertools.combinations(range(1, n + 1), len(pi) + 1):
        if naive_is_wave(combo, pi, weak):
            mask = 0
            for p in combo:
                mask |= 1 << p
            out.append((combo, mask))
    return out


def oracle_g(pi: Permutation, n: int, weak: bool = False):
    """(max size, lex-least maximum set) by enumerating every wave-free set."""
    k = len(pi)
    cur: list[int] = []
    best_val = 0
    best_set: tuple[int, ...] = ()

    def completes(e: int) -> bool:
        for combo in itertools.combinations(cur, k):
            if naive_is_wave(combo + (e,), pi, weak):
                return True
        return False

    def rec(start: int) -> None:
        nonlocal best_val, best_set
        if len(cur) > best_val:
            best_val = len(cur)
            best_set = tuple(cur)
        for e in range(start, n + 1):
            if not completes(e):
                cur.append(e)
                rec(e + 1)
                cur.pop()

    rec(1)
    return best_val, best_set


def coloring_wave_free(colors, pi: Permutation, weak: bool = False) -> bool:
    """Oracle check that no color class of ``colors`` holds a wave."""
    classes: dict[int, list[int]] = {}
    for i, c in enumerate(colors, start=1):
        classes.setdefault(c, []).append(i)
    return all(
        oracle_least_wave(pts, pi, weak) is None for pts in classes.values()
    )


def oracle_p(pi: Permutation, r: int, weak: bool = False, max_m: int = 12):
    """Least M with no wave-free r-coloring, by trying every coloring."""
    for m in range(1, max_m + 1):
        if not any(
            coloring_wave_free(colors, pi, weak)
            for colors in itertools.product(range(1, r + 1), repeat=m)
        ):
            return m
    raise AssertionError(f"oracle_p exceeded max_m={max_m}")


def all_patterns(k: int):
    return [Permutation(p) for p in permutations(range(1, k + 1))]


S2 = all_patterns(2)
S3 = all_patterns(3)
S4 = all_patterns(4)

S4_NONADJACENT = [
    p for p in S4 if abs(p.position(1) - p.position(2)) >= 2
]
