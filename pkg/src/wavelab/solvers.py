"""Exact computation of the two extremal quantities.

``exact_g(pi, n)`` is the size of the largest wave-free subset of [n]:
branch-and-bound over subsets, elements added in increasing order.  An
element is admitted only if it completes no wave whose final point it is
(any new wave must end at the newest, largest element), and a branch is cut
when the remaining universe provably cannot beat the incumbent.  Values are
solved for n = 1, 2, ... in order so every certified g(m) with m < n serves
as an admissible suffix bound for the [m]-sized tail of the universe, and
any strictly improving set at step n must contain n itself (everything
smaller was exhausted at step n-1), which prunes subtrees that have already
lost n.  The reported witness is the lexicographically least optimum: the
search visits subsets in lexicographic order and no cut ever removes a
subset that could still strictly beat the incumbent.

For the two patterns of length 2 the completion rule has a closed shape
(every admissible next element doubles the current span, upward for 2,1 and
mirrored for 1,2), which yields an exact bound on how many elements can
still be added; with it the certification tree for n up to a few hundred
collapses to a few thousand nodes.  Longer patterns use a precomputed table
of waves, grouped by second-largest point, to filter the candidate list in
one pass per inclusion; the plain remaining-count bound alone is hopeless
at these sizes.

``exact_P(pi, r)`` is the least M such that every r-coloring of [M] holds a
monochromatic wave: M is raised until backtracking (point 1 gets color 1,
color c+1 may first appear only after color c) finds no wave-free coloring.
The value is certified by exhaustion, never extrapolated; the extremal
coloring of [M-1] is the first one in canonical backtracking order.

Both searches honor a node budget and report a structured lower-bound
result instead of a wrong answer when it runs out.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass

from .perm import Permutation, remove_values
from .waves import IntSet, Mode, _gap_pair_ok, wave_predicate

__all__ = [
    "Coloring",
    "DensityResult",
    "ColoringResult",
    "exact_g",
    "exact_P",
    "recursive_upper_bound_g",
    "DEFAULT_NODE_BUDGET",
    "MASK_TABLE_CAP",
    "SINGLE_REMOVAL_FACTOR",
    "PAIR_REMOVAL_FACTOR",
    "SINGLE_REMOVAL_FACTOR_SAFE",
]

DEFAULT_NODE_BUDGET = 10**8

# Universes up to this size get a precomputed wave table; beyond it the
# engine falls back to per-candidate completion search.  The cap shrinks
# for longer patterns so table construction (which the node budget does not
# meter) stays bounded by TABLE_ENTRY_LIMIT candidate tuples.
MASK_TABLE_CAP = 64
TABLE_ENTRY_LIMIT = 500_000

# Per-removal log factors of the two recursive upper-bound rules.  The
# single-removal recursion also supports a lazier overall constant of 100
# per step; the evaluator uses the sharp value.
SINGLE_REMOVAL_FACTOR = 30
PAIR_REMOVAL_FACTOR = 42
SINGLE_REMOVAL_FACTOR_SAFE = 100


@dataclass(frozen=True)
class Coloring:
    """Total assignment of [M] to colors 1..palette; index i+1 -> assignment[i]."""

    assignment: tuple[int, ...]
    palette: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", tuple(self.assignment))
        if self.palette < 1:
            raise ValueError("palette must be >= 1")
        for i, c in enumerate(self.assignment, start=1):
            if not 1 <= c <= self.palette:
                raise ValueError(f"point {i} has color {c} outside 1..{self.palette}")

    @property
    def domain_size(self) -> int:
        return len(self.assignment)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= len(self.assignment):
            raise IndexError(f"point {i} outside domain [1..{len(self.assignment)}]")
        return self.assignment[i - 1]

    def color_class(self, c: int) -> tuple[int, ...]:
        return tuple(i for i, col in enumerate(self.assignment, start=1) if col == c)

    def restricted(self, m: int) -> "Coloring":
        """The same coloring on the prefix domain [m]."""
        if not 0 <= m <= len(self.assignment):
            raise ValueError(f"cannot restrict domain {len(self.assignment)} to [{m}]")
        return Coloring(self.assignment[:m], self.palette)

    @classmethod
    def constant(cls, m: int, color: int = 1, palette: int = 1) -> "Coloring":
        return cls((color,) * m, palette)

    @classmethod
    def parse(cls, text: str, palette: int | None = None) -> "Coloring":
        """Comma-separated colors, optionally preceded by a 'palette: r' line."""
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty coloring text")
        if lines[0].lower().startswith("palette:"):
            declared = int(lines[0].split(":", 1)[1])
            palette = declared if palette is None else palette
            lines = lines[1:]
        if len(lines) != 1:
            raise ValueError("coloring text must be a single line of colors")
        try:
            colors = tuple(int(p) for p in lines[0].split(","))
        except ValueError:
            raise ValueError(f"cannot parse coloring from {lines[0]!r}") from None
        return cls(colors, palette if palette is not None else max(colors, default=1))

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.assignment)


@dataclass(frozen=True)
class DensityResult:
    pattern: Permutation
    n: int
    mode: Mode
    value: int
    witness: IntSet
    status: str  # "exact" | "lower-bound"
    nodes: int


@dataclass(frozen=True)
class ColoringResult:
    pattern: Permutation
    r: int
    mode: Mode
    value: int
    extremal: Coloring
    status: str  # "exact" | "lower-bound"
    nodes: int


class _OutOfBudget(Exception):
    def __init__(self, value: int, points: tuple[int, ...]):
        self.value = value
        self.points = points
        super().__init__("node budget exhausted")


class _Budget:
    __slots__ = ("left", "spent")

    def __init__(self, limit: int):
        self.left = limit
        self.spent = 0

    def charge(self) -> bool:
        self.spent += 1
        self.left -= 1
        return self.left >= 0


def _ext_doubling_up(m1: int, z: int, n: int) -> int:
    """Exact count of elements addable above z for the 2,1 pattern.

    A set is free of descending-gap triples iff each element sits at least
    its distance-from-the-minimum above its predecessor, so from state
    (min m1, last z) the cheapest continuation doubles the span each step.
    """
    count = 0
    last = z
    while True:
        nxt = 2 * last - m1 if last > m1 else last + 1
        if nxt > n:
            return count
        count += 1
        last = nxt


def _ext_doubling_down(z: int, cap: int) -> int:
    """Exact count of elements addable in (z, cap] for the 1,2 pattern.

    Mirror image of the 2,1 rule: gaps must shrink toward the top, so a
    chain anchored at z fits at most bit_length(cap - z) further elements.
    """
    span = cap - z
    return span.bit_length() if span >= 1 else 0


class _GEngine:
    """Incremental exact-g solver for one (pattern, mode) pair."""

    def __init__(self, pi: Permutation, mode: Mode):
        self.pi = pi
        self.mode: Mode = mode
        self.k = len(pi)
        self.strict = mode == "strict"
        self.pred = wave_predicate(mode)
        self.g: list[int] = [0]
        self.witnesses: list[tuple[int, ...]] = [()]
        # waves grouped by second-largest point: by_second[z] = [(rest_mask, max)]
        self.by_second: list[list[tuple[int, int]]] = [[], []]
        self.table_n = 1
        cap = MASK_TABLE_CAP
        while cap > 1 and math.comb(cap, self.k + 1) > TABLE_ENTRY_LIMIT:
            cap -= 1
        self.mask_cap = cap
        self.desc2 = self.strict and pi.values == (2, 1)
        self.asc2 = self.strict and pi.values == (1, 2)
        self.lock = threading.Lock()

    def _extend_table(self, n: int) -> None:
        k = self.k
        while self.table_n < n:
            m = self.table_n + 1
            self.by_second.append([])
            if k == 1:
                for z in range(1, m):
                    self.by_second[z].append((0, m))
            else:
                for combo in itertools.combinations(range(1, m), k):
                    if self.pred(combo + (m,), self.pi):
                        rest = 0
                        for p in combo[:-1]:
                            rest |= 1 << p
                        self.by_second[combo[-1]].append((rest, m))
            self.table_n = m

    def _completes_pinned(self, cold: list[int], z: int, e: int) -> bool:
        """Is there a wave (w_1..w_{k-1}, z, e) with the w's drawn from cold?"""
        k = self.k
        if k == 1:
            return True
        vals = self.pi.values
        strict = self.strict
        diffs = [0] * (k + 1)  # 1-indexed gap slots
        diffs[k] = e - z

        def down(pos: int, upper: int, hi: int) -> bool:
            for t in range(hi - 1, -1, -1):
                c = cold[t]
                if c >= upper:
                    continue
                d = upper - c
                if all(
                    _gap_pair_ok(vals[pos - 1], vals[j - 1], d, diffs[j], strict)
                    for j in range(pos + 1, k + 1)
                ):
                    diffs[pos] = d
                    if pos == 1 or down(pos - 1, c, t):
                        return True
            return False

        return down(k - 1, z, len(cold))

    def ensure(self, n: int, budget: _Budget) -> None:
        with self.lock:
            while len(self.g) <= n:
                self._solve_next(budget)

    def _solve_next(self, budget: _Budget) -> None:
        n = len(self.g)
        g = self.g
        k = self.k
        use_table = n <= self.mask_cap
        if use_table:
            self._extend_table(n)
        by_second = self.by_second
        incumbent = g[n - 1] - 1
        anchored_floor = g[n - 1]
        best: tuple[int, ...] = ()
        celems: list[int] = []
        cmask = 0

        def fail() -> None:
            known = max(g[n - 1], incumbent)
            pts = best if incumbent >= g[n - 1] and best else self.witnesses[n - 1]
            raise _OutOfBudget(known, pts)

        def rec(cands: list[int], vcap: int) -> None:
            nonlocal incumbent, best, cmask
            csize = len(celems)
            ncands = len(cands)
            for i, e in enumerate(cands):
                newvcap = n
                if self.desc2:
                    m1 = celems[0] if celems else e
                    if csize + 1 + _ext_doubling_up(m1, e, n) <= incumbent:
                        if csize:
                            break
                        continue
                elif self.asc2:
                    newvcap = min(vcap, 2 * e - celems[-1]) if celems else n
                    if csize + 1 + _ext_doubling_down(e, min(newvcap, n)) <= incumbent:
                        continue
                else:
                    if csize + 1 + min(g[n - e], ncands - 1 - i) <= incumbent:
                        break
                if not budget.charge():
                    fail()
                celems.append(e)
                cmask |= 1 << e
                if csize + 1 > incumbent:
                    incumbent = csize + 1
                    best = tuple(celems)
                if k == 1:
                    newcands: list[int] = []
                elif use_table:
                    dead = {
                        mx for rest, mx in by_second[e] if rest & cmask == rest
                    }
                    newcands = [x for x in cands[i + 1 :] if x not in dead]
                else:
                    cold = celems[:-1]
                    newcands = [
                        x
                        for x in cands[i + 1 :]
                        if not self._completes_pinned(cold, e, x)
                    ]
                if newcands and not (
                    incumbent >= anchored_floor and newcands[-1] != n
                ):
                    rec(newcands, newvcap)
                celems.pop()
                cmask &= ~(1 << e)

        rec(list(range(1, n + 1)), n)
        g.append(incumbent)
        self.witnesses.append(best)


_ENGINES: dict[tuple[tuple[int, ...], str], _GEngine] = {}
_ENGINES_LOCK = threading.Lock()


def _engine_for(pi: Permutation, mode: Mode) -> _GEngine:
    key = (pi.values, mode)
    with _ENGINES_LOCK:
        eng = _ENGINES.get(key)
        if eng is None:
            eng = _GEngine(pi, mode)
            _ENGINES[key] = eng
        return eng


def _reset_caches() -> None:
    """Drop all memoized solver state (intended for tests)."""
    with _ENGINES_LOCK:
        _ENGINES.clear()


def exact_g(
    pi: Permutation,
    n: int,
    mode: Mode = "strict",
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> DensityResult:
    """Largest wave-free subset of [n], with a verified extremal witness.

    Exact unless the node budget runs out, in which case the result carries
    status ``"lower-bound"`` and the best wave-free set found so far.
    Results for one pattern are cached process-wide, so a budget applies to
    the new work done by this call.
    """
    if n < 1:
        raise ValueError("universe size must be >= 1")
    wave_predicate(mode)  # validates the mode string
    engine = _engine_for(pi, mode)
    budget = _Budget(node_budget)
    try:
        engine.ensure(n, budget)
    except _OutOfBudget as ex:
        return DensityResult(
            pattern=pi,
            n=n,
            mode=mode,
            value=ex.value,
            witness=IntSet(ex.points, n),
            status="lower-bound",
            nodes=budget.spent,
        )
    return DensityResult(
        pattern=pi,
        n=n,
        mode=mode,
        value=engine.g[n],
        witness=IntSet(engine.witnesses[n], n),
        status="exact",
        nodes=budget.spent,
    )


def _wave_table_for_coloring(
    pi: Permutation, mode: Mode, m: int, by_max: list[list[int]]
) -> None:
    """Extend by_max with the rest-masks of waves ending at point m."""
    k = len(pi)
    pred = wave_predicate(mode)
    new: list[int] = []
    if k == 1:
        new = [1 << c for c in range(1, m)]
    else:
        for combo in itertools.combinations(range(1, m), k):
            if pred(combo + (m,), pi):
                rest = 0
                for p in combo:
                    rest |= 1 << p
                new.append(rest)
    by_max.append(new)


def exact_P(
    pi: Permutation,
    r: int,
    mode: Mode = "strict",
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> ColoringResult:
    """Least M such that every r-coloring of [M] has a monochromatic wave.

    Iterates M upward; at each M a backtracking search with canonical color
    introduction (point 1 is color 1, color c+1 may first appear only after
    color c) looks for a wave-free coloring.  The first M admitting none is
    the answer, and the last coloring found is the extremal certificate.
    """
    if r < 1:
        raise ValueError("palette size must be >= 1")
    wave_predicate(mode)  # validates the mode string
    budget = _Budget(node_budget)
    by_max: list[list[int]] = [[]]
    last_good: tuple[int, ...] = ()
    M = 0
    while True:
        M += 1
        _wave_table_for_coloring(pi, mode, M, by_max)
        classmask = [0] * (r + 1)
        sol = [0] * (M + 1)
        exhausted = True

        def assign(p: int, introduced: int) -> bool:
            nonlocal exhausted
            if p > M:
                return True
            for c in range(1, min(introduced + 1, r) + 1):
                if not budget.charge():
                    exhausted = False
                    return False
                cm = classmask[c]
                blocked = False
                for rest in by_max[p]:
                    if rest & cm == rest:
                        blocked = True
                        break
                if not blocked:
                    sol[p] = c
                    classmask[c] |= 1 << p
                    if assign(p + 1, max(introduced, c)):
                        return True
                    classmask[c] &= ~(1 << p)
            return False

        if assign(1, 0):
            last_good = tuple(sol[1 : M + 1])
            continue
        if exhausted:
            return ColoringResult(
                pattern=pi,
                r=r,
                mode=mode,
                value=M,
                extremal=Coloring(last_good, r),
                status="exact",
                nodes=budget.spent,
            )
        return ColoringResult(
            pattern=pi,
            r=r,
            mode=mode,
            value=len(last_good) + 1,
            extremal=Coloring(last_good, r),
            status="lower-bound",
            nodes=budget.spent,
        )


def recursive_upper_bound_g(pi: Permutation, n: int) -> int:
    """Evaluable recursive upper bound on the largest wave-free set size.

    U(pi, n) = min over applicable rules of
      30 * log2(n) * U(drop value 1)            (always), and
      42 * log2(n) * U(drop values 1 and 2)     (when 1 and 2 sit in
                                                 non-adjacent positions),
    with base U = 2 for single-value patterns, rounded up at the end.
    """
    if n < 2:
        raise ValueError("recursive upper bound needs n >= 2")
    log_n = math.log2(n)
    memo: dict[tuple[int, ...], float] = {}

    def u(vals: tuple[int, ...]) -> float:
        if len(vals) == 1:
            return 2.0
        got = memo.get(vals)
        if got is not None:
            return got
        p = Permutation(vals)
        bound = SINGLE_REMOVAL_FACTOR * log_n * u(remove_values(p, {1}).values)
        if abs(p.position(1) - p.position(2)) >= 2:
            bound = min(
                bound,
                PAIR_REMOVAL_FACTOR * log_n * u(remove_values(p, {1, 2}).values),
            )
        memo[vals] = bound
        return bound

    return math.ceil(u(pi.values))
