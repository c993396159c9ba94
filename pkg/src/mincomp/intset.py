"""Integer-set representations with decidable membership.

Everything downstream (sum kernels, certificate checkers, constructions)
manipulates subsets of Z through a small algebra of set objects:

  * FiniteSet      -- explicit sorted elements
  * EPSet          -- eventually periodic, canonical (m, A, B, F) form:
                      (mN + A) | B | F with A the per-class progression
                      starts, B the finite stragglers inside progression
                      classes, F the finite part outside them
  * LazySet        -- strictly increasing generator, memoized, bounded below
  * PeriodicSet    -- two-sided union of residue classes mod m
  * combinators    -- reflection, translation, union, finite difference

Each set reports structural metadata ("tail profiles") so callers can
decide membership questions *exactly* even for sets that are unbounded in
one direction: a tail profile (modulus, horizon, residues) promises that
beyond the horizon, membership depends only on the residue class.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Iterator, NamedTuple

DEFAULT_STEP_BUDGET = 10**6


class BudgetExceededError(RuntimeError):
    """An enumeration hit its step budget before reaching its target."""


class MonotonicityError(RuntimeError):
    """A lazy enumerator produced a non-increasing value."""


@dataclass(frozen=True)
class Window:
    """Closed integer interval [lo, hi]."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty window: [{self.lo}, {self.hi}]")

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.lo, self.hi + 1))

    def __contains__(self, z: int) -> bool:
        return self.lo <= z <= self.hi

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1


class Tail(NamedTuple):
    """Eventual periodic behavior on one side of a set.

    For an up tail: for every x >= horizon, x is a member iff
    x % modulus is in residues.  For a down tail the same with
    x <= horizon.  A tail with empty residues asserts the set has no
    elements beyond the horizon on that side.
    """

    modulus: int
    horizon: int
    residues: frozenset

    def lift(self, big_modulus: int) -> frozenset:
        if big_modulus % self.modulus:
            raise ValueError("lift target must be a multiple of the tail modulus")
        return frozenset(
            r + k * self.modulus
            for r in self.residues
            for k in range(big_modulus // self.modulus)
        )


class IntegerSet:
    """Base class: decidable membership plus structural metadata."""

    def member(self, z: int) -> bool:
        raise NotImplementedError

    def __contains__(self, z: int) -> bool:
        return self.member(z)

    def window(self, w: Window) -> list[int]:
        return [z for z in w if self.member(z)]

    def min_element(self) -> int | None:
        """Least element; None when unbounded below (or empty)."""
        raise NotImplementedError

    def max_element(self) -> int | None:
        """Greatest element; None when unbounded above (or empty)."""
        raise NotImplementedError

    def known_empty(self) -> bool:
        return False

    def up_tail(self) -> Tail | None:
        return None

    def down_tail(self) -> Tail | None:
        return None

    def translate(self, t: int) -> "IntegerSet":
        if t == 0:
            return self
        return TranslatedSet(self, t)

    def reflect(self, window: Window | None = None) -> "IntegerSet":
        return ReflectedSet(self)


class FiniteSet(IntegerSet):
    """Explicit finite set, stored sorted and deduplicated."""

    __slots__ = ("elements", "_set")

    def __init__(self, elements: Iterable[int] = ()):
        self.elements: tuple[int, ...] = tuple(sorted(set(elements)))
        self._set = frozenset(self.elements)

    def member(self, z: int) -> bool:
        return z in self._set

    def window(self, w: Window) -> list[int]:
        import bisect

        lo = bisect.bisect_left(self.elements, w.lo)
        hi = bisect.bisect_right(self.elements, w.hi)
        return list(self.elements[lo:hi])

    def min_element(self) -> int | None:
        return self.elements[0] if self.elements else None

    def max_element(self) -> int | None:
        return self.elements[-1] if self.elements else None

    def known_empty(self) -> bool:
        return not self.elements

    def up_tail(self) -> Tail:
        h = self.elements[-1] + 1 if self.elements else 0
        return Tail(1, h, frozenset())

    def down_tail(self) -> Tail:
        h = self.elements[0] - 1 if self.elements else 0
        return Tail(1, h, frozenset())

    def translate(self, t: int) -> "FiniteSet":
        return FiniteSet(x + t for x in self.elements)

    def reflect(self, window: Window | None = None) -> "FiniteSet":
        return FiniteSet(-x for x in self.elements)

    def __repr__(self) -> str:
        return f"FiniteSet({list(self.elements)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteSet) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)


def _canonical_form(
    m: int, A: Iterable[int], B: Iterable[int], F: Iterable[int]
) -> tuple[int, tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Reduce (m, A, B, F) to the unique canonical presentation.

    Canonical means: m is the minimal eventual period, A holds exactly one
    maximal-downward progression start per occupied residue class, B holds
    the members of occupied classes lying below their start, and F holds
    the members of unoccupied classes.  Membership is preserved exactly;
    nothing is dropped.
    """
    if m <= 0:
        raise ValueError(f"modulus must be positive, got {m}")
    a_in = set(A)
    if not a_in:
        raise ValueError("progression start set A must be nonempty")
    extras = set(B) | set(F)

    starts: dict[int, int] = {}
    for a in a_in:
        r = a % m
        starts[r] = min(a, starts.get(r, a))

    def member_raw(x: int) -> bool:
        r = x % m
        if r in starts and x >= starts[r]:
            return True
        return x in extras

    tail_classes = frozenset(starts)

    m2 = m
    for d in range(1, m + 1):
        if m % d:
            continue
        if frozenset((r + d) % m for r in tail_classes) == tail_classes:
            m2 = d
            break

    classes2 = sorted({r % m2 for r in tail_classes})
    top = max(list(starts.values()) + [x + 1 for x in extras] + [0]) + 2 * m
    floor = min(list(starts.values()) + list(extras) + [0]) - 2 * m

    new_a: list[int] = []
    new_b: list[int] = []
    for rho in classes2:
        x = rho + ((top - rho) // m2) * m2  # largest value = rho mod m2, <= top
        while member_raw(x - m2):
            x -= m2
            if x < floor:
                raise AssertionError("canonical start walk escaped its bound")
        new_a.append(x)
        y = x - m2
        while y >= floor:
            if member_raw(y):
                new_b.append(y)
            y -= m2

    new_f = sorted(x for x in extras if x % m2 not in set(classes2))
    return m2, tuple(sorted(new_a)), tuple(sorted(new_b)), tuple(new_f)


class EPSet(IntegerSet):
    """Eventually periodic set (mN + A) | B | F, canonical on construction."""

    __slots__ = ("m", "A", "B", "F", "_starts", "_bset", "_fset")

    def __init__(self, m: int, A: Iterable[int], B: Iterable[int] = (), F: Iterable[int] = ()):
        m2, a2, b2, f2 = _canonical_form(m, A, B, F)
        self.m = m2
        self.A = a2
        self.B = b2
        self.F = f2
        self._starts = {a % m2: a for a in a2}
        self._bset = frozenset(b2)
        self._fset = frozenset(f2)

    @property
    def tail_classes(self) -> frozenset:
        return frozenset(self._starts)

    @property
    def f_classes(self) -> frozenset:
        return frozenset(x % self.m for x in self.F)

    def member(self, z: int) -> bool:
        s = self._starts.get(z % self.m)
        if s is not None and z >= s:
            return True
        return z in self._bset or z in self._fset

    def min_element(self) -> int:
        lows = [min(self.A)]
        if self.B:
            lows.append(self.B[0])
        if self.F:
            lows.append(self.F[0])
        return min(lows)

    def max_element(self) -> None:
        return None

    def up_tail(self) -> Tail:
        h = max(self.A)
        if self.B:
            h = max(h, self.B[-1] + 1)
        if self.F:
            h = max(h, self.F[-1] + 1)
        return Tail(self.m, h, frozenset(self._starts))

    def down_tail(self) -> Tail:
        return Tail(1, self.min_element() - 1, frozenset())

    def translate(self, t: int) -> "EPSet":
        return EPSet(
            self.m,
            (a + t for a in self.A),
            (b + t for b in self.B),
            (f + t for f in self.F),
        )

    def __repr__(self) -> str:
        return f"EPSet(m={self.m}, A={list(self.A)}, B={list(self.B)}, F={list(self.F)})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EPSet)
            and (self.m, self.A, self.B, self.F) == (other.m, other.A, other.B, other.F)
        )

    def __hash__(self) -> int:
        return hash((self.m, self.A, self.B, self.F))


def ep_canonicalize(m: int, A: Iterable[int], B: Iterable[int] = (), F: Iterable[int] = ()) -> EPSet:
    """Build the canonical eventually periodic set for raw (m, A, B, F) data."""
    return EPSet(m, A, B, F)


class LazySet(IntegerSet):
    """Strictly increasing generated set, extended on demand and memoized.

    `fn(i)` returns the i-th element (0-based).  Values must strictly
    increase; a violation raises loudly rather than silently corrupting
    downstream window arithmetic.  `gap_promise` records the caller's
    assertion that consecutive gaps are unbounded; constructions that
    need ever-larger gaps check this flag and budget their searches.
    """

    def __init__(
        self,
        fn: Callable[[int], int],
        *,
        name: str = "lazy",
        gap_promise: bool = False,
        expr: str | None = None,
    ):
        self._fn = fn
        self._memo: list[int] = []
        self._lock = threading.Lock()
        self.name = name
        self.gap_promise = gap_promise
        self.expr = expr

    def at(self, i: int, *, budget: int = DEFAULT_STEP_BUDGET) -> int:
        self._extend_count(i + 1, budget=budget)
        return self._memo[i]

    def _extend_count(self, n: int, *, budget: int = DEFAULT_STEP_BUDGET) -> None:
        if len(self._memo) >= n:
            return
        with self._lock:
            steps = 0
            while len(self._memo) < n:
                if steps > budget:
                    raise BudgetExceededError(
                        f"{self.name}: budget {budget} exhausted extending to {n} elements"
                    )
                i = len(self._memo)
                v = self._fn(i)
                if self._memo and v <= self._memo[-1]:
                    raise MonotonicityError(
                        f"{self.name}: element {i} = {v} does not exceed {self._memo[-1]}"
                    )
                self._memo.append(v)
                steps += 1

    def _extend_past(self, value: int, *, budget: int = DEFAULT_STEP_BUDGET) -> None:
        steps = 0
        while not self._memo or self._memo[-1] < value:
            if steps > budget:
                raise BudgetExceededError(
                    f"{self.name}: budget {budget} exhausted reaching value {value}"
                )
            self._extend_count(len(self._memo) + 1, budget=budget)
            steps += 1

    def member(self, z: int) -> bool:
        if not self._memo:
            self._extend_count(1)
        if z < self._memo[0]:
            return False
        self._extend_past(z)
        import bisect

        i = bisect.bisect_left(self._memo, z)
        return i < len(self._memo) and self._memo[i] == z

    def window(self, w: Window) -> list[int]:
        import bisect

        if not self._memo:
            self._extend_count(1)
        if w.hi >= self._memo[0]:
            self._extend_past(w.hi)
        lo = bisect.bisect_left(self._memo, w.lo)
        hi = bisect.bisect_right(self._memo, w.hi)
        return self._memo[lo:hi]

    def index_of_last_leq(self, value: int) -> int:
        """Count of elements <= value, minus one; -1 if none."""
        import bisect

        if not self._memo:
            self._extend_count(1)
        if self._memo[0] > value:
            return -1
        self._extend_past(value)
        return bisect.bisect_right(self._memo, value) - 1

    def min_element(self) -> int:
        return self.at(0)

    def max_element(self) -> None:
        return None

    def down_tail(self) -> Tail:
        return Tail(1, self.min_element() - 1, frozenset())

    def reflect(self, window: Window | None = None) -> IntegerSet:
        if window is None:
            raise ValueError(
                "reflecting a generated set needs a window to materialize onto"
            )
        return FiniteSet(-x for x in self.window(Window(-window.hi, -window.lo)))

    def __repr__(self) -> str:
        return f"LazySet({self.name})"


class PeriodicSet(IntegerSet):
    """Two-sided periodic set mZ + residues."""

    __slots__ = ("m", "residues")

    def __init__(self, m: int, residues: Iterable[int]):
        if m <= 0:
            raise ValueError(f"modulus must be positive, got {m}")
        self.m = m
        self.residues = frozenset(r % m for r in residues)

    def member(self, z: int) -> bool:
        return z % self.m in self.residues

    def min_element(self) -> int | None:
        return None if self.residues else None

    def max_element(self) -> int | None:
        return None

    def known_empty(self) -> bool:
        return not self.residues

    def up_tail(self) -> Tail:
        return Tail(self.m, 0, self.residues)

    def down_tail(self) -> Tail:
        return Tail(self.m, 0, self.residues)

    def translate(self, t: int) -> "PeriodicSet":
        return PeriodicSet(self.m, (r + t for r in self.residues))

    def reflect(self, window: Window | None = None) -> "PeriodicSet":
        return PeriodicSet(self.m, (-r for r in self.residues))

    def __repr__(self) -> str:
        return f"PeriodicSet(m={self.m}, residues={sorted(self.residues)})"


class TranslatedSet(IntegerSet):
    __slots__ = ("inner", "t")

    def __init__(self, inner: IntegerSet, t: int):
        self.inner = inner
        self.t = t

    def member(self, z: int) -> bool:
        return self.inner.member(z - self.t)

    def window(self, w: Window) -> list[int]:
        return [x + self.t for x in self.inner.window(Window(w.lo - self.t, w.hi - self.t))]

    def min_element(self) -> int | None:
        v = self.inner.min_element()
        return None if v is None else v + self.t

    def max_element(self) -> int | None:
        v = self.inner.max_element()
        return None if v is None else v + self.t

    def known_empty(self) -> bool:
        return self.inner.known_empty()

    def _shift_tail(self, tail: Tail | None) -> Tail | None:
        if tail is None:
            return None
        return Tail(
            tail.modulus,
            tail.horizon + self.t,
            frozenset((r + self.t) % tail.modulus for r in tail.residues),
        )

    def up_tail(self) -> Tail | None:
        return self._shift_tail(self.inner.up_tail())

    def down_tail(self) -> Tail | None:
        return self._shift_tail(self.inner.down_tail())

    def translate(self, t: int) -> IntegerSet:
        total = self.t + t
        return self.inner if total == 0 else TranslatedSet(self.inner, total)


class ReflectedSet(IntegerSet):
    """Mirror image {-x : x in inner}; swaps the two tails."""

    __slots__ = ("inner",)

    def __init__(self, inner: IntegerSet):
        self.inner = inner

    def member(self, z: int) -> bool:
        return self.inner.member(-z)

    def window(self, w: Window) -> list[int]:
        return sorted(-x for x in self.inner.window(Window(-w.hi, -w.lo)))

    def min_element(self) -> int | None:
        v = self.inner.max_element()
        return None if v is None else -v

    def max_element(self) -> int | None:
        v = self.inner.min_element()
        return None if v is None else -v

    def known_empty(self) -> bool:
        return self.inner.known_empty()

    def _flip(self, tail: Tail | None) -> Tail | None:
        if tail is None:
            return None
        return Tail(
            tail.modulus,
            -tail.horizon,
            frozenset((-r) % tail.modulus for r in tail.residues),
        )

    def up_tail(self) -> Tail | None:
        return self._flip(self.inner.down_tail())

    def down_tail(self) -> Tail | None:
        return self._flip(self.inner.up_tail())

    def reflect(self, window: Window | None = None) -> IntegerSet:
        return self.inner


class UnionSet(IntegerSet):
    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[IntegerSet]):
        flat: list[IntegerSet] = []
        for p in parts:
            if isinstance(p, UnionSet):
                flat.extend(p.parts)
            elif not p.known_empty():
                flat.append(p)
        self.parts = tuple(flat)

    def member(self, z: int) -> bool:
        return any(p.member(z) for p in self.parts)

    def window(self, w: Window) -> list[int]:
        out: set[int] = set()
        for p in self.parts:
            out.update(p.window(w))
        return sorted(out)

    def min_element(self) -> int | None:
        vals = []
        for p in self.parts:
            v = p.min_element()
            if v is None:
                return None
            vals.append(v)
        return min(vals) if vals else None

    def max_element(self) -> int | None:
        vals = []
        for p in self.parts:
            v = p.max_element()
            if v is None:
                return None
            vals.append(v)
        return max(vals) if vals else None

    def known_empty(self) -> bool:
        return not self.parts

    def up_tail(self) -> Tail | None:
        tails = [p.up_tail() for p in self.parts]
        if any(t is None for t in tails):
            return None
        m = lcm(*(t.modulus for t in tails)) if tails else 1
        h = max((t.horizon for t in tails), default=0)
        res = frozenset().union(*(t.lift(m) for t in tails))
        return Tail(m, h, res)

    def down_tail(self) -> Tail | None:
        tails = [p.down_tail() for p in self.parts]
        if any(t is None for t in tails):
            return None
        m = lcm(*(t.modulus for t in tails)) if tails else 1
        h = min((t.horizon for t in tails), default=0)
        res = frozenset().union(*(t.lift(m) for t in tails))
        return Tail(m, h, res)


class DifferenceSet(IntegerSet):
    """inner with finitely many elements removed."""

    __slots__ = ("inner", "removed")

    def __init__(self, inner: IntegerSet, removed: Iterable[int]):
        self.inner = inner
        self.removed = frozenset(removed)

    def member(self, z: int) -> bool:
        return z not in self.removed and self.inner.member(z)

    def window(self, w: Window) -> list[int]:
        return [x for x in self.inner.window(w) if x not in self.removed]

    def min_element(self) -> int | None:
        v = self.inner.min_element()
        if v is None:
            return None
        probe = v
        ceiling = max(self.removed, default=v) + 1
        while probe <= ceiling:
            if self.member(probe):
                return probe
            probe += 1
        # all removals passed; first inner member beyond them
        rest = self.inner.window(Window(ceiling, ceiling + 1))
        while not rest:
            ceiling += 2
            rest = self.inner.window(Window(ceiling - 1, ceiling))
        return rest[0]

    def max_element(self) -> int | None:
        v = self.inner.max_element()
        if v is None:
            return None
        while v >= min(self.removed, default=v) - 1:
            if self.member(v):
                return v
            v -= 1
        return None

    def known_empty(self) -> bool:
        return self.inner.known_empty()

    def up_tail(self) -> Tail | None:
        t = self.inner.up_tail()
        if t is None:
            return None
        h = max([t.horizon] + [x + 1 for x in self.removed])
        return Tail(t.modulus, h, t.residues)

    def down_tail(self) -> Tail | None:
        t = self.inner.down_tail()
        if t is None:
            return None
        h = min([t.horizon] + [x - 1 for x in self.removed])
        return Tail(t.modulus, h, t.residues)


def union_of(*parts: IntegerSet) -> IntegerSet:
    u = UnionSet(parts)
    if len(u.parts) == 1:
        return u.parts[0]
    return u


def without(inner: IntegerSet, removed: Iterable[int]) -> IntegerSet:
    removed = frozenset(removed)
    if not removed:
        return inner
    if isinstance(inner, FiniteSet):
        return FiniteSet(x for x in inner.elements if x not in removed)
    return DifferenceSet(inner, removed)


def naturals() -> EPSet:
    return EPSet(1, (0,))


def lower_ray(hi: int) -> IntegerSet:
    """All integers <= hi."""
    return ReflectedSet(EPSet(1, (-hi,)))


def dilate(s: IntegerSet, factor: int) -> IntegerSet:
    """{factor * x : x in s} for positive factor, preserving structure."""
    if factor <= 0:
        raise ValueError("dilation factor must be positive")
    if factor == 1:
        return s
    if isinstance(s, FiniteSet):
        return FiniteSet(factor * x for x in s.elements)
    if isinstance(s, EPSet):
        return EPSet(
            s.m * factor,
            (factor * a for a in s.A),
            (factor * b for b in s.B),
            (factor * f for f in s.F),
        )
    if isinstance(s, PeriodicSet):
        return PeriodicSet(s.m * factor, (factor * r for r in s.residues))
    if isinstance(s, TranslatedSet):
        return TranslatedSet(dilate(s.inner, factor), factor * s.t)
    if isinstance(s, ReflectedSet):
        return ReflectedSet(dilate(s.inner, factor))
    if isinstance(s, UnionSet):
        return UnionSet(dilate(p, factor) for p in s.parts)
    if isinstance(s, DifferenceSet):
        return DifferenceSet(dilate(s.inner, factor), (factor * x for x in s.removed))
    if isinstance(s, LazySet):
        return LazySet(
            lambda i: factor * s.at(i),
            name=f"{s.name}*{factor}",
            gap_promise=s.gap_promise,
        )
    raise TypeError(f"cannot dilate {type(s).__name__}")


# spec-level operation wrappers ------------------------------------------------

def member(s: IntegerSet, z: int) -> bool:
    return s.member(z)


def enumerate_window(s: IntegerSet, w: Window) -> list[int]:
    return s.window(w)


def translate(s: IntegerSet, t: int) -> IntegerSet:
    return s.translate(t)


def reflect(s: IntegerSet, window: Window | None = None) -> IntegerSet:
    return s.reflect(window)


@dataclass(frozen=True)
class DensityReport:
    """Exact Banach density data for an eventually periodic set."""

    upper_banach: Fraction
    lower_banach: Fraction
    eventual_density: Fraction
    note: str = ""

    def __post_init__(self) -> None:
        if not (0 <= self.lower_banach <= self.upper_banach <= 1):
            raise ValueError("density bounds out of order")


def density(s: EPSet, two_sided: bool = False) -> DensityReport:
    """Exact Banach densities of an eventually periodic set.

    With two_sided the (m, A) data is read as the full periodic set
    mZ + A-classes, and upper = lower = |classes| / m.  One-sided sets are
    empty to the far left, so the lower density is 0 while long windows in
    the tail realize |classes| / m; that convention is recorded in the note.
    """
    if not isinstance(s, EPSet):
        raise TypeError("density needs a canonical eventually periodic set")
    ev = Fraction(len(s.tail_classes), s.m)
    if two_sided:
        return DensityReport(ev, ev, ev)
    return DensityReport(
        ev,
        Fraction(0),
        ev,
        note="one-sided convention: lower 0 (far-left windows empty), upper equals tail density",
    )


# stock generators -------------------------------------------------------------

def gen_pow2() -> LazySet:
    return LazySet(lambda i: 1 << i, name="pow2", gap_promise=True, expr="gen:pow2")


def gen_mersenne() -> LazySet:
    return LazySet(
        lambda i: (1 << (i + 1)) - 1,
        name="mersenne",
        gap_promise=True,
        expr="gen:mersenne",
    )


def gen_lacunary(ratio: Fraction | int, start: int = 1) -> LazySet:
    """x_0 = start, x_{i+1} = ceil(ratio * x_i); needs ratio > 1, start >= 1."""
    ratio = Fraction(ratio)
    if ratio <= 1:
        raise ValueError("lacunary ratio must exceed 1")
    if start < 1:
        raise ValueError("lacunary start must be at least 1")
    cache = [start]

    def fn(i: int) -> int:
        while len(cache) <= i:
            x = cache[-1]
            nxt = -((-x * ratio.numerator) // ratio.denominator)
            cache.append(nxt)
        return cache[i]

    expr = f"gen:lacunary(lambda={ratio},start={start})"
    return LazySet(fn, name=f"lacunary({ratio},{start})", gap_promise=True, expr=expr)


def gen_interval_union() -> LazySet:
    """Union of blocks [2^(2k), 2^(2k+1)): {1} | {4..7} | {16..31} | ..."""

    def fn(i: int) -> int:
        k = 0
        remaining = i
        while True:
            size = 1 << (2 * k)
            if remaining < size:
                return size + remaining
            remaining -= size
            k += 1

    return LazySet(
        fn,
        name="interval-union",
        gap_promise=True,
        expr="interval-union:2^2k..2^2k+1",
    )
