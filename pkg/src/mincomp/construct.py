"""Constructive co-minimal pairs and exact cover surgery.

Two machines live here.  The first turns a bounded-below set with
unbounded gaps into a certified co-minimal pair: build_d fills the
nonpositive integers while keeping the sumset's gaps unbounded, build_w
extends that to full coverage with one uniquely-represented element per
step, and build_cominimal prunes the result and certifies both
directions.  The second is cover surgery on eventually periodic
structure: finite_rest_cover minimizes the finite summand of an exact
cover of a ray, and build_remark_family / build_thm_suff assemble
complement witnesses for specific eventually periodic families.

Nothing here is trusted on faith: every construction re-verifies its
postconditions by exact enumeration before returning.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .intset import (
    BudgetExceededError,
    FiniteSet,
    IntegerSet,
    LazySet,
    PeriodicSet,
    EPSet,
    Window,
    dilate,
    naturals,
    union_of,
    without,
)
from .sumset import covers, representations
from .verify import DependenceWitness, MacReport, prune_to_minimal, verify_mac

DEFAULT_STEP_BUDGET = 10**6


class ConstructionError(RuntimeError):
    """A construction step or postcondition failed."""


@dataclass(frozen=True)
class StepRecord:
    """One step of the iterative constructions; unused fields stay None.

    D-phase steps carry (y, h_values, t, x); W-phase steps carry
    (z, k).  added_sets lists the elements appended at this step.
    """

    i: int
    y: int | None = None
    h_values: tuple[tuple[int, int], ...] = ()
    t: int | None = None
    x: int | None = None
    z: int | None = None
    k: int | None = None
    added_sets: tuple[int, ...] = ()

    def to_json(self) -> dict:
        rec: dict = {"i": self.i}
        if self.y is not None:
            rec["y"] = self.y
        if self.h_values:
            rec["h_values"] = {str(a): v for a, v in self.h_values}
        if self.t is not None:
            rec["t"] = self.t
        if self.x is not None:
            rec["x"] = self.x
        if self.z is not None:
            rec["z"] = self.z
        if self.k is not None:
            rec["k"] = self.k
        rec["added_sets"] = list(self.added_sets)
        return rec


@dataclass(frozen=True)
class ConstructionTrace:
    shift: int
    steps: tuple[StepRecord, ...]

    def to_json_lines(self) -> list[str]:
        lines = [json.dumps({"shift": self.shift})]
        lines.extend(json.dumps(s.to_json()) for s in self.steps)
        return lines


def _require_gap_generator(C: IntegerSet) -> LazySet:
    if not isinstance(C, LazySet) or not C.gap_promise:
        raise ValueError(
            "this construction needs a generated, strictly increasing set "
            "whose gap_promise flag asserts unbounded gaps"
        )
    return C


class _CoverageGaps:
    """Max-gap queries over (C + D) ∩ [0, X) for a fixed finite D.

    Walks the merged shifted copies of C in ascending order, tracking the
    largest difference between consecutive covered values seen so far.
    Rebuilt per construction step (D changes between steps, limits only
    grow within one).
    """

    def __init__(self, C: LazySet, D: list[int], budget: int):
        self.C = C
        self.D = list(D)
        self.budget = budget
        self.steps = 0
        self.heap = []
        for di, d in enumerate(self.D):
            idx = 0
            while C.at(idx, budget=budget) + d < 0:
                idx += 1
            heapq.heappush(self.heap, (C.at(idx, budget=budget) + d, di, idx))
        self.prev: int | None = None
        self.maxgap = 0

    def _advance(self) -> None:
        val, di, idx = heapq.heappop(self.heap)
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceededError("coverage walk exhausted its step budget")
        nxt = self.C.at(idx + 1, budget=self.budget) + self.D[di]
        heapq.heappush(self.heap, (nxt, di, idx + 1))
        if val != self.prev:
            if self.prev is not None:
                self.maxgap = max(self.maxgap, val - self.prev)
            self.prev = val

    def max_gap_below(self, limit: int) -> int:
        """Largest consecutive difference within (C+D) ∩ [0, limit)."""
        while self.heap[0][0] < limit:
            self._advance()
        return self.maxgap


def _build_d_shifted(
    C: LazySet, depth: int, budget: int
) -> tuple[list[int], list[StepRecord]]:
    """Core negative-filling loop; assumes min(C) >= 1."""
    c1 = C.at(0)
    D = [-c1]
    steps: list[StepRecord] = []
    last_h = 0  # h-evaluations are forced strictly increasing, in order

    def member_cd(z: int) -> bool:
        return any(C.member(z - d) for d in D)

    for i in range(1, depth + 1):
        walker = _CoverageGaps(C, D, budget)

        def h_eval(n: int, lo: int) -> int:
            # 1-based answer u: the step c_{u+1} - c_u must reach n, and the
            # covered prefix [0, c_{u+1}) must already contain a gap >= n.
            u = lo + 1
            scanned = 0
            while True:
                if scanned > budget:
                    raise BudgetExceededError(
                        f"no index with gap >= {n} found within the budget; "
                        "the gap promise looks violated at this scale"
                    )
                if C.at(u, budget=budget) - C.at(u - 1, budget=budget) >= n:
                    if walker.max_gap_below(C.at(u, budget=budget)) >= n:
                        return u
                u += 1
                scanned += 1

        # y_i: largest nonpositive integer missing from C + D
        y = -i
        scanned = 0
        while member_cd(y):
            y -= 1
            scanned += 1
            if scanned > budget:
                raise BudgetExceededError("uncovered-element scan exhausted its budget")
        if y > -i:
            raise ConstructionError(f"step {i}: y = {y} violates y <= -{i}")

        h_i = h_eval(i, last_h)
        last_h = h_i
        t = C.at(h_i) - y  # t_i = c_{h(i)+1} - y_i, with 1-based c
        h_t = h_eval(t, last_h)
        last_h = h_t
        x = y - C.at(h_t - 1)  # x_i = y_i - c_{h(t_i)}
        if x in D:
            raise ConstructionError(f"step {i}: duplicate element {x}")
        D.append(x)
        steps.append(
            StepRecord(i=i, y=y, h_values=((i, h_i), (t, h_t)), t=t, x=x, added_sets=(x,))
        )
    return sorted(D), steps


def build_d(
    C: IntegerSet, depth: int, budget: int = DEFAULT_STEP_BUDGET
) -> tuple[FiniteSet, ConstructionTrace]:
    """Negative-side filler: D with (C + D) covering [-depth, 0].

    Follows the iterative gap-preserving scheme: each step covers the
    largest missing nonpositive integer by translating C down from an
    element sitting left of a gap wider than t_i, which keeps every
    integer finitely represented and the sumset's gaps unbounded.

    h-evaluations are resolved in evaluation order: every evaluation must
    exceed the previous one, which preserves both monotonicity across
    steps and the gap condition at the composite arguments t_i even when
    a t collides with a later step index.
    """
    lazy = _require_gap_generator(C)
    if lazy.at(0) < 0:
        raise ValueError("the construction operates on subsets of the naturals")
    shift = 1 if lazy.at(0) == 0 else 0
    work = (
        LazySet(lambda j: lazy.at(j) + 1, name=f"{lazy.name}+1", gap_promise=True)
        if shift
        else lazy
    )
    d_shifted, steps = _build_d_shifted(work, depth, budget)
    D = FiniteSet(d + shift for d in d_shifted)
    trace = ConstructionTrace(shift=shift, steps=tuple(steps))
    for z in Window(-depth, 0):
        if not covers(z, C, D):
            raise ConstructionError(f"postcondition failed: {z} not covered by C + D")
    return D, trace


def build_w(
    C: IntegerSet,
    depth: int,
    d_depth: int | None = None,
    budget: int = DEFAULT_STEP_BUDGET,
) -> tuple[FiniteSet, ConstructionTrace, tuple[DependenceWitness, ...]]:
    """Full-coverage extension with one uniquely represented z per step.

    Starting from W_0 = build_d's output, step i covers the least missing
    natural z_i through c_i alone and then blankets [1, k_i] + z_i - c_1,
    so coverage reaches c_{i+1} - c_1 + k_i + z_i while z_i stays a
    dependence witness for c_i forever after.
    """
    lazy = _require_gap_generator(C)
    if d_depth is None:
        d_depth = depth
    D, trace_d = build_d(C, d_depth, budget)
    W = list(D.elements)
    steps = list(trace_d.steps)
    witnesses: list[DependenceWitness] = []
    c1 = lazy.at(0)
    z_prev: int | None = None
    k = 0
    bound = 0
    for i in range(1, depth + 1):
        c_i = lazy.at(i - 1)
        c_next = lazy.at(i)
        k = max(k, c_next - c_i)
        wset = FiniteSet(W)
        z = 0 if z_prev is None else z_prev + 1
        scanned = 0
        while covers(z, C, wset):
            z += 1
            scanned += 1
            if scanned > budget:
                raise BudgetExceededError("z-scan exhausted its budget")
        if z_prev is not None and not z > c_i + z_prev:
            raise ConstructionError(
                f"step {i}: z = {z} fails the growth bound z > c_i + z_prev"
            )
        added = [z - c_i] + [j + z - c1 for j in range(1, k + 1)]
        W = sorted(set(W) | set(added))
        n_rep = representations(z, C, FiniteSet(W))
        if n_rep != 1:
            raise ConstructionError(f"step {i}: z = {z} has {n_rep} representations")
        witnesses.append(DependenceWitness(c_i, z))
        steps.append(StepRecord(i=i, z=z, k=k, added_sets=tuple(sorted(set(added)))))
        bound = c_next - c1 + k + z
        z_prev = z
    Wfin = FiniteSet(W)
    for zz in Window(-d_depth, bound - 1):
        if not covers(zz, C, Wfin):
            raise ConstructionError(f"postcondition failed: {zz} not covered by C + W")
    for wit in witnesses:
        if representations(wit.z, C, Wfin) != 1:
            raise ConstructionError(f"witness {wit.z} lost uniqueness in the final W")
    return Wfin, ConstructionTrace(trace_d.shift, tuple(steps)), witnesses


@dataclass(frozen=True)
class CoMinimalPair:
    C: IntegerSet
    W: FiniteSet
    trace: ConstructionTrace
    certified_window: Window
    report_cw: MacReport
    report_wc: MacReport


def build_cominimal(
    C: IntegerSet,
    window: Window,
    budget: int = DEFAULT_STEP_BUDGET,
    min_depth: int = 0,
) -> CoMinimalPair:
    """Certified co-minimal pair restricted to a window.

    Runs the coverage construction deep enough for the window (at least
    min_depth steps when asked for more), prunes the complement side to
    a minimal subset over the full certified range (which keeps every
    step witness alive), and verifies both directions.
    """
    lazy = _require_gap_generator(C)
    d_depth = max(2, -window.lo + 2, min_depth)
    depth = max(2, min_depth, lazy.index_of_last_leq(window.hi) + 1)
    while True:
        W, trace, witnesses = build_w(C, depth, d_depth, budget)
        last = trace.steps[-1]
        c1 = lazy.at(0)
        bound = lazy.at(depth) - c1 + last.k + last.z
        if bound > window.hi + 1:
            break
        depth += 2
    certified = Window(-d_depth, bound - 1)
    W_min = prune_to_minimal(W, C, certified)
    report_cw = verify_mac(C, W_min, coverage=window, inspect=window)
    report_wc = verify_mac(W_min, C, coverage=window, inspect=window)
    if not (report_cw.certified and report_wc.certified):
        raise ConstructionError(
            f"co-minimal verification failed: {report_cw.verdict} / {report_wc.verdict}"
        )
    return CoMinimalPair(C, W_min, trace, certified, report_cw, report_wc)


def _anchored_minimize(
    F: FiniteSet, W: IntegerSet, base: int, check: Window
) -> tuple[IntegerSet, tuple[DependenceWitness, ...]]:
    """Strip W down so each f in F becomes necessary, preserving F + W.

    Removes -F_i + s_i for anchors s_i = base + 2i*max(F); afterwards
    s_i - f_j survives iff i = j, making s_i reachable only through f_i.
    With base = 0 this is the textbook ray construction; a positive base
    pushes the anchors past any irregular prefix of W.
    """
    fs = F.elements
    k = len(fs)
    fmax = fs[-1]
    removed: set[int] = set()
    anchors = []
    for i in range(1, k + 1):
        s_i = base + 2 * i * fmax
        anchors.append(s_i)
        removed.update(s_i - f for j, f in enumerate(fs, start=1) if j != i)
    W2 = without(W, removed)
    for z in check:
        if covers(z, F, W2) != covers(z, F, W):
            raise ConstructionError(f"cover changed at {z} while minimizing")
    witnesses = []
    for i, s_i in enumerate(anchors, start=1):
        f_i = fs[i - 1]
        others = FiniteSet(f for j, f in enumerate(fs, start=1) if j != i)
        if not covers(s_i, F, W2):
            raise ConstructionError(f"anchor {s_i} lost coverage")
        if not others.known_empty() and representations(s_i, others, W2) != 0:
            raise ConstructionError(f"anchor {s_i} is reachable without {f_i}")
        witnesses.append(DependenceWitness(f_i, s_i))
    return W2, tuple(witnesses)


def finite_rest_cover(F: Iterable[int] | FiniteSet, W: IntegerSet) -> IntegerSet:
    """Minimal-F exact cover: W' with F + W' = F + W, every f necessary.

    Requires F + W to contain all naturals after translating min(F) to 0.
    W' = (W ∪ ℕ) minus one punched translate of F per element; the
    punches sit at 2i*max(F) so they cannot interact, and each leaves
    exactly one way to reach its anchor.
    """
    F = F if isinstance(F, FiniteSet) else FiniteSet(F)
    if F.known_empty():
        raise ValueError("F must be nonempty")
    tau = F.elements[0]
    F0 = F.translate(-tau)
    W0 = W.translate(tau)
    fmax = F0.elements[-1]
    k = len(F0.elements)
    pre_hi = 4 * k * fmax + 2 * fmax + 8
    for z in Window(0, pre_hi):
        if not covers(z, F0, W0):
            raise ValueError(f"F + W misses {z + tau}; the ray precondition fails")
    merged = union_of(W0, naturals())
    check = Window(-fmax - 2, pre_hi)
    W2, _ = _anchored_minimize(F0, merged, 0, check)
    return W2.translate(-tau)


@dataclass(frozen=True)
class RemarkFamily:
    C: EPSet
    Y: IntegerSet
    report: MacReport
    witnesses: tuple[DependenceWitness, ...]


def build_remark_family(
    F: Iterable[int], window: Window = Window(-15, 15)
) -> RemarkFamily:
    """Complement witness for C = 3ℕ ∪ F with F inside 3ℕ + 1.

    Y = {0} ∪ (3ℤ+1) ∪ W' where F + W' equals the *strictly* negative
    multiples of 3.  Leaving 0 out of F + W' matters: 0 must be covered
    only as 0 + 0, else the element 0 of C has no dependent element and
    minimality dies.  W' comes from the ray cover machine run in scaled
    mirrored coordinates: w' = -3ŵ - max(F) - 3.
    """
    fs = sorted(set(F))
    if not fs or any(f < 0 or f % 3 != 1 for f in fs):
        raise ValueError("F must be a nonempty finite subset of 3N + 1")
    fn = fs[-1]
    C = EPSet(3, (0,), (), fs)
    fhat = FiniteSet((fn - f) // 3 for f in fs)
    what = finite_rest_cover(fhat, naturals())
    Wp = dilate(what, 3).reflect().translate(-fn - 3)
    Y = union_of(FiniteSet([0]), PeriodicSet(3, [1]), Wp)
    report = verify_mac(C, Y, coverage=window, inspect=window)
    if not report.certified:
        raise ConstructionError(f"remark-family verification failed: {report.verdict}")
    return RemarkFamily(C, Y, report, report.witnesses)


@dataclass(frozen=True)
class ThmSuffResult:
    S: EPSet
    W: IntegerSet
    y_reps: tuple[int, ...]
    report: MacReport
    partition: object | None = None


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def build_thm_suff(
    S: EPSet,
    y_map: Mapping[int, int],
    window: Window = Window(-30, 30),
    partition: object | None = None,
) -> ThmSuffResult:
    """Complement witness for the prime-period sufficiency regime.

    Hypotheses: period m prime with m ≡ 2 (mod 3), |A_(m)| = (m+1)/3,
    F in a single residue class.  y_map assigns each progression class a
    residue y_a; the witness is assembled per class a as

        W  =  ∪_a {ŷ_a}  ∪  ∪_a (ŷ_a + W_a')

    with ŷ_a the representative of y_a in [0, m) and W_a' an exact cover
    of the class-a complement by F, minimized so each f stays necessary.
    The translation by ŷ_a is what places each cover in the class a + y_a
    it must fill; the label conditions keep the pieces from colliding.
    """
    m = S.m
    a_classes = sorted(S.tail_classes)
    if not _is_prime(m) or m % 3 != 2:
        raise ValueError(f"period {m} is not a prime equal to 2 mod 3")
    if m > 2 and len(a_classes) != (m + 1) // 3:
        raise ValueError(
            f"need exactly (m+1)/3 = {(m + 1) // 3} progression classes, got {len(a_classes)}"
        )
    if m == 2 and len(a_classes) != 1:
        raise ValueError("need exactly one progression class at period 2")
    if not S.F:
        raise ValueError("F must be nonempty")
    f_classes = {f % m for f in S.F}
    if len(f_classes) != 1:
        raise ValueError("F must lie in a single residue class")
    if set(y_map) != set(a_classes):
        raise ValueError("y_map must assign exactly the progression classes")
    sums = {(a + y_map[a]) % m for a in a_classes}
    if len(sums) != len(a_classes):
        raise ValueError("the sums a + y_a must be pairwise distinct")

    f_ints = sorted(S.F)
    f_max = f_ints[-1]
    fhat = FiniteSet((f_max - f) // m for f in f_ints)
    fk = fhat.elements[-1]

    y_reps = sorted({y_map[a] % m for a in a_classes})
    parts: list[IntegerSet] = [FiniteSet(y_reps)]
    realized = set(sums)
    for a in a_classes:
        s_a = S._starts[a]
        holes = sorted((s_a - m - b) // m for b in S.B if b % m == a)
        bad = sorted({h - f for h in holes for f in fhat.elements if h - f >= 0})
        w_max = without(naturals(), bad)
        target_hi = (max(holes) if holes else 0) + fk + 2
        for t in range(0, target_hi + 1):
            want = t not in holes
            if covers(t, fhat, w_max) != want:
                raise ConstructionError(
                    f"class {a}: the complement is not an exact F-cover (offset {t})"
                )
        base = 0
        if holes or bad:
            base = max(holes + bad) + 2 * fk + 2
        check = Window(0, base + (2 * len(fhat.elements) + 2) * max(fk, 1) + 4)
        w_min, _ = _anchored_minimize(fhat, w_max, base, check)
        w_int = dilate(w_min, m).reflect().translate(s_a - m - f_max)
        parts.append(w_int.translate(y_map[a] % m))
        realized.add((a + y_map[a] - f_max) % m)

    # class-level coverage must already be decided by the labels
    covered_classes = set(sums)
    w_classes = {(a + y_map[a] - f_max) % m for a in a_classes}
    for x in range(m):
        if x in covered_classes:
            continue
        if not any((x - a) % m in w_classes for a in a_classes):
            raise ConstructionError(f"residue class {x} is not covered by any piece")

    W = union_of(*parts)
    report = verify_mac(S, W, coverage=window, inspect=window)
    if not report.certified:
        raise ConstructionError(f"sufficiency verification failed: {report.verdict}")
    return ThmSuffResult(S, W, tuple(y_reps), report, partition)
