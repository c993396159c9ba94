"""Certificates for minimal additive complements, checked on windows.

A set C is a minimal additive complement to W when C + W covers the
target and every c in C has a *dependent* element: some z in C + W whose
only representation goes through c.  All checks here are windowed: the
report certifies coverage on one window and per-element dependence for
every c in an inspection window, and says so explicitly.  Nothing in this
module extrapolates beyond what was enumerated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .intset import BudgetExceededError, FiniteSet, IntegerSet, Window
from .sumset import covers, representations

WINDOW_CAVEAT = (
    "window certificate: coverage and dependence were verified on the stated "
    "windows only; for infinite sets this does not prove the unrestricted property"
)


@dataclass(frozen=True)
class DependenceWitness:
    """z is covered only through c: z = c + w and no other pair reaches z."""

    c: int
    z: int

    @property
    def unique_rep(self) -> tuple[int, int]:
        return (self.c, self.z - self.c)

    def to_json(self) -> dict:
        return {"c": self.c, "z": self.z, "unique_rep": list(self.unique_rep)}


@dataclass(frozen=True)
class MacReport:
    covered: bool
    witnesses: tuple[DependenceWitness, ...]
    verdict: str  # CertifiedOnWindow | CoverageFails | MinimalityFails
    detail: int | None
    coverage_window: Window
    inspect_window: Window
    caveat: str = WINDOW_CAVEAT

    @property
    def certified(self) -> bool:
        return self.verdict == "CertifiedOnWindow"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "detail": self.detail,
            "covered": self.covered,
            "witnesses": [w.to_json() for w in self.witnesses],
            "coverage_window": [self.coverage_window.lo, self.coverage_window.hi],
            "inspect_window": [self.inspect_window.lo, self.inspect_window.hi],
            "caveat": self.caveat,
        }


def dependents(c: int, C: IntegerSet, W: IntegerSet, zone: Window) -> list[int]:
    """All z in zone depending on c: z - c in W and no other pair gives z."""
    if not C.member(c):
        raise ValueError(f"{c} is not an element of C")
    out = []
    for z in zone:
        if W.member(z - c) and representations(z, C, W, exclude=c, cap=1) == 0:
            out.append(z)
    return out


def _witness_for(
    c: int, C: IntegerSet, W: IntegerSet, slack0: int, slack_cap: int
) -> DependenceWitness | None:
    """First dependent element of c, searching candidate w's in widening bands.

    A dependent z must have z - c in W, so candidates come from W directly.
    No bound on where it lies is available in general, hence the widening.
    """
    if isinstance(W, FiniteSet):
        for w in W.elements:
            if representations(c + w, C, W, exclude=c, cap=1) == 0:
                return DependenceWitness(c, c + w)
        return None
    wmin = W.min_element()
    wmax = W.max_element()
    slack = slack0
    prev: Window | None = None
    while slack <= slack_cap:
        if wmin is not None:
            band = Window(wmin, wmin + slack)
        elif wmax is not None:
            band = Window(wmax - slack, wmax)
        else:
            band = Window(-slack, slack)
        for w in W.window(band):
            if prev is not None and w in prev:
                continue
            if representations(c + w, C, W, exclude=c, cap=1) == 0:
                return DependenceWitness(c, c + w)
        prev = band
        slack *= 2
    return None


def verify_mac(
    C: IntegerSet,
    W: IntegerSet,
    coverage: Window,
    inspect: Window | None = None,
    slack0: int = 8,
    slack_cap: int = 4096,
) -> MacReport:
    """Windowed minimal-additive-complement certificate for (C, W).

    CertifiedOnWindow means C + W covers every point of the coverage
    window and every c in C restricted to the inspection window has a
    dependence witness, each fact decided exactly.  The caveat field
    states the restriction; callers must not read more into it.
    """
    if inspect is None:
        inspect = coverage
    for z in coverage:
        if not covers(z, C, W):
            return MacReport(False, (), "CoverageFails", z, coverage, inspect)
    witnesses = []
    for c in C.window(inspect):
        wit = _witness_for(c, C, W, slack0, slack_cap)
        if wit is None:
            return MacReport(True, tuple(witnesses), "MinimalityFails", c, coverage, inspect)
        witnesses.append(wit)
    return MacReport(True, tuple(witnesses), "CertifiedOnWindow", None, coverage, inspect)


def prune_to_minimal(A, B, window: Window | None = None):
    """Greedy-minimal subset A' of A with A' + B = A + B.

    Cyclic operands: A + B must be the full group.  Finite-integer
    operands: A + B must cover the supplied window, and minimality is
    relative to that window.  Elements are considered ascending and
    removed when redundant, so the result is deterministic; each
    survivor's removal strictly shrinks the sumset.
    """
    from .cyclic import CyclicSet

    if isinstance(A, CyclicSet) or isinstance(B, CyclicSet):
        from .sumset import minkowski_cyclic

        if not (isinstance(A, CyclicSet) and isinstance(B, CyclicSet)):
            raise TypeError("cyclic pruning needs both operands cyclic")
        full = (1 << A.m) - 1
        if minkowski_cyclic(A, B).bits != full:
            raise ValueError("A + B must equal the full group before pruning")
        kept = A
        for r in range(A.m):
            if not kept.member(r):
                continue
            trial = CyclicSet(A.m, kept.bits & ~(1 << r))
            if minkowski_cyclic(trial, B).bits == full:
                kept = trial
        return kept

    if not isinstance(A, FiniteSet):
        raise TypeError("integer pruning needs a finite A")
    if window is None:
        raise ValueError("integer pruning needs the window the sumset must keep covering")
    for z in window:
        if not covers(z, A, B):
            raise ValueError(f"A + B does not cover {z}; nothing to prune against")
    kept = list(A.elements)
    for a in list(kept):
        trial = FiniteSet(x for x in kept if x != a)
        if all(covers(z, trial, B) for z in window):
            kept = list(trial.elements)
    return FiniteSet(kept)


@dataclass(frozen=True)
class RefutedCandidate:
    w: tuple[int, ...]
    c: int
    note: str

    def to_json(self) -> dict:
        return {"w": list(self.w), "c": self.c, "note": self.note}


@dataclass(frozen=True)
class RefutationEvidence:
    """Outcome of a bounded sweep over finite complement candidates.

    Every candidate W that covered the target window was attacked by
    searching for an element of C with no dependent element (an exact
    check: dependents of c live in c + W).  Candidates where no such
    element was found are listed as survivors; an empty survivor list is
    evidence, not proof.
    """

    w_size_max: int
    radius: int
    target: Window
    candidates_covering: int
    refuted: tuple[RefutedCandidate, ...]
    survivors: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "w_size_max": self.w_size_max,
            "radius": self.radius,
            "target": [self.target.lo, self.target.hi],
            "candidates_covering": self.candidates_covering,
            "refuted": [r.to_json() for r in self.refuted],
            "survivors": [list(s) for s in self.survivors],
        }


def _refute_one(
    C: IntegerSet, wvals: tuple[int, ...], compl: list[int]
) -> RefutedCandidate | None:
    W = FiniteSet(wvals)

    def beats(c: int) -> bool:
        return all(
            representations(c + w, C, W, exclude=c, cap=1) >= 1 for w in wvals
        )

    if len(wvals) >= 2:
        # long-run obstruction: between consecutive complement elements
        # c, c2 with c2 - c > g(W) + 2 + span(W), the element
        # z = c + g(W) + 1 of C is covered only through its neighbors.
        g_w = max(b - a for a, b in zip(wvals, wvals[1:]))
        threshold = g_w + 2 + (wvals[-1] - wvals[0])
        for a, b in zip(compl, compl[1:]):
            if b - a > threshold:
                z = a + g_w + 1
                if C.member(z) and beats(z):
                    note = (
                        f"complement run ({a},{b}) exceeds g(W)+2+span(W) = {threshold}; "
                        f"z = {a}+g(W)+1 = {z} is covered only through other elements"
                    )
                    return RefutedCandidate(wvals, z, note)
    for c in C.window(Window(compl[0] if compl else -10, compl[-1] if compl else 10)):
        if beats(c):
            return RefutedCandidate(wvals, c, "no dependent element exists for this c")
    return None


def refute_mac_bounded(
    C: IntegerSet,
    w_size_max: int,
    radius: int,
    max_candidates: int = 2_000_000,
) -> RefutationEvidence:
    """Sweep all W in [-radius, radius] with |W| <= w_size_max.

    Candidates whose sumset with C covers [-radius/2, radius/2] are each
    attacked exactly; the rest are ignored (they are not complements at
    this scale).  Overflowing max_candidates raises instead of silently
    truncating the sweep.
    """
    if C.min_element() is None and C.down_tail() is None:
        raise ValueError("C must be bounded below or have a known down tail")
    total = sum(comb(2 * radius + 1, k) for k in range(1, w_size_max + 1))
    if total > max_candidates:
        raise BudgetExceededError(
            f"{total} candidates exceed the limit {max_candidates}; "
            "shrink radius or w_size_max"
        )
    r2 = radius // 2
    target = Window(-r2, r2)
    shifted = {}
    for w in range(-radius, radius + 1):
        bits = 0
        for i, z in enumerate(target):
            if C.member(z - w):
                bits |= 1 << i
        shifted[w] = bits
    full = (1 << target.length) - 1

    scan = Window(-2 * radius, 2 * radius)
    compl = [z for z in scan if not C.member(z)]

    refuted: list[RefutedCandidate] = []
    survivors: list[tuple[int, ...]] = []
    covering = 0
    for k in range(1, w_size_max + 1):
        for combo in itertools.combinations(range(-radius, radius + 1), k):
            bits = 0
            for w in combo:
                bits |= shifted[w]
            if bits != full:
                continue
            covering += 1
            hit = _refute_one(C, combo, compl)
            if hit is None:
                survivors.append(combo)
            else:
                refuted.append(hit)
    return RefutationEvidence(
        w_size_max, radius, target, covering, tuple(refuted), tuple(survivors)
    )
