"""Minkowski-sum kernels on windows, representation counting, and the gap function.

The core engine is `representations`: an exact count of pairs (c, w) with
c + w = z, decided case-by-case from the structural metadata of the two
sets (finite support, bounded below, periodic tails).  Exactness is the
point: every verification downstream reduces to "this z has exactly k
representations", so when the structure cannot support an exact answer we
raise ExactnessError instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf, lcm

from .intset import FiniteSet, IntegerSet, Window

INFINITE = inf


class ExactnessError(RuntimeError):
    """The sets' structure cannot certify an exact representation count."""


@dataclass(frozen=True)
class WindowedSum:
    """(C + W) restricted to a window.

    complete means elements is exactly (C+W) ∩ window; otherwise elements
    is a verified subset obtained from the supports described in examined.
    """

    window: Window
    elements: tuple[int, ...]
    complete: bool
    examined: str = "exhaustive"


@dataclass(frozen=True)
class RepCount:
    z: int
    count: float  # nonnegative int, or INFINITE
    exact: bool

    def to_json(self) -> dict:
        c = "infinite" if self.count == INFINITE else int(self.count)
        return {"z": self.z, "count": c, "exact": self.exact}


def representations(
    z: int,
    C: IntegerSet,
    W: IntegerSet,
    exclude: int | None = None,
    cap: float = INFINITE,
) -> float:
    """Exact |{(c, w) : c + w = z, c in C \\ {exclude}, w in W}|.

    Returns INFINITE when the count is provably infinite.  With a finite
    cap, counting stops at cap (a return of cap means "at least cap");
    values below cap are exact.  Raises ExactnessError when the sets'
    structure cannot certify the answer.
    """
    if C.known_empty() or W.known_empty():
        return 0

    if isinstance(W, FiniteSet):
        n = 0
        for w in W.elements:
            c = z - w
            if c != exclude and C.member(c):
                n += 1
                if n >= cap:
                    return n
        return n

    if isinstance(C, FiniteSet):
        n = 0
        for c in C.elements:
            if c != exclude and W.member(z - c):
                n += 1
                if n >= cap:
                    return n
        return n

    cmin = C.min_element()
    wmin = W.min_element()

    if cmin is not None and wmin is not None:
        n = 0
        hi = z - wmin
        if hi < cmin:
            return 0
        for c in C.window(Window(cmin, hi)):
            if c != exclude and W.member(z - c):
                n += 1
                if n >= cap:
                    return n
        return n

    if cmin is not None:
        # W unbounded below: beyond a horizon both memberships are
        # residue-determined, so the far region contributes 0 or infinity.
        ct, wt = C.up_tail(), W.down_tail()
        if ct is None or wt is None:
            raise ExactnessError(
                "need an up tail on C and a down tail on W to count with W unbounded below"
            )
        M = lcm(ct.modulus, wt.modulus)
        cres, wres = ct.lift(M), wt.lift(M)
        if any((z - r) % M in wres for r in cres):
            return INFINITE
        n = 0
        hi = max(ct.horizon, z - wt.horizon) - 1
        if hi >= cmin:
            for c in C.window(Window(cmin, hi)):
                if c != exclude and W.member(z - c):
                    n += 1
                    if n >= cap:
                        return n
        return n

    if wmin is not None:
        cd, wu = C.down_tail(), W.up_tail()
        if cd is None or wu is None:
            raise ExactnessError(
                "need a down tail on C and an up tail on W to count with C unbounded below"
            )
        M = lcm(cd.modulus, wu.modulus)
        cres, wres = cd.lift(M), wu.lift(M)
        if any((z - r) % M in cres for r in wres):
            # infinitely many w, each with a distinct c = z - w
            return INFINITE
        n = 0
        hi = max(wu.horizon, z - cd.horizon) - 1
        if hi >= wmin:
            for w in W.window(Window(wmin, hi)):
                c = z - w
                if c != exclude and C.member(c):
                    n += 1
                    if n >= cap:
                        return n
        return n

    ct, cd = C.up_tail(), C.down_tail()
    wt, wd = W.up_tail(), W.down_tail()
    if None not in (ct, cd, wt, wd) and ct.residues and wt.residues:
        # both sets unbounded both ways: any residue match gives infinity
        M = lcm(ct.modulus, wd.modulus)
        if any((z - r) % M in wd.lift(M) for r in ct.lift(M)):
            return INFINITE
        M = lcm(cd.modulus, wt.modulus)
        if any((z - r) % M in wt.lift(M) for r in cd.lift(M)):
            return INFINITE
        # middle region only; both horizons bound it
        n = 0
        for c in C.window(Window(min(cd.horizon, z - wt.horizon), max(ct.horizon, z - wd.horizon))):
            if c != exclude and W.member(z - c):
                n += 1
                if n >= cap:
                    return n
        return n

    raise ExactnessError("unsupported set structure for exact representation count")


def covers(z: int, C: IntegerSet, W: IntegerSet) -> bool:
    """True iff z in C + W, decided exactly."""
    return representations(z, C, W, cap=1) >= 1


def minkowski_window(C: IntegerSet, W: IntegerSet, w: Window) -> WindowedSum:
    """(C + W) ∩ window, complete whenever per-element exactness holds."""
    if C.known_empty() or W.known_empty():
        return WindowedSum(w, (), True, "empty operand")
    try:
        els = tuple(z for z in w if covers(z, C, W))
        return WindowedSum(w, els, True)
    except ExactnessError:
        pass
    pad = max(64, w.length)
    support = Window(w.lo - pad, w.hi + pad)
    cs = C.window(support)
    ws = W.window(support)
    out = set()
    for c in cs:
        for x in ws:
            s = c + x
            if w.lo <= s <= w.hi:
                out.add(s)
    note = f"sampled supports C∩[{support.lo},{support.hi}] ({len(cs)} elts), W∩same ({len(ws)} elts)"
    return WindowedSum(w, tuple(sorted(out)), False, note)


def minkowski_cyclic(A, B):
    """Exact sumset in Z/mZ; operands must share a modulus."""
    from .cyclic import CyclicSet

    if not isinstance(A, CyclicSet) or not isinstance(B, CyclicSet):
        raise TypeError("minkowski_cyclic operates on cyclic sets")
    if A.m != B.m:
        raise ValueError(f"modulus mismatch: {A.m} vs {B.m}")
    m = A.m
    if A.bits == 0 or B.bits == 0:
        return CyclicSet(m, 0)
    mask = (1 << m) - 1
    out = 0
    a = A.bits
    for r in range(m):
        if (B.bits >> r) & 1:
            out |= ((a << r) | (a >> (m - r))) & mask
    return CyclicSet(m, out)


def gap(S: IntegerSet, w: Window) -> int:
    """Max difference between consecutive elements of S ∩ window."""
    els = S.window(w)
    if len(els) < 2:
        raise ValueError(f"gap needs at least 2 elements in [{w.lo},{w.hi}], found {len(els)}")
    return max(b - a for a, b in zip(els, els[1:]))


def rep_count(z: int, C: IntegerSet, W: IntegerSet, support: Window) -> RepCount:
    """Representation count of z, exact when structure allows.

    Falls back to counting only pairs with both coordinates inside
    support (exact = false) when no exact answer is certifiable.
    """
    try:
        return RepCount(z, representations(z, C, W), True)
    except ExactnessError:
        n = 0
        for c in C.window(support):
            x = z - c
            if support.lo <= x <= support.hi and W.member(x):
                n += 1
        return RepCount(z, n, False)
