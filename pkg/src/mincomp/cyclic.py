"""Exhaustive solving in Z/mZ, plus unitary Cayley graph domination.

Residue sets are m-bit masks, so sumsets are rotate-and-OR and coverage
checks are integer compares.  Sweeps enumerate candidate masks in a
fixed deterministic order (increasing popcount, then mask value) and can
be partitioned into contiguous mask ranges for concurrent processing;
results merge by mask order, and the only shared state a concurrent run
would need is a monotone found flag.  The implementation here walks the
ranges in that same order sequentially, which yields the identical
answer.

Everything is capped by a configurable modulus bound: these are desk
scale tools, not cluster jobs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations
from math import gcd

from .intset import FiniteSet, PeriodicSet, Window
from .verify import MacReport, verify_mac

DEFAULT_MODULUS_CAP = 24
DEFAULT_CAYLEY_CAP = 30
ENV_MAX_MODULUS = "MINCOMP_MAX_MODULUS"


def _modulus_cap(default: int = DEFAULT_MODULUS_CAP) -> int:
    raw = os.environ.get(ENV_MAX_MODULUS)
    if raw is None:
        return default
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_MAX_MODULUS} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{ENV_MAX_MODULUS} must be positive, got {cap}")
    return cap


def _check_cap(m: int, default: int = DEFAULT_MODULUS_CAP) -> None:
    cap = _modulus_cap(default)
    if m > cap:
        raise ValueError(
            f"modulus {m} exceeds the configured cap {cap}; "
            f"set {ENV_MAX_MODULUS} to allow larger sweeps"
        )


@dataclass(frozen=True)
class CyclicSet:
    """A subset of Z/mZ as an m-bit mask; bit i set iff residue i present."""

    m: int
    bits: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("modulus must be positive")
        if not 0 <= self.bits < (1 << self.m):
            raise ValueError(f"mask {self.bits:#x} does not fit in {self.m} bits")

    @classmethod
    def of(cls, m: int, elements) -> "CyclicSet":
        bits = 0
        for e in elements:
            bits |= 1 << (e % m)
        return cls(m, bits)

    @classmethod
    def full(cls, m: int) -> "CyclicSet":
        return cls(m, (1 << m) - 1)

    def member(self, r: int) -> bool:
        return bool(self.bits >> (r % self.m) & 1)

    def residues(self) -> tuple[int, ...]:
        return tuple(r for r in range(self.m) if self.bits >> r & 1)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def __repr__(self) -> str:
        return f"CyclicSet(m={self.m}, {{{','.join(map(str, self.residues()))}}})"


def _rot(bits: int, r: int, m: int) -> int:
    """bits shifted by r residues, wrapping mod m."""
    r %= m
    if r == 0:
        return bits
    mask = (1 << m) - 1
    return ((bits << r) | (bits >> (m - r))) & mask


def _mac_check(c_bits: int, w_residues: tuple[int, ...], m: int) -> bool:
    """Is the set with mask c_bits a MAC to w_residues in Z/mZ?"""
    mask = (1 << m) - 1
    cover = 0
    for w in w_residues:
        cover |= _rot(c_bits, w, m)
    if cover != mask:
        return False
    counts = [0] * m
    for w in w_residues:
        shifted = _rot(c_bits, w, m)
        z = 0
        while shifted:
            if shifted & 1:
                counts[z] += 1
            shifted >>= 1
            z += 1
    needed = c_bits
    for z in range(m):
        if counts[z] != 1:
            continue
        for w in w_residues:
            c = (z - w) % m
            if c_bits >> c & 1:
                needed &= ~(1 << c)
                break
    return needed == 0


def is_mac_cyclic(C: CyclicSet, W: CyclicSet) -> bool:
    """C + W = Z/mZ and every residue of C has a uniquely sourced sum."""
    if C.m != W.m:
        raise ValueError("mismatched moduli")
    if C.bits == 0 or W.bits == 0:
        return False
    return _mac_check(C.bits, W.residues(), C.m)


@dataclass(frozen=True)
class CyclicMacAnswer:
    arises: bool
    witness_W: CyclicSet | None
    exhausted: bool
    checked: int

    def to_json(self) -> dict:
        return {
            "m": self.witness_W.m if self.witness_W else None,
            "arises": self.arises,
            "witness": list(self.witness_W.residues()) if self.witness_W else None,
            "exhausted": self.exhausted,
            "checked": self.checked,
        }


def solve_arises(C: CyclicSet) -> CyclicMacAnswer:
    """Does C arise as a MAC in Z/mZ?  Exhaustive over witness sets.

    Complements are translation-stable, so only candidates containing 0
    are tried, ordered by size then mask value; the first hit is the
    reported witness and the sweep stops there (exhausted stays False).
    """
    m = C.m
    _check_cap(m)
    if C.bits == 0:
        raise ValueError("C must be nonempty")
    checked = 0
    for k in range(1, m + 1):
        for rest in combinations(range(1, m), k - 1):
            checked += 1
            w = (0,) + rest
            if _mac_check(C.bits, w, m):
                return CyclicMacAnswer(True, CyclicSet.of(m, w), False, checked)
    return CyclicMacAnswer(False, None, True, checked)


def _cover_table(W: CyclicSet) -> "array":
    """cover[c_mask] = mask of W + (set with mask c_mask), for all c_mask."""
    from array import array

    m = W.m
    rotw = [_rot(W.bits, c, m) for c in range(m)]
    table = array("q", [0]) * (1 << m)
    for s in range(1, 1 << m):
        low = s & -s
        table[s] = table[s ^ low] | rotw[low.bit_length() - 1]
    return table


def enumerate_minimal_complements(W: CyclicSet) -> list[CyclicSet]:
    """All minimal C with C + W = Z/mZ, sorted by (size, mask value)."""
    m = W.m
    _check_cap(m)
    if W.bits == 0:
        raise ValueError("W must be nonempty")
    mask = (1 << m) - 1
    table = _cover_table(W)
    found: list[tuple[int, int]] = []
    for s in range(1, 1 << m):
        if table[s] != mask:
            continue
        minimal = True
        t = s
        while t:
            low = t & -t
            if table[s ^ low] == mask:
                minimal = False
                break
            t ^= low
        if minimal:
            found.append((s.bit_count(), s))
    found.sort()
    return [CyclicSet(m, s) for _, s in found]


@dataclass(frozen=True)
class LiftedPair:
    modulus: int
    W: FiniteSet
    report: MacReport


def quotient_lift(C: PeriodicSet, answer: CyclicMacAnswer) -> LiftedPair:
    """Lift a cyclic MAC witness to the integers, one element per residue.

    For a two-sided mZ-invariant C the residue-level answer transfers
    exactly: picking the representative in [0, m) of each witness residue
    preserves |W|, and the lifted pair is certified by window
    verification (length well above 3m) rather than trusted.
    """
    if not isinstance(C, PeriodicSet):
        raise ValueError("C not periodic: quotient lifting needs a two-sided mZ-invariant set")
    if not answer.arises or answer.witness_W is None:
        raise ValueError("the cyclic answer carries no witness to lift")
    m = answer.witness_W.m
    if m != C.m:
        raise ValueError(f"witness modulus {m} does not match the set's period {C.m}")
    W = FiniteSet(answer.witness_W.residues())
    window = Window(-4 * m, 4 * m)
    report = verify_mac(C, W, coverage=window, inspect=window)
    if not report.certified:
        raise RuntimeError(
            f"quotient lift failed verification ({report.verdict}); "
            "this contradicts the residue-level answer"
        )
    return LiftedPair(m, W, report)


@dataclass(frozen=True)
class KBoundRow:
    k: int
    bound: int
    max_attained: int
    attained_C: CyclicSet | None
    attained_W: CyclicSet | None


@dataclass(frozen=True)
class BoundSweepReport:
    m: int
    swept: bool
    vacuous: bool
    rows: tuple[KBoundRow, ...]
    violations: tuple[tuple[CyclicSet, CyclicSet], ...]


def check_minimal_sumset_bound(G_order: int, sweep: bool = True) -> BoundSweepReport:
    """Sweep the |C| <= k/(2k-1)·|G| bound for minimal-sumset pairs.

    The hypothesis on (C, W): dropping any element of C shrinks C + W.
    That is exactly "no proper subset of C has the same sumset", since a
    proper subset sits inside some C minus a point.  Both the hypothesis
    and |C| survive translating either set, so C and W are anchored at 0.
    """
    m = G_order
    if m < 1:
        raise ValueError("the group order must be positive")
    bounds = {k: (k * m) // (2 * k - 1) for k in range(2, m + 1)}
    if m < 2 or not sweep:
        rows = tuple(
            KBoundRow(k, b, 0, None, None) for k, b in sorted(bounds.items())
        )
        return BoundSweepReport(m, False, m < 2, rows, ())
    if m > 14:
        raise ValueError(f"group order {m} exceeds the sweep limit 14")

    mask = (1 << m) - 1
    # C-candidates anchored at 0, grouped by size, largest sizes first
    by_size: dict[int, list[int]] = {s: [] for s in range(1, m + 1)}
    for rest_size in range(m):
        for rest in combinations(range(1, m), rest_size):
            bits = 1
            for r in rest:
                bits |= 1 << r
            by_size[rest_size + 1].append(bits)

    best: dict[int, tuple[int, int, int]] = {}  # k -> (|C|, c_bits, w_bits)
    violations: list[tuple[CyclicSet, CyclicSet]] = []

    def satisfies(c_bits: int, rotw: list[int]) -> bool:
        cs = []
        t = c_bits
        while t:
            low = t & -t
            cs.append(rotw[low.bit_length() - 1])
            t ^= low
        n = len(cs)
        prefix = [0] * (n + 1)
        for i, v in enumerate(cs):
            prefix[i + 1] = prefix[i] | v
        cover = prefix[n]
        suffix = 0
        for i in range(n - 1, -1, -1):
            if prefix[i] | suffix == cover:
                return False
            suffix |= cs[i]
        return True

    for rest_size in range(1, m):
        k = rest_size + 1
        bound = bounds[k]
        for rest in combinations(range(1, m), rest_size):
            w_bits = 1
            for r in rest:
                w_bits |= 1 << r
            rotw = [_rot(w_bits, c, m) for c in range(m)]
            floor_best = best.get(k, (0, 0, 0))[0]
            for s in range(m, floor_best, -1):
                hit = None
                for c_bits in by_size[s]:
                    if satisfies(c_bits, rotw):
                        hit = c_bits
                        break
                if hit is not None:
                    if s > bound:
                        violations.append((CyclicSet(m, hit), CyclicSet(m, w_bits)))
                    best[k] = (s, hit, w_bits)
                    break
    rows = []
    for k in sorted(bounds):
        b = bounds[k]
        got = best.get(k)
        if got:
            rows.append(
                KBoundRow(k, b, got[0], CyclicSet(m, got[1]), CyclicSet(m, got[2]))
            )
        else:
            rows.append(KBoundRow(k, b, 0, None, None))
    return BoundSweepReport(m, True, False, rows, tuple(violations))


@dataclass(frozen=True)
class CayleyReport:
    n: int
    closed_neighborhood: CyclicSet
    gamma: int
    gamma_witness: CyclicSet
    upper_gamma: int
    upper_witness: CyclicSet


def cayley_domination(n: int) -> CayleyReport:
    """Domination numbers of the unitary Cayley graph X_n.

    Vertices are Z/nZ with a ~ b iff gcd(a-b, n) = 1, so the closed
    neighborhood of v is v + P with P = {0} plus the units.  gamma is the
    least size of a complement to P; upper_gamma is the largest size of a
    minimal one, found by branch and bound over inclusion decisions with
    three sound prunes: a chosen vertex with no private neighbor stays
    redundant forever, a vertex with no undecided dominator is lost, and
    the k/(2k-1) complement bound caps everything.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    _check_cap(n, default=DEFAULT_CAYLEY_CAP)
    p_res = [0] + [x for x in range(1, n) if gcd(x, n) == 1]
    p = CyclicSet.of(n, p_res)
    mask = (1 << n) - 1
    neigh = [[(v + x) % n for x in p_res] for v in range(n)]
    rotp = [_rot(p.bits, v, n) for v in range(n)]

    gamma = None
    gamma_witness = None
    for k in range(1, n + 1):
        for rest in combinations(range(1, n), k - 1):
            cover = rotp[0]
            for v in rest:
                cover |= rotp[v]
            if cover == mask:
                gamma = k
                gamma_witness = CyclicSet.of(n, (0,) + rest)
                break
        if gamma is not None:
            break

    k_p = len(p_res)
    ub = (k_p * n) // (2 * k_p - 1)
    order = sorted(range(n), key=lambda v: (0 if gcd(v, n) > 1 else 1, v))

    domcnt = [0] * n
    solo = [-1] * n
    pcount = [0] * n
    possdom = [k_p] * n
    chosen: list[int] = []
    best_size = gamma
    best_bits = gamma_witness.bits

    def dfs(idx: int) -> bool:
        nonlocal best_size, best_bits
        if best_size >= ub:
            return True
        if idx == len(order):
            if all(domcnt[z] > 0 for z in range(n)) and len(chosen) > best_size:
                best_size = len(chosen)
                bb = 0
                for v in chosen:
                    bb |= 1 << v
                best_bits = bb
                return best_size >= ub
            return False
        if len(chosen) + (len(order) - idx) <= best_size:
            return False
        v = order[idx]

        # include v unless that kills some chosen vertex's last private z;
        # v itself needs a currently undominated z to ever be necessary
        dead = False
        log = []
        if any(domcnt[z] == 0 for z in neigh[v]):
            for z in neigh[v]:
                domcnt[z] += 1
                if domcnt[z] == 1:
                    solo[z] = v
                    pcount[v] += 1
                elif domcnt[z] == 2:
                    u = solo[z]
                    pcount[u] -= 1
                    log.append(u)
                    if pcount[u] == 0:
                        dead = True
            if not dead and pcount[v] > 0:
                chosen.append(v)
                if dfs(idx + 1):
                    return True
                chosen.pop()
            for z in reversed(neigh[v]):
                if domcnt[z] == 1:
                    pcount[v] -= 1
                domcnt[z] -= 1
            for u in log:
                pcount[u] += 1
        # exclude v unless some z now has no possible dominator
        lost = False
        for z in neigh[v]:
            possdom[z] -= 1
            if possdom[z] == 0 and domcnt[z] == 0:
                lost = True
        if not lost and dfs(idx + 1):
            for z in neigh[v]:
                possdom[z] += 1
            return True
        for z in neigh[v]:
            possdom[z] += 1
        return False

    dfs(0)
    return CayleyReport(
        n, p, gamma, gamma_witness, best_size, CyclicSet(n, best_bits)
    )
