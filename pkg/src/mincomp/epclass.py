"""Classifier for eventually periodic sets.

A canonical set S = (mN + A) ∪ B ∪ F is screened through a pipeline of
necessary conditions for arising as a minimal complement.  The
structural conditions live on residues mod m: any complement sorts the
residues into classes it meets in a set unbounded above (plus),
unbounded below (minus), nonempty but finite (zero), or not at all
(absent), and coverage together with minimality forces combinatorial
constraints on that labeling.  The labeling search is exhaustive, so a
RuledOut verdict is a proof; an ArisesCertified verdict always carries
a complement that was re-verified from scratch; everything in between
is reported as Unknown rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .construct import ConstructionError, _is_prime, build_thm_suff
from .intset import (
    EPSet,
    FiniteSet,
    IntegerSet,
    Window,
    lower_ray,
    naturals,
    without,
)
from .sumset import covers
from .verify import MacReport

DEFAULT_LABEL_CAP = 10
CERTIFY_ATTEMPT_CAP = 256

LABELS = ("absent", "plus", "minus", "zero", "plus_and_minus")

_PLUS = frozenset({"plus", "plus_and_minus"})
_MINUS = frozenset({"minus", "plus_and_minus"})
_ZERO = frozenset({"zero"})
_PRESENT = frozenset({"plus", "minus", "zero", "plus_and_minus"})


@dataclass(frozen=True)
class YPartition:
    """Per-residue labels describing how a complement meets each class.

    plus: unbounded above inside the class; minus: unbounded below;
    zero: nonempty but finite; absent: empty.  A class unbounded both
    ways is plus_and_minus.  zero is exclusive by definition, so y_zero
    never overlaps y_plus or y_minus.
    """

    m: int
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != self.m:
            raise ValueError("need exactly one label per residue")
        for lab in self.labels:
            if lab not in LABELS:
                raise ValueError(f"unknown label {lab!r}")

    @property
    def y_plus(self) -> frozenset:
        return frozenset(y for y, lab in enumerate(self.labels) if lab in _PLUS)

    @property
    def y_minus(self) -> frozenset:
        return frozenset(y for y, lab in enumerate(self.labels) if lab in _MINUS)

    @property
    def y_zero(self) -> frozenset:
        return frozenset(y for y, lab in enumerate(self.labels) if lab in _ZERO)

    @property
    def y_bar(self) -> frozenset:
        return frozenset(y for y, lab in enumerate(self.labels) if lab != "absent")

    def to_json(self) -> dict:
        return {"m": self.m, "labels": list(self.labels)}


def _pot(m: int, labels: list, assigned: int, group: frozenset) -> set:
    """Residues that may still land in the group, free ones included."""
    out = set(range(assigned, m))
    out.update(y for y in range(assigned) if labels[y] in group)
    return out


def _cur(labels: list, assigned: int, group: frozenset) -> set:
    return {y for y in range(assigned) if labels[y] in group}


def _feasible(m: int, A: list, F: list, labels: list, assigned: int) -> bool:
    """Sound prune: False only when no completion can satisfy (1)-(3).

    Requirements demanding membership are tested against the widest
    label sets a completion could produce; requirements forbidding
    membership are tested against the committed labels only.  On a full
    assignment both collapse to the exact conditions.
    """
    bar_pot = _pot(m, labels, assigned, _PRESENT)
    plus_pot = _pot(m, labels, assigned, _PLUS)
    minus_pot = _pot(m, labels, assigned, _MINUS)
    zero_pot = _pot(m, labels, assigned, _ZERO)
    minus_cur = _cur(labels, assigned, _MINUS)
    plus_cur = _cur(labels, assigned, _PLUS)
    zero_cur = _cur(labels, assigned, _ZERO)

    # (1) both coverage equalities must stay reachable
    for z in range(m):
        if not any((z - a) % m in bar_pot for a in A) and not any(
            (z - f) % m in plus_pot for f in F
        ):
            return False
        if not any((z - a) % m in minus_pot for a in A) and not any(
            (z - f) % m in minus_pot for f in F
        ):
            return False
    # (3) every f needs a bar residue whose sum escapes A + minus
    blocked = {(a + y) % m for a in A for y in minus_cur}
    for f in F:
        if all((f + y) % m in blocked for y in bar_pot):
            return False
    # (2) every a needs a zero residue whose sum is reached from F
    #     through minus but from nowhere else
    reach = {(f + y) % m for f in F for y in minus_pot}
    mixed = {(a + y) % m for a in A for y in minus_cur | plus_cur}
    for a in A:
        ok = False
        for y in zero_pot:
            t = (a + y) % m
            if t not in reach or t in mixed:
                continue
            if any(b != a and (t - b) % m in zero_cur for b in A):
                continue
            ok = True
            break
        if not ok:
            return False
    return True


def _y_choices(m: int, A: list, F: list, labels: list) -> dict | None:
    """Exact condition (2) on a full assignment: least valid y per class."""
    minus = _cur(labels, m, _MINUS)
    plus = _cur(labels, m, _PLUS)
    zero = _cur(labels, m, _ZERO)
    reach = {(f + y) % m for f in F for y in minus}
    mixed = {(a + y) % m for a in A for y in minus | plus}
    out = {}
    for a in A:
        pick = None
        for y in sorted(zero):
            t = (a + y) % m
            if t not in reach or t in mixed:
                continue
            if any(b != a and (t - b) % m in zero for b in A):
                continue
            pick = y
            break
        if pick is None:
            return None
        out[a] = pick
    return out


def iter_y_partitions(
    m: int,
    a_classes: Iterable[int],
    f_classes: Iterable[int],
    cap: int = DEFAULT_LABEL_CAP,
) -> Iterator[tuple[YPartition, dict]]:
    """Yield every satisfying labeling with its y_map, lexicographically.

    Walks all 5^m assignments depth first in LABELS order with the
    sound prune above, so the first yield is deterministic and the
    exhaustion of the generator is a proof that none exists.  y_map
    assigns each progression class its least valid zero-class residue;
    the sums a + y_a are automatically pairwise distinct because a
    collision would violate the exclusion part of condition (2).
    """
    if m < 1:
        raise ValueError("modulus must be positive")
    if m > cap:
        raise ValueError(f"modulus {m} exceeds the labeling cap {cap}")
    A = sorted({a % m for a in a_classes})
    F = sorted({f % m for f in f_classes})
    if not A:
        raise ValueError("need at least one progression class")
    if not F:
        # condition (2) aims a + y_a into F + minus; no F, no target
        return
    labels = ["absent"] * m

    def walk(i: int) -> Iterator[tuple[YPartition, dict]]:
        for lab in LABELS:
            labels[i] = lab
            if not _feasible(m, A, F, labels, i + 1):
                continue
            if i + 1 == m:
                y_map = _y_choices(m, A, F, labels)
                if y_map is not None:
                    yield YPartition(m, tuple(labels)), y_map
            else:
                yield from walk(i + 1)

    yield from walk(0)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one arithmetic screen.

    ok False carries the reason code; ok True with reason
    "NotApplicable" means the screen did not apply and decided nothing.
    tight marks the prime-bound regime in which the class-complement
    cover test is mandatory.
    """

    ok: bool
    reason: str | None
    detail: str
    tight: bool = False

    def to_json(self) -> dict:
        out: dict = {"ok": self.ok}
        if self.reason is not None:
            out["reason"] = self.reason
        out["detail"] = self.detail
        out["tight"] = self.tight
        return out


def check_density_cor(S: EPSet) -> CheckResult:
    """Class-counting obstruction: 2|A| <= m + |F| over residues mod m."""
    m = S.m
    na = len(S.tail_classes)
    nf = len(S.f_classes)
    if 2 * na <= m + nf:
        return CheckResult(True, None, f"2*{na} <= {m}+{nf}")
    return CheckResult(False, "DensityCor", f"2*{na} > {m}+{nf}")


def check_prime_bound(S: EPSet) -> CheckResult:
    """Prime-period obstruction |A| <= |F|(m+1)/(2|F|+1), exact arithmetic.

    Only meaningful at prime m; composite periods get NotApplicable.
    Sets tight when additionally |A| > |F| m / (2|F|+1), the regime
    where every progression class complement must be an exact F-cover.
    """
    m = S.m
    if not _is_prime(m):
        return CheckResult(True, "NotApplicable", f"period {m} is not prime")
    na = len(S.tail_classes)
    nf = len(S.f_classes)
    bound = Fraction(nf * (m + 1), 2 * nf + 1)
    tight = na * (2 * nf + 1) > nf * m
    if na <= bound:
        return CheckResult(True, None, f"|A| = {na} <= {bound}", tight)
    return CheckResult(False, "PrimeBound", f"|A| = {na} > {bound}", tight)


@dataclass(frozen=True)
class SumsetCover:
    """Answer to F + W = T: a witness W or the first uncovered element."""

    ok: bool
    W: IntegerSet | None
    evidence: int | None

    def to_json(self) -> dict:
        out: dict = {"ok": self.ok}
        if self.evidence is not None:
            out["evidence"] = self.evidence
        return out


def is_sumset_representable(F: Iterable[int] | FiniteSet, T: IntegerSet) -> SumsetCover:
    """Decide F + W = T exactly, in scaled single-class coordinates.

    T must be a descending ray with finitely many corrections: bounded
    above, full below its down-tail horizon.  The only candidate worth
    checking is the maximal one, W* = {w : F + w ⊆ T}: any witness is a
    subset of W*, and a subset covers no more.  Past the last
    correction both T and W* settle into full rays, so comparing F + W*
    with T on a window reaching span(F) + 2 beyond the corrections
    decides the infinite equation.  On failure the largest uncovered
    element of T is returned as evidence.

    Callers working class by class must scale first (divide the class
    by its modulus); F spanning several residue classes is not
    supported by this test and must be rejected upstream.
    """
    F = F if isinstance(F, FiniteSet) else FiniteSet(F)
    if F.known_empty():
        raise ValueError("F must be nonempty")
    tail = T.down_tail()
    if tail is None or len(tail.residues) != tail.modulus:
        raise ValueError("T must contain a full descending ray")
    t_max = T.max_element()
    if t_max is None:
        raise ValueError("T must be bounded above and nonempty")
    horizon = min(tail.horizon, t_max)
    holes = [z for z in range(horizon + 1, t_max + 1) if not T.member(z)]

    # reflect around t_max: the problem becomes covering N minus a
    # finite hole set by fhat + w with w drawn from N minus bad offsets
    fs = F.elements
    f_max = fs[-1]
    span = f_max - fs[0]
    fhat = FiniteSet(f_max - f for f in fs)
    hhat = {t_max - z for z in holes}
    bad = {h - f for h in hhat for f in fhat.elements if h - f >= 0}
    w_hat = without(naturals(), bad)

    hi = (max(hhat) if hhat else 0) + span + 2
    for t in range(hi + 1):
        want = t not in hhat
        got = covers(t, fhat, w_hat)
        if got and not want:
            # cannot happen: w survives in w_hat only if f + w avoids
            # every hole, which is exactly F + W* being inside T
            raise ConstructionError(f"maximal candidate overshoots T at offset {t}")
        if want and not got:
            return SumsetCover(False, None, t_max - t)
    W = w_hat.reflect().translate(t_max - f_max)
    return SumsetCover(True, W, None)


@dataclass(frozen=True)
class ClassifierVerdict:
    """Pipeline outcome with whatever evidence produced it.

    verdict is one of RuledOut, NecessaryPass, ArisesCertified,
    Unknown.  reason is set exactly for RuledOut: DensityCor,
    PrimeBound, NoYPartition or NoCondition4.  witness and y_map carry
    the labeling that passed; report carries the re-verified complement
    behind an ArisesCertified.
    """

    verdict: str
    reason: str | None = None
    witness: YPartition | None = None
    y_map: Mapping[int, int] | None = None
    evidence: int | None = None
    report: MacReport | None = None
    w_preview: tuple = ()
    notes: tuple = ()

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.reason is not None:
            out["reason"] = self.reason
        if self.witness is not None:
            out["labels"] = list(self.witness.labels)
        if self.y_map is not None:
            out["y_map"] = {str(a): y for a, y in sorted(self.y_map.items())}
        if self.evidence is not None:
            out["evidence"] = self.evidence
        if self.w_preview:
            out["w_preview"] = list(self.w_preview)
        if self.report is not None:
            out["mac_report"] = self.report.to_json()
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def check_necessary(S: EPSet, cap: int = DEFAULT_LABEL_CAP) -> ClassifierVerdict:
    """Search for a labeling satisfying the three structural conditions.

    NecessaryPass carries the lexicographically first satisfying
    partition and its y_map; RuledOut(NoYPartition) means the 5^m sweep
    proved none exists.
    """
    m = S.m
    A = sorted(S.tail_classes)
    F = sorted(S.f_classes)
    if not F:
        return ClassifierVerdict(
            "RuledOut",
            reason="NoYPartition",
            notes=("no finite part outside the progression classes: condition (2) has no target",),
        )
    for partition, y_map in iter_y_partitions(m, A, F, cap=cap):
        return ClassifierVerdict("NecessaryPass", witness=partition, y_map=y_map)
    return ClassifierVerdict("RuledOut", reason="NoYPartition")


def _condition4(S: EPSet) -> tuple[int, int] | None:
    """Exact-cover test of each class complement; None when all pass.

    The complement of class a is everything below the tail start except
    the sporadic members B contributes, a descending ray with
    corrections once scaled by m.  Returns (class, first uncovered
    element) in the original coordinates on failure.
    """
    m = S.m
    f_ints = sorted(S.F)
    f0 = f_ints[0]
    fhat = FiniteSet((f - f0) // m for f in f_ints)
    for a in sorted(S.tail_classes):
        s_a = S._starts[a]
        removed = [(b - (s_a - m)) // m for b in S.B if b % m == a]
        cover = is_sumset_representable(fhat, without(lower_ray(0), removed))
        if not cover.ok:
            return a, m * cover.evidence + (s_a - m)
    return None


def classify(
    S: EPSet,
    certify: bool = True,
    window: Window = Window(-30, 30),
    cap: int = DEFAULT_LABEL_CAP,
) -> ClassifierVerdict:
    """Run the whole pipeline on S.

    Order: density screen, prime-period screen, labeling search,
    per-class exact covers where the tight regime mandates them, then,
    if the constructive hypotheses hold (prime m ≡ 2 mod 3, F in one
    class, 3|A| = m + 1), assembly and from-scratch verification of an
    actual complement.  certify False stops after the necessary
    conditions.  Every labeling the search yields may be tried for
    assembly; the first verified one wins.
    """
    notes: list[str] = []
    m = S.m
    A = sorted(S.tail_classes)
    F = sorted(S.f_classes)

    dens = check_density_cor(S)
    if not dens.ok:
        return ClassifierVerdict("RuledOut", reason="DensityCor", notes=(dens.detail,))
    prime = check_prime_bound(S)
    if not prime.ok:
        return ClassifierVerdict("RuledOut", reason="PrimeBound", notes=(prime.detail,))
    if prime.reason == "NotApplicable":
        notes.append(f"prime-period screen skipped: {prime.detail}")

    if m > cap:
        notes.append(f"period {m} exceeds the labeling cap {cap}; structural conditions unchecked")
        return ClassifierVerdict("Unknown", notes=tuple(notes))

    necessary = check_necessary(S, cap=cap)
    if necessary.verdict == "RuledOut":
        return ClassifierVerdict(
            "RuledOut", reason=necessary.reason, notes=tuple(notes) + necessary.notes
        )
    partition0 = necessary.witness
    y_map0 = necessary.y_map

    if prime.tight:
        if len(F) != 1:
            notes.append(
                "tight regime with the finite part in several classes; "
                "the per-class cover test handles a single class only"
            )
            return ClassifierVerdict(
                "Unknown", witness=partition0, y_map=y_map0, notes=tuple(notes)
            )
        failed = _condition4(S)
        if failed is not None:
            a, z = failed
            notes.append(f"class {a}: the class complement is not an exact F-cover")
            return ClassifierVerdict(
                "RuledOut", reason="NoCondition4", evidence=z, notes=tuple(notes)
            )

    if not certify:
        return ClassifierVerdict(
            "NecessaryPass", witness=partition0, y_map=y_map0, notes=tuple(notes)
        )

    constructive = (
        prime.reason is None and m % 3 == 2 and len(F) == 1 and 3 * len(A) == m + 1
    )
    if constructive:
        tried = 0
        for partition, y_map in iter_y_partitions(m, A, F, cap=cap):
            tried += 1
            if tried > CERTIFY_ATTEMPT_CAP:
                notes.append(f"gave up after {CERTIFY_ATTEMPT_CAP} labelings without a verified assembly")
                break
            try:
                built = build_thm_suff(S, y_map, window=window, partition=partition)
            except (ConstructionError, ValueError):
                continue
            return ClassifierVerdict(
                "ArisesCertified",
                witness=partition,
                y_map=dict(y_map),
                report=built.report,
                w_preview=tuple(built.W.window(window)),
                notes=tuple(notes),
            )
        else:
            notes.append("no admissible labeling assembled into a verified complement")
        return ClassifierVerdict(
            "Unknown", witness=partition0, y_map=y_map0, notes=tuple(notes)
        )

    notes.append("necessary conditions pass; outside the constructive regime")
    return ClassifierVerdict(
        "Unknown", witness=partition0, y_map=y_map0, notes=tuple(notes)
    )
