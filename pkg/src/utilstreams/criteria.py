"""Betterness criteria over infinite worlds and the verdict-matrix engine."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import NoCommonUniverse
from .stream import (
    INF,
    ExpPeriodicStream,
    ExtRat,
    classify_partial_sums,
    density,
    eventual_sign_profile,
    format_ext,
    liminf_limsup,
    partial_sum,
    partial_sum_threshold,
    sign,
    signed_part_summability,
)
from .world import (
    DistinctAcrossWorlds,
    LocationView,
    NotSameLocations,
    SharedRegistry,
    World,
    align_locations,
    lifetime_stream,
    person_stream,
)


class Outcome(enum.Enum):
    BETTER = "StrictlyBetter"
    WORSE = "StrictlyWorse"
    EQUAL = "Equal"
    NONE = "NoVerdict"

    def mirrored(self) -> Outcome:
        return {Outcome.BETTER: Outcome.WORSE, Outcome.WORSE: Outcome.BETTER}.get(self, self)


# NoVerdict reasons
NOT_SAME_LOCATIONS = "NotSameLocations"
SILENT = "Silent"
REQUIRES_ORDER = "RequiresOrder"
# the difference stream lies outside the fragment interval_dominance decides
UNDECIDED = "Undecided"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    reason: str | None = None
    witness: str = field(default="", compare=False)

    @property
    def is_strict(self) -> bool:
        return self.outcome in (Outcome.BETTER, Outcome.WORSE)

    def mirrored(self, witness: str | None = None) -> Verdict:
        return Verdict(self.outcome.mirrored(), self.reason, self.witness if witness is None else witness)

    def __str__(self):
        if self.outcome is Outcome.NONE:
            return f"NoVerdict({self.reason})"
        return self.outcome.value


def better(witness: str = "") -> Verdict:
    return Verdict(Outcome.BETTER, witness=witness)


def worse(witness: str = "") -> Verdict:
    return Verdict(Outcome.WORSE, witness=witness)


def equal(witness: str = "") -> Verdict:
    return Verdict(Outcome.EQUAL, witness=witness)


def no_verdict(reason: str, witness: str = "") -> Verdict:
    return Verdict(Outcome.NONE, reason, witness)


def _aligned_or_verdict(v: LocationView, w1: World, w2: World):
    al = align_locations(w1, w2, v)
    if isinstance(al, NotSameLocations):
        return None, no_verdict(NOT_SAME_LOCATIONS, al.reason)
    return al, None


def strict_difference_count(d: ExpPeriodicStream) -> int | float:
    """Number of locations where d is nonzero (math.inf if infinitely many)."""
    prof = eventual_sign_profile(d)
    if any(prof.signs):
        return INF
    return sum(1 for t in range(1, prof.threshold) if d.evaluate(t))


# ---------------------------------------------------------------------------
# Pareto


def pareto_streams(s1: ExpPeriodicStream, s2: ExpPeriodicStream) -> Verdict:
    d = s1 - s2
    if d.is_zero:
        return equal()
    prof = eventual_sign_profile(d)
    seen = {sign(d.evaluate(t)) for t in range(1, prof.threshold)} | set(prof.signs)
    witness = f"strict={format_ext(strict_difference_count(d))}"
    if 1 in seen and -1 not in seen:
        return better(witness)
    if -1 in seen and 1 not in seen:
        return worse(witness)
    return no_verdict(SILENT, "mixed signs")


def pareto(v: LocationView, w1: World, w2: World) -> Verdict:
    """Better iff no location is worse off and some location is better off."""
    al, nv = _aligned_or_verdict(v, w1, w2)
    if nv:
        return nv
    return pareto_streams(al.s1, al.s2)


# ---------------------------------------------------------------------------
# SBI1: separation by two constants up to finitely many exceptions


def separating_constants(low: ExtRat, high: ExtRat) -> tuple[Fraction, Fraction]:
    """(c1, c2) with low < c2 < c1 < high; requires low < high."""
    if low == -INF and high == INF:
        return Fraction(1), Fraction(0)
    if low == -INF:
        return high - 1, high - 2
    if high == INF:
        return low + 2, low + 1
    gap = (high - low) / 3
    return low + 2 * gap, low + gap


def sbi1_streams(s1: ExpPeriodicStream, s2: ExpPeriodicStream) -> Verdict:
    lo1, hi1 = liminf_limsup(s1)
    lo2, hi2 = liminf_limsup(s2)
    if hi2 < lo1:
        c1, c2 = separating_constants(hi2, lo1)
        return better(f"c1={c1} c2={c2}")
    if hi1 < lo2:
        c1, c2 = separating_constants(hi1, lo2)
        return worse(f"c1={c1} c2={c2}")
    return no_verdict(SILENT, "no separating gap")


def sbi1(v: LocationView, w1: World, w2: World) -> Verdict:
    al, nv = _aligned_or_verdict(v, w1, w2)
    if nv:
        return nv
    return sbi1_streams(al.s1, al.s2)


# ---------------------------------------------------------------------------
# WPC


def wpc_difference(w1: World, w2: World) -> list[ExpPeriodicStream]:
    """Per-person utility differences over the union population, as parts.

    Each part is a stream; the union population is the disjoint union of the
    parts' index sets. Persons absent from a world count as utility 0 there.
    """
    i1, i2 = w1.identity, w2.identity
    if isinstance(i1, SharedRegistry) and isinstance(i2, SharedRegistry):
        if i1.name != i2.name:
            raise NoCommonUniverse(f"registries {i1.name} and {i2.name} differ")
        return [person_stream(w1) - person_stream(w2)]
    if isinstance(i1, DistinctAcrossWorlds) and isinstance(i2, DistinctAcrossWorlds):
        if (w1.start, w1.step) != (w2.start, w2.step):
            raise NoCommonUniverse("birth schedules differ, zero-padding has no common slots")
        if w1.name == w2.name:
            return [lifetime_stream(w1) - lifetime_stream(w2)]
        return [lifetime_stream(w1), -lifetime_stream(w2)]
    raise NoCommonUniverse("one world draws on a shared registry, the other does not")


def wpc_parts(parts: Sequence[ExpPeriodicStream]) -> Verdict:
    pos = neg = Fraction(0)
    for d in parts:
        p, q = signed_part_summability(d)
        pos, neg = pos + p, neg + q
    witness = f"pos={format_ext(pos)} neg={format_ext(neg)}"
    if all(d.is_zero for d in parts):
        return equal(witness)
    if pos == INF and neg == INF:
        return no_verdict(SILENT, witness)
    if pos == INF:
        return better(witness)
    if neg == INF:
        return worse(witness)
    total = pos - neg
    witness += f" total={total}"
    if total > 0:
        return better(witness)
    if total < 0:
        return worse(witness)
    return no_verdict(SILENT, witness)


def wpc(w1: World, w2: World) -> Verdict:
    """Better iff the running sum of per-person differences tends to a positive
    number or +inf under every enumeration of the union population."""
    return wpc_parts(wpc_difference(w1, w2))


# ---------------------------------------------------------------------------
# order-sensitive criteria


def _ordered_streams(v: LocationView, w1: World, w2: World):
    if not v.ordered:
        return None, no_verdict(REQUIRES_ORDER)
    return _aligned_or_verdict(v, w1, w2)


def overtaking_streams(s1: ExpPeriodicStream, s2: ExpPeriodicStream) -> Verdict:
    d = s1 - s2
    if d.is_zero:
        return equal()
    cls = classify_partial_sums(d)
    if cls.kind == "ConvergesTo" and cls.liminf == 0:
        return no_verdict(SILENT, "difference of partial sums tends to 0")
    n = partial_sum_threshold(d, 1)
    if n is not None:
        return better(f"N={n}")
    n = partial_sum_threshold(d, -1)
    if n is not None:
        return worse(f"N={n}")
    return no_verdict(SILENT, str(cls))


def overtaking(v: LocationView, w1: World, w2: World) -> Verdict:
    al, nv = _ordered_streams(v, w1, w2)
    if nv:
        return nv
    return overtaking_streams(al.s1, al.s2)


class _Undecided(Exception):
    pass


def _window_sum(d: ExpPeriodicStream, a: int, length: int) -> Fraction:
    return partial_sum(d, a + length - 1) - partial_sum(d, a - 1)


def window_threshold(d: ExpPeriodicStream) -> int | None:
    """Smallest L with every window sum of length >= L strictly positive, or
    None if there is no such L. Raises _Undecided outside the decided
    fragment (eventually periodic, or eventually single-signed)."""
    if d.is_zero:
        return None
    m = d.period
    if all(b == 1 for b in d.bases):
        return _periodic_window_threshold(d)
    prof = eventual_sign_profile(d)
    signs = set(prof.signs)
    if 1 in signs and -1 in signs:
        raise _Undecided
    if 1 not in signs:
        # far-out windows are <= 0
        return None
    N0 = max(prof.threshold, 1)
    # windows starting at a >= N0 see only values >= 0; a window is positive
    # unless it sits inside a run of eventually-zero classes
    run = longest = 0
    for r in list(range(m)) * 2:
        run = run + 1 if prof.signs[r] == 0 else 0
        longest = max(longest, min(run, m))
    worst = longest
    limit = classify_partial_sums(d).liminf
    for k in range(0, N0 - 1):
        # windows (k, n]; S is nondecreasing from N0 - 1 on
        base = partial_sum(d, k)
        if limit <= base:
            return None
        n, last_bad = k + 1, k
        while True:
            s = partial_sum(d, n)
            if s <= base:
                last_bad = n
            elif n >= N0 - 1:
                break
            n += 1
        worst = max(worst, last_bad - k)
    return worst + 1


def _periodic_window_threshold(d: ExpPeriodicStream) -> int | None:
    P, m = d.prefix_length, d.period
    # sum of one full period of the tail
    K = sum(d.terms[0][1]) if d.terms else Fraction(0)
    if K <= 0:
        return None
    worst = 0
    for a in range(1, P + m + 1):
        l0 = max(1, P - a + 1)
        for length in range(1, l0):
            if _window_sum(d, a, length) <= 0:
                worst = max(worst, length)
        for rho in range(m):
            length = l0 + rho
            w0 = _window_sum(d, a, length)
            if w0 <= 0:
                j = math.floor(-w0 / K)
                worst = max(worst, length + j * m)
    return worst + 1


def interval_dominance_streams(s1: ExpPeriodicStream, s2: ExpPeriodicStream) -> Verdict:
    d = s1 - s2
    try:
        L = window_threshold(d)
        if L is not None:
            return better(f"L={L}")
        L = window_threshold(-d)
        if L is not None:
            return worse(f"L={L}")
    except _Undecided:
        return no_verdict(UNDECIDED, "mixed-sign non-periodic difference")
    return no_verdict(SILENT, "some arbitrarily long window is not positive")


def interval_dominance(v: LocationView, w1: World, w2: World) -> Verdict:
    """Better iff every sufficiently long window of locations has a positive
    utility difference."""
    al, nv = _ordered_streams(v, w1, w2)
    if nv:
        return nv
    return interval_dominance_streams(al.s1, al.s2)


def value_density_streams(s1: ExpPeriodicStream, s2: ExpPeriodicStream) -> Verdict:
    d1, d2 = density(s1), density(s2)
    if d1 is None or d2 is None:
        return no_verdict(SILENT, "density undefined")
    witness = f"d1={format_ext(d1)} d2={format_ext(d2)}"
    if d1 > d2:
        return better(witness)
    if d1 < d2:
        return worse(witness)
    return no_verdict(SILENT, witness)


def value_density(v: LocationView, w1: World, w2: World) -> Verdict:
    """Simplified density: compares lim S(n)/n. Ties never give Equal."""
    al, nv = _ordered_streams(v, w1, w2)
    if nv:
        return nv
    return value_density_streams(al.s1, al.s2)


# ---------------------------------------------------------------------------
# catalogue and matrix


@dataclass(frozen=True)
class Criterion:
    name: str
    func: Callable
    ordered_only: bool = False
    per_view: bool = True


CRITERIA: tuple[Criterion, ...] = (
    Criterion("pareto", pareto),
    Criterion("sbi1", sbi1),
    Criterion("wpc", wpc, per_view=False),
    Criterion("overtaking", overtaking, ordered_only=True),
    Criterion("interval_dominance", interval_dominance, ordered_only=True),
    Criterion("density(simplified)", value_density, ordered_only=True),
)
CRITERIA_BY_NAME = {c.name: c for c in CRITERIA}
CRITERIA_BY_NAME["density"] = CRITERIA_BY_NAME["density(simplified)"]

# WPC ranges over the union population, reported in its own column
WPC_VIEW = "union"
VIEW_ORDER = (LocationView.TIMES, LocationView.PERSONS, LocationView.SLOTS)


class CriterionId(enum.Enum):
    ParetoTimes = ("pareto", LocationView.TIMES)
    ParetoPersons = ("pareto", LocationView.PERSONS)
    ParetoSlots = ("pareto", LocationView.SLOTS)
    SBI1Times = ("sbi1", LocationView.TIMES)
    SBI1Persons = ("sbi1", LocationView.PERSONS)
    SBI1Slots = ("sbi1", LocationView.SLOTS)
    WPC = ("wpc", None)
    Overtaking = ("overtaking", LocationView.SLOTS)
    IntervalDominance = ("interval_dominance", LocationView.SLOTS)
    ValueDensity = ("density(simplified)", LocationView.SLOTS)


def evaluate_criterion(cid: CriterionId, w1: World, w2: World, view: LocationView | None = None) -> Verdict:
    name, default_view = cid.value
    crit = CRITERIA_BY_NAME[name]
    if not crit.per_view:
        return crit.func(w1, w2)
    return crit.func(view or default_view, w1, w2)


@dataclass(frozen=True)
class Cell:
    criterion: str
    view: str
    verdict: Verdict

    @property
    def label(self) -> str:
        return f"{self.criterion}:{self.view}"

    def detail(self) -> str:
        v = self.verdict
        if v.outcome is Outcome.NONE:
            return v.reason + (f" ({v.witness})" if v.witness else "")
        return v.witness or "-"

    def fields(self) -> tuple[str, str, str, str]:
        return (self.criterion, self.view, self.verdict.outcome.value, self.detail())


@dataclass(frozen=True)
class Flag:
    kind: str  # CONFLICT | DISAGREEMENT
    first: str
    second: str

    def __str__(self):
        return f"{self.kind} {self.first} {self.second}"


@dataclass(frozen=True)
class VerdictMatrix:
    cells: tuple[Cell, ...]

    @property
    def flags(self) -> list[Flag]:
        out = []
        cells = self.cells
        for i, a in enumerate(cells):
            for b in cells[i + 1 :]:
                pair = {a.verdict.outcome, b.verdict.outcome}
                if pair == {Outcome.BETTER, Outcome.WORSE}:
                    out.append(Flag("CONFLICT", a.label, b.label))
        for i, a in enumerate(cells):
            for b in cells[i + 1 :]:
                pair = {a.verdict.outcome, b.verdict.outcome}
                if Outcome.EQUAL in pair and (Outcome.BETTER in pair or Outcome.WORSE in pair):
                    out.append(Flag("DISAGREEMENT", a.label, b.label))
        return out

    @property
    def conflicts(self) -> list[Flag]:
        return [f for f in self.flags if f.kind == "CONFLICT"]

    @property
    def disagreements(self) -> list[Flag]:
        return [f for f in self.flags if f.kind == "DISAGREEMENT"]

    def get(self, criterion: str, view) -> Verdict:
        view = str(view)
        for c in self.cells:
            if c.criterion == criterion and c.view == view:
                return c.verdict
        raise KeyError(f"{criterion}:{view}")

    def lines(self, fmt: str = "text") -> list[str]:
        sep = "\t" if fmt == "machine" else " "
        out = [sep.join(c.fields()) for c in self.cells]
        out += [sep.join((f.kind, f.first, f.second)) for f in self.flags]
        return out

    def render(self, fmt: str = "text") -> str:
        return "\n".join(self.lines(fmt)) + "\n"


def compare_all(
    w1: World,
    w2: World,
    views: Iterable[LocationView] = VIEW_ORDER,
    criteria: Iterable[str] | None = None,
) -> VerdictMatrix:
    """Every applicable criterion under every requested view, in a fixed order."""
    views = [v for v in VIEW_ORDER if v in set(views)]
    chosen = CRITERIA if criteria is None else tuple(
        c for c in CRITERIA if c.name in {CRITERIA_BY_NAME[n].name for n in criteria}
    )
    cells = []
    for crit in chosen:
        if not crit.per_view:
            if LocationView.PERSONS in views:
                try:
                    verdict = crit.func(w1, w2)
                except NoCommonUniverse as exc:
                    verdict = no_verdict(NOT_SAME_LOCATIONS, str(exc))
                cells.append(Cell(crit.name, WPC_VIEW, verdict))
            continue
        for v in views:
            if crit.ordered_only and not v.ordered:
                continue
            cells.append(Cell(crit.name, str(v), crit.func(v, w1, w2)))
    return VerdictMatrix(tuple(cells))
