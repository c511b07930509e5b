"""Worlds, location views, the same-birth-time counterpart relation, and
incubation schedules."""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence, Union

from .errors import (
    NonCommensurableGrid,
    NotBijective,
    ParseError,
    ScheduleMismatch,
)
from .stream import (
    ExpPeriodicStream,
    parse_rational,
    parse_stream,
    rational_power,
    stream_sum,
    to_fraction,
)


# ---------------------------------------------------------------------------
# schedules


@dataclass(frozen=True)
class ScheduleRule:
    """i -> slope*i + offset for i ≡ residue (mod modulus)."""

    residue: int
    modulus: int
    slope: Fraction
    offset: Fraction

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "residue", self.residue % self.modulus)
        object.__setattr__(self, "slope", to_fraction(self.slope))
        object.__setattr__(self, "offset", to_fraction(self.offset))

    def matches(self, i: int) -> bool:
        return i % self.modulus == self.residue

    def image(self, i: int) -> Fraction:
        return self.slope * i + self.offset

    @property
    def first(self) -> int:
        """Smallest positive member of the domain class."""
        return self.residue if self.residue >= 1 else self.modulus

    @property
    def step(self) -> Fraction:
        return self.slope * self.modulus

    def __str__(self):
        return f"{self.residue} mod {self.modulus} -> {self.slope}*i+{self.offset}"


@dataclass(frozen=True)
class ScheduleMap:
    """A map of positive integers given by residue-class affine rules plus
    finitely many exceptions (which take precedence over the rules)."""

    rules: tuple[ScheduleRule, ...]
    exceptions: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "exceptions", tuple(sorted(tuple(e) for e in self.exceptions)))

    @classmethod
    def identity(cls) -> ScheduleMap:
        return cls((ScheduleRule(0, 1, Fraction(1), Fraction(0)),))

    @property
    def exception_map(self) -> dict[int, int]:
        return dict(self.exceptions)

    @property
    def rule_modulus(self) -> int:
        return math.lcm(*(r.modulus for r in self.rules))

    def rule_for(self, i: int) -> ScheduleRule:
        for rule in self.rules:
            if rule.matches(i):
                return rule
        raise NotBijective(f"index {i} matches no rule")

    def __call__(self, i: int) -> int:
        exc = self.exception_map
        if i in exc:
            return exc[i]
        v = self.rule_for(i).image(i)
        if v.denominator != 1 or v < 1:
            raise NotBijective(f"index {i} maps to {v}, not a positive integer")
        return int(v)

    def inverse(self, v: int) -> int:
        exc = self.exception_map
        for i, j in exc.items():
            if j == v:
                return i
        for rule in self.rules:
            i = (v - rule.offset) / rule.slope
            if i.denominator == 1 and i >= 1 and rule.matches(int(i)) and int(i) not in exc:
                return int(i)
        raise NotBijective(f"period {v} is not covered")

    def verify(self) -> None:
        """Raise NotBijective unless this is a bijection of the positive integers.

        The check is symbolic: rule domains must partition the residues,
        rule images must partition the residues of their common modulus, and
        the finitely many values a rule misses (preimage below 1, or preimage
        overridden by an exception) must be exactly the exception images.
        """
        if not self.rules:
            raise NotBijective("no rules")
        exc = self.exception_map
        if len(exc) != len(self.exceptions):
            raise NotBijective("exception list repeats a source index")
        for i, j in exc.items():
            if i < 1 or j < 1:
                raise NotBijective(f"exception {i}->{j} is not between positive integers")
        for rule in self.rules:
            step = rule.step
            if rule.slope <= 0 or step.denominator != 1:
                raise NotBijective(f"rule {rule} does not step by a positive integer")
            if rule.image(rule.first).denominator != 1:
                raise NotBijective(f"rule {rule} has non-integer images")

        M = self.rule_modulus
        for r in range(M):
            hits = sum(rule.matches(r) for rule in self.rules)
            if hits != 1:
                raise NotBijective(f"source residue {r} mod {M} matched by {hits} rules")

        L = math.lcm(*(int(rule.step) for rule in self.rules))
        cover = [0] * L
        for rule in self.rules:
            step = int(rule.step)
            c = int(rule.image(rule.first)) % step
            for v in range(c, L, step):
                cover[v] += 1
        for v, hits in enumerate(cover):
            if hits != 1:
                what = "never covered" if hits == 0 else f"covered {hits} times"
                raise NotBijective(f"period residue {v} mod {L} {what}")

        gaps: set[int] = set()
        for rule in self.rules:
            i = rule.first
            while i in exc:
                i += rule.modulus
            if rule.image(i) < 1:
                raise NotBijective(f"rule {rule} maps index {i} to {rule.image(i)}")
            step = int(rule.step)
            v = int(rule.image(rule.first)) - step
            while v >= 1:
                gaps.add(v)
                v -= step
            for k in exc:
                if rule.matches(k):
                    w = rule.image(k)
                    if w >= 1:
                        gaps.add(int(w))
        images = set(exc.values())
        if len(images) != len(exc):
            raise NotBijective("two exceptions share an image")
        missing = sorted(gaps - images)
        if missing:
            raise NotBijective(f"period {missing[0]} not covered")
        doubled = sorted(images - gaps)
        if doubled:
            raise NotBijective(f"period {doubled[0]} covered twice")

    def is_bijective(self) -> bool:
        try:
            self.verify()
        except NotBijective:
            return False
        return True

    def to_literal(self) -> str:
        body = "; ".join(str(r) for r in self.rules)
        out = f"rules{{ {body} }}"
        if self.exceptions:
            out += " except{ " + "; ".join(f"{i}->{j}" for i, j in self.exceptions) + " }"
        return out

    def __str__(self):
        return self.to_literal()


_SCHED_RE = re.compile(r"\s*rules\{(?P<rules>[^}]*)\}\s*(?:except\{(?P<exc>[^}]*)\}\s*)?")
_RULE_RE = re.compile(
    r"\s*(?P<s>\d+)\s+mod\s+(?P<m>\d+)\s*->\s*(?P<a>-?\d+(?:/\d+)?)\*i\s*(?P<sgn>[+-])\s*(?P<b>-?\d+(?:/\d+)?)\s*"
)
_EXC_RE = re.compile(r"\s*(?P<i>\d+)\s*->\s*(?P<j>\d+)\s*")


def parse_schedule(text: str) -> ScheduleMap:
    match = _SCHED_RE.fullmatch(text)
    if match is None:
        raise ParseError(f"malformed schedule literal: {text.strip()!r}")
    rules = []
    for chunk in match["rules"].split(";"):
        if not chunk.strip():
            continue
        rm = _RULE_RE.fullmatch(chunk)
        if rm is None:
            raise ParseError(f"malformed schedule rule: {chunk.strip()!r}")
        offset = parse_rational(rm["b"])
        if rm["sgn"] == "-":
            offset = -offset
        if int(rm["m"]) < 1:
            raise ParseError("modulus must be positive")
        rules.append(ScheduleRule(int(rm["s"]), int(rm["m"]), parse_rational(rm["a"]), offset))
    exceptions = []
    for chunk in (match["exc"] or "").split(";"):
        if not chunk.strip():
            continue
        em = _EXC_RE.fullmatch(chunk)
        if em is None:
            raise ParseError(f"malformed schedule exception: {chunk.strip()!r}")
        exceptions.append((int(em["i"]), int(em["j"])))
    return ScheduleMap(tuple(rules), tuple(exceptions))


def compose(s: ExpPeriodicStream, sched: ScheduleMap) -> ExpPeriodicStream:
    """The stream e -> s(sched(e))."""
    exc = sched.exception_map
    P, m = s.prefix_length, s.period
    cutoff = max(exc, default=0)
    for rule in sched.rules:
        cutoff = max(cutoff, math.floor((P - rule.offset) / rule.slope))
    cutoff = max(cutoff, 0)
    den = math.lcm(*(rule.slope.denominator for rule in sched.rules))
    period = math.lcm(sched.rule_modulus, m * den)

    prefix = tuple(s.evaluate(sched(e)) for e in range(1, cutoff + 1))
    coeffs: dict[Fraction, list[Fraction]] = {}
    for r in range(period):
        e0 = r + 1 + period * ((cutoff - r) // period + 1)
        rule = sched.rule_for(e0)
        v = int(rule.image(e0))
        for b, cs in s.terms:
            c = cs[(v - 1) % m]
            if not c:
                continue
            rho = rational_power(b, rule.slope)
            coeffs.setdefault(rho, [Fraction(0)] * period)[r] += c * b**v / rho**e0
    return ExpPeriodicStream(prefix, period, tuple((b, tuple(cs)) for b, cs in coeffs.items()))


# ---------------------------------------------------------------------------
# worlds


@dataclass(frozen=True)
class DistinctAcrossWorlds:
    def __str__(self):
        return "distinct"


@dataclass(frozen=True)
class SharedRegistry:
    name: str
    schedule: ScheduleMap

    def __str__(self):
        return f"shared registry={self.name} schedule={self.schedule.to_literal()}"


IdentityPolicy = Union[DistinctAcrossWorlds, SharedRegistry]
DISTINCT = DistinctAcrossWorlds()


@dataclass(frozen=True)
class IdentityTag:
    kind: str  # "distinct" (owner = world name) or "shared" (owner = registry)
    owner: str
    index: int


@dataclass(frozen=True)
class PersonRecord:
    slot: int
    birth_time: Fraction
    lifespan: Fraction
    segment_utils: tuple[tuple[Fraction, Fraction], ...]
    identity: IdentityTag
    world: str = field(default="", compare=False)

    @property
    def lifetime_utility(self) -> Fraction:
        return sum((u for _, u in self.segment_utils), Fraction(0))


@dataclass(frozen=True)
class World:
    """One birth per step: the slot-i person is born at start + (i - 1)*step,
    lives `lifespan`, split into equally long segments whose utilities are
    given (indexed by slot) by `segments`."""

    name: str
    start: Fraction
    step: Fraction
    lifespan: Fraction
    segments: tuple[ExpPeriodicStream, ...]
    identity: IdentityPolicy = DISTINCT

    def __post_init__(self):
        for attr in ("start", "step", "lifespan"):
            object.__setattr__(self, attr, to_fraction(getattr(self, attr)))
        object.__setattr__(self, "segments", tuple(self.segments))
        if self.step <= 0:
            raise ValueError("birth step must be positive")
        if self.lifespan <= 0:
            raise ValueError("lifespan must be positive")
        if not self.segments:
            raise ValueError("a world needs at least one segment")
        if isinstance(self.identity, SharedRegistry):
            self.identity.schedule.verify()

    @property
    def segment_duration(self) -> Fraction:
        return self.lifespan / len(self.segments)

    def birth_time(self, i: int) -> Fraction:
        return self.start + (i - 1) * self.step

    def identity_tag(self, slot: int) -> IdentityTag:
        if isinstance(self.identity, SharedRegistry):
            return IdentityTag("shared", self.identity.name, self.identity.schedule.inverse(slot))
        return IdentityTag("distinct", self.name, slot)

    def person(self, slot: int) -> PersonRecord:
        d = self.segment_duration
        return PersonRecord(
            slot=slot,
            birth_time=self.birth_time(slot),
            lifespan=self.lifespan,
            segment_utils=tuple((d, seg.evaluate(slot)) for seg in self.segments),
            identity=self.identity_tag(slot),
            world=self.name,
        )

    def persons(self, n: int) -> list[PersonRecord]:
        return [self.person(i) for i in range(1, n + 1)]

    def to_worldspec(self) -> str:
        lines = [
            f"world {self.name}",
            f"births start={self.start} step={self.step}",
            f"lifespan {self.lifespan}",
            f"identity {self.identity}",
        ]
        lines += [f"segment {seg.to_literal()}" for seg in self.segments]
        return "\n".join(lines) + "\n"


def lifetime_stream(w: World) -> ExpPeriodicStream:
    """Slot i -> lifetime utility of the person born in slot i."""
    return stream_sum(w.segments)


def realized_time_stream(w: World) -> ExpPeriodicStream:
    """Grid period t -> total utility realized in that period.

    The grid unit is one segment and starts at the first birth; each segment
    belongs wholly to the one grid period it occupies.
    """
    d = w.segment_duration
    q = w.step / d
    if q.denominator != 1:
        raise NonCommensurableGrid(
            f"world {w.name}: birth step {w.step} is not a multiple of segment length {d}"
        )
    q = int(q)
    return stream_sum(seg.dilate(q).shift(j) for j, seg in enumerate(w.segments))


def person_stream(w: World) -> ExpPeriodicStream:
    """Identity index -> lifetime utility of that person.

    For distinct identities the index is the slot; for a shared registry it
    is the registry index e, placed in slot schedule(e)."""
    life = lifetime_stream(w)
    if isinstance(w.identity, SharedRegistry):
        return compose(life, w.identity.schedule)
    return life


def apply_schedule(
    state_stream: ExpPeriodicStream,
    sched: ScheduleMap,
    registry: str,
    name: str | None = None,
) -> World:
    """Incubate registry member e in period sched(e); period t has utility state_stream(t)."""
    sched.verify()
    return World(
        name=name or f"{registry}-scheduled",
        start=Fraction(1),
        step=Fraction(1),
        lifespan=Fraction(1),
        segments=(state_stream,),
        identity=SharedRegistry(registry, sched),
    )


def ndv_related(p: PersonRecord, q: PersonRecord) -> bool:
    """Counterparts: born at the same time (in whichever worlds)."""
    return p.birth_time == q.birth_time


def ndv_partition(ws: Sequence[World], horizon: int = 10) -> list[tuple[PersonRecord, ...]]:
    """Counterpart classes of slots 1..horizon; class i holds each world's slot-i person."""
    if not ws:
        return []
    schedule = (ws[0].start, ws[0].step)
    for w in ws[1:]:
        if (w.start, w.step) != schedule:
            raise ScheduleMismatch(f"world {w.name} has a different birth schedule from {ws[0].name}")
    return [tuple(w.person(i) for w in ws) for i in range(1, horizon + 1)]


# ---------------------------------------------------------------------------
# location views


class LocationView(enum.Enum):
    TIMES = "times"
    PERSONS = "persons"
    SLOTS = "slots"

    @property
    def ordered(self) -> bool:
        return self is not LocationView.PERSONS

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Aligned:
    s1: ExpPeriodicStream
    s2: ExpPeriodicStream
    ordered: bool


@dataclass(frozen=True)
class NotSameLocations:
    reason: str


def align_locations(w1: World, w2: World, v: LocationView) -> Aligned | NotSameLocations:
    if v is LocationView.TIMES:
        if (w1.start, w1.segment_duration) != (w2.start, w2.segment_duration):
            return NotSameLocations("different time grids")
        return Aligned(realized_time_stream(w1), realized_time_stream(w2), True)
    if v is LocationView.SLOTS:
        if (w1.start, w1.step) != (w2.start, w2.step):
            return NotSameLocations("different birth schedules")
        return Aligned(lifetime_stream(w1), lifetime_stream(w2), True)
    i1, i2 = w1.identity, w2.identity
    if isinstance(i1, SharedRegistry) and isinstance(i2, SharedRegistry):
        if i1.name != i2.name:
            return NotSameLocations("different registries")
        return Aligned(person_stream(w1), person_stream(w2), False)
    if isinstance(i1, DistinctAcrossWorlds) and isinstance(i2, DistinctAcrossWorlds) and w1.name == w2.name:
        return Aligned(lifetime_stream(w1), lifetime_stream(w2), False)
    return NotSameLocations("disjoint populations")


# ---------------------------------------------------------------------------
# worldspec files


def parse_worldspec(text: str) -> World:
    name = births = lifespan = None
    identity: IdentityPolicy = DISTINCT
    segments = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if key == "world":
                if not rest or " " in rest:
                    raise ParseError("expected `world <name>`")
                name = rest
            elif key == "births":
                m = re.fullmatch(r"start=(\S+)\s+step=(\S+)", rest)
                if m is None:
                    raise ParseError("expected `births start=<rat> step=<rat>`")
                births = (parse_rational(m[1]), parse_rational(m[2]))
            elif key == "lifespan":
                lifespan = parse_rational(rest)
            elif key == "identity":
                if rest == "distinct":
                    identity = DISTINCT
                else:
                    m = re.fullmatch(r"shared\s+registry=(\S+)\s+schedule=(.*)", rest)
                    if m is None:
                        raise ParseError("expected `identity distinct` or `identity shared registry=<name> schedule=<literal>`")
                    identity = SharedRegistry(m[1], parse_schedule(m[2]))
            elif key == "segment":
                segments.append(parse_stream(rest))
            else:
                raise ParseError(f"unknown directive {key!r}")
        except ParseError as exc:
            raise ParseError(str(exc), line=lineno) from None
    for what, value in (("world", name), ("births", births), ("lifespan", lifespan)):
        if value is None:
            raise ParseError(f"missing `{what}` line")
    if not segments:
        raise ParseError("missing `segment` line")
    try:
        return World(name, births[0], births[1], lifespan, tuple(segments), identity)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def load_world(path: str | Path) -> World:
    return parse_worldspec(Path(path).read_text())
