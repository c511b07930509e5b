"""Shared generators for exponential-periodic streams."""
import random
from fractions import Fraction

from hypothesis import strategies as st

from utilstreams import ExpPeriodicStream, ScheduleMap, ScheduleRule, World, compare_all
from utilstreams.world import SharedRegistry

BASES = (Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4))

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def streams(draw, max_period=4, max_prefix=3, bases=BASES):
    period = draw(st.integers(1, max_period))
    chosen = draw(st.lists(st.sampled_from(bases), unique=True, max_size=3))
    terms = tuple(
        (b, tuple(draw(st.lists(small_rationals, min_size=period, max_size=period))))
        for b in chosen
    )
    prefix = tuple(draw(st.lists(small_rationals, max_size=max_prefix)))
    return ExpPeriodicStream(prefix, period, terms)


def random_rational(rng: random.Random, bound=5, max_den=4) -> Fraction:
    return Fraction(rng.randint(-bound * max_den, bound * max_den), rng.randint(1, max_den))


def random_stream(rng: random.Random, max_period=4, max_prefix=3, bases=BASES) -> ExpPeriodicStream:
    """Plain-random counterpart of `streams`, for fixed-seed bulk checks."""
    period = rng.randint(1, max_period)
    chosen = rng.sample(bases, rng.randint(0, 3))
    terms = tuple((b, tuple(random_rational(rng) for _ in range(period))) for b in chosen)
    prefix = tuple(random_rational(rng) for _ in range(rng.randint(0, max_prefix)))
    return ExpPeriodicStream(prefix, period, terms)


def naive_values(s: ExpPeriodicStream, n: int) -> list[Fraction]:
    """Evaluate from the raw definition, without the class helpers."""
    out = []
    for t in range(1, n + 1):
        if t <= len(s.prefix):
            out.append(s.prefix[t - 1])
        else:
            out.append(sum((cs[(t - 1) % s.period] * b**t for b, cs in s.terms), Fraction(0)))
    return out


def brute_bijective(sched: ScheduleMap, n: int = 400) -> bool:
    """Injective on 1..n and onto 1..n/4 (the maps here move points a bounded distance)."""
    images = [sched(i) for i in range(1, n + 1)]
    return len(set(images)) == n and set(range(1, n // 4 + 1)) <= set(images)


def random_schedule(rng: random.Random) -> ScheduleMap:
    """Permute residue blocks, then permute a few early images by exceptions."""
    m = rng.randint(1, 5)
    targets = list(range(1, m + 1))
    rng.shuffle(targets)
    rules = tuple(ScheduleRule(a % m, m, 1, targets[a - 1] - a) for a in range(1, m + 1))
    base = ScheduleMap(rules)
    sources = rng.sample(range(1, 3 * m + 4), rng.randint(0, 3))
    images = [base(i) for i in sources]
    rng.shuffle(images)
    return ScheduleMap(rules, tuple(zip(sources, images)))


def random_world(rng: random.Random, name: str) -> World:
    """Single-segment world, drawing on a shared registry about half the time."""
    seg = random_stream(rng, bases=(Fraction(1, 2), Fraction(1), Fraction(2)))
    identity = SharedRegistry("reg", ScheduleMap.identity()) if rng.random() < 0.5 else None
    kwargs = {"identity": identity} if identity else {}
    return World(name, 1, 1, 1, (seg,), **kwargs)


def assert_antisymmetric(w1, w2):
    forward = compare_all(w1, w2)
    backward = compare_all(w2, w1)
    for a, b in zip(forward.cells, backward.cells):
        assert (a.criterion, a.view) == (b.criterion, b.view)
        assert b.verdict == a.verdict.mirrored(), f"{a.label}: {a.verdict} vs {b.verdict}"
