"""Exact exponential-periodic streams of rationals.

A stream lists explicit values for indices t = 1..P and, for t > P, is

    value(t) = sum over terms of coeffs[(t - 1) % period] * base**t

with distinct nonnegative rational bases. Every instance is kept in a
canonical form (merged bases, minimal period, minimal prefix), so two
streams are equal as sequences iff they compare equal as dataclasses.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import NotRepresentable, ParseError

# Finite values are Fractions; the two infinities are the float sentinels.
ExtRat = Union[Fraction, float]
INF = math.inf

Term = tuple[Fraction, tuple[Fraction, ...]]


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, str or Fraction")
    return Fraction(x)


def sign(x) -> int:
    return (x > 0) - (x < 0)


def format_ext(x: ExtRat) -> str:
    if x == INF:
        return "+inf"
    if x == -INF:
        return "-inf"
    return str(x)


def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 2:
        return n
    lo, hi = 1, 1 << (n.bit_length() // k + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        p = mid**k
        if p == n:
            return mid
        if p < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def rational_power(b: Fraction, exponent: Fraction) -> Fraction:
    """b**exponent for b > 0, exact; raises NotRepresentable if irrational."""
    exponent = to_fraction(exponent)
    if b == 1:
        return Fraction(1)
    if exponent.denominator == 1:
        return b ** int(exponent)
    q = exponent.denominator
    num, den = _iroot(b.numerator, q), _iroot(b.denominator, q)
    if num is None or den is None:
        raise NotRepresentable(f"{b}**{exponent} is irrational")
    return Fraction(num, den) ** exponent.numerator


def _lift(coeffs: Sequence[Fraction], period: int) -> list[Fraction]:
    m = len(coeffs)
    return [coeffs[r % m] for r in range(period)]


def _tail_value(terms: Sequence[Term], period: int, t: int) -> Fraction:
    r = (t - 1) % period
    total = Fraction(0)
    for base, coeffs in terms:
        c = coeffs[r]
        if c:
            total += c * base**t
    return total


def _canonical(prefix, period, terms):
    merged: dict[Fraction, list[Fraction]] = {}
    for base, coeffs in terms:
        if base < 0:
            raise ValueError(f"negative base {base}")
        if base == 0:
            # 0**t vanishes for every t >= 1
            continue
        acc = merged.setdefault(base, [Fraction(0)] * period)
        for r, c in enumerate(coeffs):
            acc[r] += c
    kept = {b: cs for b, cs in merged.items() if any(cs)}
    new_period = period
    for p in range(1, period + 1):
        if period % p == 0 and all(
            cs[r] == cs[r % p] for cs in kept.values() for r in range(period)
        ):
            new_period = p
            break
    new_terms = tuple((b, tuple(cs[:new_period])) for b, cs in sorted(kept.items()))
    pre = list(prefix)
    while pre and pre[-1] == _tail_value(new_terms, new_period, len(pre)):
        pre.pop()
    return tuple(pre), new_period, new_terms


@dataclass(frozen=True)
class ExpPeriodicStream:
    prefix: tuple[Fraction, ...] = ()
    period: int = 1
    terms: tuple[Term, ...] = ()

    def __post_init__(self):
        if not isinstance(self.period, int) or self.period < 1:
            raise ValueError(f"period must be a positive integer, got {self.period!r}")
        prefix = tuple(to_fraction(v) for v in self.prefix)
        terms = []
        bases = set()
        for base, coeffs in self.terms:
            base = to_fraction(base)
            coeffs = tuple(to_fraction(c) for c in coeffs)
            if len(coeffs) != self.period:
                raise ValueError(
                    f"term with base {base} has {len(coeffs)} coefficients, period is {self.period}"
                )
            if base in bases:
                raise ValueError(f"duplicate base {base}")
            bases.add(base)
            terms.append((base, coeffs))
        prefix, period, terms = _canonical(prefix, self.period, terms)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "terms", terms)

    # construction helpers

    @classmethod
    def zero(cls) -> ExpPeriodicStream:
        return cls()

    @classmethod
    def constant(cls, c) -> ExpPeriodicStream:
        return cls(terms=((1, (c,)),))

    @classmethod
    def periodic(cls, values: Sequence, prefix: Sequence = ()) -> ExpPeriodicStream:
        return cls(prefix=tuple(prefix), period=len(values), terms=((1, tuple(values)),))

    @classmethod
    def geometric(cls, base, coeff, prefix: Sequence = ()) -> ExpPeriodicStream:
        return cls(prefix=tuple(prefix), terms=((base, (coeff,)),))

    # basic access

    @property
    def prefix_length(self) -> int:
        return len(self.prefix)

    @property
    def is_zero(self) -> bool:
        return not self.prefix and not self.terms

    @property
    def bases(self) -> tuple[Fraction, ...]:
        return tuple(b for b, _ in self.terms)

    def evaluate(self, t: int) -> Fraction:
        if t < 1:
            raise ValueError(f"index must be >= 1, got {t}")
        if t <= len(self.prefix):
            return self.prefix[t - 1]
        return _tail_value(self.terms, self.period, t)

    __call__ = evaluate

    def values(self, n: int) -> list[Fraction]:
        return [self.evaluate(t) for t in range(1, n + 1)]

    def class_coefficients(self, r: int) -> dict[Fraction, Fraction]:
        """Nonzero {base: coeff} active on residue class (t - 1) % period == r."""
        return {b: cs[r] for b, cs in self.terms if cs[r]}

    # pointwise arithmetic

    def _aligned(self, other: ExpPeriodicStream):
        P = max(len(self.prefix), len(other.prefix))
        m = math.lcm(self.period, other.period)
        return P, m

    def __add__(self, other: ExpPeriodicStream) -> ExpPeriodicStream:
        if not isinstance(other, ExpPeriodicStream):
            return NotImplemented
        P, m = self._aligned(other)
        prefix = [self.evaluate(t) + other.evaluate(t) for t in range(1, P + 1)]
        acc: dict[Fraction, list[Fraction]] = {}
        for s in (self, other):
            for b, cs in s.terms:
                lifted = _lift(cs, m)
                if b in acc:
                    acc[b] = [x + y for x, y in zip(acc[b], lifted)]
                else:
                    acc[b] = lifted
        return ExpPeriodicStream(tuple(prefix), m, tuple((b, tuple(cs)) for b, cs in acc.items()))

    def __neg__(self) -> ExpPeriodicStream:
        return self.scale(-1)

    def __sub__(self, other: ExpPeriodicStream) -> ExpPeriodicStream:
        if not isinstance(other, ExpPeriodicStream):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> ExpPeriodicStream:
        c = to_fraction(c)
        return ExpPeriodicStream(
            tuple(c * v for v in self.prefix),
            self.period,
            tuple((b, tuple(c * x for x in cs)) for b, cs in self.terms),
        )

    def shift(self, k: int) -> ExpPeriodicStream:
        """new(t) = self(t - k) for t > k, and 0 for t <= k."""
        if k < 0:
            raise ValueError("shift must be nonnegative")
        if k == 0:
            return self
        m = self.period
        terms = []
        for b, cs in self.terms:
            scale = b**-k
            terms.append((b, tuple(cs[(r - k) % m] * scale for r in range(m))))
        return ExpPeriodicStream((Fraction(0),) * k + self.prefix, m, tuple(terms))

    def dilate(self, q: int) -> ExpPeriodicStream:
        """new(g) = self(i) when g = q*(i - 1) + 1, and 0 at the other indices."""
        if q < 1:
            raise ValueError("dilation factor must be positive")
        if q == 1:
            return self
        P, m = len(self.prefix), self.period
        prefix = [Fraction(0)] * (q * P)
        for i, v in enumerate(self.prefix):
            prefix[q * i] = v
        terms = []
        for b, cs in self.terms:
            root = rational_power(b, Fraction(1, q))
            factor = root ** (q - 1)
            new = [Fraction(0)] * (q * m)
            for R in range(0, q * m, q):
                new[R] = cs[(R // q) % m] * factor
            terms.append((root, tuple(new)))
        return ExpPeriodicStream(tuple(prefix), q * m, tuple(terms))

    def interleave(self, other: ExpPeriodicStream) -> ExpPeriodicStream:
        """(self(1), other(1), self(2), other(2), ...)."""
        return self.dilate(2) + other.dilate(2).shift(1)

    # presentation

    def to_literal(self) -> str:
        parts = ["prefix[" + ",".join(str(v) for v in self.prefix) + "]", f"period={self.period}"]
        for b, cs in self.terms:
            parts.append(f"term base={b} coeffs[" + ",".join(str(c) for c in cs) + "]")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_literal()

    @cached_property
    def _offset_expansions(self):
        return _offset_expansions(self)


_RAT = r"-?\d+(?:/\d+)?"
_LITERAL_RE = re.compile(
    r"\s*(?:prefix\[(?P<prefix>[^\]]*)\]\s*)?period=(?P<period>\d+)(?P<terms>(?:\s+term\s+base=\S+\s+coeffs\[[^\]]*\])*)\s*"
)
_TERM_RE = re.compile(r"term\s+base=(?P<base>\S+)\s+coeffs\[(?P<coeffs>[^\]]*)\]")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(_RAT, text):
        raise ParseError(f"not a rational: {text!r}")
    return Fraction(text)


def _rat_list(text: str) -> list[Fraction]:
    text = text.strip()
    if not text:
        return []
    return [parse_rational(x) for x in text.split(",")]


def parse_stream(text: str) -> ExpPeriodicStream:
    """Parse `prefix[r1,...] period=m term base=b coeffs[c1,...,cm] ...`."""
    match = _LITERAL_RE.fullmatch(text)
    if match is None:
        raise ParseError(f"malformed stream literal: {text.strip()!r}")
    prefix = _rat_list(match["prefix"] or "")
    period = int(match["period"])
    terms = []
    for tm in _TERM_RE.finditer(match["terms"]):
        terms.append((parse_rational(tm["base"]), tuple(_rat_list(tm["coeffs"]))))
    try:
        return ExpPeriodicStream(tuple(prefix), period, tuple(terms))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


# ---------------------------------------------------------------------------
# analysis


def evaluate(s: ExpPeriodicStream, t: int) -> Fraction:
    return s.evaluate(t)


def subtract(a: ExpPeriodicStream, b: ExpPeriodicStream) -> ExpPeriodicStream:
    return a - b


def _geometric_count_sum(q: Fraction, count: int) -> Fraction:
    """sum_{k=0}^{count-1} q**k."""
    if q == 1:
        return Fraction(count)
    return (q**count - 1) / (q - 1)


def partial_sum(s: ExpPeriodicStream, n: int) -> Fraction:
    """S(n) = sum_{t=1}^{n} s(t), in closed form."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    P, m = len(s.prefix), s.period
    total = sum(s.prefix[: min(n, P)], Fraction(0))
    if n <= P:
        return total
    for b, cs in s.terms:
        q = b**m
        for r, c in enumerate(cs):
            if not c:
                continue
            t0 = P + 1 + (r - P) % m
            if t0 > n:
                continue
            count = (n - t0) // m + 1
            total += c * b**t0 * _geometric_count_sum(q, count)
    return total


def _eventual_sign(rates: dict[Fraction, Fraction], linear: Fraction = Fraction(0)) -> tuple[int, int]:
    """Eventual sign of f(j) = linear*j + sum coeff * rate**j over integers j >= 1.

    Returns (sign, J) with sign(f(j)) == sign for every j >= J. The bound is
    the usual dominant-term argument: every ratio g_k(j) / g_dom(j) is
    nonincreasing from J0 on, so once the weighted ratios sum below the
    dominant coefficient they stay below it.
    """
    comps = [((q, 0), c) for q, c in rates.items() if c]
    if linear:
        comps.append(((Fraction(1), 1), linear))
    if not comps:
        return 0, 1
    comps.sort(key=lambda kc: kc[0], reverse=True)
    (q_dom, lin_dom), a_dom = comps[0]
    rest = comps[1:]
    if not rest:
        return sign(a_dom), 1

    def ratio(key, j):
        q, lin = key
        if lin_dom:
            return q**j / j
        if lin:
            return j / q_dom**j
        return (q / q_dom) ** j

    def bound(j):
        return sum((abs(c) * ratio(k, j) for k, c in rest), Fraction(0))

    j0 = 1
    if not lin_dom and q_dom > 1 and any(k[1] for k, _ in rest):
        j0 = max(1, math.ceil(1 / (q_dom - 1)))
    target = abs(a_dom)
    lo, hi = j0 - 1, j0
    while bound(hi) >= target:
        lo, hi = hi, hi * 2
    # smallest j in (lo, hi] with bound(j) < target
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound(mid) < target:
            hi = mid
        else:
            lo = mid
    return sign(a_dom), hi


@dataclass(frozen=True)
class SignProfile:
    """Eventual sign of each residue class (t - 1) % period == r.

    For every t >= threshold, sign(s(t)) == signs[(t - 1) % period].
    """

    signs: tuple[int, ...]
    threshold: int
    all_zero: bool = False

    _LABELS = {1: "EventuallyPositive", -1: "EventuallyNegative", 0: "EventuallyZero"}

    def sign_at(self, t: int) -> int:
        return self.signs[(t - 1) % len(self.signs)]

    def labels(self) -> list[str]:
        if self.all_zero:
            return ["AllZero"]
        return [self._LABELS[s] for s in self.signs]

    def __str__(self) -> str:
        if self.all_zero:
            return "AllZero"
        return ",".join(self.labels()) + f" N={self.threshold}"


def eventual_sign_profile(s: ExpPeriodicStream) -> SignProfile:
    if s.is_zero:
        return SignProfile((0,), 1, all_zero=True)
    m, P = s.period, len(s.prefix)
    signs, start = [], P + 1
    for r in range(m):
        sg, T = _eventual_sign(s.class_coefficients(r))
        signs.append(sg)
        start = max(start, T)
    t = start - 1
    while t >= 1 and sign(s.evaluate(t)) == signs[(t - 1) % m]:
        t -= 1
    return SignProfile(tuple(signs), t + 1)


def _class_limit(coeffs: dict[Fraction, Fraction]) -> ExtRat:
    if not coeffs:
        return Fraction(0)
    top = max(coeffs)
    if top > 1:
        return INF if coeffs[top] > 0 else -INF
    return coeffs.get(Fraction(1), Fraction(0))


def liminf_limsup(s: ExpPeriodicStream) -> tuple[ExtRat, ExtRat]:
    limits = [_class_limit(s.class_coefficients(r)) for r in range(s.period)]
    return min(limits), max(limits)


def _offset_expansions(s: ExpPeriodicStream):
    """S along n = n0 + j*period, for each n0 in P .. P + period - 1.

    Each entry is (n0, rates, linear) with
    S(n0 + j*period) = linear*j + sum rates[q] * q**j   for every j >= 0.
    """
    P, m = len(s.prefix), s.period
    out = []
    for n0 in range(P, P + m):
        base_total = partial_sum(s, n0)
        rates: dict[Fraction, Fraction] = {}
        linear = Fraction(0)
        for b, cs in s.terms:
            block = sum(
                (cs[(t - 1) % m] * b**t for t in range(n0 + 1, n0 + m + 1)), Fraction(0)
            )
            q = b**m
            if q == 1:
                linear += block
            else:
                g = block / (q - 1)
                rates[q] = rates.get(q, Fraction(0)) + g
                base_total -= g
        rates[Fraction(1)] = rates.get(Fraction(1), Fraction(0)) + base_total
        out.append((n0, rates, linear))
    return out


def _expansion_limit(rates: dict[Fraction, Fraction], linear: Fraction) -> ExtRat:
    growing = [q for q, c in rates.items() if q > 1 and c]
    if growing:
        return INF if rates[max(growing)] > 0 else -INF
    if linear:
        return INF if linear > 0 else -INF
    return rates.get(Fraction(1), Fraction(0))


@dataclass(frozen=True)
class SumClass:
    """Asymptotic behavior of the partial sums S(n)."""

    kind: str  # ConvergesTo | DivergesPlus | DivergesMinus | Oscillates
    liminf: ExtRat
    limsup: ExtRat

    @property
    def limit(self) -> ExtRat | None:
        return self.liminf if self.kind != "Oscillates" else None

    def __str__(self) -> str:
        if self.kind == "ConvergesTo":
            return f"ConvergesTo({self.liminf})"
        if self.kind == "Oscillates":
            return f"Oscillates({format_ext(self.liminf)},{format_ext(self.limsup)})"
        return self.kind


def classify_partial_sums(s: ExpPeriodicStream) -> SumClass:
    limits = [_expansion_limit(rates, lin) for _, rates, lin in s._offset_expansions]
    lo, hi = min(limits), max(limits)
    if lo == hi:
        if lo == INF:
            return SumClass("DivergesPlus", lo, hi)
        if lo == -INF:
            return SumClass("DivergesMinus", lo, hi)
        return SumClass("ConvergesTo", lo, hi)
    return SumClass("Oscillates", lo, hi)


def partial_sum_threshold(s: ExpPeriodicStream, target: int) -> int | None:
    """Smallest N with sign(S(n)) == target for every n >= N, or None if none exists."""
    P, m = len(s.prefix), s.period
    start = P + 1
    for n0, rates, lin in s._offset_expansions:
        sg, J = _eventual_sign(rates, lin)
        if sg != target:
            return None
        start = max(start, n0 + J * m)
    n = start - 1
    while n >= 1 and sign(partial_sum(s, n)) == target:
        n -= 1
    return n + 1


def density(s: ExpPeriodicStream) -> ExtRat | None:
    """lim S(n)/n in the extended reals, None when it does not exist."""
    m = s.period
    limits = set()
    for _, rates, lin in s._offset_expansions:
        growing = [q for q, c in rates.items() if q > 1 and c]
        if growing:
            limits.add(INF if rates[max(growing)] > 0 else -INF)
        else:
            limits.add(lin / m)
    if len(limits) != 1:
        return None
    return limits.pop()


def _class_tail_sum(coeffs: dict[Fraction, Fraction], t0: int, m: int) -> Fraction:
    """sum_{k>=0} f(t0 + k*m) for a class whose bases are all < 1."""
    return sum((c * b**t0 / (1 - b**m) for b, c in coeffs.items()), Fraction(0))


def signed_part_summability(s: ExpPeriodicStream) -> tuple[ExtRat, ExtRat]:
    """(sum of max(s(t), 0), sum of max(-s(t), 0)); math.inf when infinite."""
    prof = eventual_sign_profile(s)
    m, P = s.period, len(s.prefix)
    start = max(prof.threshold, P + 1)
    pos, neg = Fraction(0), Fraction(0)
    for t in range(1, start):
        v = s.evaluate(t)
        if v > 0:
            pos += v
        else:
            neg -= v
    for r in range(m):
        sg = prof.signs[r]
        if sg == 0:
            continue
        coeffs = s.class_coefficients(r)
        if max(coeffs) >= 1:
            total = INF
        else:
            t0 = start + (r - (start - 1)) % m
            total = abs(_class_tail_sum(coeffs, t0, m))
        if sg > 0:
            pos += total
        else:
            neg += total
    return pos, neg


def iterated_partial_sums(s: ExpPeriodicStream, n: int) -> list[Fraction]:
    """[S(1), ..., S(n)] by direct accumulation."""
    out, acc = [], Fraction(0)
    for t in range(1, n + 1):
        acc += s.evaluate(t)
        out.append(acc)
    return out


def stream_sum(streams: Iterable[ExpPeriodicStream]) -> ExpPeriodicStream:
    total = ExpPeriodicStream.zero()
    for s in streams:
        total = total + s
    return total
