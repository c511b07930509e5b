"""Brute-force cross-checks of the symbolic stream analysis, and explicit
enumerations showing why the person-sum criterion can be order-dependent."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Iterator, Sequence

from .errors import Discrepancy, NotApplicable
from .stream import (
    INF,
    ExpPeriodicStream,
    classify_partial_sums,
    eventual_sign_profile,
    format_ext,
    liminf_limsup,
    partial_sum,
    sign,
    signed_part_summability,
)


@dataclass
class OracleReport:
    subject: str
    lines: list[str] = field(default_factory=list)

    def ok(self, check: str, detail: str = "") -> None:
        self.lines.append(f"ok\t{check}\t{detail}".rstrip())

    def fail(self, check: str, detail: str) -> None:
        raise Discrepancy(f"{self.subject}: {check}: {detail}")

    def render(self) -> str:
        return "\n".join(self.lines) + "\n"


def check_stream_analysis(
    s: ExpPeriodicStream,
    horizon: int,
    analyzed: ExpPeriodicStream | None = None,
) -> OracleReport:
    """Compare the symbolic analysis of `analyzed` (default: s) with direct
    evaluation of s up to `horizon`. Raises Discrepancy on any mismatch."""
    a = s if analyzed is None else analyzed
    if horizon < a.prefix_length + 10 * a.period:
        raise ValueError(f"horizon {horizon} is shorter than prefix + 10 periods")
    report = OracleReport(s.to_literal())
    values = [s.evaluate(t) for t in range(1, horizon + 1)]
    sums, acc = [], Fraction(0)
    for v in values:
        acc += v
        sums.append(acc)

    for n in range(1, horizon + 1):
        closed = partial_sum(a, n)
        if closed != sums[n - 1]:
            report.fail("partial_sum", f"S({n}) closed form {closed} != iterated {sums[n - 1]}")
    report.ok("partial_sum", f"n=1..{horizon}")

    prof = eventual_sign_profile(a)
    for t in range(prof.threshold, horizon + 1):
        if sign(values[t - 1]) != prof.sign_at(t):
            report.fail("sign_profile", f"s({t}) = {values[t - 1]} contradicts {prof}")
    report.ok("sign_profile", str(prof))

    lo, hi = liminf_limsup(a)
    start = max(prof.threshold, a.prefix_length + 1)
    limits = []
    for r in range(a.period):
        coeffs = a.class_coefficients(r)
        ts = [t for t in range(start, horizon + 1) if (t - 1) % a.period == r]
        top = max(coeffs, default=None)
        if top is not None and top > 1:
            lim = INF if coeffs[top] > 0 else -INF
            if len(ts) > 1:
                first, last = values[ts[0] - 1], values[ts[-1] - 1]
                if (lim == INF and not last > first) or (lim == -INF and not last < first):
                    report.fail("liminf_limsup", f"class {r} does not move toward {format_ext(lim)}")
        else:
            lim = coeffs.get(Fraction(1), Fraction(0))
            for t in ts:
                slack = sum((abs(c) * b**t for b, c in coeffs.items() if b < 1), Fraction(0))
                if abs(values[t - 1] - lim) > slack:
                    report.fail("liminf_limsup", f"s({t}) = {values[t - 1]} too far from class limit {lim}")
        limits.append(lim)
    if (min(limits), max(limits)) != (lo, hi):
        report.fail("liminf_limsup", "bounds differ from the class limits")
    report.ok("liminf_limsup", f"({format_ext(lo)}, {format_ext(hi)})")

    for n0, rates, lin in a._offset_expansions:
        j = 0
        while n0 + j * a.period <= horizon:
            n = n0 + j * a.period
            predicted = lin * j + sum((c * q**j for q, c in rates.items()), Fraction(0))
            actual = sums[n - 1] if n else Fraction(0)
            if predicted != actual:
                report.fail("classify_partial_sums", f"block expansion at n={n}: {predicted} != {actual}")
            j += 1
    cls = classify_partial_sums(a)
    tail = sums[horizon // 2 :]
    # compare S at the same offset modulo the period
    earlier = sums[horizon - 1 - a.period * ((horizon // 2) // a.period)]
    if cls.kind == "DivergesPlus" and not sums[-1] > earlier:
        report.fail("classify_partial_sums", "DivergesPlus but sampled tail does not rise")
    if cls.kind == "DivergesMinus" and not sums[-1] < earlier:
        report.fail("classify_partial_sums", "DivergesMinus but sampled tail does not fall")
    if cls.kind == "ConvergesTo":
        quarter = max(1, len(tail) // 4)
        early = max(abs(x - cls.liminf) for x in tail[:quarter])
        late = max(abs(x - cls.liminf) for x in tail[-quarter:])
        if late > early:
            report.fail("classify_partial_sums", f"partial sums drift away from {cls.liminf}")
    report.ok("classify_partial_sums", str(cls))

    pos, neg = signed_part_summability(a)
    it_pos = sum((v for v in values if v > 0), Fraction(0))
    it_neg = sum((-v for v in values if v < 0), Fraction(0))
    for label, claimed, seen in (("positive", pos, it_pos), ("negative", neg, it_neg)):
        if claimed != INF and seen > claimed:
            report.fail("signed_parts", f"{label} part {seen} after {horizon} terms exceeds {claimed}")
    if pos != INF and neg != INF and cls.kind != "ConvergesTo":
        report.fail("signed_parts", f"finite signed parts but partial sums {cls}")
    report.ok("signed_parts", f"pos={format_ext(pos)} neg={format_ext(neg)}")
    return report


# ---------------------------------------------------------------------------
# enumerations of a union population


@dataclass(frozen=True)
class Enumeration:
    persons: tuple[tuple[int, int], ...]  # (part, index within part)
    differences: tuple[Fraction, ...]
    running_sums: tuple[Fraction, ...]

    def lines(self) -> list[str]:
        return [
            f"{i}\tpart{p}:{k}\t{d}\t{s}"
            for i, ((p, k), d, s) in enumerate(zip(self.persons, self.differences, self.running_sums), start=1)
        ]


def _pool(parts: Sequence[ExpPeriodicStream], want_negative: bool) -> Iterator[tuple[int, int, Fraction]]:
    """Persons of the union, in (index, part) order, filtered by sign."""
    profiles = [eventual_sign_profile(d) for d in parts]
    infinite = any((sg < 0) == want_negative for prof in profiles for sg in prof.signs)
    last = max(prof.threshold for prof in profiles)
    for k in count(1):
        if not infinite and k >= last:
            return
        for p, d in enumerate(parts):
            v = d.evaluate(k)
            if (v < 0) == want_negative:
                yield p, k, v


def wpc_witness(
    parts: Sequence[ExpPeriodicStream],
    kind: str,
    length: int = 100,
    spacing: int = 10,
) -> Enumeration:
    """An enumeration prefix whose running sum escapes in one direction.

    kind FrontLoadNegatives lists persons with negative difference and lets
    in the j-th person with nonnegative difference only once at least
    `spacing` positions have passed since the previous one and the running
    sum would still be at most -j afterwards. The running sum then tends to
    -inf while every person of the union is reached eventually.
    FrontLoadPositives is the mirror image.
    """
    pos, neg = Fraction(0), Fraction(0)
    for d in parts:
        p, q = signed_part_summability(d)
        pos, neg = pos + p, neg + q
    if kind == "FrontLoadNegatives":
        if neg != INF:
            raise NotApplicable("the negative part is finite")
        main, sparse = _pool(parts, True), _pool(parts, False)
    elif kind == "FrontLoadPositives":
        if pos != INF:
            raise NotApplicable("the positive part is finite")
        main, sparse = _pool(parts, False), _pool(parts, True)
    else:
        raise ValueError(f"unknown enumeration kind {kind!r}")

    direction = -1 if kind == "FrontLoadNegatives" else 1
    persons, diffs, sums = [], [], []
    acc = Fraction(0)
    pending = next(sparse, None)
    admitted, since = 0, 0
    for _ in range(length):
        since += 1
        if pending is not None and since > spacing and direction * (acc + pending[2]) >= admitted + 1:
            p, k, v = pending
            pending = next(sparse, None)
            admitted, since = admitted + 1, 0
        else:
            p, k, v = next(main)
        acc += v
        persons.append((p, k))
        diffs.append(v)
        sums.append(acc)
    return Enumeration(tuple(persons), tuple(diffs), tuple(sums))
