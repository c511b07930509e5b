"""Acceptance gate. Each test checks one acceptance criterion at its stated
tolerance (exact) and prints a single PASS/FAIL line."""
import random
import time
from fractions import Fraction
from itertools import combinations_with_replacement
from pathlib import Path

import pytest

import conftest
from strategies import assert_antisymmetric, brute_bijective, random_schedule, random_stream, random_world
from utilstreams import (
    ExpPeriodicStream,
    LocationView,
    ScheduleMap,
    apply_schedule,
    compare_all,
    lifetime_stream,
    liminf_limsup,
    load_world,
    ndv_partition,
    partial_sum,
    person_stream,
    realized_time_stream,
)
from utilstreams.criteria import wpc, wpc_difference
from utilstreams.oracle import check_stream_analysis, wpc_witness
from utilstreams.world import ndv_related

F = Fraction
CORPUS = Path(__file__).resolve().parents[1] / "corpus"


def world(name):
    return load_world(CORPUS / f"{name}.ws")


def verdict(matrix, criterion, view):
    return str(matrix.get(criterion, view))


class Gate:
    """Collects named sub-checks, prints one line, then asserts."""

    def __init__(self, number, title):
        self.number, self.title = number, title
        self.failed = []

    def check(self, label, ok, got=None):
        if not ok:
            self.failed.append(label if got is None else f"{label} (got {got})")

    def finish(self, capsys):
        status = "PASS" if not self.failed else "FAIL"
        line = f"ACCEPTANCE {self.number} {status} {self.title}"
        if self.failed:
            line += ": " + "; ".join(self.failed)
        with capsys.disabled():
            print("\n" + line)
        assert not self.failed, line


def test_criterion_1_ordeal(capsys):
    g = Gate(1, "Ordeal")
    ordeal, zero = world("ordeal"), world("zero")
    realized = realized_time_stream(ordeal).values(5)
    lifetimes = lifetime_stream(ordeal).values(5)
    g.check("realized values", realized == [-2, -4, -16, -64, -256], realized)
    g.check("lifetime values", lifetimes == [2, 8, 32, 128, 512], lifetimes)
    m = compare_all(ordeal, zero)
    for view, want in (("times", "StrictlyWorse"), ("slots", "StrictlyBetter"), ("persons", "NoVerdict(NotSameLocations)")):
        got = verdict(m, "pareto", view)
        g.check(f"pareto {view}", got == want, got)
    g.check("conflict flagged", "CONFLICT pareto:times pareto:slots" in {str(f) for f in m.flags})
    g.finish(capsys)


def test_criterion_2_depletion(capsys):
    g = Gate(2, "Depletion")
    c, d = world("depletion_wC"), world("depletion_wD")
    m = compare_all(c, d)
    sbi = m.get("sbi1", "slots")
    g.check("sbi1 slots", str(sbi) == "StrictlyBetter", sbi)
    c1, c2 = (F(part.split("=")[1]) for part in sbi.witness.split())
    lim_d = liminf_limsup(lifetime_stream(d))[1]
    lim_c = liminf_limsup(lifetime_stream(c))[0]
    g.check("witness gap", lim_d < c2 < c1 < lim_c, sbi.witness)
    persons = [cell for cell in m.cells if cell.view == "persons"]
    g.check("persons cells present", bool(persons))
    for cell in persons:
        g.check(f"{cell.label}", str(cell.verdict) == "NoVerdict(NotSameLocations)", cell.verdict)
    w = wpc(c, d)
    g.check("wpc silent", str(w) == "NoVerdict(Silent)", w)
    g.check("both parts infinite", w.witness == "pos=+inf neg=+inf", w.witness)
    sums = wpc_witness(wpc_difference(c, d), "FrontLoadNegatives", length=200).running_sums
    checkpoints = sums[29::10]
    g.check(
        "witness decreasing beyond position 30",
        all(b < a for a, b in zip(checkpoints, checkpoints[1:])),
        [str(x) for x in checkpoints],
    )
    g.finish(capsys)


def exhaustive_window_threshold(d, max_length=12, max_start=12):
    """Smallest L such that every window of length L..max_length starting at
    1..max_start has positive sum; None if even max_length fails."""
    vals = d.values(max_start + max_length)
    worst = 0
    for a in range(max_start):
        for length in range(1, max_length + 1):
            if sum(vals[a : a + length]) <= 0:
                worst = max(worst, length)
    return worst + 1 if worst < max_length else None


def test_criterion_3_cycles(capsys):
    g = Gate(3, "Cycles")
    w1, w2 = world("cycles_w1"), world("cycles_w2")
    m = compare_all(w1, w2)
    g.check("pareto slots", verdict(m, "pareto", "slots") == "NoVerdict(Silent)", verdict(m, "pareto", "slots"))
    g.check("overtaking slots", verdict(m, "overtaking", "slots") == "StrictlyBetter", verdict(m, "overtaking", "slots"))
    iv = m.get("interval_dominance", "slots")
    g.check("interval_dominance slots", str(iv) == "StrictlyBetter", iv)
    brute = exhaustive_window_threshold(lifetime_stream(w1) - lifetime_stream(w2))
    g.check("L agrees with exhaustive windows", iv.witness == f"L={brute}", f"{iv.witness} vs L={brute}")
    g.check("L = 3", iv.witness == "L=3", iv.witness)
    dens = m.get("density(simplified)", "slots")
    g.check("densities 5/3 vs 4/3", dens.witness == "d1=5/3 d2=4/3", dens.witness)
    g.finish(capsys)


def test_criterion_4_freezer(capsys):
    g = Gate(4, "Freezer")
    w, wss, b = world("freezer_w"), world("freezer_wss"), world("freezer_b")
    sched = wss.identity.schedule
    g.check("schedule is a bijection", sched.is_bijective() and brute_bijective(sched))
    m = compare_all(wss, w)
    pp = m.get("pareto", "persons")
    g.check("ParetoPersons(w**, w)", str(pp) == "StrictlyBetter", pp)
    g.check("one strict difference", pp.witness == "strict=1", pp.witness)
    e1 = (person_stream(wss).evaluate(1), person_stream(w).evaluate(1))
    g.check("e1: 2 vs 1", e1 == (2, 1), e1)
    g.check("slot utilities identical", lifetime_stream(w) == lifetime_stream(wss))
    g.check("ParetoSlots(w, w**) Equal", verdict(m, "pareto", "slots") == "Equal", verdict(m, "pareto", "slots"))
    g.check("disagreement flagged", "DISAGREEMENT pareto:persons pareto:slots" in {str(f) for f in m.flags})

    mb = compare_all(w, b)
    diffs = (lifetime_stream(w) - lifetime_stream(b)).values(12)
    g.check("slot differences 0,+1,0,0", diffs == [0, 1, 0, 0] * 3, diffs)
    g.check("ParetoSlots(A, B)", verdict(mb, "pareto", "slots") == "StrictlyBetter", verdict(mb, "pareto", "slots"))
    g.check("ParetoPersons favors B", verdict(mb, "pareto", "persons") == "StrictlyWorse", verdict(mb, "pareto", "persons"))
    g.check("conflict flagged", "CONFLICT pareto:persons pareto:slots" in {str(f) for f in mb.flags})
    g.finish(capsys)


def test_criterion_5_property_suites(capsys):
    g = Gate(5, "Property suites")

    rng = random.Random(20261016)
    mismatches = 0
    for _ in range(500):
        s = random_stream(rng)
        acc = F(0)
        for n, v in enumerate(s.values(200), start=1):
            acc += v
            mismatches += partial_sum(s, n) != acc
    g.check("closed-form partial sums on 500 streams to n=200", mismatches == 0, mismatches)

    worlds = [world(n) for n in ("depletion_wC", "depletion_wD", "cycles_w1", "cycles_w2", "ordeal")]
    people = [p for cls in ndv_partition(worlds, horizon=6) for p in cls]
    reflexive = all(ndv_related(p, p) for p in people)
    symmetric = all(ndv_related(p, q) == ndv_related(q, p) for p in people for q in people)
    transitive = all(
        ndv_related(p, r) for p in people for q in people if ndv_related(p, q) for r in people if ndv_related(q, r)
    )
    g.check("ndv equivalence laws", reflexive and symmetric and transitive)

    paths = sorted(CORPUS.glob("*.ws"))
    problem = None
    try:
        for i, j in combinations_with_replacement(range(len(paths)), 2):
            assert_antisymmetric(load_world(paths[i]), load_world(paths[j]))
        rng = random.Random(7)
        for _ in range(100):
            assert_antisymmetric(random_world(rng, "a"), random_world(rng, rng.choice(["a", "b"])))
    except AssertionError as exc:
        problem = exc
    g.check("swap antisymmetry", problem is None, problem)

    rng = random.Random(11)
    state = ExpPeriodicStream.periodic([1, 2, 1, 3])
    reference = apply_schedule(state, ScheduleMap.identity(), "reg", "ref")
    invariant = 0
    for _ in range(20):
        sched = random_schedule(rng)
        moved = apply_schedule(state, sched, "reg", "moved")
        m = compare_all(reference, moved, [LocationView.SLOTS], ["pareto"])
        invariant += sched.is_bijective() and str(m.get("pareto", "slots")) == "Equal"
    g.check("slot utilities invariant under 20 bijections", invariant == 20, invariant)

    rng = random.Random(3)
    oracle_ok = 0
    for _ in range(100):
        s = random_stream(rng)
        check_stream_analysis(s, 200)
        oracle_ok += 1
    g.check("oracle suite", oracle_ok == 100)

    elapsed = time.perf_counter() - conftest.SESSION_START
    g.check("session under 60 s", elapsed < 60, f"{elapsed:.1f}s")
    g.finish(capsys)
