import random
from fractions import Fraction
from itertools import combinations_with_replacement
from pathlib import Path

import pytest
from hypothesis import given, settings

from strategies import assert_antisymmetric, random_world, streams
from utilstreams import ExpPeriodicStream, LocationView, Outcome, compare_all, load_world
from utilstreams.criteria import (
    interval_dominance_streams,
    overtaking_streams,
    pareto_streams,
    sbi1_streams,
    separating_constants,
    value_density_streams,
    window_threshold,
    wpc_parts,
)
from utilstreams.oracle import wpc_witness
from utilstreams.stream import INF, liminf_limsup

F = Fraction
CORPUS = Path(__file__).resolve().parents[1] / "corpus"
CORPUS_WORLDS = sorted(CORPUS.glob("*.ws"))


@pytest.mark.parametrize("pair", list(combinations_with_replacement(range(len(CORPUS_WORLDS)), 2)))
def test_swap_antisymmetry_corpus(pair):
    w1, w2 = (load_world(CORPUS_WORLDS[i]) for i in pair)
    assert_antisymmetric(w1, w2)


@pytest.mark.parametrize("seed", range(100))
def test_swap_antisymmetry_random(seed):
    rng = random.Random(seed)
    w1 = random_world(rng, "a")
    w2 = random_world(rng, rng.choice(["a", "b"]))
    assert_antisymmetric(w1, w2)


@pytest.mark.parametrize("path", CORPUS_WORLDS, ids=lambda p: p.stem)
def test_self_comparison(path):
    w = load_world(path)
    m = compare_all(w, w)
    golden = {
        "pareto": "Equal",
        "sbi1": "NoVerdict(Silent)",
        "wpc": "Equal",
        "overtaking": "Equal",
        "interval_dominance": "NoVerdict(Silent)",
        "density(simplified)": "NoVerdict(Silent)",
    }
    for cell in m.cells:
        assert str(cell.verdict) == golden[cell.criterion], cell.label
    assert not m.flags


# stream-level checks


def test_pareto_witness_counts():
    d = ExpPeriodicStream.periodic([0], prefix=[1, 0, 2])
    v = pareto_streams(d, ExpPeriodicStream.zero())
    assert v.outcome is Outcome.BETTER and v.witness == "strict=2"


@given(streams(), streams())
def test_sbi1_gap_is_valid(a, b):
    v = sbi1_streams(a, b)
    if v.outcome is Outcome.NONE:
        return
    hi, lo = (a, b) if v.outcome is Outcome.BETTER else (b, a)
    c1, c2 = (F(x.split("=")[1]) for x in v.witness.split())
    assert liminf_limsup(lo)[1] < c2 < c1 < liminf_limsup(hi)[0]


@pytest.mark.parametrize("low, high", [(-INF, INF), (-INF, 3), (F(1), INF), (F(1), F(2))])
def test_separating_constants(low, high):
    c1, c2 = separating_constants(low, high)
    assert low < c2 < c1 < high


@given(streams(), streams())
@settings(max_examples=200, deadline=None)
def test_sbi1_strict_implies_order_sensitive_agreement(a, b):
    v = sbi1_streams(a, b)
    if not v.is_strict:
        return
    assert overtaking_streams(a, b).outcome is v.outcome
    assert interval_dominance_streams(a, b).outcome is v.outcome
    assert value_density_streams(a, b).outcome in (v.outcome, Outcome.NONE)


def brute_window_threshold(d, horizon=12):
    """Smallest L <= horizon with every window of length L..horizon (starting
    anywhere up to prefix + 2 periods) positive, else None."""
    vals = d.values(d.prefix_length + 2 * d.period + 2 * horizon)
    starts = range(d.prefix_length + 2 * d.period + 1)
    bad = [
        length
        for a in starts
        for length in range(1, horizon + 1)
        if sum(vals[a : a + length]) <= 0
    ]
    worst = max(bad, default=0)
    return worst + 1 if worst < horizon else None


@given(streams(bases=(F(1),), max_period=3))
@settings(max_examples=200)
def test_window_threshold_matches_enumeration(d):
    L = window_threshold(d)
    brute = brute_window_threshold(d, horizon=40)
    if L is not None and L <= 20:
        assert brute == L
    if brute is not None and brute <= 20:
        assert L == brute


def test_interval_dominance_undecided_outside_fragment():
    d = ExpPeriodicStream(period=2, terms=((2, (1, -1)),))
    assert str(interval_dominance_streams(d, ExpPeriodicStream.zero())) == "NoVerdict(Undecided)"


def test_overtaking_tie_at_zero():
    zero = ExpPeriodicStream.zero()
    d = ExpPeriodicStream.geometric(F(1, 2), 1, prefix=[F(-1, 2)])  # S(n) = -1/2^n
    assert str(overtaking_streams(d, zero)) == "NoVerdict(Silent)"
    # a vanishing tail with a nonzero limit still ranks
    assert overtaking_streams(ExpPeriodicStream.geometric(F(1, 2), 1), zero).outcome is Outcome.BETTER


# WPC


@given(streams(bases=(F(1, 3), F(1, 2))), streams(bases=(F(1, 3), F(1, 2))))
def test_wpc_finite_total_matches_iterated_sum(a, b):
    d = a - b
    v = wpc_parts([d])
    total = sum(d.values(d.prefix_length + 200), F(0))
    tail_bound = sum(abs(c) for _, cs in d.terms for c in cs) * F(1, 2) ** 200 * 2
    if v.outcome is Outcome.EQUAL:
        assert d.is_zero
    elif v.outcome is Outcome.BETTER:
        assert total > -tail_bound
    elif v.outcome is Outcome.WORSE:
        assert total < tail_bound
    else:
        assert abs(total) <= tail_bound


def test_wpc_finite_parts():
    parts = [ExpPeriodicStream.geometric(F(1, 2), 1, prefix=[-2])]  # 1/4 + 1/8 + ... - 2
    v = wpc_parts(parts)
    assert v.outcome is Outcome.WORSE and v.witness.endswith("total=-3/2")


@given(streams(), streams())
@settings(max_examples=80, deadline=None)
def test_wpc_agrees_with_enumerations(a, b):
    """When WPC is silent because both parts diverge, the two front-loaded
    enumerations push the running sum in opposite directions."""
    parts = [a, -b]
    v = wpc_parts(parts)
    if str(v) != "NoVerdict(Silent)" or "inf" not in v.witness:
        return
    down = wpc_witness(parts, "FrontLoadNegatives", length=300).running_sums
    up = wpc_witness(parts, "FrontLoadPositives", length=300).running_sums
    assert max(down[200:]) < 0 < min(up[200:])
    assert min(down[150:]) < min(down[:150]) and max(up[150:]) > max(up[:150])


def test_compare_all_machine_layout():
    c = load_world(CORPUS / "depletion_wC.ws")
    d = load_world(CORPUS / "depletion_wD.ws")
    lines = compare_all(c, d, [LocationView.SLOTS], ["pareto", "sbi1"]).lines("machine")
    assert lines == [
        "pareto\tslots\tNoVerdict\tSilent (mixed signs)",
        "sbi1\tslots\tStrictlyBetter\tc1=5/3 c2=4/3",
    ]
