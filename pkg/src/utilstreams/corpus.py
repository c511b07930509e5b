"""Golden cases: the four thought experiments as worldspec fixtures with the
verdicts they are expected to produce."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import EngineError
from .criteria import VerdictMatrix, compare_all, wpc_difference
from .oracle import check_stream_analysis, wpc_witness
from .world import (
    LocationView,
    World,
    lifetime_stream,
    load_world,
    person_stream,
    realized_time_stream,
)

DEFAULT_CORPUS_DIR = Path(__file__).resolve().parents[2] / "corpus"


@dataclass(frozen=True)
class ExpectedCell:
    criterion: str
    view: str
    verdict: str  # outcome value, or NoVerdict(<reason>)
    citation: str


@dataclass(frozen=True)
class Comparison:
    first: str
    second: str
    cells: tuple[ExpectedCell, ...]
    flags: tuple[str, ...] = ()  # e.g. "CONFLICT pareto:times pareto:slots"


@dataclass(frozen=True)
class CorpusCase:
    name: str
    comparisons: tuple[Comparison, ...]
    views: tuple[LocationView, ...] = (LocationView.TIMES, LocationView.PERSONS, LocationView.SLOTS)

    @property
    def files(self) -> list[str]:
        seen = []
        for c in self.comparisons:
            for f in (c.first, c.second):
                if f not in seen:
                    seen.append(f)
        return seen


def _cell(criterion, view, verdict, citation):
    return ExpectedCell(criterion, view, verdict, citation)


CASES: tuple[CorpusCase, ...] = (
    CorpusCase(
        "ordeal",
        (
            Comparison(
                "ordeal.ws",
                "zero.ws",
                (
                    _cell("pareto", "times", "StrictlyWorse", "Ordeal: realized utility negative in every period"),
                    _cell("pareto", "slots", "StrictlyBetter", "Ordeal: every de dicto person has a life worth living"),
                    _cell("pareto", "persons", "NoVerdict(NotSameLocations)", "Ordeal, identity-affecting choice"),
                ),
                ("CONFLICT pareto:times pareto:slots",),
            ),
            Comparison(
                "ordeal_shared.ws",
                "zero_shared.ws",
                (
                    _cell("pareto", "persons", "StrictlyBetter", "Ordeal, same individuals in both worlds"),
                    _cell("pareto", "times", "StrictlyWorse", "Ordeal: realized utility negative in every period"),
                ),
                ("CONFLICT pareto:times pareto:persons",),
            ),
        ),
    ),
    CorpusCase(
        "depletion",
        (
            Comparison(
                "depletion_wC.ws",
                "depletion_wD.ws",
                (
                    _cell("sbi1", "slots", "StrictlyBetter", "Depletion: conservation better with people at times"),
                    _cell("sbi1", "persons", "NoVerdict(NotSameLocations)", "Depletion: person-centered SBI1 silent"),
                    _cell("pareto", "persons", "NoVerdict(NotSameLocations)", "Depletion: no individuals in common"),
                    _cell("wpc", "union", "NoVerdict(Silent)", "Depletion, zero-padded union: order-dependent sums"),
                ),
            ),
        ),
    ),
    CorpusCase(
        "cycles",
        (
            Comparison(
                "cycles_w1.ws",
                "cycles_w2.ws",
                (
                    _cell("pareto", "slots", "NoVerdict(Silent)", "Cycles: good and bad periods swap"),
                    _cell("interval_dominance", "slots", "StrictlyBetter", "Cycles: more utility in every long interval"),
                    _cell("overtaking", "slots", "StrictlyBetter", "Cycles: order-sensitive principles rank w1 first"),
                    _cell("pareto", "persons", "NoVerdict(NotSameLocations)", "Cycles: no individuals in common"),
                ),
            ),
        ),
    ),
    CorpusCase(
        "freezer",
        (
            Comparison(
                "freezer_w.ws",
                "freezer_wss.ws",
                (
                    _cell("pareto", "persons", "StrictlyWorse", "Freezer: one embryo better off after reordering"),
                    _cell("pareto", "slots", "Equal", "Freezer: reordering leaves each period's utility unchanged"),
                    _cell("wpc", "union", "StrictlyWorse", "Freezer: single positive difference"),
                ),
                ("DISAGREEMENT pareto:persons pareto:slots",),
            ),
            Comparison(
                "freezer_w.ws",
                "freezer_b.ws",
                (
                    _cell("pareto", "slots", "StrictlyBetter", "Freezer: state A beats state B period by period"),
                    _cell("pareto", "persons", "StrictlyWorse", "Freezer: a B-schedule favoring every embryo"),
                ),
                ("CONFLICT pareto:persons pareto:slots",),
            ),
        ),
    ),
)

CASES_BY_NAME = {c.name: c for c in CASES}


def _verdict_text(matrix: VerdictMatrix, criterion: str, view: str) -> str:
    return str(matrix.get(criterion, view))


@dataclass
class CorpusReport:
    lines: list[str]
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def render(self) -> str:
        return "\n".join(self.lines) + "\n"


def _oracle_streams(w: World):
    yield "lifetime", lifetime_stream(w)
    yield "persons", person_stream(w)
    try:
        yield "realized", realized_time_stream(w)
    except EngineError:  # grid errors surface in the comparison itself
        return


def run_corpus(
    case: str | None = None,
    corpus_dir: str | Path | None = None,
    fmt: str = "text",
    oracle_horizon: int = 60,
) -> CorpusReport:
    """Evaluate every case, compare with the expected cells, and cross-check
    each derived stream with the brute-force oracle."""
    root = Path(corpus_dir) if corpus_dir else DEFAULT_CORPUS_DIR
    cases = CASES if case is None else (CASES_BY_NAME[case],)
    sep = "\t" if fmt == "machine" else " "
    lines: list[str] = []
    failures = 0
    for cs in sorted(cases, key=lambda c: c.name):
        worlds = {f: load_world(root / f) for f in cs.files}
        lines.append(sep.join(("case", cs.name)))
        for cmp in cs.comparisons:
            w1, w2 = worlds[cmp.first], worlds[cmp.second]
            matrix = compare_all(w1, w2, cs.views)
            lines.append(sep.join(("compare", w1.name, w2.name)))
            lines += matrix.lines(fmt)
            for cell in cmp.cells:
                got = _verdict_text(matrix, cell.criterion, cell.view)
                ok = got == cell.verdict
                failures += not ok
                status = "PASS" if ok else "FAIL"
                detail = cell.citation if ok else f"expected {cell.verdict}, got {got} [{cell.citation}]"
                lines.append(sep.join((status, cell.criterion, cell.view, detail)))
            present = {str(f) for f in matrix.flags}
            for flag in cmp.flags:
                ok = flag in present
                failures += not ok
                lines.append(sep.join(("PASS" if ok else "FAIL", "flag", flag)))
        for f in cs.files:
            for label, s in _oracle_streams(worlds[f]):
                horizon = max(oracle_horizon, s.prefix_length + 10 * s.period)
                try:
                    check_stream_analysis(s, horizon)
                    lines.append(sep.join(("PASS", "oracle", f"{worlds[f].name}/{label}")))
                except Exception as exc:
                    failures += 1
                    lines.append(sep.join(("FAIL", "oracle", f"{worlds[f].name}/{label}", str(exc))))
        if cs.name == "depletion":
            parts = wpc_difference(worlds["depletion_wC.ws"], worlds["depletion_wD.ws"])
            enum = wpc_witness(parts, "FrontLoadNegatives")
            checkpoints = enum.running_sums[29::10]
            ok = all(b < a for a, b in zip(checkpoints, checkpoints[1:]))
            failures += not ok
            lines.append(sep.join(("PASS" if ok else "FAIL", "wpc_witness", f"S(100)={enum.running_sums[-1]}")))
    lines.append(sep.join(("SUMMARY", "failures", str(failures))))
    return CorpusReport(lines, failures)
