"""Exact comparison of infinite worlds under times, persons and persons-at-times."""
from .stream import (
    INF,
    ExpPeriodicStream,
    SignProfile,
    SumClass,
    classify_partial_sums,
    density,
    evaluate,
    eventual_sign_profile,
    liminf_limsup,
    parse_stream,
    partial_sum,
    signed_part_summability,
    subtract,
)
from .world import (
    LocationView,
    ScheduleMap,
    ScheduleRule,
    World,
    align_locations,
    apply_schedule,
    lifetime_stream,
    load_world,
    ndv_partition,
    parse_schedule,
    parse_worldspec,
    person_stream,
    realized_time_stream,
)
from .criteria import (
    CriterionId,
    Outcome,
    Verdict,
    compare_all,
    interval_dominance,
    overtaking,
    pareto,
    sbi1,
    value_density,
    wpc,
)

__all__ = [
    "INF",
    "ExpPeriodicStream",
    "SignProfile",
    "SumClass",
    "classify_partial_sums",
    "density",
    "evaluate",
    "eventual_sign_profile",
    "liminf_limsup",
    "parse_stream",
    "partial_sum",
    "signed_part_summability",
    "subtract",
    "LocationView",
    "ScheduleMap",
    "ScheduleRule",
    "World",
    "align_locations",
    "apply_schedule",
    "lifetime_stream",
    "load_world",
    "ndv_partition",
    "parse_schedule",
    "parse_worldspec",
    "person_stream",
    "realized_time_stream",
    "CriterionId",
    "Outcome",
    "Verdict",
    "compare_all",
    "interval_dominance",
    "overtaking",
    "pareto",
    "sbi1",
    "value_density",
    "wpc",
]
