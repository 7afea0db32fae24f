from .additive import BSGResult, GapModel, bsg_subset, doubling, gap_fit, hermite_normal_form, lll_reduce
from .chang import (
    ChangRow,
    EnumerationCapError,
    chang_factorizations,
    chang_scan,
    gap_circle_count,
    max_circle_incidence,
)
from .circle import DirectionCircle, DirectionError, GoodArc, build_direction_circle, good_arcs
from .edges import GoodEdge, edge_arc, edges_by_cell, find_good_cells, find_good_edges
from .paths import CrossingCache, HSet, OrientedArc, P3Record, count_self_intersecting_P3, extract_H, write_differences
from .run import PipelineParams, PipelineReport, StageError, icbrt_ceil, run_pipeline

__all__ = [
    "BSGResult",
    "ChangRow",
    "CrossingCache",
    "DirectionCircle",
    "DirectionError",
    "EnumerationCapError",
    "GapModel",
    "GoodArc",
    "GoodEdge",
    "HSet",
    "OrientedArc",
    "P3Record",
    "PipelineParams",
    "PipelineReport",
    "StageError",
    "bsg_subset",
    "build_direction_circle",
    "chang_factorizations",
    "chang_scan",
    "count_self_intersecting_P3",
    "doubling",
    "edge_arc",
    "edges_by_cell",
    "extract_H",
    "find_good_cells",
    "find_good_edges",
    "gap_circle_count",
    "gap_fit",
    "good_arcs",
    "hermite_normal_form",
    "icbrt_ceil",
    "lll_reduce",
    "max_circle_incidence",
    "run_pipeline",
    "write_differences",
]
