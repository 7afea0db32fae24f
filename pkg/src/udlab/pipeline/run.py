"""End-to-end pipeline: unit distances -> good edges -> P3s -> H -> BSG -> GAP -> circles."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

from ..exactgeom import Circle, as_rational, format_rational
from ..partition import assign_cells, build_line_partition, circle_in_zero_set
from ..pointsets import PointSet
from ..udgraph import (
    direction_spectrum,
    prune_min_degree,
    restrict_directions,
    top_directions,
    unit_pairs,
)
from .additive import bsg_subset, gap_fit
from .chang import ENUMERATION_CAP, EnumerationCapError, gap_circle_count, max_circle_incidence
from .circle import build_direction_circle, good_arcs
from .edges import edges_by_cell, find_good_cells, find_good_edges
from .paths import CrossingCache, count_self_intersecting_P3, extract_H

log = logging.getLogger(__name__)


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


def icbrt_ceil(n: int) -> int:
    """Smallest integer k with k^3 >= n."""
    if n <= 0:
        return 0
    k = round(n ** (1 / 3))
    while k**3 < n:
        k += 1
    while k > 0 and (k - 1) ** 3 >= n:
        k -= 1
    return k


def ceil_scaled_cbrt(c: Fraction, n: int) -> int:
    """ceil(c * n^(1/3)) computed exactly for rational c >= 0."""
    if c <= 0 or n <= 0:
        return 0
    # smallest k with k^3 >= c^3 n
    target = c**3 * n
    k = max(0, math.floor(float(c) * n ** (1 / 3)) - 2)
    while Fraction(k) ** 3 < target:
        k += 1
    return k


@dataclass(frozen=True)
class PipelineParams:
    c_prune: Fraction = Fraction(1, 4)
    C1: int = 4
    C2: Fraction = Fraction(1, 8)
    d_coeff: Fraction = Fraction(1, 4)
    k_directions: int | None = None  # None: ceil(n^(1/3))
    min_fraction: Fraction = Fraction(1, 4)
    enumeration_cap: int = ENUMERATION_CAP

    def __post_init__(self):
        for name in ("c_prune", "C2", "d_coeff", "min_fraction"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.c_prune < 0 or self.C2 < 0 or self.d_coeff <= 0:
            raise ValueError("pipeline constants must be positive")
        if self.C1 < 1:
            raise ValueError("C1 must be >= 1")
        if self.k_directions is not None and self.k_directions < 0:
            raise ValueError("k_directions must be >= 0")


def _jsonable(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


@dataclass
class PipelineReport:
    params: dict
    n: int
    r_sq: Fraction
    unit_distances: int = 0
    spectrum_size: int = 0
    k_directions: int = 0
    directions: list = field(default_factory=list)
    outside_hypothesis: bool = False
    restricted_distances: int = 0
    prune_threshold: int = 0
    n_pruned: int = 0
    pruned_distances: int = 0
    m: int = 0
    good_arcs: int = 0
    partition_degree: int = 0
    cell_count: int = 0
    occupied_cells: int = 0
    max_cell_occupancy: int = 0
    boundary_points: int = 0
    discarded_centers: int = 0
    good_edges: int = 0
    good_edges_per_cell: dict = field(default_factory=dict)
    good_cell_threshold: str = ""
    good_cells: int = 0
    p3_count: int = 0
    p3_per_cell: dict = field(default_factory=dict)
    h_pairs: int = 0
    h_max_multiplicity: int = 0
    h_differences: int = 0
    arc_triples: int = 0
    arc_triple_conflicts: int = 0
    bsg_size: int = 0
    bsg_doubling: Fraction | None = None
    bsg_flagged: bool = False
    gap_dimension: int | None = None
    gap_size: int | None = None
    gap_generators: list = field(default_factory=list)
    gap_lengths: list = field(default_factory=list)
    gap_economy: Fraction | None = None
    max_circle_center: list | None = None
    max_circle_incidence: int = 0
    circle_gap_count: int | None = None
    notes: list = field(default_factory=list)
    artifacts: dict | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("artifacts")
        return _jsonable(d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def check_consistency(self) -> list[str]:
        """Definitional relations between the stage counts; empty when consistent."""
        bad = []
        if self.good_edges != sum(self.good_edges_per_cell.values()):
            bad.append("good-edge total != sum over cells")
        if self.p3_count != sum(self.p3_per_cell.values()):
            bad.append("P3 total != sum over good cells")
        if self.restricted_distances > self.unit_distances:
            bad.append("restricted count exceeds total")
        if self.pruned_distances > self.restricted_distances:
            bad.append("pruning added edges")
        if self.good_cells > self.occupied_cells or self.occupied_cells > self.cell_count:
            bad.append("more good cells than occupied cells, or more occupied cells than cells")
        if self.h_pairs > self.p3_count:
            bad.append("more H pairs than P3s")
        return bad


def _cell_label(cell) -> str:
    return "".join("+" if s > 0 else "-" for s in cell)


def run_pipeline(P: PointSet, r_sq, params: PipelineParams | None = None, keep_artifacts: bool = False) -> PipelineReport:
    params = params or PipelineParams()
    r_sq = as_rational(r_sq)
    n = len(P)
    report = PipelineReport(params=asdict(params), n=n, r_sq=r_sq)
    art: dict[str, Any] = {}

    def stage(name, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except Exception as exc:  # annotate and re-raise with the stage name
            raise StageError(name, exc) from exc

    G = stage("unit_pairs", unit_pairs, P, r_sq)
    spectrum = direction_spectrum(G)
    report.unit_distances = len(G.edges)
    report.spectrum_size = len(spectrum)

    k = params.k_directions if params.k_directions is not None else icbrt_ceil(n)
    report.k_directions = k
    report.outside_hypothesis = k > icbrt_ceil(n)
    if report.outside_hypothesis:
        report.notes.append("k_directions exceeds ceil(n^(1/3)): outside the few-directions regime")
    D = stage("top_directions", top_directions, spectrum, k)
    report.directions = [list(d) for d in sorted(D)]
    GD = stage("restrict_directions", restrict_directions, G, D)
    report.restricted_distances = len(GD.edges)

    t = ceil_scaled_cbrt(params.c_prune, n)
    report.prune_threshold = t
    core = stage("prune_min_degree", prune_min_degree, GD, t)
    Pp = core.induced_points()
    report.n_pruned = len(Pp)
    report.pruned_distances = len(core.edges)
    log.info("n=%d U=%d U_D=%d pruned to %d points (t=%d)", n, len(G.edges), len(GD.edges), len(Pp), t)

    dc = stage("build_direction_circle", build_direction_circle, D, r_sq)
    report.m = dc.m
    arcs = good_arcs(dc, params.C1) if dc.m >= 2 else []
    report.good_arcs = len(arcs)
    if report.n_pruned == 0:
        report.notes.append("pruning removed every point")
        report.artifacts = art if keep_artifacts else None
        return report

    Gp = stage("unit_pairs", lambda: restrict_directions(unit_pairs(Pp, r_sq), D))
    d = ceil_scaled_cbrt(params.d_coeff, n)
    F = stage("build_line_partition", build_line_partition, Pp, d)
    cells = stage("assign_cells", assign_cells, Pp, F)
    report.partition_degree = F.degree
    report.cell_count = F.cell_count
    report.occupied_cells = len(cells.census())
    report.max_cell_occupancy = F.max_occupancy
    report.boundary_points = cells.boundary_count
    report.discarded_centers = sum(1 for p in Pp if circle_in_zero_set(Circle(p, r_sq), F))

    edges = stage("find_good_edges", find_good_edges, Pp, Gp, dc, F, cells, params.C1)
    per_cell = edges_by_cell(edges)
    report.good_edges = len(edges)
    report.good_edges_per_cell = {_cell_label(c): len(v) for c, v in per_cell.items()}
    good = stage("find_good_cells", find_good_cells, edges, params.C2, n)
    report.good_cell_threshold = f"{format_rational(params.C2)} * {n}^(2/3)"
    report.good_cells = len(good)

    crosses = CrossingCache(Pp, r_sq)
    p3s = []
    for c in sorted(good):
        recs = stage("count_self_intersecting_P3", count_self_intersecting_P3, per_cell[c], Pp, r_sq, crosses)
        report.p3_per_cell[_cell_label(c)] = len(recs)
        p3s.extend(recs)
    report.p3_count = len(p3s)
    H = stage("extract_H", extract_H, p3s, Pp)
    report.h_pairs = len(H)
    report.h_max_multiplicity = H.max_multiplicity
    report.h_differences = H.distinct_differences
    report.arc_triples = len(H.triple_differences)
    report.arc_triple_conflicts = H.triple_conflicts
    art.update(P=Pp, graph=Gp, circle=dc, partition=F, cells=cells, edges=edges, good_cells=good, p3s=p3s, H=H)

    if len(H) == 0:
        report.notes.append("no self-intersecting P3s: additive stages skipped")
        report.artifacts = art if keep_artifacts else None
        return report

    bsg = stage("bsg_subset", bsg_subset, Pp, H, params.min_fraction)
    report.bsg_size = len(bsg.points)
    report.bsg_doubling = bsg.doubling
    report.bsg_flagged = bsg.flagged
    gap = stage("gap_fit", gap_fit, bsg.points)
    report.gap_dimension = gap.dimension
    report.gap_size = gap.size
    report.gap_generators = [[g.x, g.y] for g in gap.generators]
    report.gap_lengths = list(gap.lengths)
    report.gap_economy = Fraction(gap.size, len(bsg.points))
    center, count = stage("max_circle_incidence", max_circle_incidence, bsg.points, Pp, r_sq)
    report.max_circle_center = [center.x, center.y]
    report.max_circle_incidence = count
    try:
        report.circle_gap_count = gap_circle_count(gap, Circle(center, r_sq), params.enumeration_cap)
    except EnumerationCapError as exc:
        report.notes.append(str(exc))
    art.update(bsg=bsg, gap=gap)
    report.artifacts = art if keep_artifacts else None
    return report
