"""Exit criteria, one test per criterion.

Each test appends a PASS/FAIL line that is printed in the pytest terminal
summary; ``python tests/test_acceptance.py`` prints the same lines directly.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

import oracles
import suite
from udlab import cli
from udlab.exactgeom import Circle, Line, Point
from udlab.partition import LinePartition, build_line_partition, circle_curve_crossings
from udlab.pipeline import count_self_intersecting_P3, run_pipeline
from udlab.pointsets import PointSet, circle_points, grid
from udlab.udgraph import direction_spectrum, prune_min_degree, restrict_directions, unit_pairs

pytestmark = pytest.mark.acceptance

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


# ----------------------------------------------------------------- 1


def _random_instance(rng):
    n = int(rng.integers(2, 301))
    den = int(rng.choice([1, 1, 2, 3]))
    side = int(rng.integers(3, 4 + int(math.isqrt(n)) * 2))
    xs = rng.integers(0, side * den + 1, size=n)
    ys = rng.integers(0, side * den + 1, size=n)
    return PointSet(Point(Fraction(int(x), den), Fraction(int(y), den)) for x, y in zip(xs, ys))


def test_c1_counting_oracles():
    rng = np.random.default_rng(20261016)
    t0 = time.perf_counter()
    mismatches = []
    with_edges = 0
    for k in range(500):
        P = _random_instance(rng)
        pts = list(P)
        groups = oracles.pairs_by_distance(pts)
        if rng.random() < 0.1 or not groups:
            r_sq = Fraction(int(rng.integers(1, 50)), int(rng.integers(1, 4)))
        else:
            top = sorted(groups, key=lambda d: (-len(groups[d]), d))[:4]
            r_sq = top[int(rng.integers(0, len(top)))]
        want_pairs = set(groups.get(r_sq, ()))
        G = unit_pairs(P, r_sq)
        got_pairs = {(e.i, e.j) for e in G.edges}
        with_edges += bool(want_pairs)
        if got_pairs != want_pairs:
            mismatches.append((k, "unit_pairs"))
            continue
        want_spec = oracles.spectrum(pts, sorted(want_pairs))
        if {tuple(d): c for d, c in direction_spectrum(G).items()} != want_spec:
            mismatches.append((k, "direction_spectrum"))
        dirs = sorted(want_spec)
        D = {d for d in dirs if rng.random() < 0.5}
        GD = restrict_directions(G, D)
        want_restricted = {(i, j) for i, j in want_pairs if oracles.direction_of(pts[i], pts[j]) in D}
        if {(e.i, e.j) for e in GD.edges} != want_restricted:
            mismatches.append((k, "restrict_directions"))
        t = int(rng.integers(0, 5))
        core = prune_min_degree(GD, t)
        alive = oracles.prune(range(len(pts)), want_restricted, t)
        want_core_edges = {(i, j) for i, j in want_restricted if i in alive and j in alive}
        if set(core.vertices) != alive or {(e.i, e.j) for e in core.edges} != want_core_edges:
            mismatches.append((k, "prune_min_degree"))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 120
    record(1, "counting oracles", ok, f"500 instances ({with_edges} with edges), {len(mismatches)} mismatches, {elapsed:.1f}s")
    assert not mismatches, mismatches[:5]
    assert elapsed < 120


# ----------------------------------------------------------------- 2


def test_c2_grid_formula():
    bad = []
    for m in range(2, 65):
        U = len(unit_pairs(grid(m), 1).edges)
        if U != 2 * m * (m - 1):
            bad.append((m, U))
    record(2, "grid formula", not bad, f"U(grid(m), 1) = 2m(m-1) for m in [2, 64]; {len(bad)} failures")
    assert not bad


# ----------------------------------------------------------------- 3, 4


@pytest.fixture(scope="module")
def sweep(tmp_path_factory):
    out = tmp_path_factory.mktemp("sweep") / "sweep.csv"
    cfg = cli.resolve_config("sweep", {"sweep": "8,16,32,64", "rsq": "popular", "out": str(out)}, env={})
    t0 = time.perf_counter()
    rows, s_u, s_ud = cli.cmd_sweep(cfg)
    return rows, s_u, s_ud, time.perf_counter() - t0


def test_c3_erdos_trend(sweep):
    rows, s_u, _, elapsed = sweep
    ratios = [Fraction(r.U, r.n) for r in rows]
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    ok = s_u is not None and s_u > 1.0 and increasing and elapsed < 300
    detail = f"slope {s_u:.4f}, U/n = {[float(round(x, 3)) for x in ratios]}, {elapsed:.1f}s"
    record(3, "grid trend", ok, detail)
    assert s_u > 1.0 and increasing and elapsed < 300


def test_c4_direction_restriction(sweep):
    rows, _, s_ud, _ = sweep
    ok = s_ud is not None and s_ud < Fraction(4, 3)
    per_run = ", ".join(f"n={r.n}:U_D={r.U_D}/|D|={r.k_directions}" for r in rows)
    record(4, "restricted slope", ok, f"slope {s_ud:.4f} < 4/3; {per_run}")
    assert ok


# ----------------------------------------------------------------- 5


def _random_partition(rng, circle: Circle, d: int) -> LinePartition:
    on = list(circle_points(8, circle))
    lines: list[Line] = []
    while len(lines) < d:
        kind = rng.integers(0, 4)
        if kind == 0:  # tangent at a rational circle point
            p = on[int(rng.integers(0, len(on)))]
            nx, ny = p.x - circle.center.x, p.y - circle.center.y
            cand = Line(nx, ny, -(nx * p.x + ny * p.y))
        elif kind == 1:  # chord through two circle points
            p, q = (on[int(i)] for i in rng.choice(len(on), 2, replace=False))
            cand = Line(q.y - p.y, p.x - q.x, -(q.y - p.y) * p.x - (p.x - q.x) * p.y)
        else:
            a, b = (int(v) for v in rng.integers(-5, 6, size=2))
            if a == 0 and b == 0:
                continue
            cand = Line(a, b, Fraction(int(rng.integers(-40, 41)), int(rng.integers(1, 4))))
        if cand not in lines:
            lines.append(cand)
    return LinePartition(tuple(lines))


def test_c5_bezout():
    rng = np.random.default_rng(5)
    worst = Fraction(0)
    violations = 0
    for _ in range(100):
        d = int(rng.integers(1, 21))
        r = Fraction(int(rng.integers(1, 8)), int(rng.integers(1, 3)))
        center = Point(Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 3))), Fraction(int(rng.integers(-5, 6))))
        c = Circle(center, r * r)
        F = _random_partition(rng, c, d)
        k = circle_curve_crossings(c, F)
        worst = max(worst, Fraction(k, 2 * d))
        violations += k > 2 * d
    record(5, "Bezout bound", violations == 0, f"100 instances, max crossings/(2d) = {float(worst):.3f}, {violations} violations")
    assert violations == 0


# ----------------------------------------------------------------- 6


def test_c6_partition_quality():
    ok, parts = True, []
    for m in (8, 16, 32):
        P = grid(m)
        n = len(P)
        d = next(k for k in range(1, n) if k**3 >= m * m)  # ceil(m^(2/3))
        F = build_line_partition(P, d)
        cells = Counter()
        for p in P:
            signs = tuple((v > 0) - (v < 0) for v in (line.evaluate(p) for line in F.lines))
            if 0 not in signs:
                cells[signs] += 1
        occ = max(cells.values())
        bound = 1 + d * (d + 1) // 2
        fine = F.cell_count <= bound and len(cells) <= F.cell_count and occ * d * d <= 8 * n and occ == F.max_occupancy
        ok &= fine
        parts.append(
            f"m={m} d={d} cells={F.cell_count} (occupied {len(cells)}, bound {bound}) max_occ={occ} (occ*d^2/n={occ * d * d / n:.2f})"
        )
    record(6, "partition quality", ok, "; ".join(parts))
    assert ok


# ----------------------------------------------------------------- 7, 8


def test_c7_p3_oracle():
    cells_checked, paths, mismatches = 0, 0, []
    for label, rep in suite.runs():
        art = rep.artifacts
        if "edges" not in art:
            continue
        P, r_sq = art["P"], rep.r_sq
        census = art["cells"].census()
        by_cell: dict = {}
        for e in art["edges"]:
            by_cell.setdefault(e.cell, []).append(e)
        for cell, edges in by_cell.items():
            if census.get(cell, 0) > 40:
                continue
            got = {(rec.q, rec.edges) for rec in count_self_intersecting_P3(edges, P, r_sq)}
            want = oracles.self_intersecting_paths(edges, P, r_sq)
            cells_checked += 1
            paths += len(want)
            if got != want:
                mismatches.append((label, cell, len(got), len(want)))
    ok = not mismatches and len(suite.runs()) == 50
    record(7, "P3 oracle", ok, f"50 runs, {cells_checked} cells, {paths} paths, {len(mismatches)} mismatches")
    assert ok, mismatches[:5]


def test_c8_h_multiplicity():
    extra = [(f"grid16-r{r}", run_pipeline(grid(16), r, keep_artifacts=True)) for r in (5, 25, 65)]
    worst, conflicts, runs_checked = 0, 0, 0
    for label, rep in list(suite.runs()) + extra:
        p3s = rep.artifacts.get("p3s", [])
        P = rep.artifacts.get("P")
        mult = Counter((rec.centers[0], rec.centers[2]) for rec in p3s)
        triples: dict = {}
        for rec in p3s:
            a, b = P[rec.centers[0]], P[rec.centers[2]]
            triples.setdefault(rec.arcs, set()).add((a.x - b.x, a.y - b.y))
        top = max(mult.values(), default=0)
        assert top == rep.h_max_multiplicity, label
        worst = max(worst, top)
        conflicts += sum(1 for v in triples.values() if len(v) != 1)
        runs_checked += 1
    ok = worst <= 16 and conflicts == 0
    record(8, "H multiplicity", ok, f"{runs_checked} runs, max multiplicity {worst} <= 16, {conflicts} arc-triple conflicts")
    assert ok


# ----------------------------------------------------------------- 9


def test_c9_chang_growth():
    t0 = time.perf_counter()
    cfg = cli.resolve_config("chang", {"N_list": "4,8,16,32"}, env={})
    rows = cli.chang_rows(cfg)
    elapsed = time.perf_counter() - t0
    for r in rows:  # independent recount of the reported maxima
        if r.alpha is not None:
            assert oracles.box_factorizations(r.N, r.alpha) == r.max_factorizations
        on_circle = sum(1 for a in range(r.N) for b in range(r.N) if a * a + b * b == r.circle_R)
        assert on_circle == r.max_circle
    within = all(r.max_circle**2 <= r.n and r.max_factorizations**2 <= r.n for r in rows)
    fe = [r.factor_exponent for r in rows if r.N >= 8]
    ce = [r.circle_exponent for r in rows if r.N >= 8]
    mono = all(b <= a for seq in (fe, ce) for a, b in zip(seq, seq[1:]))
    ok = within and mono and elapsed < 600
    detail = "; ".join(
        f"N={r.N}: fact={r.max_factorizations} circ={r.max_circle} sqrt(n)={r.N} "
        f"exp=({r.factor_exponent:.3f},{r.circle_exponent:.3f})"
        for r in rows
    )
    record(9, "GAP/Chang growth", ok, detail)
    assert within, "a maximum exceeds gap-size^(1/2)"
    assert mono, "normalized exponent increases between N=8 and N=32"


# ----------------------------------------------------------------- 10


def test_c10_bsg_gap_certificates():
    parts, ok = [], True
    for r_sq in (5, 25, 65):
        rep = run_pipeline(grid(16), r_sq, keep_artifacts=True)
        P, bsg, gap = rep.artifacts["P"], rep.artifacts["bsg"], rep.artifacts["gap"]
        A = [(p.x, p.y) for p in bsg.points]
        dbl = Fraction(len(oracles.difference_set(A)), len(A))
        elems = oracles.gap_elements(gap)
        covered = all(a in elems for a in A)
        size = math.prod(gap.lengths)
        fine = (
            4 * len(A) >= len(P)
            and dbl == bsg.doubling == rep.bsg_doubling
            and dbl <= 8
            and covered
            and gap.dimension <= 2
            and size == gap.size <= 4 * len(A)
        )
        ok &= fine
        parts.append(f"r_sq={r_sq}: |P'|={len(A)}/{len(P)} doubling={dbl} gap dim={gap.dimension} size={size}")
    record(10, "BSG/GAP certificates", ok, "; ".join(parts))
    assert ok


# ----------------------------------------------------------------- 11

DETERMINISM_RUNS = [
    ["construct", "--m", "6"],
    ["construct", "--kind", "random", "--n", "50", "--seed", "7", "--max-den", "3", "--box", "0,0,10,10"],
    ["construct", "--kind", "circle", "--m", "12", "--radius-sq", "25/4", "--center", "1/2,0"],
    ["count", "--m", "9", "--rsq", "popular"],
    ["count", "--m", "9", "--rsq", "5", "--format", "json", "--with-pipeline"],
    ["sweep", "--sweep", "4,6,8", "--with-pipeline"],
    ["sweep", "--sweep", "4,8", "--format", "json"],
    ["pipeline", "--m", "10", "--rsq", "5"],
    ["pipeline", "--kind", "random", "--n", "80", "--seed", "3", "--box", "0,0,12,12", "--rsq", "25"],
    ["chang", "--N", "2,4,8"],
]


def test_c11_determinism(tmp_path, capsys):
    differ = []
    for k, argv in enumerate(DETERMINISM_RUNS):
        outs = []
        for rep in range(2):
            path = tmp_path / f"run{k}-{rep}.out"
            code = cli.main(argv + ["--out", str(path)])
            assert code == 0, argv
            outs.append(path.read_bytes())
        if outs[0] != outs[1] or not outs[0]:
            differ.append(" ".join(argv))
    capsys.readouterr()
    ok = not differ
    record(11, "determinism", ok, f"{len(DETERMINISM_RUNS)} commands run twice, {len(differ)} differ")
    assert ok, differ


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
