"""Plane partitioning by products of lines, cell assignment and Bezout checks.

The partition polynomial is a product of lines, so a cell is simply a sign
vector. :func:`polynomial_bisect` shows the lifted ham-sandwich mechanism behind
general polynomial partitioning at toy scale.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .exactgeom import Circle, Line, QPoint, as_rational, line_circle_intersection
from .pointsets import PointSet

__all__ = [
    "Polynomial",
    "LinePartition",
    "CellAssignment",
    "BisectionCurve",
    "CUT_DIRECTIONS",
    "build_line_partition",
    "assign_cells",
    "circle_curve_crossings",
    "circle_polynomial",
    "circle_in_zero_set",
    "polynomial_bisect",
    "monomials",
    "write_partition",
]

Cell = tuple[int, ...]


# ---------------------------------------------------------------------------
# bivariate polynomials over Q, {(i, j): coeff} for coeff * x^i * y^j


class Polynomial:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        self.terms: dict[tuple[int, int], Fraction] = {}
        for mono, c in (terms or {}).items():
            c = as_rational(c)
            if c:
                self.terms[mono] = c

    @classmethod
    def from_line(cls, line: Line) -> "Polynomial":
        return cls({(1, 0): line.a, (0, 1): line.b, (0, 0): line.c})

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                m = (i1 + i2, j1 + j2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __call__(self, x, y) -> Fraction:
        return sum((c * x**i * y**j for (i, j), c in self.terms.items()), Fraction(0))

    def divmod_monic_x2(self, g: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        """Divide by g = x^2 + (terms of x-degree < 2), treating both as polynomials in x over Q[y]."""
        if g.terms.get((2, 0)) != 1 or any(i > 2 or (i == 2 and j > 0) for i, j in g.terms):
            raise ValueError("divisor must be monic of degree 2 in x")
        rest = Polynomial({m: c for m, c in g.terms.items() if m != (2, 0)})
        q: dict[tuple[int, int], Fraction] = {}
        r = Polynomial(self.terms)
        while True:
            lead = [(i, j) for i, j in r.terms if i >= 2]
            if not lead:
                return Polynomial(q), r
            i, j = max(lead)
            c = r.terms[(i, j)]
            mono = (i - 2, j)
            q[mono] = q.get(mono, 0) + c
            # r -= c * x^(i-2) y^j * g  ==  drop the lead term, subtract c*x^(i-2)y^j*rest
            shift = Polynomial({mono: c})
            r = Polynomial({m: v for m, v in r.terms.items() if m != (i, j)}) - shift * rest

    def __repr__(self):
        return f"Polynomial({dict(sorted(self.terms.items()))})"


def circle_polynomial(c: Circle) -> Polynomial:
    a, b = c.center
    return Polynomial({(2, 0): 1, (0, 2): 1, (1, 0): -2 * a, (0, 1): -2 * b, (0, 0): a * a + b * b - c.radius_sq})


# ---------------------------------------------------------------------------
# line partitions


@dataclass(frozen=True)
class LinePartition:
    lines: tuple[Line, ...]
    max_occupancy: int = 0

    def __post_init__(self):
        if len(set(self.lines)) != len(self.lines):
            raise ValueError("partition lines must be pairwise distinct")

    @property
    def degree(self) -> int:
        return len(self.lines)

    @property
    def cell_count(self) -> int:
        """Faces of the arrangement: 1 + #lines + sum over crossing points of (#lines through it - 1)."""
        through: dict[tuple[Fraction, Fraction], set[int]] = {}
        for (i, l1), (j, l2) in itertools.combinations(enumerate(self.lines), 2):
            det = l1.a * l2.b - l2.a * l1.b
            if det == 0:
                continue
            x = (l1.b * l2.c - l2.b * l1.c) / det
            y = (l2.a * l1.c - l1.a * l2.c) / det
            through.setdefault((x, y), set()).update((i, j))
        return 1 + len(self.lines) + sum(len(v) - 1 for v in through.values())

    def polynomial(self) -> Polynomial:
        out = Polynomial({(0, 0): 1})
        for line in self.lines:
            out = out * Polynomial.from_line(line)
        return out


@dataclass(frozen=True)
class CellAssignment:
    """Per point: its sign vector, or None when it lies on some line."""

    cells: tuple[Cell | None, ...]

    def census(self) -> dict[Cell, int]:
        out: dict[Cell, int] = {}
        for c in self.cells:
            if c is not None:
                out[c] = out.get(c, 0) + 1
        return dict(sorted(out.items()))

    @property
    def boundary_count(self) -> int:
        return sum(1 for c in self.cells if c is None)

    def members(self) -> dict[Cell, list[int]]:
        out: dict[Cell, list[int]] = {}
        for i, c in enumerate(self.cells):
            if c is not None:
                out.setdefault(c, []).append(i)
        return out


# cut normals in order: x, y, x+y, x-y
CUT_DIRECTIONS: tuple[tuple[int, int], ...] = ((1, 0), (0, 1), (1, 1), (1, -1))


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _sign_vector(p, lines: Sequence[Line]) -> Cell | None:
    out = []
    for line in lines:
        s = _sign(line.evaluate(p))
        if s == 0:
            return None
        out.append(s)
    return tuple(out)


def _median_cut(values: list[Fraction]) -> Fraction | None:
    """Threshold splitting ``values`` so that neither open side exceeds ceil(n/2).

    The midpoint between consecutive distinct values is used when one is
    balanced enough; otherwise the threshold is the median value itself and
    the tied values end up on the line.
    """
    vals = sorted(values)
    distinct = sorted(set(vals))
    if len(distinct) < 2:
        return None
    n = len(vals)
    best = None
    below = 0
    counts = {}
    for v in vals:
        counts[v] = counts.get(v, 0) + 1
    for lo, hi in zip(distinct, distinct[1:]):
        below += counts[lo]
        key = abs(2 * below - n)
        if best is None or key < best[0]:
            best = (key, (lo + hi) / 2, max(below, n - below))
    if best[2] <= (n + 1) // 2:
        return best[1]
    return vals[(n - 1) // 2]


def build_line_partition(P: PointSet, d: int) -> LinePartition:
    """Greedy halving: each new line is a median cut of the currently fullest cell.

    Cut normals cycle through :data:`CUT_DIRECTIONS`; a normal that cannot split
    the cell (all projections equal) or would repeat a line is skipped. If no
    normal splits the cell, the line passes through the cell's median
    projection, leaving those points on the boundary.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if len(P) < 1:
        raise ValueError("need at least one point")
    pts = list(P)
    lines: list[Line] = []
    cells: list[Cell | None] = [()] * len(pts)
    step = 0
    while len(lines) < d:
        groups: dict[Cell, list[int]] = {}
        for i, c in enumerate(cells):
            if c is not None:
                groups.setdefault(c, []).append(i)
        if groups:
            target = min(groups, key=lambda c: (-len(groups[c]), c))
            members = groups[target]
        else:
            members = list(range(len(pts)))
        chosen = None
        for k in range(len(CUT_DIRECTIONS)):
            a, b = CUT_DIRECTIONS[(step + k) % len(CUT_DIRECTIONS)]
            cut = _median_cut([a * pts[i].x + b * pts[i].y for i in members])
            if cut is None:
                continue
            line = Line(a, b, -cut)
            if line not in lines:
                chosen = line
                step += k + 1
                break
        if chosen is None:
            # unsplittable cell: pass through its median projection (or shift if taken)
            a, b = CUT_DIRECTIONS[step % len(CUT_DIRECTIONS)]
            vals = sorted(a * pts[i].x + b * pts[i].y for i in members)
            offset = vals[len(vals) // 2]
            line = Line(a, b, -offset)
            while line in lines:
                offset += 1
                line = Line(a, b, -offset)
            chosen = line
            step += 1
        lines.append(chosen)
        cells = [_sign_vector(p, lines) for p in pts]
    census: dict[Cell, int] = {}
    for c in cells:
        if c is not None:
            census[c] = census.get(c, 0) + 1
    return LinePartition(tuple(lines), max(census.values(), default=0))


def assign_cells(P: Iterable, F: LinePartition) -> CellAssignment:
    return CellAssignment(tuple(_sign_vector(p, F.lines) for p in P))


def circle_curve_crossings(c: Circle, F: LinePartition) -> int:
    """Distinct points where c meets the union of F's lines."""
    found: list[QPoint] = []
    for line in F.lines:
        for q in line_circle_intersection(line, c):
            if not any(q.x == o.x and q.y == o.y for o in found):
                found.append(q)
    return len(found)


def circle_in_zero_set(c: Circle, F) -> bool:
    """True iff the circle's polynomial divides F (a Polynomial or LinePartition)."""
    if isinstance(F, LinePartition):
        return False  # products of lines have no circle factors
    if F.is_zero():
        return True
    _, rem = F.divmod_monic_x2(circle_polynomial(c))
    return rem.is_zero()


def write_partition(F: LinePartition, cells: CellAssignment, path: str | Path) -> None:
    doc = {
        "lines": [list(line.coefficients()) for line in F.lines],
        "cell_census": [{"cell": list(c), "count": n} for c, n in cells.census().items()],
        "boundary": cells.boundary_count,
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# polynomial ham-sandwich bisection at toy scale


def monomials(d: int) -> list[tuple[int, int]]:
    """Non-constant monomials of degree <= d in graded order; there are (d^2 + 3d) / 2."""
    return [(i, k - i) for k in range(1, d + 1) for i in range(k, -1, -1)]


@dataclass(frozen=True)
class BisectionCurve:
    poly: Polynomial
    degree_bound: int
    imbalance: tuple[int, ...]
    flagged: bool

    def sign_at(self, p) -> int:
        return _sign(self.poly(p[0], p[1]))


def _nullvector(rows: list[list[Fraction]], ncols: int) -> list[Fraction] | None:
    """A nonzero vector v with rows @ v == 0 when the nullspace is one-dimensional."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    if len(free) != 1:
        return None
    fc = free[0]
    v = [Fraction(0)] * ncols
    v[fc] = Fraction(1)
    for i, c in enumerate(pivots):
        v[c] = -m[i][fc]
    return v


def _solve_affine(rows: list[list[Fraction]], rhs: list[Fraction], ncols: int) -> list[Fraction] | None:
    """Some solution of rows @ v == rhs (free variables set to 0), or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(all(v == 0 for v in row[:-1]) and row[-1] != 0 for row in aug):
        return None
    v = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        v[c] = aug[i][-1]
    return v


def polynomial_bisect(
    masses: Sequence[PointSet],
    d: int,
    tolerance: int = 1,
    max_subsets: int = 50_000,
) -> BisectionCurve:
    """Find a degree <= d curve that splits every mass nearly in half.

    Points are lifted by the non-constant monomials of degree <= d. Candidate
    hyperplanes pass through D lifted points (D = number of monomials); points
    on a candidate are then pushed to the side that best balances their mass
    by adding a small multiple of an interpolating affine function. The best
    curve (smallest worst imbalance, then smallest total) is returned, with
    ``flagged`` set when it misses ``tolerance`` on some mass.
    """
    mons = monomials(d)
    D = len(mons)
    if len(masses) > D:
        raise ValueError(f"{len(masses)} masses exceed the {D} available for degree {d}")
    pts: list = []
    owner: list[int] = []
    for k, mass in enumerate(masses):
        for p in mass:
            pts.append(p)
            owner.append(k)
    lifted = [[Fraction(1)] + [p.x**i * p.y**j for i, j in mons] for p in pts]
    sizes = [len(m) for m in masses]
    ideal = [s % 2 for s in sizes]

    def score(coeffs: list[Fraction]) -> tuple[tuple[int, ...], list[int]]:
        bal = [0] * len(masses)
        signs = []
        for row, k in zip(lifted, owner):
            s = _sign(sum(c * v for c, v in zip(coeffs, row)))
            signs.append(s)
            bal[k] += s
        return tuple(abs(b) for b in bal), signs

    best: tuple | None = None

    def consider(coeffs):
        nonlocal best
        if all(c == 0 for c in coeffs[1:]):
            return
        imb, _ = score(coeffs)
        key = (max(imb, default=0), sum(imb))
        if best is None or key < best[0]:
            best = (key, coeffs, imb)

    tried = 0
    subsets = itertools.combinations(range(len(pts)), D) if len(pts) >= D else [tuple(range(len(pts)))]
    for subset in subsets:
        if best is not None and list(best[2]) == ideal:
            break
        if tried >= max_subsets:
            break
        tried += 1
        rows = [lifted[i] for i in subset]
        h = _nullvector(rows, D + 1) if len(subset) == D else None
        if h is None:
            continue
        vals = [sum(c * v for c, v in zip(h, row)) for row in lifted]
        on = [i for i, v in enumerate(vals) if v == 0]
        bal = [0] * len(masses)
        for i, v in enumerate(vals):
            bal[owner[i]] += _sign(v)
        # choose sides for on-curve subset points greedily per mass
        want = []
        for i in subset:
            k = owner[i]
            s = -1 if bal[k] > 0 else 1
            bal[k] += s
            want.append(Fraction(s))
        g = _solve_affine(rows, want, D + 1)
        if g is None:
            consider(h)
            continue
        off = [abs(v) for v in vals if v != 0]
        gmax = max((abs(sum(c * x for c, x in zip(g, row))) for row in lifted), default=Fraction(0))
        eps = (min(off) if off else Fraction(1)) / (2 * gmax + 1)
        consider([a + eps * b for a, b in zip(h, g)])
        consider(h)
        if on and len(on) > len(subset):
            consider([a - eps * b for a, b in zip(h, g)])

    if best is None:
        # fewer than D points or only degenerate subsets: fall back to a median line
        coeffs = [Fraction(0)] * (D + 1)
        xs = sorted(p.x for p in pts)
        cut = _median_cut(xs) if xs else None
        coeffs[0] = -(cut if cut is not None else Fraction(0))
        coeffs[mons.index((1, 0)) + 1] = Fraction(1)
        consider(coeffs)
    _, coeffs, imb = best
    poly = Polynomial({(0, 0): coeffs[0], **{m: c for m, c in zip(mons, coeffs[1:])}})
    flagged = any(b > tolerance for b in imb)
    return BisectionCurve(poly, d, tuple(imb), flagged)
