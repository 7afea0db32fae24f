"""Point-set constructions, popular-distance selection and the text file format."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .exactgeom import Circle, GeometryError, Point, format_rational, parse_rational, rational_sqrt

__all__ = [
    "PointSet",
    "ConstructionSpec",
    "grid",
    "popular_distance",
    "distance_histogram",
    "circle_points",
    "random_points",
    "construct",
    "read_points",
    "write_points",
    "format_points",
    "parse_points",
]


class PointSet(Sequence[Point]):
    """Duplicate-free points kept in lexicographic order."""

    def __init__(self, points: Iterable = ()):
        pts = {Point.of(*p) for p in points}
        self._points: tuple[Point, ...] = tuple(sorted(pts))

    def __len__(self) -> int:
        return len(self._points)

    def __getitem__(self, i):
        return self._points[i]

    def __iter__(self) -> Iterator[Point]:
        return iter(self._points)

    def __contains__(self, p) -> bool:
        return Point.of(*p) in self.index

    def __eq__(self, other) -> bool:
        if isinstance(other, PointSet):
            return self._points == other._points
        return NotImplemented

    def __hash__(self):
        return hash(self._points)

    def __repr__(self) -> str:
        head = ", ".join(map(repr, self._points[:4]))
        more = ", ..." if len(self) > 4 else ""
        return f"PointSet([{head}{more}], n={len(self)})"

    @cached_property
    def index(self) -> dict[Point, int]:
        return {p: i for i, p in enumerate(self._points)}

    @cached_property
    def denominator(self) -> int:
        """Least common denominator of all coordinates."""
        return math.lcm(1, *(c.denominator for p in self._points for c in p))

    @cached_property
    def integer_coords(self) -> tuple[np.ndarray, np.ndarray] | None:
        """Coordinates times :attr:`denominator` as int64 arrays, or None if they overflow."""
        L = self.denominator
        xs = [int(p.x * L) for p in self._points]
        ys = [int(p.y * L) for p in self._points]
        if any(abs(v) >= kernels.COORD_LIMIT for v in xs + ys):
            return None
        return np.array(xs, dtype=np.int64), np.array(ys, dtype=np.int64)


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str = "grid"
    m: int = 4
    n: int = 0
    seed: int = 0
    box: tuple[int, int, int, int] = (0, 0, 100, 100)
    max_den: int = 1
    center: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))
    radius_sq: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in ("grid", "circle", "random"):
            raise ValueError(f"unknown construction kind {self.kind!r}")
        if self.kind in ("grid", "circle") and self.m < 1:
            raise ValueError("m must be >= 1")
        if self.kind == "random" and self.n < 0:
            raise ValueError("n must be >= 0")
        if self.max_den < 1:
            raise ValueError("denominator bound must be >= 1")
        x0, y0, x1, y1 = self.box
        if x0 > x1 or y0 > y1:
            raise ValueError(f"empty bounding box {self.box}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned value")


def grid(m: int) -> PointSet:
    if m < 1:
        raise ValueError("m must be >= 1")
    return PointSet((x, y) for x in range(m) for y in range(m))


def distance_histogram(P: PointSet) -> dict[Fraction, int]:
    """Squared distance -> number of unordered pairs realising it."""
    ic = P.integer_coords
    if ic is not None and len(P) >= 2:
        vals, counts = kernels.sqdist_histogram(*ic)
        L2 = P.denominator ** 2
        return {Fraction(int(v), L2): int(c) for v, c in zip(vals, counts)}
    hist: dict[Fraction, int] = {}
    pts = list(P)
    for i, p in enumerate(pts):
        for q in pts[i + 1 :]:
            d = p.dist_sq(q)
            hist[d] = hist.get(d, 0) + 1
    return hist


def popular_distance(P: PointSet) -> tuple[Fraction, int]:
    """Most frequent squared distance (smallest on ties) and its pair count."""
    if len(P) < 2:
        raise ValueError("popular_distance needs at least two points")
    hist = distance_histogram(P)
    r_sq = min(hist, key=lambda d: (-hist[d], d))
    return r_sq, hist[r_sq]


def circle_points(k: int, c: Circle) -> PointSet:
    """k rational points on c from the half-angle parametrisation t = j/(j+1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    r = rational_sqrt(c.radius_sq)
    if r is None:
        raise GeometryError(f"radius_sq {c.radius_sq} is not a rational square")
    cx, cy = c.center
    pts = []
    for j in range(k):
        t = Fraction(j, j + 1)
        den = 1 + t * t
        pts.append((cx + r * (1 - t * t) / den, cy + r * 2 * t / den))
    return PointSet(pts)


def _fractions_in(lo: int, hi: int, max_den: int) -> list[Fraction]:
    """All reduced fractions in [lo, hi] with denominator <= max_den."""
    out = []
    for q in range(1, max_den + 1):
        for p in range(lo * q, hi * q + 1):
            if math.gcd(p, q) == 1:
                out.append(Fraction(p, q))
    return out


def _fraction_count(lo: int, hi: int, max_den: int) -> int:
    total = 0
    for q in range(1, max_den + 1):
        # reduced p/q with lo*q <= p <= hi*q: (hi - lo) * phi(q) plus the endpoint when q == 1
        phi = sum(1 for r in range(1, q + 1) if math.gcd(r, q) == 1)
        total += (hi - lo) * phi + (1 if q == 1 else 0)
    return total


def random_points(n: int, spec: ConstructionSpec) -> PointSet:
    """n distinct random rational points inside ``spec.box``.

    Uses numpy's PCG64 generator seeded with ``spec.seed``: PCG64 output is
    specified bit-for-bit, so a seed gives the same set on every platform.
    Each coordinate picks a denominator q uniformly in [1, max_den] and a
    numerator uniformly with the value inside the box; duplicates are redrawn.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    x0, y0, x1, y1 = spec.box
    capacity = _fraction_count(x0, x1, spec.max_den) * _fraction_count(y0, y1, spec.max_den)
    if n > capacity:
        raise ValueError(f"box {spec.box} with denominators <= {spec.max_den} holds only {capacity} distinct points, asked for {n}")
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    if n == 0:
        return PointSet()
    if 2 * n > capacity:
        # dense regime: sample without replacement from the enumerated candidates
        xs = _fractions_in(x0, x1, spec.max_den)
        ys = _fractions_in(y0, y1, spec.max_den)
        picks = rng.choice(capacity, size=n, replace=False)
        return PointSet((xs[int(k) // len(ys)], ys[int(k) % len(ys)]) for k in picks)

    def coord(lo, hi):
        q = int(rng.integers(1, spec.max_den, endpoint=True))
        p = int(rng.integers(lo * q, hi * q, endpoint=True))
        return Fraction(p, q)

    seen: set[Point] = set()
    while len(seen) < n:
        seen.add(Point(coord(x0, x1), coord(y0, y1)))
    return PointSet(seen)


def construct(spec: ConstructionSpec) -> PointSet:
    if spec.kind == "grid":
        return grid(spec.m)
    if spec.kind == "circle":
        return circle_points(spec.m, Circle(spec.center, spec.radius_sq))
    return random_points(spec.n, spec)


# ---------------------------------------------------------------------------
# text format: one "x,y" per line, coordinates "num/den" or "num"


def format_points(P: PointSet) -> str:
    return "".join(f"{format_rational(p.x)},{format_rational(p.y)}\n" for p in P)


def parse_points(text: str) -> PointSet:
    pts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'x,y', got {raw!r}")
        try:
            pts.append((parse_rational(parts[0]), parse_rational(parts[1])))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return PointSet(pts)


def read_points(path: str | Path) -> PointSet:
    return parse_points(Path(path).read_text(encoding="utf-8"))


def write_points(P: PointSet, path: str | Path) -> None:
    Path(path).write_text(format_points(P), encoding="utf-8")
