"""Exact rational and quadratic-field geometry.

Everything here works over :class:`fractions.Fraction`; values that need a
square root live in Q(sqrt(disc)) as :class:`QValue`. Nothing is ever rounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

Rational = Fraction
Number = Union[int, Fraction]

__all__ = [
    "Rational",
    "Point",
    "Circle",
    "Line",
    "QValue",
    "QPoint",
    "Arc",
    "GeometryError",
    "as_rational",
    "parse_rational",
    "format_rational",
    "rational_sqrt",
    "orientation",
    "clockwise_compare",
    "clockwise_key",
    "quadratic_sign",
    "circle_circle_intersection",
    "line_circle_intersection",
    "point_on_arc",
    "arcs_cross",
    "arcs_cross_reference",
]


class GeometryError(ValueError):
    """Raised on degenerate geometric input (zero vectors, identical circles...)."""


def as_rational(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise TypeError("floats are not accepted; pass int, Fraction or 'p/q' strings")
    return Fraction(v)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    num, sep, den = text.partition("/")
    if sep:
        return Fraction(int(num), int(den))
    return Fraction(int(num))


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    if q < 0:
        return None
    p, r = q.numerator, q.denominator
    sp, sr = math.isqrt(p), math.isqrt(r)
    if sp * sp == p and sr * sr == r:
        return Fraction(sp, sr)
    return None


class Point(NamedTuple):
    """Rational point; tuple ordering gives the canonical lexicographic order."""

    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x: Number, y: Number) -> "Point":
        return cls(as_rational(x), as_rational(y))

    def __add__(self, other):  # vector semantics, not tuple concatenation
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def __neg__(self):
        return Point(-self.x, -self.y)

    def norm_sq(self) -> Fraction:
        return self.x * self.x + self.y * self.y

    def dist_sq(self, other) -> Fraction:
        dx = self.x - other[0]
        dy = self.y - other[1]
        return dx * dx + dy * dy

    def __repr__(self):
        return f"Point({format_rational(self.x)}, {format_rational(self.y)})"


@dataclass(frozen=True)
class Circle:
    center: Point
    radius_sq: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", Point.of(*self.center))
        object.__setattr__(self, "radius_sq", as_rational(self.radius_sq))
        if self.radius_sq <= 0:
            raise GeometryError(f"radius_sq must be positive, got {self.radius_sq}")

    def contains(self, p) -> bool:
        return self.center.dist_sq(p) == self.radius_sq


@dataclass(frozen=True)
class Line:
    """The locus a*x + b*y + c = 0, stored as coprime integers, first nonzero of (a, b) positive."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        a, b, c = (as_rational(v) for v in (self.a, self.b, self.c))
        if a == 0 and b == 0:
            raise GeometryError("line needs (a, b) != (0, 0)")
        lcm = math.lcm(a.denominator, b.denominator, c.denominator)
        ia, ib, ic = (int(v * lcm) for v in (a, b, c))
        g = math.gcd(ia, ib, ic)
        ia, ib, ic = ia // g, ib // g, ic // g
        if ia < 0 or (ia == 0 and ib < 0):
            ia, ib, ic = -ia, -ib, -ic
        object.__setattr__(self, "a", Fraction(ia))
        object.__setattr__(self, "b", Fraction(ib))
        object.__setattr__(self, "c", Fraction(ic))

    def evaluate(self, p) -> Fraction:
        return self.a * p[0] + self.b * p[1] + self.c

    def coefficients(self) -> tuple[int, int, int]:
        return int(self.a), int(self.b), int(self.c)


def _canonical_disc(disc: Fraction) -> tuple[int, Fraction]:
    """Write sqrt(disc) = k * sqrt(D) with D a positive integer, small square factors removed."""
    p, q = disc.numerator, disc.denominator
    d = p * q
    k = Fraction(1, q)
    f = 2
    while f * f <= d and f < 1000:
        while d % (f * f) == 0:
            d //= f * f
            k *= f
        f += 1
    return d, k


@dataclass(frozen=True)
class QValue:
    """The number rat + coeff * sqrt(disc).

    Normalised on construction: disc is a positive integer with small square
    factors pulled out, and rational values (coeff == 0 or disc a square) are
    stored with coeff = 0 and disc = 0.
    """

    rat: Fraction
    coeff: Fraction = Fraction(0)
    disc: Fraction = Fraction(0)

    def __post_init__(self):
        rat, coeff, disc = (as_rational(v) for v in (self.rat, self.coeff, self.disc))
        if disc < 0:
            raise GeometryError("negative discriminant")
        if coeff != 0 and disc != 0:
            root = rational_sqrt(disc)
            if root is not None:
                rat, coeff, disc = rat + coeff * root, Fraction(0), Fraction(0)
            else:
                d, k = _canonical_disc(disc)
                coeff, disc = coeff * k, Fraction(d)
        if coeff == 0 or disc == 0:
            coeff, disc = Fraction(0), Fraction(0)
        object.__setattr__(self, "rat", rat)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "disc", disc)

    @property
    def is_rational(self) -> bool:
        return self.coeff == 0

    def _common(self, other) -> tuple["QValue", "QValue"]:
        if not isinstance(other, QValue):
            other = QValue(as_rational(other))
        if self.is_rational or other.is_rational or self.disc == other.disc:
            return self, other
        # sqrt(D2) = k sqrt(D1) iff D1*D2 is a square
        root = rational_sqrt(self.disc * other.disc)
        if root is None:
            raise GeometryError(f"incompatible quadratic fields sqrt({self.disc}) and sqrt({other.disc})")
        k = root / self.disc
        return self, QValue.__new_raw(other.rat, other.coeff * k, self.disc)

    @staticmethod
    def __new_raw(rat, coeff, disc) -> "QValue":
        v = object.__new__(QValue)
        object.__setattr__(v, "rat", rat)
        object.__setattr__(v, "coeff", coeff)
        object.__setattr__(v, "disc", disc)
        return v

    @staticmethod
    def _disc_of(a: "QValue", b: "QValue") -> Fraction:
        return a.disc if a.disc else b.disc

    def __add__(self, other):
        a, b = self._common(other)
        return QValue(a.rat + b.rat, a.coeff + b.coeff, self._disc_of(a, b))

    __radd__ = __add__

    def __neg__(self):
        return QValue(-self.rat, -self.coeff, self.disc)

    def __sub__(self, other):
        a, b = self._common(other)
        return QValue(a.rat - b.rat, a.coeff - b.coeff, self._disc_of(a, b))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        disc = self._disc_of(a, b)
        return QValue(
            a.rat * b.rat + a.coeff * b.coeff * disc,
            a.rat * b.coeff + a.coeff * b.rat,
            disc,
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, (QValue, int, Fraction)):
            return NotImplemented
        try:
            return quadratic_sign(self - other) == 0
        except GeometryError:
            # independent irrationals never coincide unless both are rational
            return False

    def __hash__(self):
        if self.is_rational:
            return hash(self.rat)
        return hash((self.rat, self.coeff, self.disc))

    def sign(self) -> int:
        return quadratic_sign(self)

    def __float__(self):
        return float(self.rat) + float(self.coeff) * math.sqrt(self.disc)

    def __repr__(self):
        if self.is_rational:
            return f"QValue({format_rational(self.rat)})"
        return f"QValue({format_rational(self.rat)} + {format_rational(self.coeff)}*sqrt({self.disc}))"


def _q(v) -> QValue:
    return v if isinstance(v, QValue) else QValue(as_rational(v))


class QPoint(NamedTuple):
    x: QValue
    y: QValue

    @classmethod
    def of(cls, x, y) -> "QPoint":
        return cls(_q(x), _q(y))

    @property
    def disc(self) -> Fraction:
        return self.x.disc or self.y.disc

    def is_rational(self) -> bool:
        return self.x.is_rational and self.y.is_rational

    def to_point(self) -> Point:
        if not self.is_rational():
            raise GeometryError("point has irrational coordinates")
        return Point(self.x.rat, self.y.rat)


@dataclass(frozen=True)
class Arc:
    """Arc of ``circle`` traversed clockwise from ``start`` to ``end`` (both rational, on the circle)."""

    circle: Circle
    start: Point
    end: Point

    def __post_init__(self):
        start, end = Point.of(*self.start), Point.of(*self.end)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)
        if not (self.circle.contains(start) and self.circle.contains(end)):
            raise GeometryError("arc endpoints must lie exactly on the circle")
        if start == end:
            raise GeometryError("arc endpoints must differ")


def orientation(p, q, r) -> int:
    """Sign of (q - p) x (r - p): +1 counterclockwise, -1 clockwise, 0 collinear."""
    cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return _sign(cross)


def _sign(v) -> int:
    if isinstance(v, QValue):
        return quadratic_sign(v)
    return (v > 0) - (v < 0)


def quadratic_sign(q: QValue) -> int:
    """Exact sign of rat + coeff*sqrt(disc)."""
    a = _sign(q.rat)
    b = _sign(q.coeff) if q.disc else 0
    if b == 0:
        return a
    if a == 0 or a == b:
        return b
    # opposite signs: compare rat^2 against coeff^2 * disc
    lhs = q.rat * q.rat
    rhs = q.coeff * q.coeff * q.disc
    if lhs == rhs:
        return 0
    return a if lhs > rhs else b


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def _cw_bucket(ref, w) -> int:
    """Clockwise angle class of w measured from ref: 0 (same ray), 1 (0, pi), 2 (pi), 3 (pi, 2pi)."""
    c = _sign(_cross(ref, w))
    if c < 0:
        return 1
    if c > 0:
        return 3
    return 0 if _sign(_dot(ref, w)) > 0 else 2


def _cw_cmp_from(ref, u, v) -> int:
    """Compare clockwise angles of u and v measured from ref (-1: u first)."""
    bu, bv = _cw_bucket(ref, u), _cw_bucket(ref, v)
    if bu != bv:
        return -1 if bu < bv else 1
    if bu in (0, 2):
        return 0
    # same open half-turn: u first iff v lies clockwise of u
    c = _sign(_cross(u, v))
    return 0 if c == 0 else (-1 if c < 0 else 1)


_EAST = (Fraction(1), Fraction(0))


def _check_nonzero(u):
    if u[0] == 0 and u[1] == 0:
        raise GeometryError("zero vector has no direction")


def clockwise_compare(u, v) -> int:
    """Order directions clockwise starting at (1, 0); 0 iff positive multiples."""
    _check_nonzero(u)
    _check_nonzero(v)
    return _cw_cmp_from(_EAST, u, v)


def clockwise_key(u) -> tuple:
    """Sort key consistent with :func:`clockwise_compare` for rational vectors."""
    _check_nonzero(u)
    x, y = as_rational(u[0]), as_rational(u[1])
    b = _cw_bucket(_EAST, (x, y))
    if b == 1:  # lower half plane, angle increases with x/|.|-> use -x/y monotone
        return (1, x / y)
    if b == 3:
        return (3, x / y)
    return (b, Fraction(0))


def circle_circle_intersection(c1: Circle, c2: Circle) -> list[QPoint]:
    if c1.center == c2.center:
        if c1.radius_sq == c2.radius_sq:
            raise GeometryError("identical circles intersect in infinitely many points")
        return []
    (x1, y1), (x2, y2) = c1.center, c2.center
    dx, dy = x2 - x1, y2 - y1
    d2 = dx * dx + dy * dy
    # radical line: foot point at x1 + t*(dx, dy)
    t = (d2 + c1.radius_sq - c2.radius_sq) / (2 * d2)
    h2_over_d2 = c1.radius_sq / d2 - t * t  # squared half-chord / d2
    if h2_over_d2 < 0:
        return []
    fx, fy = x1 + t * dx, y1 + t * dy
    if h2_over_d2 == 0:
        return [QPoint.of(fx, fy)]
    # offsets +-sqrt(h2_over_d2) * (-dy, dx)
    pts = []
    for s in (1, -1):
        pts.append(QPoint(QValue(fx, -s * dy, h2_over_d2), QValue(fy, s * dx, h2_over_d2)))
    return pts


def line_circle_intersection(line: Line, c: Circle) -> list[QPoint]:
    a, b, cc = line.a, line.b, line.c
    x0, y0 = c.center
    n2 = a * a + b * b
    # signed offset of the center along the unit normal, scaled: dist = val / sqrt(n2)
    val = a * x0 + b * y0 + cc
    fx = x0 - a * val / n2
    fy = y0 - b * val / n2
    h2_over_n2 = (c.radius_sq - val * val / n2) / n2
    if h2_over_n2 < 0:
        return []
    if h2_over_n2 == 0:
        return [QPoint.of(fx, fy)]
    return [
        QPoint(QValue(fx, -s * b, h2_over_n2), QValue(fy, s * a, h2_over_n2))
        for s in (1, -1)
    ]


def _rel(p: QPoint | Point, center: Point) -> tuple:
    if isinstance(p, QPoint):
        return (p.x - center.x, p.y - center.y)
    return (as_rational(p[0]) - center.x, as_rational(p[1]) - center.y)


def point_on_arc(arc: Arc, p) -> bool:
    """True iff p (on arc.circle) lies strictly inside the clockwise arc."""
    if not isinstance(p, QPoint):
        p = Point.of(*p)
        if not arc.circle.contains(p):
            raise GeometryError(f"{p} is not on the arc's circle")
    center = arc.circle.center
    u = _rel(arc.start, center)
    v = _rel(arc.end, center)
    w = _rel(p, center)
    if _cw_bucket(u, w) == 0:  # w coincides with start
        return False
    return _cw_cmp_from(u, w, v) < 0


def arcs_cross_reference(a1: Arc, a2: Arc) -> bool:
    """:func:`arcs_cross` computed through QPoint intersections and :func:`point_on_arc`."""
    if a1.circle == a2.circle:
        raise GeometryError("arcs on the same circle cannot cross properly")
    pts = circle_circle_intersection(a1.circle, a2.circle)
    if len(pts) < 2:
        return False
    return any(point_on_arc(a1, p) and point_on_arc(a2, p) for p in pts)


def _isign(a: int, b: int, disc: int) -> int:
    """Sign of a + b*sqrt(disc) for integers, disc > 0."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    lhs, rhs = a * a, b * b * disc
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


def _ibucket(ux, uy, wa, wb, disc):
    """Clockwise class of w = wa + sqrt(disc)*wb measured from integer u (see _cw_bucket)."""
    c = _isign(ux * wa[1] - uy * wa[0], ux * wb[1] - uy * wb[0], disc)
    if c < 0:
        return 1
    if c > 0:
        return 3
    return 0 if _isign(ux * wa[0] + uy * wa[1], ux * wb[0] + uy * wb[1], disc) > 0 else 2


def _iarc_contains(u, v, wa, wb, disc) -> bool:
    """Is w strictly inside the clockwise arc from u to v (all relative to the centre)?"""
    bw = _ibucket(u[0], u[1], wa, wb, disc)
    if bw == 0:
        return False
    zero = (0, 0)
    bv = _ibucket(u[0], u[1], v, zero, 1)
    if bw != bv:
        return bw < bv
    if bw == 2:
        return False
    # same open half-turn: w first iff v is clockwise of w, i.e. cross(w, v) < 0
    return _isign(wa[0] * v[1] - wa[1] * v[0], wb[0] * v[1] - wb[1] * v[0], disc) < 0


def arcs_cross(a1: Arc, a2: Arc) -> bool:
    """Proper crossing: some intersection point of the two circles is interior to both arcs.

    Coordinates are scaled to integers by a common positive factor (which
    preserves every sign used), so the intersection points take the form
    (Q +- sqrt(disc) * n) / (2 d^2) with integer Q, n, disc.
    """
    if a1.circle == a2.circle:
        raise GeometryError("arcs on the same circle cannot cross properly")
    c1, c2 = a1.circle, a2.circle
    vals = [*c1.center, *c2.center, *a1.start, *a1.end, *a2.start, *a2.end]
    r1, r2 = c1.radius_sq, c2.radius_sq
    if all(v.denominator == 1 for v in vals) and r1.denominator == 1 and r2.denominator == 1:
        r1, r2 = r1.numerator, r2.numerator
        ax, ay, bx, by, s1x, s1y, e1x, e1y, s2x, s2y, e2x, e2y = (v.numerator for v in vals)
    else:
        L = math.lcm(*(v.denominator for v in vals))
        r1, r2 = r1 * L * L, r2 * L * L
        k = math.lcm(r1.denominator, r2.denominator)
        L *= k
        r1, r2 = int(r1 * k * k), int(r2 * k * k)
        ax, ay, bx, by, s1x, s1y, e1x, e1y, s2x, s2y, e2x, e2y = (int(v * L) for v in vals)
    dx, dy = bx - ax, by - ay
    d2 = dx * dx + dy * dy
    if d2 == 0:
        return False  # concentric, distinct radii
    g = d2 + r1 - r2
    disc = 4 * d2 * r1 - g * g
    if disc <= 0:
        return False  # disjoint or tangent
    # 2 d2 * X = P0 +- sqrt(disc) * (-dy, dx)
    p0x, p0y = 2 * d2 * ax + g * dx, 2 * d2 * ay + g * dy
    nvec = (-dy, dx)
    scale = 2 * d2
    arcs = (
        ((s1x - ax, s1y - ay), (e1x - ax, e1y - ay), (p0x - scale * ax, p0y - scale * ay)),
        ((s2x - bx, s2y - by), (e2x - bx, e2y - by), (p0x - scale * bx, p0y - scale * by)),
    )
    for sgn in (1, -1):
        wb = (sgn * nvec[0], sgn * nvec[1])
        if all(_iarc_contains(u, v, q, wb, disc) for u, v, q in arcs):
            return True
    return False
