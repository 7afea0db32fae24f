"""Direction circle S and its good arcs."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from ..exactgeom import Point, as_rational, clockwise_key, rational_sqrt
from ..udgraph import Direction


class DirectionError(ValueError):
    pass


@dataclass(frozen=True)
class DirectionCircle:
    """Displacements of squared length r_sq, sorted clockwise after (1, 0)."""

    r_sq: Fraction
    S: tuple[Point, ...]

    @property
    def m(self) -> int:
        return len(self.S)

    def index(self) -> dict[Point, int]:
        return {s: i for i, s in enumerate(self.S)}


def _successor_key(v: Point):
    # (1, 0) itself sorts last: the order starts just clockwise of east
    bucket, t = clockwise_key(v)
    return (4, t) if bucket == 0 else (bucket, t)


def build_direction_circle(D: Iterable[Direction], r_sq) -> DirectionCircle:
    r_sq = as_rational(r_sq)
    if r_sq <= 0:
        raise ValueError("r_sq must be positive")
    S: set[Point] = set()
    for d in sorted(Direction(*d) for d in D):
        scale = rational_sqrt(r_sq / (d.dx * d.dx + d.dy * d.dy))
        if scale is None:
            raise DirectionError(
                f"direction ({d.dx}, {d.dy}) has no displacement of squared length {r_sq}"
            )
        s = Point(scale * d.dx, scale * d.dy)
        S.add(s)
        S.add(-s)
    return DirectionCircle(r_sq, tuple(sorted(S, key=_successor_key)))


class GoodArc(NamedTuple):
    """Clockwise arc of the direction circle from S[i] to S[j]."""

    i: int
    j: int


def cyclic_gap(arc: GoodArc, m: int) -> int:
    return (arc.j - arc.i) % m


def good_arcs(dc: DirectionCircle, C1: int) -> list[GoodArc]:
    """Every clockwise arc whose index gap lies in [1, C1] (capped below a full turn)."""
    if C1 < 1:
        raise ValueError("C1 must be >= 1")
    m = dc.m
    return [GoodArc(i, (i + g) % m) for i in range(m) for g in range(1, min(C1, m - 1) + 1)]
