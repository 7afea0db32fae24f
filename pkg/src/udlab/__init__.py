"""Exact unit-distance experiments in the plane."""

from .exactgeom import Arc, Circle, Line, Point, QPoint, QValue
from .pointsets import PointSet, circle_points, grid, popular_distance, random_points
from .udgraph import Direction, UDGraph, unit_pairs

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "Circle",
    "Direction",
    "Line",
    "Point",
    "PointSet",
    "QPoint",
    "QValue",
    "UDGraph",
    "circle_points",
    "grid",
    "popular_distance",
    "random_points",
    "unit_pairs",
]
