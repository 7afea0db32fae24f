"""Factorization and circle counts over GAPs of Gaussian integers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .. import kernels
from ..exactgeom import Circle, Point, as_rational
from ..pointsets import PointSet
from .additive import GapModel

ENUMERATION_CAP = 1 << 20


class EnumerationCapError(ValueError):
    pass


def _check_cap(gap: GapModel, cap: int) -> None:
    if gap.size > cap:
        raise EnumerationCapError(
            f"GAP of size {gap.size} exceeds the enumeration cap {cap}; use a smaller instance"
        )


def _gaussian(z) -> tuple[int, int]:
    if isinstance(z, complex):
        raise TypeError("pass Gaussian integers as (re, im) integer pairs")
    if isinstance(z, int):
        return z, 0
    re, im = z
    return int(re), int(im)


def chang_factorizations(gap: GapModel, alpha, cap: int = ENUMERATION_CAP) -> int:
    """Ordered pairs (a1, a2) of GAP elements with a1 * a2 == alpha."""
    ar, ai = _gaussian(alpha)
    if ar == 0 and ai == 0:
        raise ValueError("alpha = 0 has infinitely many degenerate factorizations")
    _check_cap(gap, cap)
    elems = gap.element_set()
    if any(c.denominator != 1 for p in elems for c in p):
        raise ValueError("GAP elements must be Gaussian integers")
    count = 0
    for p in elems:
        x, y = int(p.x), int(p.y)
        norm = x * x + y * y
        if norm == 0:
            continue
        # alpha / (x + iy) = alpha * (x - iy) / norm
        re = ar * x + ai * y
        im = ai * x - ar * y
        if re % norm or im % norm:
            continue
        if Point(Fraction(re // norm), Fraction(im // norm)) in elems:
            count += 1
    return count


def gap_circle_count(gap: GapModel, c: Circle, cap: int = ENUMERATION_CAP) -> int:
    _check_cap(gap, cap)
    return sum(1 for p in gap.elements() if c.contains(p))


def max_circle_incidence(Pp: PointSet, centers: PointSet, r_sq) -> tuple[Point, int]:
    """Center whose r_sq-circle holds the most points of Pp (first center on ties)."""
    r_sq = as_rational(r_sq)
    if len(centers) == 0:
        raise ValueError("no centers given")
    L = math.lcm(1, Pp.denominator if len(Pp) else 1, centers.denominator)
    R = r_sq * L * L
    if len(Pp) == 0 or R.denominator != 1:
        return centers[0], 0
    cx = np.array([int(p.x * L) for p in centers], dtype=np.int64)
    cy = np.array([int(p.y * L) for p in centers], dtype=np.int64)
    px = np.array([int(p.x * L) for p in Pp], dtype=np.int64)
    py = np.array([int(p.y * L) for p in Pp], dtype=np.int64)
    if kernels.fits(cx, cy, px, py) and R < kernels.COORD_LIMIT**2:
        counts = kernels.circle_counts(cx, cy, px, py, int(R)).tolist()
    else:
        counts = [sum(1 for q in Pp if c.dist_sq(q) == r_sq) for c in centers]
    best = max(range(len(counts)), key=lambda k: (counts[k], -k))
    return centers[best], int(counts[best])


@dataclass(frozen=True)
class ChangRow:
    N: int
    n: int
    max_factorizations: int
    alpha: tuple[int, int] | None
    max_circle: int
    circle_R: int | None
    alpha_norm_cap: int

    @staticmethod
    def normalized(value: int, n: int) -> float | None:
        """log(value) / (log n / log log n); None where undefined (n <= e or value == 0)."""
        if value < 1 or n < 3:
            return None
        return math.log(value) / (math.log(n) / math.log(math.log(n)))

    @property
    def factor_exponent(self) -> float | None:
        return self.normalized(self.max_factorizations, self.n)

    @property
    def circle_exponent(self) -> float | None:
        return self.normalized(self.max_circle, self.n)


def chang_scan(N: int, alpha_norm_cap: int | None = None) -> ChangRow:
    """Maxima over the box GAP {a + b i : 0 <= a, b < N}.

    The factorization maximum runs over nonzero alpha with |alpha|^2 at most
    ``alpha_norm_cap`` (default 2 (N-1)^2), counting ordered pairs by a
    product histogram. The circle maximum runs over origin-centred circles.
    Ties go to the smallest |alpha|^2 (then real, imaginary part) and to the
    smallest R.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    cap = 2 * (N - 1) ** 2 if alpha_norm_cap is None else int(alpha_norm_cap)
    a, b = np.meshgrid(np.arange(N, dtype=np.int64), np.arange(N, dtype=np.int64), indexing="ij")
    A, B = a.ravel(), b.ravel()
    hist, off_re, width_im = kernels.product_histogram(A, B)
    keys = np.nonzero(hist)[0]
    re = keys // width_im - off_re
    im = keys % width_im
    norm = re * re + im * im
    ok = (norm > 0) & (norm <= cap)
    best_f, alpha = 0, None
    if ok.any():
        counts = hist[keys[ok]]
        cand = np.lexsort((im[ok], re[ok], norm[ok], -counts))
        k = cand[0]
        best_f = int(counts[k])
        alpha = (int(re[ok][k]), int(im[ok][k]))
    r2 = A * A + B * B
    r2 = r2[r2 > 0]
    best_c, R = 0, None
    if r2.size:
        vals, cnts = np.unique(r2, return_counts=True)
        k = int(np.argmax(cnts))  # first maximum is the smallest R
        best_c, R = int(cnts[k]), int(vals[k])
    return ChangRow(N, N * N, best_f, alpha, best_c, R, cap)
