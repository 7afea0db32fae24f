"""Integer counting kernels.

Hot loops run on int64 arrays of common-denominator-scaled coordinates. Each
kernel has a numba ``@njit`` body and a pure-numpy twin; the backend is chosen
once at import from ``UDLAB_NUMBA`` ("0"/"false"/"off" forces numpy) and can be
switched at runtime with :func:`set_backend`.

Callers must keep coordinates below :data:`COORD_LIMIT` in magnitude so that
squared distances and Gaussian products stay inside int64. :func:`fits`
checks this; callers fall back to exact Python arithmetic otherwise.
"""

from __future__ import annotations

import math
import os

import numpy as np

COORD_LIMIT = 1 << 29

try:
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def _env_wants_numba() -> bool:
    flag = os.environ.get("UDLAB_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


BACKEND = "numba" if (HAVE_NUMBA and _env_wants_numba()) else "numpy"


def set_backend(name: str) -> str:
    """Select "numba" or "numpy"; returns the previous backend."""
    global BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not importable")
    prev, BACKEND = BACKEND, name
    return prev


def fits(*arrays: np.ndarray, limit: int = COORD_LIMIT) -> bool:
    return all(a.size == 0 or int(np.abs(a).max()) < limit for a in arrays)


# ---------------------------------------------------------------------------
# unit pairs: bucketed search for pairs at squared distance R


def cell_width(R: int) -> int:
    """Smallest integer >= sqrt(R)."""
    w = math.isqrt(R)
    return w if w * w == R else w + 1


def _bucket_keys(X, Y, W):
    bx = np.floor_divide(X, W)
    by = np.floor_divide(Y, W)
    bx = bx - bx.min() + 1
    by = by - by.min() + 1
    span = int(by.max()) + 2
    return bx * span + by, span


@njit(cache=True)
def _unit_pairs_nb(SX, SY, R, order, skeys, span):
    # SX, SY are the coordinates already permuted into bucket order
    n = SX.shape[0]
    cap = 16
    I = np.empty(cap, np.int64)
    J = np.empty(cap, np.int64)
    cnt = 0
    a = 0
    while a < n:
        key = skeys[a]
        a_end = a
        while a_end < n and skeys[a_end] == key:
            a_end += 1
        for ox in range(-1, 2):
            for oy in range(-1, 2):
                k = key + ox * span + oy
                if k < key:
                    continue  # each unordered bucket pair is visited once
                lo = np.searchsorted(skeys, k, side="left")
                hi = np.searchsorted(skeys, k, side="right")
                for s in range(a, a_end):
                    xs = SX[s]
                    ys = SY[s]
                    b0 = s + 1 if k == key else lo
                    for b in range(b0, hi):
                        dx = SX[b] - xs
                        dy = SY[b] - ys
                        if dx * dx + dy * dy == R:
                            if cnt == cap:
                                cap *= 2
                                I2 = np.empty(cap, np.int64)
                                J2 = np.empty(cap, np.int64)
                                I2[:cnt] = I[:cnt]
                                J2[:cnt] = J[:cnt]
                                I = I2
                                J = J2
                            i = order[s]
                            j = order[b]
                            if i < j:
                                I[cnt] = i
                                J[cnt] = j
                            else:
                                I[cnt] = j
                                J[cnt] = i
                            cnt += 1
        a = a_end
    return I[:cnt], J[:cnt]


def _unit_pairs_np(X, Y, R, order, skeys, span):
    n = X.shape[0]
    out_i, out_j = [], []
    for ox in (-1, 0, 1):
        for oy in (-1, 0, 1):
            target = skeys + ox * span + oy
            lo = np.searchsorted(skeys, target, side="left")
            hi = np.searchsorted(skeys, target, side="right")
            counts = hi - lo
            total = int(counts.sum())
            if total == 0:
                continue
            src = np.repeat(np.arange(n), counts)
            starts = np.repeat(lo - np.cumsum(counts) + counts, counts)
            dst = starts + np.arange(total)
            i = order[src]
            j = order[dst]
            dx = X[j] - X[i]
            dy = Y[j] - Y[i]
            keep = (j > i) & (dx * dx + dy * dy == R)
            out_i.append(i[keep])
            out_j.append(j[keep])
    if not out_i:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(out_i), np.concatenate(out_j)


def unit_pairs(X: np.ndarray, Y: np.ndarray, R: int) -> tuple[np.ndarray, np.ndarray]:
    """All index pairs i < j with (X[j]-X[i])^2 + (Y[j]-Y[i])^2 == R, sorted by (i, j)."""
    X = np.ascontiguousarray(X, dtype=np.int64)
    Y = np.ascontiguousarray(Y, dtype=np.int64)
    if X.shape[0] < 2 or R <= 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    keys, span = _bucket_keys(X, Y, cell_width(R))
    order = np.argsort(keys, kind="stable").astype(np.int64)
    skeys = keys[order]
    if BACKEND == "numba":
        I, J = _unit_pairs_nb(X[order], Y[order], np.int64(R), order, skeys, np.int64(span))
    else:
        I, J = _unit_pairs_np(X, Y, np.int64(R), order, skeys, np.int64(span))
    idx = np.lexsort((J, I))
    return I[idx], J[idx]


def unit_pairs_bruteforce(X: np.ndarray, Y: np.ndarray, R: int) -> tuple[np.ndarray, np.ndarray]:
    """O(n^2) reference used as the oracle for :func:`unit_pairs`."""
    X = np.asarray(X, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    I, J = np.triu_indices(X.shape[0], 1)
    dx = X[J] - X[I]
    dy = Y[J] - Y[I]
    keep = dx * dx + dy * dy == R
    return I[keep].astype(np.int64), J[keep].astype(np.int64)


# ---------------------------------------------------------------------------
# squared distance histogram


@njit(cache=True)
def _pair_sqdist_nb(X, Y):
    n = X.shape[0]
    out = np.empty(n * (n - 1) // 2, np.int64)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = X[j] - X[i]
            dy = Y[j] - Y[i]
            out[k] = dx * dx + dy * dy
            k += 1
    return out


def _pair_sqdist_np(X, Y):
    I, J = np.triu_indices(X.shape[0], 1)
    dx = X[J] - X[I]
    dy = Y[J] - Y[I]
    return dx * dx + dy * dy


def sqdist_histogram(X: np.ndarray, Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distinct squared distances over unordered pairs and their multiplicities."""
    X = np.ascontiguousarray(X, dtype=np.int64)
    Y = np.ascontiguousarray(Y, dtype=np.int64)
    if X.shape[0] < 2:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    fn = _pair_sqdist_nb if BACKEND == "numba" else _pair_sqdist_np
    return np.unique(fn(X, Y), return_counts=True)


# ---------------------------------------------------------------------------
# incidences of points on circles of fixed squared radius


@njit(cache=True)
def _circle_counts_nb(CX, CY, PX, PY, R):
    out = np.zeros(CX.shape[0], np.int64)
    for c in range(CX.shape[0]):
        s = 0
        for p in range(PX.shape[0]):
            dx = PX[p] - CX[c]
            dy = PY[p] - CY[c]
            if dx * dx + dy * dy == R:
                s += 1
        out[c] = s
    return out


def _circle_counts_np(CX, CY, PX, PY, R):
    out = np.zeros(CX.shape[0], np.int64)
    step = max(1, 2_000_000 // max(1, PX.shape[0]))
    for lo in range(0, CX.shape[0], step):
        dx = PX[None, :] - CX[lo : lo + step, None]
        dy = PY[None, :] - CY[lo : lo + step, None]
        out[lo : lo + step] = (dx * dx + dy * dy == R).sum(axis=1)
    return out


def circle_counts(CX, CY, PX, PY, R: int) -> np.ndarray:
    """For each center, the number of points at squared distance exactly R."""
    args = [np.ascontiguousarray(a, dtype=np.int64) for a in (CX, CY, PX, PY)]
    fn = _circle_counts_nb if BACKEND == "numba" else _circle_counts_np
    return fn(*args, np.int64(R))


# ---------------------------------------------------------------------------
# difference-set size


def difference_count(X: np.ndarray, Y: np.ndarray) -> int:
    """|A - A| for the integer point set A = {(X[i], Y[i])}."""
    X = np.asarray(X, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    if X.shape[0] == 0:
        return 0
    dx = (X[:, None] - X[None, :]).ravel()
    dy = (Y[:, None] - Y[None, :]).ravel()
    span = 2 * int(Y.max() - Y.min()) + 1  # dy lies in [-(max-min), max-min]
    return int(np.unique(dx * span + dy).shape[0])


# ---------------------------------------------------------------------------
# Gaussian-integer products over a set of complex integers


@njit(cache=True)
def _product_histogram_nb(A, B, off_re, width_im, hist):
    n = A.shape[0]
    for i in range(n):
        for j in range(n):
            re = A[i] * A[j] - B[i] * B[j]
            im = A[i] * B[j] + B[i] * A[j]
            hist[(re + off_re) * width_im + im] += 1
    return hist


def _product_histogram_np(A, B, off_re, width_im, hist):
    n = A.shape[0]
    step = max(1, 4_000_000 // max(1, n))
    for lo in range(0, n, step):
        a = A[lo : lo + step, None]
        b = B[lo : lo + step, None]
        re = a * A[None, :] - b * B[None, :]
        im = a * B[None, :] + b * A[None, :]
        keys = ((re + off_re) * width_im + im).ravel()
        hist += np.bincount(keys, minlength=hist.shape[0])
    return hist


def product_histogram(A: np.ndarray, B: np.ndarray) -> tuple[np.ndarray, int, int]:
    """Count ordered pairs (z1, z2) of z_k = A[k] + i*B[k] by their product.

    Inputs must be non-negative. Returns ``(hist, off_re, width_im)``; the
    product ``re + i*im`` is tallied at ``(re + off_re) * width_im + im``.
    """
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    if A.size and (A.min() < 0 or B.min() < 0):
        raise ValueError("product_histogram expects non-negative coordinates")
    M = int(max(A.max(initial=0), B.max(initial=0)))
    off_re = M * M
    width_im = 2 * M * M + 1
    hist = np.zeros((2 * M * M + 1) * width_im, np.int64)
    fn = _product_histogram_nb if BACKEND == "numba" else _product_histogram_np
    hist = fn(A, B, np.int64(off_re), np.int64(width_im), hist)
    return hist, off_re, width_im
