import numpy as np
import pytest

from udlab import kernels

BACKENDS = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    prev = kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(prev)


def _cloud(seed, n, lo=-40, hi=40):
    rng = np.random.default_rng(seed)
    return rng.integers(lo, hi, n), rng.integers(lo, hi, n)


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("R", [1, 2, 25, 65, 1000])
def test_unit_pairs_match_bruteforce(backend, seed, R):
    X, Y = _cloud(seed, 300)
    I, J = kernels.unit_pairs(X, Y, R)
    bi, bj = kernels.unit_pairs_bruteforce(X, Y, R)
    ref = sorted(zip(bi.tolist(), bj.tolist()))
    assert list(zip(I.tolist(), J.tolist())) == ref
    assert all(i < j for i, j in ref)


def test_unit_pairs_duplicates_and_degenerate(backend):
    X = np.array([0, 0, 3, 0])
    Y = np.array([0, 0, 4, 0])
    I, J = kernels.unit_pairs(X, Y, 25)
    assert list(zip(I.tolist(), J.tolist())) == [(0, 2), (1, 2), (2, 3)]
    assert kernels.unit_pairs(X, Y, 0)[0].size == 0
    assert kernels.unit_pairs(X[:1], Y[:1], 1)[0].size == 0


@pytest.mark.parametrize("seed", range(4))
def test_sqdist_histogram(backend, seed):
    X, Y = _cloud(seed, 120)
    vals, cnts = kernels.sqdist_histogram(X, Y)
    d = {}
    for i in range(len(X)):
        for j in range(i + 1, len(X)):
            r = int((X[j] - X[i]) ** 2 + (Y[j] - Y[i]) ** 2)
            d[r] = d.get(r, 0) + 1
    assert dict(zip(vals.tolist(), cnts.tolist())) == d


@pytest.mark.parametrize("seed", range(4))
def test_circle_counts(backend, seed):
    PX, PY = _cloud(seed, 200, -10, 10)
    CX, CY = _cloud(seed + 100, 50, -10, 10)
    got = kernels.circle_counts(CX, CY, PX, PY, 25).tolist()
    want = [int(((PX - cx) ** 2 + (PY - cy) ** 2 == 25).sum()) for cx, cy in zip(CX, CY)]
    assert got == want


@pytest.mark.parametrize("seed", range(4))
def test_difference_count(seed):
    X, Y = _cloud(seed, 60, -7, 7)
    want = {(int(a - b), int(c - d)) for a, c in zip(X, Y) for b, d in zip(X, Y)}
    assert kernels.difference_count(X, Y) == len(want)
    assert kernels.difference_count(np.array([0, 0, 1]), np.array([0, 1, -1])) == 7


@pytest.mark.parametrize("N", [1, 3, 6])
def test_product_histogram(backend, N):
    a, b = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    A, B = a.ravel(), b.ravel()
    hist, off, w = kernels.product_histogram(A, B)
    want = {}
    for x, y in zip(A.tolist(), B.tolist()):
        for u, v in zip(A.tolist(), B.tolist()):
            key = (x * u - y * v + off) * w + (x * v + y * u)
            want[key] = want.get(key, 0) + 1
    nz = np.nonzero(hist)[0]
    assert dict(zip(nz.tolist(), hist[nz].tolist())) == want
    with pytest.raises(ValueError):
        kernels.product_histogram(np.array([-1]), np.array([0]))


def test_backends_agree():
    if not kernels.HAVE_NUMBA:
        pytest.skip("numba not installed")
    X, Y = _cloud(7, 500)
    out = {}
    for name in ("numba", "numpy"):
        prev = kernels.set_backend(name)
        try:
            out[name] = [a.tolist() for a in (*kernels.unit_pairs(X, Y, 50), *kernels.sqdist_histogram(X, Y))]
        finally:
            kernels.set_backend(prev)
    assert out["numba"] == out["numpy"]


def test_backend_switch_validation():
    with pytest.raises(ValueError):
        kernels.set_backend("cuda")


def test_fits_and_cell_width():
    assert kernels.fits(np.array([1, -5]), np.array([], dtype=np.int64))
    assert not kernels.fits(np.array([kernels.COORD_LIMIT]))
    assert [kernels.cell_width(R) for R in (1, 2, 4, 5, 25, 26)] == [1, 2, 2, 3, 5, 6]
