"""Float-path normal primitives against independent oracles.

Frozen constants come from a 50-digit mpmath evaluation of the defining
integrals (series for phi/Phi, one-dimensional correlation integral for the
bivariate c.d.f.).  The in-file oracles take different routes: tensor-grid
quadrature of the raw 2-D density and bisection inversion of std_cdf.
"""

import math

import numpy as np
import pytest

from dicut.gauss import (
    binorm_cdf,
    binorm_cdf_vec,
    binorm_partials,
    std_cdf,
    std_cdf_inv,
    std_pdf,
)

INF = math.inf


def binorm_oracle(t1, t2, rho):
    """Tensor-grid Gauss-Legendre quadrature of the bivariate density.

    Truncates each axis at -8.5; the discarded mass is < 2*Phi(-8.5) ~ 2e-17.
    Accurate to ~1e-12 for moderate thresholds, independent of the
    one-dimensional reduction used by the implementation.
    """
    n = 220
    x, wx = np.polynomial.legendre.leggauss(n)
    lo = -8.5
    ax = 0.5 * (t1 - lo) * x + 0.5 * (t1 + lo)
    wax = 0.5 * (t1 - lo) * wx
    ay = 0.5 * (t2 - lo) * x + 0.5 * (t2 + lo)
    way = 0.5 * (t2 - lo) * wx
    xx, yy = np.meshgrid(ax, ay, indexing="ij")
    det = 1.0 - rho * rho
    dens = np.exp(-(xx * xx - 2 * rho * xx * yy + yy * yy) / (2 * det))
    dens /= 2 * math.pi * math.sqrt(det)
    return float(wax @ dens @ way)


def cdf_inv_oracle(p, tol=1e-13):
    lo, hi = -9.0, 9.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if std_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_std_pdf_constants():
    assert std_pdf(0.0) == pytest.approx(0.3989422804014327, abs=1e-15)
    # frozen from the 50-digit series oracle
    assert std_pdf(1.0) == pytest.approx(0.2419707245191433498, abs=1e-14)


def test_std_pdf_even():
    for t in [0.3, 1.7, 2.9, 5.5]:
        assert std_pdf(t) == std_pdf(-t)


def test_std_cdf_basics():
    assert std_cdf(0.0) == 0.5
    assert std_cdf(INF) == 1.0
    assert std_cdf(-INF) == 0.0
    assert std_cdf(1.6448536270) == pytest.approx(0.95, abs=1e-10)


def test_std_cdf_complement():
    rng = np.random.default_rng(7)
    for t in rng.uniform(-6, 6, size=200):
        assert std_cdf(-t) == pytest.approx(1.0 - std_cdf(t), abs=1e-14)


def test_std_cdf_inv_roundtrip():
    assert std_cdf_inv(0.5) == 0.0
    rng = np.random.default_rng(11)
    for p in rng.uniform(1e-6, 1 - 1e-6, size=1000):
        assert std_cdf(std_cdf_inv(p)) == pytest.approx(p, rel=1e-12)


def test_std_cdf_inv_against_bisection():
    assert std_cdf_inv(0.975) == pytest.approx(1.9599639845, abs=1e-8)
    for p in [0.05, 0.31, 0.5, 0.77, 0.9999]:
        assert std_cdf_inv(p) == pytest.approx(cdf_inv_oracle(p), abs=1e-9)


def test_std_cdf_inv_domain():
    for p in [-0.1, 0.0, 1.0, 1.7]:
        with pytest.raises(ValueError):
            std_cdf_inv(p)


def test_binorm_independence():
    assert binorm_cdf(0.0, 0.0, 0.0) == 0.25


def test_binorm_perfect_negative_correlation():
    # Pr[X <= t and -X <= -t] = Pr[X = t] = 0
    for t in [-2.0, -0.3, 0.0, 0.5, 3.1]:
        assert binorm_cdf(t, -t, -1.0) == 0.0


def test_binorm_perfect_positive_correlation():
    for t1, t2 in [(0.5, -0.3), (-1.0, 2.0), (0.0, 0.0)]:
        assert binorm_cdf(t1, t2, 1.0) == pytest.approx(
            std_cdf(min(t1, t2)), abs=1e-15
        )


def test_binorm_known_values():
    # frozen from the 50-digit mpmath oracle
    cases = [
        ((0.5, -0.3, -0.7), 0.15663243162448887),
        ((0.0, 0.0, -0.5), 1.0 / 6.0),  # 1/4 + asin(rho)/(2 pi)
        ((1.2, 0.4, 0.3), 0.6029234885324465),
        ((-2.0, 1.5, -0.95), 0.0006501231839943231),
        ((0.1887837358, -0.1887837358, 0.701102687), 0.3604639206768167),
        ((3.0, -3.0, -0.999), 7.901697801956793e-05),
        ((0.5, -0.3, 0.0), 0.2641999084379141),
    ]
    for (t1, t2, rho), want in cases:
        assert binorm_cdf(t1, t2, rho) == pytest.approx(want, abs=1e-11)


def test_binorm_against_tensor_grid_oracle():
    assert binorm_cdf(0.5, -0.3, -0.7) == pytest.approx(
        binorm_oracle(0.5, -0.3, -0.7), abs=1e-9
    )
    rng = np.random.default_rng(3)
    for _ in range(25):
        t1, t2 = rng.uniform(-2.5, 2.5, size=2)
        rho = rng.uniform(-0.98, 0.98)
        assert binorm_cdf(t1, t2, rho) == pytest.approx(
            binorm_oracle(t1, t2, rho), abs=1e-9
        )


def test_binorm_infinite_thresholds():
    assert binorm_cdf(INF, 0.3, -0.4) == pytest.approx(std_cdf(0.3), abs=0)
    assert binorm_cdf(0.3, INF, 0.9) == pytest.approx(std_cdf(0.3), abs=0)
    assert binorm_cdf(-INF, 0.3, 0.4) == 0.0
    assert binorm_cdf(0.3, -INF, -0.2) == 0.0
    assert binorm_cdf(INF, INF, 0.5) == 1.0
    assert binorm_cdf(INF, -INF, 0.5) == 0.0


def test_binorm_monotone_in_each_argument():
    rng = np.random.default_rng(5)
    for _ in range(200):
        t1, t2 = rng.uniform(-3, 3, size=2)
        rho = rng.uniform(-0.999, 0.999)
        d1, d2 = sorted(rng.uniform(-3, 3, size=2))
        r1, r2 = sorted(rng.uniform(-1, 1, size=2))
        assert binorm_cdf(d1, t2, rho) <= binorm_cdf(d2, t2, rho) + 1e-12
        assert binorm_cdf(t1, d1, rho) <= binorm_cdf(t1, d2, rho) + 1e-12
        assert binorm_cdf(t1, t2, r1) <= binorm_cdf(t1, t2, r2) + 1e-12


def test_binorm_symmetry():
    rng = np.random.default_rng(9)
    for _ in range(100):
        t1, t2 = rng.uniform(-3, 3, size=2)
        rho = rng.uniform(-0.999, 0.999)
        assert binorm_cdf(t1, t2, rho) == pytest.approx(
            binorm_cdf(t2, t1, rho), abs=1e-13
        )


def test_binorm_frechet_bounds():
    rng = np.random.default_rng(13)
    for _ in range(500):
        t1, t2 = rng.uniform(-4, 4, size=2)
        rho = rng.uniform(-1, 1)
        v = binorm_cdf(t1, t2, rho)
        assert v >= max(0.0, std_cdf(t1) + std_cdf(t2) - 1.0) - 1e-12
        assert v <= min(std_cdf(t1), std_cdf(t2)) + 1e-12


def test_partials_at_origin():
    d_rho, d_t1, d_t2 = binorm_partials(0.0, 0.0, 0.0)
    assert d_rho == pytest.approx(1.0 / (2 * math.pi), abs=1e-14)
    assert d_t1 == pytest.approx(0.19947114020071635, abs=1e-12)
    assert d_t2 == pytest.approx(0.19947114020071635, abs=1e-12)


def test_partials_known_point():
    # frozen from the 50-digit oracle at (0.5, -0.3, -0.7)
    d_rho, d_t1, d_t2 = binorm_partials(0.5, -0.3, -0.7)
    assert d_t1 == pytest.approx(0.185858364237965015, abs=1e-12)
    assert d_t2 == pytest.approx(0.250822953725410904, abs=1e-12)
    assert d_rho == pytest.approx(0.196193125602296563, abs=1e-12)


def test_partials_match_finite_differences():
    rng = np.random.default_rng(17)
    h = 1e-5
    for _ in range(300):
        t1, t2 = rng.uniform(-2.5, 2.5, size=2)
        rho = rng.uniform(-0.95, 0.95)
        d_rho, d_t1, d_t2 = binorm_partials(t1, t2, rho)
        fd_rho = (binorm_cdf(t1, t2, rho + h) - binorm_cdf(t1, t2, rho - h)) / (2 * h)
        fd_t1 = (binorm_cdf(t1 + h, t2, rho) - binorm_cdf(t1 - h, t2, rho)) / (2 * h)
        fd_t2 = (binorm_cdf(t1, t2 + h, rho) - binorm_cdf(t1, t2 - h, rho)) / (2 * h)
        assert d_rho == pytest.approx(fd_rho, abs=1e-6)
        assert d_t1 == pytest.approx(fd_t1, abs=1e-6)
        assert d_t2 == pytest.approx(fd_t2, abs=1e-6)


def test_partials_domain_errors():
    with pytest.raises(ValueError):
        binorm_partials(0.1, 0.2, 1.0)
    with pytest.raises(ValueError):
        binorm_partials(INF, 0.2, 0.0)


def test_vectorized_matches_scalar():
    rng = np.random.default_rng(23)
    t1 = rng.uniform(-3, 3, size=64)
    t2 = rng.uniform(-3, 3, size=64)
    rho = rng.uniform(-0.999, 0.999, size=64)
    got = binorm_cdf_vec(t1, t2, rho)
    for i in range(64):
        assert got[i] == pytest.approx(binorm_cdf(t1[i], t2[i], rho[i]), abs=1e-10)
    # infinite thresholds mask to reductions
    got = binorm_cdf_vec([INF, -INF, 0.4], [0.3, 0.3, INF], [0.5, 0.5, -0.5])
    assert got[0] == pytest.approx(std_cdf(0.3), abs=0)
    assert got[1] == 0.0
    assert got[2] == pytest.approx(std_cdf(0.4), abs=0)
