import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from ris_ssk.special_math import NoncentralChiSq1, bessel_i0, bessel_i1, mgf, pdf, q_approx, q_exact

from conftest import series_i0, series_i1


@pytest.mark.parametrize(
    "fn, x, expected",
    [
        (bessel_i0, 0.0, 1.0),
        (bessel_i0, 1.0, 1.2660658777520083356),
        (bessel_i0, 5.0, 27.239871823604446895),
        (bessel_i1, 0.0, 0.0),
        (bessel_i1, 1.0, 0.56515910399248502721),
        (bessel_i1, 2.0, 1.5906368546373290634),
    ],
)
def test_bessel_examples(fn, x, expected):
    assert fn(x) == pytest.approx(expected, rel=1e-14, abs=0)


def test_bessel_matches_series_oracle_on_random_grid():
    xs = np.random.default_rng(0).uniform(0, 30, 1000)
    for x in xs:
        assert bessel_i0(x) == pytest.approx(series_i0(x, 30), rel=1e-10)
        assert bessel_i1(x) == pytest.approx(series_i1(x, 30), rel=1e-10)


@pytest.mark.parametrize("x", [14.99, 15.0, 15.01, 20.0, 33.3, 49.9, 50.0])
def test_bessel_across_branch_switch(x):
    assert bessel_i0(x) == pytest.approx(series_i0(x), rel=1e-12)
    assert bessel_i1(x) == pytest.approx(series_i1(x), rel=1e-12)


@pytest.mark.parametrize("fn", [bessel_i0, bessel_i1])
@pytest.mark.parametrize("bad", [math.nan, math.inf, -1.0])
def test_bessel_domain(fn, bad):
    with pytest.raises(ValueError):
        fn(bad)


def test_q_exact_examples():
    assert q_exact(0.0) == 0.5
    assert q_exact(math.inf) == 0.0
    assert q_exact(40.0) < 1e-300
    # mpmath quantile oracle
    assert q_exact(1.6448536) == pytest.approx(0.050000002779657459, abs=1e-15)
    assert q_exact(1.6448536) == pytest.approx(0.05, abs=1e-8)


@given(st.floats(-8, 8))
def test_q_symmetry(x):
    assert abs(q_exact(x) + q_exact(-x) - 1.0) <= 1e-14


@settings(max_examples=200)
@given(st.floats(-8, 8))
def test_q_exact_matches_high_precision(x):
    assert q_exact(x) == pytest.approx(float(mp.ncdf(-mp.mpf(x))), abs=1e-14)


def test_q_exact_decreasing():
    # strict where consecutive values are resolvable in double precision
    xs = np.linspace(-5, 8, 2001)
    q = [q_exact(x) for x in xs]
    assert all(a > b for a, b in zip(q, q[1:]))
    q = [q_exact(x) for x in np.linspace(-8, -5, 500)]
    assert all(a >= b for a, b in zip(q, q[1:]))


def test_q_exact_rejects_nan():
    with pytest.raises(ValueError):
        q_exact(math.nan)


def test_q_approx_examples():
    assert q_approx(0.0) == pytest.approx(1.0 / 3.0, rel=1e-15)
    assert q_approx(2.0) == pytest.approx(0.028648803075418108, rel=1e-14)
    assert q_approx(math.inf) == 0.0
    assert q_approx(60.0) == 0.0


def test_q_approx_monotone_and_domain():
    xs = np.linspace(0, 10, 1001)
    vals = [q_approx(x) for x in xs]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        q_approx(-0.1)


def test_q_approx_error_profile():
    xs = np.linspace(0, 8, 801)
    gap = max(abs(q_approx(x) - q_exact(x)) for x in xs)
    # worst case is at the origin: 1/2 - 1/3
    assert gap == pytest.approx(1.0 / 6.0, rel=1e-12)
    ratios = [q_approx(x) / q_exact(x) for x in np.linspace(0, 8, 81)]
    assert all(math.isfinite(r) for r in ratios)
    assert max(ratios) == pytest.approx(1.6965562055, rel=1e-8)
    # the ratio is not bounded: it grows like sqrt(2 pi) x / 12 in the tail
    for x in (20.0, 30.0):
        assert q_approx(x) / q_exact(x) / x == pytest.approx(math.sqrt(2 * math.pi) / 12, rel=5e-3)


def test_mgf_examples():
    assert mgf(NoncentralChiSq1(3.0, 2.0), 0.0) == 1.0
    assert mgf(NoncentralChiSq1(0.0, 1.0), -0.5) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert mgf(NoncentralChiSq1(2.0, 1.0), -1.0) == pytest.approx(math.exp(-4 / 3) / math.sqrt(3), rel=1e-15)


def test_mgf_monte_carlo_oracle():
    z = np.random.default_rng(99).normal(2.0, 1.0, 10_000_000)
    samples = np.exp(-(z**2))
    est = samples.mean()
    se = samples.std() / math.sqrt(z.size)
    assert abs(mgf(NoncentralChiSq1(2.0, 1.0), -1.0) - est) < 4 * se


def test_mgf_singularity():
    dist = NoncentralChiSq1(1.0, 0.5)
    with pytest.raises(ValueError):
        mgf(dist, 1.0)
    with pytest.raises(ValueError):
        mgf(dist, 2.0)


def test_distribution_rejects_bad_variance():
    with pytest.raises(ValueError):
        NoncentralChiSq1(0.0, 0.0)
    with pytest.raises(ValueError):
        NoncentralChiSq1(0.0, -1.0)


def _integrate_sqrt_space(f, dist):
    # x = t^2; the lobe sits near t = mu
    centre = abs(dist.mu)
    width = math.sqrt(dist.sigma_sq)
    edges = sorted({0.0, centre, centre + 40 * width})
    total = 0.0
    for a, b in zip(edges, edges[1:] + [math.inf]):
        total += integrate.quad(lambda t: f(t * t) * 2 * t if t > 0 else 0.0, a, b,
                                epsabs=0, epsrel=1e-12, limit=200)[0]
    return total


def test_pdf_examples():
    d = NoncentralChiSq1(0.0, 1.0)
    assert pdf(d, 1.0) == pytest.approx(math.exp(-0.5) / math.sqrt(2 * math.pi), rel=1e-15)
    assert _integrate_sqrt_space(lambda x: pdf(d, x), d) == pytest.approx(1.0, abs=1e-10)
    d = NoncentralChiSq1(3.0, 2.0)
    assert _integrate_sqrt_space(lambda x: x * pdf(d, x), d) == pytest.approx(11.0, rel=1e-10)


def test_pdf_domain():
    with pytest.raises(ValueError):
        pdf(NoncentralChiSq1(0.0, 1.0), 0.0)
    with pytest.raises(ValueError):
        pdf(NoncentralChiSq1(0.0, 1.0), -2.0)


def test_pdf_matches_bessel_form():
    # classical noncentral chi-square(1) density in terms of cosh
    d = NoncentralChiSq1(1.7, 0.8)
    for x in (0.05, 0.7, 2.3, 9.0):
        ref = (math.exp(-(x + d.mu**2) / (2 * d.sigma_sq)) * math.cosh(d.mu * math.sqrt(x) / d.sigma_sq)
               / math.sqrt(2 * math.pi * d.sigma_sq * x))
        assert pdf(d, x) == pytest.approx(ref, rel=1e-13)


def test_mgf_and_normalisation_on_random_grid():
    rng = np.random.default_rng(3)
    for _ in range(100):
        d = NoncentralChiSq1(rng.uniform(0, 10), rng.uniform(0.1, 10))
        s = rng.uniform(-2, 0)
        assert _integrate_sqrt_space(lambda x: pdf(d, x), d) == pytest.approx(1.0, abs=1e-8)
        quad = _integrate_sqrt_space(lambda x: math.exp(s * x) * pdf(d, x), d)
        assert mgf(d, s) == pytest.approx(quad, rel=1e-8)
