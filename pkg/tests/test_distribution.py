import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from weibull_tbe.distribution import WeibullParams, cdf, moments, pdf, quantile, sample

positive = st.floats(min_value=0.2, max_value=20, allow_nan=False)
probs = st.floats(min_value=1e-9, max_value=1 - 1e-9)


class FixedStream:
    def __init__(self, u):
        self.u = u

    def random(self, size=None):
        return self.u if size is None else np.full(size, self.u)


@pytest.mark.parametrize("eta, beta", [(0, 1), (1, 0), (-1, 2), (1, math.inf), (math.nan, 1)])
def test_params_rejected(eta, beta):
    with pytest.raises(ValueError):
        WeibullParams(eta, beta)


def test_pdf_examples():
    assert pdf(1, WeibullParams(1, 1)) == pytest.approx(math.exp(-1), rel=1e-15)
    assert pdf(0, WeibullParams(2, 1)) == 0.0
    # central difference of the cdf at 1.5, computed offline
    assert pdf(1.5, WeibullParams(2, 2)) == pytest.approx(0.4273371185470331, abs=1e-6)


def test_pdf_negative_x():
    with pytest.raises(ValueError):
        pdf(-1.0, WeibullParams(1, 1))


def test_cdf_examples():
    for eta in (0.5, 1, 2, 7):
        assert cdf(3.0, WeibullParams(eta, 3.0)) == pytest.approx(1 - math.exp(-1), rel=1e-14)
    assert cdf(0, WeibullParams(1, 5)) == 0.0
    # numerical integral of the density
    assert cdf(2, WeibullParams(1, 1)) == pytest.approx(0.8646647167633872, rel=1e-12)


def test_quantile_examples():
    assert quantile(1 - math.exp(-1), WeibullParams(2.5, 7.0)) == pytest.approx(7.0, rel=1e-14)
    assert quantile(0.5, WeibullParams(1, 1)) == pytest.approx(math.log(2), rel=1e-15)
    p = WeibullParams(1.7, 3.0)
    for x in (0.1, 1, 10):
        assert quantile(cdf(x, p), p) == pytest.approx(x, rel=1e-10)


@pytest.mark.parametrize("u", [0.0, 1.0, -0.1, 1.5])
def test_quantile_domain(u):
    with pytest.raises(ValueError):
        quantile(u, WeibullParams(1, 1))


def test_moments():
    assert moments(WeibullParams(1, 1)) == pytest.approx((1.0, 1.0), rel=1e-14)
    mean, _ = moments(WeibullParams(2, 1))
    assert mean == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-14)
    assert moments(WeibullParams(1, 15)) == pytest.approx((15.0, 225.0), rel=1e-14)


def test_moments_against_sample_mean(rng):
    p = WeibullParams(2, 1)
    x = sample(p, rng, 10 ** 6)
    mean, var = moments(p)
    assert abs(x.mean() - mean) < 3 * math.sqrt(var / x.size)


def test_sample_inverse_transform():
    p = WeibullParams(3.0, 4.0)
    assert sample(p, FixedStream(1 - math.exp(-1))) == pytest.approx(4.0, rel=1e-14)
    assert np.allclose(sample(p, FixedStream(0.3), 5), quantile(0.3, p), rtol=1e-14)


def test_sample_deterministic():
    p = WeibullParams(1.5, 2.0)
    a = sample(p, np.random.default_rng(5), 1000)
    b = sample(p, np.random.default_rng(5), 1000)
    assert np.array_equal(a, b)


def test_sample_positive_even_at_zero_uniform():
    assert sample(WeibullParams(1, 1), FixedStream(0.0)) > 0


def test_sample_mean_clt_band(rng):
    p = WeibullParams(2, 5)
    x = sample(p, rng, 10 ** 6)
    mean, var = moments(p)
    assert abs(x.mean() - mean) < 3 * math.sqrt(var / x.size)


def test_sample_ks(rng):
    p = WeibullParams(0.7, 3.0)
    x = sample(p, rng, 10 ** 5)
    res = stats.kstest(x, lambda v: cdf(v, p))
    assert res.pvalue > 0.01


@given(eta=positive, beta=positive, c=positive, u=probs)
def test_scale_equivariance(eta, beta, c, u):
    assert quantile(u, WeibullParams(eta, c * beta)) == pytest.approx(c * quantile(u, WeibullParams(eta, beta)), rel=1e-12)


@given(eta=positive, beta=positive, u=probs)
def test_cdf_quantile_identity(eta, beta, u):
    p = WeibullParams(eta, beta)
    assert cdf(quantile(u, p), p) == pytest.approx(u, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(eta=st.floats(min_value=1.0, max_value=5), frac=st.floats(min_value=0.01, max_value=10))
def test_pdf_integrates_to_cdf(eta, frac):
    p = WeibullParams(eta, 2.0)
    x = frac * p.beta
    val, _ = integrate.quad(pdf, 0, x, args=(p,), epsabs=1e-13, epsrel=1e-12, limit=200)
    assert val == pytest.approx(cdf(x, p), abs=1e-8)


def test_pdf_integrates_to_cdf_decreasing_hazard():
    p = WeibullParams(0.5, 2.0)
    for x in (0.1, 2.0, 20.0):
        val, _ = integrate.quad(pdf, 0, x, args=(p,), epsabs=1e-13, limit=200)
        assert val == pytest.approx(cdf(x, p), abs=1e-8)
