import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from weibull_tbe.distribution import WeibullParams, cdf, sample
from weibull_tbe.known import (
    IN_CONTROL,
    ChartDesign,
    ShiftSpec,
    Source,
    arl,
    design_limits,
    geometric_quantile,
    prob_signal,
    run_length_quantile,
)
from weibull_tbe.simulation import simulate_run_lengths

ALPHA = 0.0027


def test_design_example_eta1():
    d = design_limits(ALPHA, 1, 1)
    assert d.A1 == pytest.approx(0.0013509120709562367, rel=1e-12)
    assert d.A2 == pytest.approx(6.607650686531799, rel=1e-12)
    assert d.CL == pytest.approx(1.0, rel=1e-14)
    assert d.source is Source.KNOWN
    p = WeibullParams(1, 1)
    assert cdf(d.LCL, p) == pytest.approx(ALPHA / 2, rel=1e-12)
    assert 1 - cdf(d.UCL, p) == pytest.approx(ALPHA / 2, rel=1e-10)


def test_design_example_eta2():
    d = design_limits(ALPHA, 2, 1)
    assert d.A1 == pytest.approx(0.0367547557597141, rel=1e-10)
    assert d.A2 == pytest.approx(2.570535097315693, rel=1e-12)
    assert d.CL == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-14)


def test_design_scale_equivariance():
    d1, d2 = design_limits(ALPHA, 1.5, 3.0), design_limits(ALPHA, 1.5, 6.0)
    assert (d2.A1, d2.A2) == (d1.A1, d1.A2)
    for name in ("LCL", "UCL", "CL"):
        assert getattr(d2, name) == pytest.approx(2 * getattr(d1, name), rel=1e-14)


@pytest.mark.parametrize("alpha", [0, 1, -0.1, 1.5])
def test_design_rejects_alpha(alpha):
    with pytest.raises(ValueError):
        design_limits(alpha, 1, 1)


@given(
    alpha=st.floats(min_value=1e-6, max_value=0.49),
    eta=st.floats(min_value=0.2, max_value=15),
    beta=st.floats(min_value=0.01, max_value=100),
)
def test_design_invariants(alpha, eta, beta):
    d = design_limits(alpha, eta, beta)
    assert d.A1 < d.A2
    assert prob_signal(d, IN_CONTROL) == pytest.approx(alpha, rel=1e-12)


@given(
    alpha=st.floats(min_value=1e-6, max_value=0.01),
    eta=st.floats(min_value=0.5, max_value=15),
    beta=st.floats(min_value=0.01, max_value=100),
)
def test_center_line_between_limits(alpha, eta, beta):
    # fails for very small eta, where the mean lies beyond the upper probability limit
    d = design_limits(alpha, eta, beta)
    assert d.LCL < d.CL < d.UCL


def test_design_dict_round_trip():
    d = design_limits(ALPHA, 1.3, 4.2)
    assert ChartDesign.from_dict(d.to_dict()) == d


def test_prob_signal_examples():
    d = design_limits(ALPHA, 1, 1)
    assert prob_signal(d) == pytest.approx(ALPHA, rel=1e-13)
    # 10^6-draw Monte Carlo oracle gave 0.037453 and 0.002614
    assert prob_signal(d, ShiftSpec(2, 1)) == pytest.approx(0.03741, abs=1e-5)
    assert prob_signal(d, ShiftSpec(0.5, 1)) == pytest.approx(0.002700, abs=2e-6)


def test_prob_signal_beta_invariance():
    s = ShiftSpec(1.7, 0.8)
    assert prob_signal(design_limits(ALPHA, 2, 1), s) == pytest.approx(prob_signal(design_limits(ALPHA, 2, 2), s), rel=1e-14)


def test_arl_examples():
    d = design_limits(ALPHA, 1, 1)
    assert arl(d) == pytest.approx(370.37037, rel=1e-7)
    assert arl(d, ShiftSpec(2, 1)) == pytest.approx(26.73, abs=0.01)


def test_arl_unbounded():
    # tiny alpha plus a downward scale shift with a steeper shape: both tails underflow
    d = design_limits(1e-300, 1, 1)
    assert arl(d, ShiftSpec(0.5, 5)) == math.inf


def test_geometric_quantiles():
    assert geometric_quantile(0.5, 0.5) == 1
    # summed geometric pmf until it reaches q
    assert geometric_quantile(0.0027, 0.5) == 257
    assert geometric_quantile(0.0027, 0.95) == 1109
    assert geometric_quantile(1.0, 0.99) == 1
    d = design_limits(ALPHA, 1, 1)
    assert run_length_quantile(d, IN_CONTROL, 0.5) == 257


@pytest.mark.parametrize("delta1", [0.25, 0.5, 1, 2, 4])
@pytest.mark.parametrize("delta2", [0.5, 1, 2])
def test_prob_signal_matches_mc(delta1, delta2):
    d = design_limits(ALPHA, 1.5, 3.0)
    s = ShiftSpec(delta1, delta2)
    n = 10 ** 6
    rng = np.random.default_rng([17, int(delta1 * 100), int(delta2 * 100)])
    x = sample(WeibullParams(d.eta0 * delta2, d.scale_used * delta1), rng, n)
    freq = np.mean((x < d.LCL) | (x > d.UCL))
    ps = prob_signal(d, s)
    assert abs(freq - ps) <= 3 * math.sqrt(ps * (1 - ps) / n) + 1.0 / n


def test_run_length_mc_upward_shift():
    d = design_limits(ALPHA, 1, 1)
    s = ShiftSpec(2, 1)
    mean, _ = simulate_run_lengths(d, s, 10 ** 5, np.random.default_rng(3))
    assert mean == pytest.approx(arl(d, s), rel=0.02)
