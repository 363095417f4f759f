import math

import pytest

from weibull_tbe.adjustment import AdjustmentCriterion, Criterion, adjust, criterion_curve, criterion_value
from weibull_tbe.errors import InfeasibleCriterionError
from weibull_tbe.estimated import carl_quantile, ecarl, exceedance_probability, sdcarl
from weibull_tbe.known import ShiftSpec, design_limits, prob_signal

ALPHA = 0.0027
ECARL = AdjustmentCriterion(Criterion.ECARL_MATCH, 370.4)


@pytest.mark.parametrize("kw", [dict(target_arl=1.0), dict(epsilon=0), dict(epsilon=1), dict(kind="bogus")])
def test_criterion_validation(kw):
    with pytest.raises(ValueError):
        AdjustmentCriterion(**kw)


def test_ecarl_match_m30():
    res = adjust(30, ECARL)
    assert res.alpha_adj < ALPHA
    assert ecarl(30, res.alpha_adj) == pytest.approx(370.4, rel=1e-3)
    assert res.achieved == pytest.approx(370.4, rel=1e-5)
    lo, hi = res.bracket
    assert lo < res.alpha_adj < hi


def test_ecarl_match_large_m():
    res = adjust(100_000, ECARL)
    assert res.alpha_adj == pytest.approx(ALPHA, rel=1e-3)


def test_ecarl_monotone_in_alpha_on_bracket():
    alpha0 = 1 / 370.4
    grid = [alpha0 / 50, alpha0 / 5, alpha0, 5 * alpha0, 50 * alpha0]
    values = [ecarl(30, a) for a in grid]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_epc_cap_median():
    crit = AdjustmentCriterion(Criterion.EPC_CAP, 370.4, 0.5)
    res = adjust(30, crit)
    assert res.alpha_adj < ALPHA
    assert exceedance_probability(30, res.alpha_adj, 370.4) == pytest.approx(0.5, abs=1e-4)
    assert carl_quantile(0.5, 30, res.alpha_adj) == pytest.approx(370.4, rel=1e-3)


def test_sdcarl_cap_smallest_alpha():
    crit = AdjustmentCriterion(Criterion.SDCARL_CAP, 370.4, 0.3)
    res = adjust(30, crit)
    assert sdcarl(30, res.alpha_adj) <= 0.3 * 370.4
    assert sdcarl(30, res.alpha_adj * (1 - 1e-5)) > 0.3 * 370.4


def test_sdcarl_cap_infeasible():
    crit = AdjustmentCriterion(Criterion.SDCARL_CAP, 370.4, 0.001)
    with pytest.raises(InfeasibleCriterionError) as info:
        adjust(30, crit)
    diag = info.value.diagnostics
    assert diag["value_at_hi"] > 0.001 * 370.4


def test_m_must_be_at_least_two():
    with pytest.raises(ValueError):
        adjust(1, ECARL)


def test_curve_approaches_nominal():
    rows = criterion_curve([30, 100, 1000], ECARL)
    alphas = [r.alpha_adj for r in rows]
    assert all(r.feasible for r in rows)
    assert alphas[0] < alphas[1] < alphas[2] < ALPHA


def test_curve_single_row_matches_adjust():
    (row,) = criterion_curve([100], ECARL)
    assert row.alpha_adj == adjust(100, ECARL).alpha_adj


def test_curve_flags_infeasible():
    crit = AdjustmentCriterion(Criterion.SDCARL_CAP, 370.4, 0.001)
    rows = criterion_curve([30, 100], crit)
    assert [r.feasible for r in rows] == [False, False]
    assert all(math.isnan(r.alpha_adj) and r.message for r in rows)


def test_sdcarl_cap_one_percent_is_feasible_at_m30():
    # a cap of 3.7 is reached at very wide alpha, far from the nominal design
    row = criterion_curve([30], AdjustmentCriterion(Criterion.SDCARL_CAP, 370.4, 0.01))[0]
    assert row.feasible
    assert row.achieved <= 3.704


def test_adjustment_detection_cost():
    res = adjust(30, ECARL)
    before, after = design_limits(ALPHA, 1, 1), design_limits(res.alpha_adj, 1, 1)
    for d1 in (0.5, 2):
        assert prob_signal(after, ShiftSpec(d1, 1)) < prob_signal(before, ShiftSpec(d1, 1))


def test_criterion_value_dispatch():
    assert criterion_value(50, ALPHA, ECARL) == ecarl(50, ALPHA)
    assert criterion_value(50, ALPHA, AdjustmentCriterion("sdcarl_cap", 370.4, 0.2)) == sdcarl(50, ALPHA)
