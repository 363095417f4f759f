"""Choosing a false-alarm rate so that estimated limits behave as intended
in control, under three different criteria.

Run:  python demos/05_adjusting_limits.py
"""
from weibull_tbe import AdjustmentCriterion, ShiftSpec, adjust, arl, criterion_curve, design_limits

m_list = [30, 100, 1000, 8000]

for kind, eps in (("ecarl_match", 0.5), ("epc_cap", 0.5), ("epc_cap", 0.1), ("sdcarl_cap", 0.1)):
    crit = AdjustmentCriterion(kind, 370.4, eps)
    print(f"\n{kind} (epsilon={eps})")
    for row in criterion_curve(m_list, crit):
        status = f"alpha={row.alpha_adj:.6f}  value={row.achieved:.4g}" if row.feasible else "infeasible"
        print(f"  m={row.m:5d}  {status}")

# Wider limits cost detection speed.
res = adjust(30, AdjustmentCriterion("ecarl_match", 370.4))
for delta1 in (0.5, 2.0):
    before = arl(design_limits(0.0027, 1, 1), ShiftSpec(delta1, 1))
    after = arl(design_limits(res.alpha_adj, 1, 1), ShiftSpec(delta1, 1))
    print(f"delta1={delta1}: ARL {before:.1f} -> {after:.1f}")
