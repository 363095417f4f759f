"""Probability limits when the in-control shape and scale are known,
and how quickly the chart reacts to scale or shape shifts.

Run:  python demos/02_known_parameter_chart.py
"""
from weibull_tbe import ShiftSpec, arl, design_limits, prob_signal, run_length_quantile

d = design_limits(0.0027, 1.0, 1.0)
print(f"LCL={d.LCL:.6f}  CL={d.CL:.4f}  UCL={d.UCL:.4f}")
print(f"in-control ARL = {arl(d):.2f}")

print("\ndelta1  delta2      PS      ARL  median RL")
for delta1 in (0.25, 0.5, 1.0, 2.0, 4.0):
    for delta2 in (1.0, 2.0):
        s = ShiftSpec(delta1, delta2)
        ps = prob_signal(d, s)
        print(f"{delta1:6.2f}  {delta2:6.1f}  {ps:.5f} {arl(d, s):8.2f}  {run_length_quantile(d, s, 0.5):9d}")

# With an exponential process, halving the mean gap is barely visible
# to a two-sided individuals chart: most of the signal comes from the UCL.
