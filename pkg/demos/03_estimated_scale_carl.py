"""When the scale comes from a Phase I sample, the chart's in-control ARL
becomes a random variable (the conditional ARL).  This script shows its
exact distribution for several Phase I sizes.

Run:  python demos/03_estimated_scale_carl.py
"""
import numpy as np

from weibull_tbe import carl_summary, carl_sup, conditional_arl, mle_scale, plugin_limits, sample, WeibullParams

alpha = 0.0027

# One Phase I sample, one set of plug-in limits, one conditional ARL.
rng = np.random.default_rng(7)
phase1 = sample(WeibullParams(2.0, 5.0), rng, 30)
est = mle_scale(phase1, 2.0, beta0=5.0)
d = plugin_limits(est, alpha, 2.0)
print(f"beta_hat={est.beta_hat:.3f}  limits=({d.LCL:.4f}, {d.UCL:.3f})  CARL={conditional_arl(est.w, alpha):.1f}")

w_star, cmax = carl_sup(alpha)
print(f"no Phase I sample can give a CARL above {cmax:.2f} (reached at w={w_star:.4f})\n")

print("    m    ECARL   SDCARL    EPC      5%     50%     95%")
for m in (30, 100, 500, 1000, 8000):
    s = carl_summary(m, alpha, target_arl=370.4)
    p = s.percentiles
    print(f"{m:5d} {s.acarl:8.2f} {s.sdcarl:8.2f}  {s.epc:.3f} {p[0.05]:7.1f} {p[0.5]:7.1f} {p[0.95]:7.1f}")
