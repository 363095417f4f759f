"""Monte Carlo CARL study: simulate raw Phase I data, fit the scale, and
summarise the conditional ARL of the resulting charts.  The analytic
results from the previous demo serve as a check.

Run:  python demos/04_table1_monte_carlo.py      (about 10 s)
"""
from weibull_tbe import StudyConfig, carl_summary, run_table1

cfg = StudyConfig(
    param_grid=[(1.0, 1.0), (0.5, 10.0), (2.0, 5.0)],
    m_list=[30, 100, 1000],
    replications=50_000,
)
rows = run_table1(cfg)

print("(eta0, beta0)     m    ACARL  analytic   SDCARL    EPC")
for row in rows:
    exact = carl_summary(row.m, cfg.alpha0, target_arl=cfg.target_arl, levels=())
    s = row.summary
    print(f"({row.eta0:>3}, {row.beta0:>4}) {row.m:6d} {s.acarl:8.2f} {exact.acarl:9.2f} {s.sdcarl:8.2f}  {s.epc:.3f}")

# The in-control CARL law does not depend on (eta0, beta0): every block
# estimates the same numbers up to Monte Carlo noise.
