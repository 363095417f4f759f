"""Shewhart-type control charts for Weibull-distributed times between events,
with known or Phase I estimated scale."""

from .distribution import WeibullParams, cdf, moments, pdf, quantile, sample
from .known import (
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
from .estimated import (
    CarlSummary,
    PhaseIEstimate,
    carl_cdf,
    carl_quantile,
    carl_summary,
    carl_sup,
    conditional_arl,
    conditional_ps,
    ecarl,
    exceedance_probability,
    mle_scale,
    plugin_limits,
    sdcarl,
)
from .simulation import StudyConfig, run_table1, simulate_carl_distribution, simulate_run_lengths
from .adjustment import AdjustmentCriterion, AdjustmentResult, Criterion, adjust, criterion_curve

__version__ = "0.1.0"
