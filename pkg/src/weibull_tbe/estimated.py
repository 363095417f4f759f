"""Estimated-scale chart: Phase I MLE, plug-in limits and the exact
distribution of the conditional ARL across Phase I samples.

Everything is worked out in terms of the pivot ``w = (beta_hat/beta0)**eta0``.
For in-control Phase I data ``w ~ Gamma(shape=m, mean=1)``, so ``2*m*w`` is
chi-square with ``2m`` degrees of freedom, whatever ``(eta0, beta0)`` are.
Under a shift the plug-in signal probability is a function of

    t = w**delta2 / delta1**(delta2*eta0)

only:  CPS = 1 - exp(-t*b1) + exp(-t*b2)  with  b_j = a_j**delta2,
a1 = -ln(1 - alpha0/2) and a2 = -ln(alpha0/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import optimize, stats

from .errors import QuadratureError, RootFindingError
from .known import IN_CONTROL, ChartDesign, ShiftSpec, Source, _build, check_alpha

__all__ = [
    "PERCENTILE_LEVELS",
    "PhaseIEstimate",
    "CarlSummary",
    "mle_scale",
    "mle_scale_batch",
    "plugin_limits",
    "tail_exponents",
    "conditional_ps",
    "conditional_arl",
    "carl_sup",
    "ecarl",
    "sdcarl",
    "carl_moments",
    "carl_cdf",
    "carl_quantile",
    "exceedance_probability",
    "carl_summary",
]

PERCENTILE_LEVELS = (0.05, 0.10, 0.25, 0.50, 0.75, 0.90, 0.95)

# pivot tail mass dropped on each side by the quadrature
_TAIL = 1e-18
_GL_ORDERS = (256, 512, 1024, 2048, 4096)
_QUAD_RTOL = 1e-8


@dataclass(frozen=True)
class PhaseIEstimate:
    m: int
    beta_hat: float
    w: float | None = None


@dataclass
class CarlSummary:
    acarl: float
    sdcarl: float
    epc: float
    percentiles: dict[float, float] = field(default_factory=dict)
    carl_sup: float = math.nan

    def __post_init__(self):
        levels = sorted(self.percentiles)
        self.percentiles = {g: self.percentiles[g] for g in levels}


def _check_m(m) -> int:
    if int(m) != m or m < 1:
        raise ValueError(f"Phase I sample size must be a positive integer, got {m!r}")
    return int(m)


def mle_scale_batch(x, eta0: float):
    """Scale MLE along the last axis of ``x`` for known shape ``eta0``."""
    x = np.asarray(x, dtype=float)
    s = x if eta0 == 1.0 else x ** eta0
    mean = s.mean(axis=-1)
    return mean if eta0 == 1.0 else mean ** (1.0 / eta0)


def mle_scale(phase1, eta0: float, beta0: float | None = None) -> PhaseIEstimate:
    """MLE ``(sum x_i**eta0 / m)**(1/eta0)`` from a Phase I sample.

    When ``beta0`` is given the pivot ``w`` is filled in as well.
    """
    x = np.asarray(phase1, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("Phase I sample must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(x) & (x > 0)):
        raise ValueError("Phase I observations must be positive and finite")
    if not eta0 > 0:
        raise ValueError("eta0 must be positive")
    beta_hat = float(mle_scale_batch(x, eta0))
    w = None if beta0 is None else (beta_hat / beta0) ** eta0
    return PhaseIEstimate(m=x.size, beta_hat=beta_hat, w=w)


def plugin_limits(est: PhaseIEstimate, alpha0: float, eta0: float) -> ChartDesign:
    return _build(alpha0, eta0, est.beta_hat, Source.ESTIMATED)


def tail_exponents(alpha0: float, shift: ShiftSpec = IN_CONTROL) -> tuple[float, float]:
    """``(b1, b2)``: the tail exponents raised to ``delta2``."""
    check_alpha(alpha0)
    a1 = -math.log1p(-alpha0 / 2.0)
    a2 = -math.log(alpha0 / 2.0)
    return a1 ** shift.delta2, a2 ** shift.delta2


def _t_of_w(w, eta0, shift):
    return w ** shift.delta2 / shift.delta1 ** (shift.delta2 * eta0)


def _w_of_t(t, eta0, shift):
    return (t * shift.delta1 ** (shift.delta2 * eta0)) ** (1.0 / shift.delta2)


def _cps_t(t, b1, b2):
    return -np.expm1(-t * b1) + np.exp(-t * b2)


def conditional_ps(w, alpha0: float, eta0: float = 1.0, shift: ShiftSpec = IN_CONTROL):
    """Signal probability of the plug-in chart given the Phase I pivot ``w``."""
    b1, b2 = tail_exponents(alpha0, shift)
    w = np.asarray(w, dtype=float)
    if np.any(~(w > 0)):
        raise ValueError("pivot w must be positive")
    out = _cps_t(_t_of_w(w, eta0, shift), b1, b2)
    return float(out) if out.ndim == 0 else out


def conditional_arl(w, alpha0: float, eta0: float = 1.0, shift: ShiftSpec = IN_CONTROL):
    """``1/CPS``; infinite where the signal probability underflows to zero."""
    cps = np.asarray(conditional_ps(w, alpha0, eta0, shift))
    with np.errstate(divide="ignore"):
        out = 1.0 / cps
    return float(out) if out.ndim == 0 else out


def _t_star(b1, b2):
    return math.log(b2 / b1) / (b2 - b1)


def carl_sup(alpha0: float, eta0: float = 1.0, shift: ShiftSpec = IN_CONTROL) -> tuple[float, float]:
    """Pivot value ``w_star`` minimising CPS and the resulting largest CARL.

    CPS decreases on ``(0, w_star)`` and increases afterwards, so no Phase I
    sample can produce a conditional ARL above ``carl_max``.
    """
    b1, b2 = tail_exponents(alpha0, shift)
    t = _t_star(b1, b2)
    return float(_w_of_t(t, eta0, shift)), float(1.0 / _cps_t(t, b1, b2))


@lru_cache(maxsize=None)
def _gauss_legendre(n):
    return np.polynomial.legendre.leggauss(n)


def _pivot_expectation(g, m: int) -> float:
    """E[g(W)] for W ~ Gamma(m, mean 1).

    Gauss-Legendre in log(w) over the central 1 - 2e-18 of the law.  The
    integrand is analytic there; orders are doubled until two successive
    rules agree to ``_QUAD_RTOL``.
    """
    law = stats.gamma(m, scale=1.0 / m)
    lo, hi = math.log(law.ppf(_TAIL)), math.log(law.isf(_TAIL))
    half = 0.5 * (hi - lo)

    def rule(n):
        x, wt = _gauss_legendre(n)
        t = lo + half * (x + 1.0)
        w = np.exp(t)
        dens = np.exp(law.logpdf(w) + t)
        return half * float(np.dot(wt, dens * g(w)))

    prev = rule(_GL_ORDERS[0])
    for n in _GL_ORDERS[1:]:
        cur = rule(n)
        err = abs(cur - prev)
        if err <= _QUAD_RTOL * abs(cur):
            return cur
        prev = cur
    raise QuadratureError(
        f"pivot quadrature did not converge for m={m} (estimate {cur!r}, difference {err:.3g})",
        estimate=cur,
        error=err,
    )


def carl_moments(m: int, alpha0: float, shift: ShiftSpec = IN_CONTROL, eta0: float = 1.0):
    """``(ECARL, SDCARL)`` by quadrature over the pivot law."""
    m = _check_m(m)
    b1, b2 = tail_exponents(alpha0, shift)

    def carl(w):
        return 1.0 / _cps_t(_t_of_w(w, eta0, shift), b1, b2)

    mean = _pivot_expectation(carl, m)
    # central second moment avoids cancellation for large m
    var = _pivot_expectation(lambda w: (carl(w) - mean) ** 2, m)
    if var < 0:
        raise QuadratureError(f"negative CARL variance {var!r} for m={m}", estimate=var)
    return mean, math.sqrt(var)


def ecarl(m: int, alpha0: float, shift: ShiftSpec = IN_CONTROL, eta0: float = 1.0) -> float:
    """Expected conditional ARL over the Phase I sampling distribution."""
    m = _check_m(m)
    b1, b2 = tail_exponents(alpha0, shift)
    return _pivot_expectation(lambda w: 1.0 / _cps_t(_t_of_w(w, eta0, shift), b1, b2), m)


def sdcarl(m: int, alpha0: float, shift: ShiftSpec = IN_CONTROL, eta0: float = 1.0) -> float:
    """Standard deviation of the conditional ARL."""
    return carl_moments(m, alpha0, shift, eta0)[1]


def _roots(p, b1, b2):
    """The two solutions ``t_lo < t_star < t_hi`` of CPS(t) = p, or None if CPS > p everywhere."""
    ts = _t_star(b1, b2)

    def f(t):
        return float(_cps_t(t, b1, b2)) - p

    if f(ts) >= 0:
        return None
    upper = 2.0 * ts
    for _ in range(2000):
        if f(upper) >= 0:
            break
        upper *= 2.0
    else:
        raise RootFindingError(f"could not bracket the upper root of CPS = {p!r}")
    xtol = 1e-15 * ts
    try:
        t_lo = optimize.brentq(f, 0.0, ts, xtol=xtol, rtol=1e-15)
        t_hi = optimize.brentq(f, ts, upper, xtol=xtol, rtol=1e-15)
    except (ValueError, RuntimeError) as exc:
        raise RootFindingError(str(exc)) from exc
    return t_lo, t_hi


def carl_cdf(c: float, m: int, alpha0: float, shift: ShiftSpec = IN_CONTROL, eta0: float = 1.0) -> float:
    """P(CARL <= c) across Phase I samples of size ``m``."""
    m = _check_m(m)
    if c <= 1.0:
        return 0.0  # CPS < 1 always, so CARL > 1
    b1, b2 = tail_exponents(alpha0, shift)
    roots = _roots(1.0 / c, b1, b2)
    if roots is None:
        return 1.0
    w_lo, w_hi = (_w_of_t(t, eta0, shift) for t in roots)
    dof = 2 * m
    # w and CPS move in the same direction only for delta2 > 0, which always holds
    return float(stats.chi2.cdf(dof * w_lo, dof) + stats.chi2.sf(dof * w_hi, dof))


def carl_quantile(gamma: float, m: int, alpha0: float, shift: ShiftSpec = IN_CONTROL, eta0: float = 1.0) -> float:
    """Level-``gamma`` quantile of the CARL distribution, by bisection on :func:`carl_cdf`."""
    if not (0.0 < gamma < 1.0):
        raise ValueError("gamma must lie in (0, 1)")
    _, cmax = carl_sup(alpha0, eta0, shift)
    return optimize.bisect(
        lambda c: carl_cdf(c, m, alpha0, shift, eta0) - gamma,
        1.0,
        cmax,
        xtol=1e-12,
        rtol=1e-12,
        maxiter=200,
    )


def exceedance_probability(
    m: int, alpha0: float, target_arl: float, shift: ShiftSpec = IN_CONTROL, eta0: float = 1.0
) -> float:
    """P(CARL < target_arl).  CARL has a continuous law, so this equals the CDF."""
    return carl_cdf(target_arl, m, alpha0, shift, eta0)


def carl_summary(
    m: int,
    alpha0: float,
    levels=PERCENTILE_LEVELS,
    target_arl: float | None = None,
    shift: ShiftSpec = IN_CONTROL,
    eta0: float = 1.0,
) -> CarlSummary:
    """Analytic counterpart of a Monte Carlo CARL study row."""
    if target_arl is None:
        target_arl = 1.0 / alpha0
    mean, sd = carl_moments(m, alpha0, shift, eta0)
    return CarlSummary(
        acarl=mean,
        sdcarl=sd,
        epc=exceedance_probability(m, alpha0, target_arl, shift, eta0),
        percentiles={g: carl_quantile(g, m, alpha0, shift, eta0) for g in levels},
        carl_sup=carl_sup(alpha0, eta0, shift)[1],
    )
