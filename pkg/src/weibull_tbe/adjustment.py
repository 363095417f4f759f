"""Re-tune the false-alarm rate of a plug-in chart so its in-control
conditional performance meets a target.

The only knob is the equal-tail probability ``alpha``; the limits stay at the
``alpha/2`` and ``1 - alpha/2`` points of the fitted Weibull.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InfeasibleCriterionError, NumericalError
from .estimated import ecarl, exceedance_probability, sdcarl

__all__ = [
    "Criterion",
    "AdjustmentCriterion",
    "AdjustmentResult",
    "CurveRow",
    "criterion_value",
    "adjust",
    "criterion_curve",
]

_ALPHA_RTOL = 1e-6
_MAX_ITER = 200


class Criterion(str, Enum):
    ECARL_MATCH = "ecarl_match"
    EPC_CAP = "epc_cap"
    SDCARL_CAP = "sdcarl_cap"


@dataclass(frozen=True)
class AdjustmentCriterion:
    """``epsilon`` is the allowed P(CARL < target) for ``epc_cap`` and the
    allowed SDCARL as a fraction of ``target_arl`` for ``sdcarl_cap``; it is
    ignored by ``ecarl_match``.
    """

    kind: Criterion = Criterion.ECARL_MATCH
    target_arl: float = 370.4
    epsilon: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "kind", Criterion(self.kind))
        if not self.target_arl > 1:
            raise ValueError("target_arl must exceed 1")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")

    @property
    def goal(self) -> float:
        if self.kind is Criterion.ECARL_MATCH:
            return self.target_arl
        if self.kind is Criterion.EPC_CAP:
            return self.epsilon
        return self.epsilon * self.target_arl


@dataclass(frozen=True)
class AdjustmentResult:
    alpha_adj: float
    achieved: float
    iterations: int
    bracket: tuple[float, float]
    m: int
    criterion: AdjustmentCriterion


def criterion_value(m: int, alpha: float, crit: AdjustmentCriterion) -> float:
    """ECARL, EPC or SDCARL of the chart built with false-alarm rate ``alpha``."""
    if crit.kind is Criterion.ECARL_MATCH:
        return ecarl(m, alpha)
    if crit.kind is Criterion.EPC_CAP:
        return exceedance_probability(m, alpha, crit.target_arl)
    return sdcarl(m, alpha)


def adjust(m: int, crit: AdjustmentCriterion, alpha0: float | None = None) -> AdjustmentResult:
    """Bisect (in log alpha) over ``[alpha0/50, min(0.5, 50*alpha0)]``.

    ``alpha0`` defaults to ``1/target_arl``.  ECARL and SDCARL fall as alpha
    grows and EPC rises, so each criterion has at most one crossing.  For
    ``sdcarl_cap`` the result is the smallest alpha meeting the cap.
    """
    if int(m) != m or m < 2:
        raise ValueError("adjustment needs m >= 2")
    m = int(m)
    if alpha0 is None:
        alpha0 = 1.0 / crit.target_arl
    lo, hi = alpha0 / 50.0, min(0.5, 50.0 * alpha0)
    goal = crit.goal
    # orient so that g(lo) > 0 > g(hi)
    sign = -1.0 if crit.kind is Criterion.EPC_CAP else 1.0

    def g(alpha):
        return sign * (criterion_value(m, alpha, crit) - goal)

    g_lo, g_hi = g(lo), g(hi)
    diagnostics = {
        "m": m,
        "bracket": (lo, hi),
        "value_at_lo": criterion_value(m, lo, crit),
        "value_at_hi": criterion_value(m, hi, crit),
        "goal": goal,
    }
    if crit.kind is Criterion.SDCARL_CAP and g_lo <= 0:
        return AdjustmentResult(lo, diagnostics["value_at_lo"], 0, (lo, hi), m, crit)
    if not (g_lo > 0 > g_hi):
        raise InfeasibleCriterionError(
            f"criterion {crit.kind.value} unsatisfiable at m={m}: "
            f"value {diagnostics['value_at_lo']:.6g} at alpha={lo:.6g}, "
            f"{diagnostics['value_at_hi']:.6g} at alpha={hi:.6g}, goal {goal:.6g}",
            diagnostics,
        )

    a, b = lo, hi
    for it in range(1, _MAX_ITER + 1):
        mid = math.sqrt(a * b)
        if g(mid) > 0:
            a = mid
        else:
            b = mid
        if b / a - 1.0 <= _ALPHA_RTOL:
            break
    else:
        raise NumericalError("alpha bisection did not converge")
    # the feasible end of the final bracket, so a cap is never exceeded
    alpha_adj = b if crit.kind is Criterion.SDCARL_CAP else math.sqrt(a * b)
    return AdjustmentResult(alpha_adj, criterion_value(m, alpha_adj, crit), it, (lo, hi), m, crit)


@dataclass(frozen=True)
class CurveRow:
    m: int
    alpha_adj: float
    achieved: float
    feasible: bool
    message: str = ""


def criterion_curve(m_list, crit: AdjustmentCriterion, alpha0: float | None = None) -> list[CurveRow]:
    """Run :func:`adjust` for each ``m``; infeasible rows are kept and flagged."""
    rows = []
    for m in m_list:
        try:
            res = adjust(m, crit, alpha0)
        except InfeasibleCriterionError as exc:
            rows.append(CurveRow(int(m), math.nan, math.nan, False, str(exc)))
        else:
            rows.append(CurveRow(res.m, res.alpha_adj, res.achieved, True))
    return rows
