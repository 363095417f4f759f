"""Shewhart probability-limit chart for individual Weibull TBE observations
when the in-control shape and scale are known.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum

__all__ = [
    "Source",
    "ChartDesign",
    "ShiftSpec",
    "IN_CONTROL",
    "check_alpha",
    "limit_coefficients",
    "design_limits",
    "prob_signal",
    "arl",
    "geometric_quantile",
    "run_length_quantile",
]


class Source(str, Enum):
    KNOWN = "known"
    ESTIMATED = "estimated"


@dataclass(frozen=True)
class ShiftSpec:
    """Multiplicative shifts: ``delta1`` on the scale, ``delta2`` on the shape."""

    delta1: float = 1.0
    delta2: float = 1.0

    def __post_init__(self):
        for name in ("delta1", "delta2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive, got {value!r}")

    @property
    def in_control(self) -> bool:
        return self.delta1 == 1.0 and self.delta2 == 1.0


IN_CONTROL = ShiftSpec()


@dataclass(frozen=True)
class ChartDesign:
    alpha0: float
    eta0: float
    scale_used: float
    A1: float
    A2: float
    LCL: float
    UCL: float
    CL: float
    source: Source = Source.KNOWN

    def to_dict(self) -> dict:
        d = asdict(self)
        d["source"] = self.source.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ChartDesign":
        fields = {k: d[k] for k in ("alpha0", "eta0", "scale_used", "A1", "A2", "LCL", "UCL", "CL")}
        return cls(**{k: float(v) for k, v in fields.items()}, source=Source(d.get("source", "known")))


def check_alpha(alpha0: float) -> float:
    if not (0.0 < alpha0 < 1.0):
        raise ValueError(f"false-alarm rate must lie in (0, 1), got {alpha0!r}")
    return float(alpha0)


def limit_coefficients(alpha0: float, eta0: float) -> tuple[float, float]:
    """Return ``(A1, A2)`` placing alpha0/2 in each tail of W(eta0, 1)."""
    check_alpha(alpha0)
    if not eta0 > 0:
        raise ValueError("eta0 must be positive")
    a1 = -math.log1p(-alpha0 / 2.0)
    a2 = -math.log(alpha0 / 2.0)
    return a1 ** (1.0 / eta0), a2 ** (1.0 / eta0)


def _build(alpha0, eta0, scale, source):
    if not (math.isfinite(scale) and scale > 0):
        raise ValueError(f"scale must be positive, got {scale!r}")
    A1, A2 = limit_coefficients(alpha0, eta0)
    return ChartDesign(
        alpha0=float(alpha0),
        eta0=float(eta0),
        scale_used=float(scale),
        A1=A1,
        A2=A2,
        LCL=scale * A1,
        UCL=scale * A2,
        CL=scale * math.gamma(1.0 + 1.0 / eta0),
        source=source,
    )


def design_limits(alpha0: float, eta0: float, beta0: float) -> ChartDesign:
    """Equal-tail probability limits for known ``(eta0, beta0)``."""
    return _build(alpha0, eta0, beta0, Source.KNOWN)


def prob_signal(design: ChartDesign, shift: ShiftSpec = IN_CONTROL) -> float:
    """P(X < LCL) + P(X > UCL) for X ~ W(delta2*eta0, delta1*scale_used).

    Evaluated from the Weibull CDF at the limits, so the in-control value is
    exactly the design false-alarm rate.
    """
    k = shift.delta2 * design.eta0
    lower = -math.expm1(-((design.A1 / shift.delta1) ** k))
    upper = math.exp(-((design.A2 / shift.delta1) ** k))
    return lower + upper


def arl(design: ChartDesign, shift: ShiftSpec = IN_CONTROL) -> float:
    """Average run length ``1/PS``; ``math.inf`` when signalling is impossible."""
    ps = prob_signal(design, shift)
    return math.inf if ps == 0.0 else 1.0 / ps


def geometric_quantile(ps: float, q: float) -> int:
    """Smallest n with 1 - (1 - ps)^n >= q."""
    if not (0.0 < q < 1.0):
        raise ValueError("q must lie in (0, 1)")
    if not (0.0 < ps <= 1.0):
        raise ValueError("signal probability must lie in (0, 1]")
    if ps == 1.0:
        return 1
    n = math.ceil(math.log1p(-q) / math.log1p(-ps))
    # guard the ceiling against rounding on either side
    while n > 1 and -math.expm1((n - 1) * math.log1p(-ps)) >= q:
        n -= 1
    while -math.expm1(n * math.log1p(-ps)) < q:
        n += 1
    return max(n, 1)


def run_length_quantile(design: ChartDesign, shift: ShiftSpec, q: float) -> int:
    return geometric_quantile(prob_signal(design, shift), q)
