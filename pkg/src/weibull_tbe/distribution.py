"""Two-parameter Weibull distribution used to model times between events.

Functions accept scalars or numpy arrays and broadcast like ufuncs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["WeibullParams", "pdf", "cdf", "quantile", "moments", "sample"]

# smallest uniform we ever feed to the quantile; keeps draws strictly positive
_U_FLOOR = 2.0 ** -60


@dataclass(frozen=True)
class WeibullParams:
    """Shape ``eta`` and scale ``beta`` of a Weibull TBE distribution."""

    eta: float
    beta: float

    def __post_init__(self):
        for name in ("eta", "beta"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        object.__setattr__(self, "eta", float(self.eta))
        object.__setattr__(self, "beta", float(self.beta))


def _check_nonnegative(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise ValueError("x must be nonnegative")
    return x


def _out(value):
    return float(value) if np.ndim(value) == 0 else value


def pdf(x, p: WeibullParams):
    """Density (eta/beta) (x/beta)^(eta-1) exp(-(x/beta)^eta)."""
    z = _check_nonnegative(x) / p.beta
    with np.errstate(divide="ignore"):
        out = (p.eta / p.beta) * z ** (p.eta - 1.0) * np.exp(-(z ** p.eta))
    return _out(out)


def cdf(x, p: WeibullParams):
    """P(X <= x) = 1 - exp(-(x/beta)^eta)."""
    z = _check_nonnegative(x) / p.beta
    return _out(-np.expm1(-(z ** p.eta)))


def quantile(u, p: WeibullParams):
    """Inverse CDF, beta * (-ln(1-u))^(1/eta), for u in (0, 1)."""
    u = np.asarray(u, dtype=float)
    if np.any(~((u > 0) & (u < 1))):
        raise ValueError("u must lie strictly inside (0, 1)")
    return _out(p.beta * (-np.log1p(-u)) ** (1.0 / p.eta))


def moments(p: WeibullParams) -> tuple[float, float]:
    """Return ``(mean, variance)``."""
    g1 = math.gamma(1.0 + 1.0 / p.eta)
    g2 = math.gamma(1.0 + 2.0 / p.eta)
    return p.beta * g1, p.beta ** 2 * (g2 - g1 * g1)


def sample(p: WeibullParams, stream, size=None):
    """Draw by inverse transform from ``stream.random(size)``.

    ``stream`` is normally a :class:`numpy.random.Generator`; anything with a
    compatible ``random`` method works, which makes the mapping testable.
    """
    u = np.asarray(stream.random(size))
    if u.dtype != np.float64 or not u.flags.writeable:
        u = u.astype(np.float64)
    np.maximum(u, _U_FLOOR, out=u)
    np.negative(u, out=u)
    np.log1p(u, out=u)
    np.negative(u, out=u)
    if p.eta != 1.0:
        np.power(u, 1.0 / p.eta, out=u)
    if p.beta != 1.0:
        np.multiply(u, p.beta, out=u)
    return _out(u)
