"""Transform collision curves to a near-linear scale and extrapolate.

On Zipf-like name distributions the probit (or logit) of the homonym
proportion is close to linear in log n, so a line fitted on a moderate
window of group sizes extrapolates to population scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, expit

from .collision import CollisionCurve
from .errors import AllSaturated, InsufficientPoints, OutOfDomain

DEFAULT_WINDOW = (5_000, 50_000)
DEFAULT_TRANSFORM = "probit"

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)

# Acklam rational approximation of the standard normal quantile,
# |error| < 1.15e-9 before refinement.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def normal_cdf(z):
    """Standard normal CDF via the complementary error function."""
    z = np.asarray(z, dtype=np.float64)
    out = 0.5 * erfc(-z / _SQRT2)
    return float(out) if out.ndim == 0 else out


def normal_pdf(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.exp(-0.5 * z * z) / _SQRT2PI
    return float(out) if out.ndim == 0 else out


def _check_open_unit(u: np.ndarray, what: str) -> None:
    if np.any(u <= 0.0) or np.any(u >= 1.0) or not np.all(np.isfinite(u)):
        raise OutOfDomain(f"{what} requires arguments strictly inside (0, 1)")


def _acklam(u: np.ndarray) -> np.ndarray:
    z = np.empty_like(u)
    lo = u < _P_LOW
    hi = u > 1.0 - _P_LOW
    mid = ~(lo | hi)
    if np.any(lo):
        q = np.sqrt(-2.0 * np.log(u[lo]))
        z[lo] = -np.polyval(_C, q) / (np.polyval(_D, q) * q + 1.0) * q / q
        z[lo] = np.polyval(_C, q) / (np.polyval(_D, q) * q + 1.0)
    if np.any(mid):
        q = u[mid] - 0.5
        r = q * q
        z[mid] = np.polyval(_A, r) * q / (np.polyval(_B, r) * r + 1.0)
    if np.any(hi):
        q = np.sqrt(-2.0 * np.log(1.0 - u[hi]))
        z[hi] = -np.polyval(_C, q) / (np.polyval(_D, q) * q + 1.0)
    return z


def probit(u):
    """Inverse standard normal CDF, |error| <= 1e-9 on (0, 1).

    Acklam's rational approximation refined by one Newton step against
    the erf-based CDF; the step is skipped where the density underflows.
    """
    arr = np.asarray(u, dtype=np.float64)
    _check_open_unit(arr, "probit")
    z = _acklam(np.atleast_1d(arr))
    pdf = normal_pdf(z)
    safe = pdf > 1e-250
    z[safe] -= (normal_cdf(z[safe]) - np.atleast_1d(arr)[safe]) / pdf[safe]
    return float(z[0]) if arr.ndim == 0 else z.reshape(arr.shape)


def logit(u):
    """log(u / (1 - u)) on the open unit interval."""
    arr = np.asarray(u, dtype=np.float64)
    _check_open_unit(arr, "logit")
    out = np.log(arr / (1.0 - arr))
    return float(out) if arr.ndim == 0 else out


def inverse_probit(z):
    return normal_cdf(z)


def inverse_logit(z):
    out = expit(np.asarray(z, dtype=np.float64))
    return float(out) if out.ndim == 0 else out


_TRANSFORMS = {
    "probit": (probit, inverse_probit),
    "logit": (logit, inverse_logit),
}


def transform_value(kind: str, u):
    forward, _ = _lookup(kind)
    return forward(u)


def inverse_transform(kind: str, z):
    _, inverse = _lookup(kind)
    return inverse(z)


def _lookup(kind: str):
    try:
        return _TRANSFORMS[kind]
    except KeyError:
        raise ValueError(f"transform must be one of {sorted(_TRANSFORMS)}") from None


@dataclass(frozen=True)
class TransformFit:
    """Line on the transformed scale: transform(P) ~ intercept + slope * ln n."""

    transform: str
    intercept: float
    slope: float
    n_min: int
    n_max: int
    r_squared: float
    clamp_epsilon: float

    def predict(self, n: int) -> float:
        return predict(self, n)

    def to_dict(self) -> dict:
        return {
            "transform": self.transform,
            "a": self.intercept,
            "b": self.slope,
            "n_min": self.n_min,
            "n_max": self.n_max,
            "r_squared": self.r_squared,
        }


def _clamp_mean(mean: float, n: int, replicates: int) -> tuple[float, bool]:
    # half a count out of the n * replicates total draws at this grid point
    eps = 1.0 / (2.0 * n * max(replicates, 1))
    if mean <= 0.0:
        return eps, True
    if mean >= 1.0:
        return 1.0 - eps, True
    return mean, False


def fit_transformed(curve: CollisionCurve, transform: str = DEFAULT_TRANSFORM,
                    window: tuple[int, int] = DEFAULT_WINDOW,
                    weighted: bool = False) -> TransformFit:
    """Least squares of transform(mean) on ln n over the window.

    Saturated means (0 or 1) are clamped by half a draw count rather than
    dropped, so the window edge keeps its points. With weighted=True the
    points are weighted by 1/stderr^2 (every in-window stderr must be
    positive). Needs at least 3 in-window points, at least one of them
    unclamped.
    """
    n_min, n_max = int(window[0]), int(window[1])
    if n_min >= n_max:
        raise ValueError("window must satisfy n_min < n_max")
    selected = [p for p in curve.points if n_min <= p.n <= n_max]
    if len(selected) < 3:
        raise InsufficientPoints(
            f"{len(selected)} grid points inside [{n_min}, {n_max}], need >= 3")

    means, clamped_flags = [], []
    for p in selected:
        value, was_clamped = _clamp_mean(p.mean, p.n, p.replicates)
        means.append(value)
        clamped_flags.append(was_clamped)
    if all(clamped_flags):
        raise AllSaturated("every in-window mean is saturated at 0 or 1")

    forward, _ = _lookup(transform)
    x = np.log(np.array([p.n for p in selected], dtype=np.float64))
    y = forward(np.asarray(means, dtype=np.float64))

    if weighted:
        stderrs = np.array([p.stderr for p in selected], dtype=np.float64)
        if np.any(stderrs <= 0.0):
            raise ValueError("weighted fit requires positive stderr at every point")
        w = 1.0 / stderrs**2
    else:
        w = np.ones_like(x)

    wsum = w.sum()
    x_bar = np.dot(w, x) / wsum
    y_bar = np.dot(w, y) / wsum
    sxx = np.dot(w, (x - x_bar) ** 2)
    sxy = np.dot(w, (x - x_bar) * (y - y_bar))
    slope = sxy / sxx
    intercept = y_bar - slope * x_bar

    residuals = y - (intercept + slope * x)
    ss_res = float(np.dot(w, residuals**2))
    ss_tot = float(np.dot(w, (y - y_bar) ** 2))
    if ss_tot == 0.0:
        r_squared = 1.0 if ss_res <= 1e-30 else 0.0
    else:
        r_squared = max(0.0, min(1.0, 1.0 - ss_res / ss_tot))

    tightest = min(1.0 / (2.0 * p.n * max(p.replicates, 1)) for p in selected)
    return TransformFit(transform=transform, intercept=float(intercept),
                        slope=float(slope), n_min=n_min, n_max=n_max,
                        r_squared=r_squared, clamp_epsilon=tightest)


def predict(fit: TransformFit, n: int) -> float:
    """Back-transformed prediction at group size n, kept inside (0, 1)."""
    if n < 1:
        raise ValueError("group size n must be >= 1")
    _, inverse = _lookup(fit.transform)
    u = inverse(fit.intercept + fit.slope * math.log(n))
    tiny = np.nextafter(0.0, 1.0)
    top = np.nextafter(1.0, 0.0)
    return float(min(max(u, tiny), top))
