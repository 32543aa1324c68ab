"""Shared numerical kernels.

Composite-midpoint quadrature for rough integrands, an ordinary
least-squares line fit, and the geometric tail bound used to truncate
every series in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFitError, DivergenceError, InvalidParameterError, NonFiniteError

DEFAULT_RESOLUTION = 2**14
ACCEPTANCE_RESOLUTION = 2**16


@dataclass(frozen=True)
class Interval:
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidParameterError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo


UNIT = Interval(0.0, 1.0)


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite midpoint rule on ``resolution`` equal subintervals.

    The resolution must be a power of two (at least 2) so that halving it
    gives a nested grid for error estimates.
    """

    resolution: int = DEFAULT_RESOLUTION
    scheme: str = "midpoint"

    def __post_init__(self):
        r = self.resolution
        if not isinstance(r, (int, np.integer)) or r < 2 or r & (r - 1):
            raise InvalidParameterError(f"resolution must be a power of two >= 2, got {r!r}")
        if self.scheme != "midpoint":
            raise InvalidParameterError(f"unknown quadrature scheme {self.scheme!r}")

    def halved(self) -> "QuadratureSpec":
        return QuadratureSpec(self.resolution // 2, self.scheme)

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(self.resolution * 2, self.scheme)


def midpoints(iv: Interval, q: QuadratureSpec) -> np.ndarray:
    """Abscissae of the composite midpoint rule."""
    h = iv.length / q.resolution
    return iv.lo + (np.arange(q.resolution) + 0.5) * h


def _check_finite(xs, values):
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise NonFiniteError(float(xs[i]), float(values[i]))


def integrate(f, iv: Interval = UNIT, q: QuadratureSpec = QuadratureSpec()) -> float:
    """Composite midpoint estimate of the integral of ``f`` over ``iv``.

    ``f`` is called once with the full array of midpoints. The reduction
    uses numpy's pairwise summation, so the result is deterministic for
    fixed inputs.

    Raises
    ------
    NonFiniteError
        If any sample is NaN or infinite; the offending abscissa is reported.
    """
    xs = midpoints(iv, q)
    values = np.broadcast_to(np.asarray(f(xs), dtype=float), xs.shape)
    _check_finite(xs, values)
    return float(np.sum(values) * (iv.length / q.resolution))


def integrate_samples(values: np.ndarray, iv: Interval = UNIT) -> float:
    """Midpoint rule on values already sampled at :func:`midpoints`."""
    values = np.asarray(values, dtype=float)
    return float(np.sum(values, axis=-1) * (iv.length / values.shape[-1]))


def quadrature_error(f, iv: Interval = UNIT, q: QuadratureSpec = QuadratureSpec()) -> float:
    """|I(res) - I(res/2)|, the package's stand-in for an error bound."""
    return abs(integrate(f, iv, q) - integrate(f, iv, q.halved()))


def inner_product(f, h, iv: Interval = UNIT, q: QuadratureSpec = QuadratureSpec()) -> float:
    return integrate(lambda x: np.asarray(f(x)) * np.asarray(h(x)), iv, q)


def fit_line(points) -> tuple[float, float]:
    """Ordinary least-squares line through ``points``.

    Returns
    -------
    slope, intercept : float
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise DegenerateFitError("fit_line needs at least two (x, y) points")
    x, y = pts[:, 0], pts[:, 1]
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0.0:
        raise DegenerateFitError("all abscissae are equal; slope is undefined")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    return slope, float(ym - slope * xm)


def geometric_tail(r: float, M: int) -> float:
    """Upper bound r**M / (1 - r) on the tail sum over n >= M of r**n."""
    if M < 0:
        raise InvalidParameterError(f"M must be non-negative, got {M}")
    if not 0.0 <= r < 1.0:
        if r >= 1.0:
            raise DivergenceError(f"geometric series with ratio {r} >= 1 diverges")
        raise InvalidParameterError(f"ratio must be non-negative, got {r}")
    return r**M / (1.0 - r)


def truncation_length(r: float, scale: float, tol: float) -> int:
    """Smallest T >= 1 with ``geometric_tail(r, T) * scale <= tol``."""
    if tol <= 0:
        raise InvalidParameterError(f"tolerance must be positive, got {tol}")
    if scale <= 0.0 or r == 0.0:
        return 1
    geometric_tail(r, 0)  # validates r
    T = max(1, math.ceil(math.log(tol * (1.0 - r) / scale) / math.log(r)))
    # the log estimate can be off by one either way through rounding
    while T > 1 and geometric_tail(r, T - 1) * scale <= tol:
        T -= 1
    while geometric_tail(r, T) * scale > tol:
        T += 1
    return T
