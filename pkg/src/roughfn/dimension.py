"""Box-counting dimension of sampled function graphs.

Counting is done column by column: with S samples per unit and box size
eps = 2^-j, column c covers samples c m .. (c + 1) m (m = S eps, shared
endpoints included, so the polyline is covered) and contributes
ceil(range / eps) + 1 boxes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, NonFiniteError, RegimeError
from .numerics import fit_line

MIN_SAMPLES_LOG2 = 12
DEFAULT_SAMPLES_LOG2 = 16
DEFAULT_J = (4, 12)
# guards ceil against ranges that are exact multiples of eps up to round-off
CEIL_SLACK = 1e-12


@dataclass(frozen=True)
class GraphSample:
    """Ordinates at the S + 1 grid points x_i = i / S on [0, 1]."""

    y: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "y", y)
        S = len(y) - 1
        if y.ndim != 1 or S < 2**MIN_SAMPLES_LOG2 or S & (S - 1):
            raise InvalidParameterError(
                f"need S + 1 samples with S a power of two >= 2^{MIN_SAMPLES_LOG2}, got {len(y)}")
        bad = ~np.isfinite(y)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise NonFiniteError(i / S, float(y[i]))

    @property
    def S(self) -> int:
        return len(self.y) - 1

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.S + 1) / self.S

    @classmethod
    def from_function(cls, f, log2_samples: int = DEFAULT_SAMPLES_LOG2) -> "GraphSample":
        S = 2**log2_samples
        return cls(np.asarray(f(np.arange(S + 1) / S), dtype=float))


@dataclass(frozen=True)
class ScaleLadder:
    """Box sizes eps_j = 2^-j for j = j_min..j_max."""

    j_min: int = DEFAULT_J[0]
    j_max: int = DEFAULT_J[1]

    def __post_init__(self):
        if not 0 <= self.j_min < self.j_max:
            raise InvalidParameterError(f"need 0 <= j_min < j_max, got {self.j_min}, {self.j_max}")

    @property
    def js(self) -> np.ndarray:
        return np.arange(self.j_min, self.j_max + 1)

    @property
    def eps(self) -> np.ndarray:
        return 2.0 ** -self.js.astype(float)

    def check(self, gs: GraphSample):
        if self.j_max > int(math.log2(gs.S)) - 2:
            raise InvalidParameterError(
                f"j_max={self.j_max} needs at least 4 samples per column; "
                f"S=2^{int(math.log2(gs.S))} allows j_max <= {int(math.log2(gs.S)) - 2}")


def theoretical_dim(a: float, b: float) -> float:
    """2 + ln|a| / ln b, valid for b > 1 and |a b| > 1."""
    if not b > 1:
        raise RegimeError(f"dimension formula needs b > 1, got b={b!r}")
    if not abs(a * b) > 1:
        raise RegimeError(f"dimension formula needs |ab| > 1, got |ab|={abs(a * b)!r}")
    return 2.0 + math.log(abs(a)) / math.log(b)


def _column_ranges(gs: GraphSample, eps: float):
    m = gs.S * eps
    if m != int(m) or m < 1:
        raise InvalidParameterError(f"eps={eps!r} is not 2^-j with a whole number of samples per column")
    m = int(m)
    cols = gs.S // m
    body = gs.y[:-1].reshape(cols, m)
    right = gs.y[m::m]
    lo = np.minimum(body.min(axis=1), right)
    hi = np.maximum(body.max(axis=1), right)
    return lo, hi


def box_count(gs: GraphSample, eps: float) -> int:
    """Sum over columns of ceil((max - min)/eps) + 1."""
    lo, hi = _column_ranges(gs, eps)
    return int(np.sum(np.ceil((hi - lo) / eps - CEIL_SLACK) + 1))


def anchored_box_count(gs: GraphSample, eps: float, shift: float = 0.0) -> int:
    """Cells of the grid anchored at (0, min y - shift) met by each column."""
    lo, hi = _column_ranges(gs, eps)
    y0 = float(gs.y.min()) - shift
    return int(np.sum(np.floor((hi - y0) / eps) - np.floor((lo - y0) / eps) + 1))


@dataclass(frozen=True)
class DimensionEstimate:
    dimension: float
    intercept: float
    js: np.ndarray
    counts: np.ndarray
    anchored_mean: np.ndarray
    anchored_dimension: float


def estimate_dim(gs: GraphSample, ladder: ScaleLadder = ScaleLadder()) -> DimensionEstimate:
    """Slope of log2(count) against log2(1/eps) over the ladder.

    Also reports the anchored-grid counts averaged over anchor shifts of 0
    and eps/2, with their own slope.
    """
    ladder.check(gs)
    js, eps = ladder.js, ladder.eps
    counts = np.array([box_count(gs, e) for e in eps])
    anchored = np.array([0.5 * (anchored_box_count(gs, e) + anchored_box_count(gs, e, e / 2))
                         for e in eps])
    slope, icpt = fit_line(np.column_stack([js, np.log2(counts)]))
    aslope, _ = fit_line(np.column_stack([js, np.log2(anchored)]))
    return DimensionEstimate(slope, icpt, js, counts, anchored, aslope)
