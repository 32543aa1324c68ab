"""The dilation operator T_b, M = I - a T_b and its series inverse.

The inverse is evaluated pointwise from a truncated Neumann-type series.
In the contractive regime

    f(x) = sum_{n >= 0} a**n g(b**n x),

in the expansive regime

    f(x) = -sum_{n >= 1} a**(-n) g(x / b**n).

For an integer ``b`` and a periodic ``g`` the orbit ``b**n x`` is reduced
modulo the period after every step, which keeps it inside one period and
makes the chain exact for dyadic abscissae.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, RegimeError, ResonanceError
from .functions import COMPOSITE, RealFunction, as_function
from .numerics import UNIT, Interval, QuadratureSpec, geometric_tail, inner_product, truncation_length

DEFAULT_TOL = 1e-10
SUP_SAMPLES = 2**12
SUP_INFLATION = 1.1


class Regime(enum.Enum):
    CONTRACTIVE = "contractive"
    EXPANSIVE = "expansive"


@dataclass(frozen=True)
class EquationParams:
    """Coefficients of f(x) - a f(b x) = g(x) and the exponent p of L^p.

    ``p = math.inf`` selects the sup-norm setting, whose threshold is 1.
    """

    a: float
    b: float
    p: float = math.inf

    def __post_init__(self):
        if self.b == 0:
            raise InvalidParameterError("b must be non-zero; use solve_b_zero for b = 0")
        if not (self.p >= 1):
            raise InvalidParameterError(f"p must lie in [1, inf], got {self.p}")
        for name in ("a", "b"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")

    def threshold(self) -> float:
        """|b|**(1/p), equal to 1 when p is infinite."""
        if math.isinf(self.p):
            return 1.0
        return abs(self.b) ** (1.0 / self.p)

    def resonant(self) -> bool:
        return abs(self.a) == self.threshold()

    def regime(self) -> Regime:
        if self.resonant():
            raise ResonanceError(
                f"|a| = |b|^(1/p) = {self.threshold()!r}: no unique solution is guaranteed")
        return Regime.CONTRACTIVE if abs(self.a) < self.threshold() else Regime.EXPANSIVE

    def ratio(self) -> float:
        """Pointwise ratio of successive series terms."""
        if self.regime() is Regime.CONTRACTIVE:
            return abs(self.a)
        return 1.0 / abs(self.a)


def _is_integer(b: float) -> bool:
    return float(b).is_integer()


def apply_T(b: float, f) -> RealFunction:
    """Dilation x -> f(b x)."""
    if b == 0:
        raise InvalidParameterError("dilation factor b must be non-zero")
    f = as_function(f)
    b = float(b)
    return RealFunction(lambda x: f.rule(b * np.asarray(x, dtype=float)), COMPOSITE,
                        name=f"{f.name}({b!r}x)", sup_norm=f.sup_norm)


def apply_M(params: EquationParams, f) -> RealFunction:
    """x -> f(x) - a f(b x).

    For periodic ``f`` and integer ``b`` the argument ``b x`` is reduced to
    its canonical representative first, so half-open conventions survive.
    """
    f = as_function(f)
    a, b = float(params.a), float(params.b)
    reducing = f.periodic and _is_integer(b)

    def rule(x):
        x = np.asarray(x, dtype=float)
        bx = b * (f.reduce(x) if reducing else x)
        if reducing:
            bx = f.reduce(bx)
        return f.rule(x) - a * f.rule(bx)

    period = f.period if reducing else None
    return RealFunction(rule, COMPOSITE, period, f._reduce if reducing else None,
                        name=f"M[{f.name}]")


def estimate_sup_norm(g: RealFunction) -> float:
    """Dense-sample estimate of sup |g|, inflated by 10%.

    Uses one period for periodic g and [-1, 1] otherwise. Not a certificate.
    """
    if g.periodic:
        xs = np.arange(SUP_SAMPLES) * (g.period / SUP_SAMPLES)
        # include the right end so half-open conventions see their last piece
        xs = np.append(xs, g.period)
    else:
        xs = np.linspace(-1.0, 1.0, SUP_SAMPLES + 1)
    vals = np.asarray(g(xs), dtype=float)
    return SUP_INFLATION * float(np.max(np.abs(vals)))


class SeriesSolution(RealFunction):
    """Truncated series inverse of M applied to g.

    Attributes
    ----------
    params : EquationParams
    g : RealFunction
    truncation : int
        Number of series terms T.
    tail_bound : float
        geometric_tail(ratio, T) * sup|g|, at most the requested tolerance.
    regime : Regime
    """

    def __init__(self, params: EquationParams, g: RealFunction, truncation: int,
                 tail_bound: float, regime: Regime, sup_norm_g: float):
        self.params = params
        self.g = g
        self.truncation = truncation
        self.tail_bound = tail_bound
        self.regime = regime
        self.sup_norm_g = sup_norm_g
        self._reducing = g.periodic and _is_integer(params.b) and regime is Regime.CONTRACTIVE
        # the backward series sums g(x / b^n), which is not periodic in general
        period = g.period if self._reducing else None
        sup = sup_norm_g / (1.0 - params.ratio())
        super().__init__(self._evaluate, COMPOSITE, period,
                         g._reduce if period is not None else None, sup, f"solve[{g.name}]")

    def _evaluate(self, x):
        x = np.asarray(x, dtype=float)
        a, b = float(self.params.a), float(self.params.b)
        g = self.g
        total = np.zeros_like(x)
        if self.regime is Regime.CONTRACTIVE:
            y = g.reduce(x) if self._reducing else x.copy()
            coef = 1.0
            for _ in range(self.truncation):
                total += coef * g.rule(y)
                y = b * y
                if self._reducing:
                    y = g.reduce(y)
                coef *= a
        else:
            y = x.copy()
            coef = 1.0
            for _ in range(self.truncation):
                y = y / b
                coef /= a
                total -= coef * g.rule(y)
        return total

    def terms(self, x, count: int | None = None) -> np.ndarray:
        """Individual series terms at scalar ``x`` (for diagnostics)."""
        count = self.truncation if count is None else count
        a, b = float(self.params.a), float(self.params.b)
        out = []
        y = float(x)
        if self.regime is Regime.CONTRACTIVE:
            if self._reducing:
                y = float(self.g.reduce(y))
            for n in range(count):
                out.append(a**n * float(self.g(y)))
                y = b * y
                if self._reducing:
                    y = float(self.g.reduce(y))
        else:
            for n in range(1, count + 1):
                y = y / b
                out.append(-(a ** -n) * float(self.g(y)))
        return np.array(out)


def solve(params: EquationParams, g, sup_norm_g: float | None = None,
          tol: float = DEFAULT_TOL, branch: Regime | None = None) -> SeriesSolution:
    """Solve f(x) - a f(b x) = g(x) by a truncated series.

    Parameters
    ----------
    params : EquationParams
    g : RealFunction or callable
    sup_norm_g : float, optional
        Bound on sup |g|. Estimated from dense samples when omitted.
    tol : float
        Required bound on the truncated tail.
    branch : Regime, optional
        If given, the regime the caller expects; a mismatch is an error.

    Raises
    ------
    ResonanceError
        If |a| = |b|**(1/p).
    RegimeError
        If the requested branch does not match, or the pointwise series
        ratio is not below 1 (possible for finite p).
    """
    if tol <= 0:
        raise InvalidParameterError(f"tolerance must be positive, got {tol}")
    g = as_function(g)
    regime = params.regime()
    if branch is not None and branch is not regime:
        raise RegimeError(
            f"requested {branch.value} branch but |a|={abs(params.a)!r} vs threshold "
            f"{params.threshold()!r} gives {regime.value}")
    r = params.ratio()
    if r >= 1.0:
        raise RegimeError(
            f"{regime.value} series has pointwise ratio {r!r} >= 1 and does not converge "
            f"uniformly (need |a| < 1 for the contractive sum, |a| > 1 for the expansive one)")
    if sup_norm_g is None:
        sup_norm_g = g.sup_norm if g.sup_norm is not None else estimate_sup_norm(g)
    if sup_norm_g < 0:
        raise InvalidParameterError("sup_norm_g must be non-negative")
    T = truncation_length(r, sup_norm_g, tol)
    tail = geometric_tail(r, T) * sup_norm_g
    return SeriesSolution(params, g, T, tail, regime, sup_norm_g)


def solve_b_zero(a: float, g, g_at_zero: float | None = None) -> RealFunction:
    """Solution of f(x) - a f(0) = g(x): x -> g(x) + a/(1-a) g(0)."""
    if a == 1:
        raise InvalidParameterError("a = 1 has no solution for b = 0 unless g(0) = 0")
    g = as_function(g)
    if g_at_zero is None:
        g_at_zero = float(g(0.0))
    shift = a / (1.0 - a) * g_at_zero
    return RealFunction(lambda x: g.rule(np.asarray(x, dtype=float)) + shift, COMPOSITE,
                        g.period, g._reduce, name=f"solve0[{g.name}]")


def t_norm(params: EquationParams) -> float:
    """Operator norm |b|**(-1/p) of T_b on L^p."""
    if math.isinf(params.p):
        return 1.0
    return abs(params.b) ** (-1.0 / params.p)


def sandwich_bounds(params: EquationParams, norm_f: float) -> tuple[float, float]:
    """Lower and upper bounds for ||M f||_p given ||f||_p."""
    if norm_f < 0:
        raise InvalidParameterError("norm_f must be non-negative")
    q = abs(params.a) * t_norm(params)
    return abs(1.0 - q) * norm_f, (1.0 + q) * norm_f


def smoothing_distance_bound(a: float, sup_norm_g: float) -> float:
    """Bound |a|/(1-|a|) sup|g| on the uniform distance between f and g."""
    if abs(a) >= 1:
        raise RegimeError(f"smoothing bound needs |a| < 1, got a={a!r}")
    return abs(a) / (1.0 - abs(a)) * sup_norm_g


def adjoint_identity_residual(b: float, u, v, q: QuadratureSpec = QuadratureSpec(),
                              iv: Interval = UNIT) -> float:
    """|<T_b u, v> - <u, (1/b) T_{1/b} v>| by quadrature on ``iv``."""
    if b == 0:
        raise InvalidParameterError("b must be non-zero")
    u, v = as_function(u), as_function(v)
    lhs = inner_product(apply_T(b, u), v, iv, q)
    rhs = inner_product(u, lambda x: v(np.asarray(x) / b) / b, iv, q)
    return abs(lhs - rhs)
