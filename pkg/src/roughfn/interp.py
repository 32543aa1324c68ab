"""Fractal interpolation on the uniform partition x_n = n/N.

A piecewise generator g is given by N pieces g_n on [0, 1]. On [0, 1]

    g(0) = g_1(0),   g(x) = g_n(N x - n + 1)  for x in ((n-1)/N, n/N],

and g is extended to x > 1 with period 1 (the half-open rule of
:func:`roughfn.functions.reduce_half_open`). The fractal interpolation
function is the solution f of f(x) - a f(N x) = g(x); its graph over
[0, 1] is the attractor of the maps

    w_n(x, y) = ((x + n - 1)/N, a y + g_n(x)),

where the IFS maps use one-sided limits at x = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.signal import lfilter

from .errors import ContractViolationError, InputError, InvalidParameterError, UnsupportedFunctionError
from .functions import PIECEWISE, RealFunction, as_function, reduce_half_open
from .operators import DEFAULT_TOL, EquationParams, SeriesSolution, solve

CONTINUITY_TOL = 1e-12
NODE_TOL = 1e-9
RICHARDSON_OFFSETS = (1e-4, 1e-5, 1e-6)
SPOT_CHECKS = 17
# nodes n/N are rarely representable; values this close (relative) to an
# integer are treated as that integer
SNAP_REL = 4 * np.finfo(float).eps


def snap_integers(s):
    s = np.asarray(s, dtype=float)
    r = np.rint(s)
    return np.where(np.abs(s - r) <= SNAP_REL * np.maximum(1.0, np.abs(s)), r, s)


def reduce_nodes(x):
    """Half-open period-1 reduction after snapping near-integers."""
    return reduce_half_open(snap_integers(x))


# -- pieces ------------------------------------------------------------------

class Piece:
    """An evaluation rule on [0, 1] that knows its right limit at 0."""

    exact_limit = True

    def __call__(self, u):
        raise NotImplementedError

    def right_limit(self) -> float:
        raise NotImplementedError

    def sup_norm(self, samples: int = 1025) -> float:
        u = np.linspace(0.0, 1.0, samples)
        return max(float(np.max(np.abs(self(u)))), abs(self.right_limit()))


class ConstantPiece(Piece):
    def __init__(self, value: float):
        self.value = float(value)

    def __call__(self, u):
        return np.full(np.shape(u), self.value)

    def right_limit(self) -> float:
        return self.value

    def sup_norm(self, samples: int = 0) -> float:
        return abs(self.value)

    def __repr__(self):
        return f"ConstantPiece({self.value!r})"


class PolynomialPiece(Piece):
    """Polynomial with coefficients in increasing degree."""

    def __init__(self, coeffs: Sequence[float]):
        self.coeffs = np.asarray(coeffs, dtype=float)

    def __call__(self, u):
        return npoly.polyval(np.asarray(u, dtype=float), self.coeffs)

    def right_limit(self) -> float:
        return float(self.coeffs[0]) if len(self.coeffs) else 0.0

    def __repr__(self):
        return f"PolynomialPiece({self.coeffs.tolist()!r})"


class ContinuousPiece(Piece):
    """A rule known to be continuous on [0, 1]; its limit at 0 is its value."""

    def __init__(self, fn: Callable):
        self.fn = fn

    def __call__(self, u):
        return np.asarray(self.fn(np.asarray(u, dtype=float)), dtype=float) * np.ones(np.shape(u))

    def right_limit(self) -> float:
        return float(self(np.array(0.0)))


class CallablePiece(Piece):
    """Arbitrary rule; the right limit at 0 is extrapolated numerically.

    The limit comes from a quadratic fit through the samples at offsets
    1e-4, 1e-5 and 1e-6, evaluated at 0 (Richardson extrapolation). It is
    flagged as approximate.
    """

    exact_limit = False

    def __init__(self, fn: Callable):
        self.fn = fn

    def __call__(self, u):
        return np.asarray(self.fn(np.asarray(u, dtype=float)), dtype=float) * np.ones(np.shape(u))

    def right_limit(self) -> float:
        h = np.array(RICHARDSON_OFFSETS)
        coeffs = np.polyfit(h, self(h), 2)
        return float(coeffs[-1])


def as_piece(p) -> Piece:
    if isinstance(p, Piece):
        return p
    if np.isscalar(p):
        return ConstantPiece(float(p))
    if callable(p):
        return CallablePiece(p)
    raise UnsupportedFunctionError(f"cannot use {p!r} as a piece")


@dataclass
class PiecewiseG:
    """N pieces g_1..g_N on [0, 1] glued over the uniform partition."""

    pieces: list

    def __post_init__(self):
        self.pieces = [as_piece(p) for p in self.pieces]
        if len(self.pieces) < 2:
            raise InvalidParameterError("a piecewise generator needs N >= 2 pieces")

    @property
    def N(self) -> int:
        return len(self.pieces)

    @property
    def value_at_1(self) -> float:
        return float(self.pieces[-1](np.array(1.0)))

    @property
    def value_at_0(self) -> float:
        return float(self.pieces[0](np.array(0.0)))

    @property
    def exact_limits(self) -> bool:
        return all(p.exact_limit for p in self.pieces)

    def nodes(self) -> np.ndarray:
        return np.arange(self.N + 1) / self.N

    def evaluate(self, x):
        t = reduce_nodes(x)
        N = self.N
        s = snap_integers(t * N)
        n = np.clip(np.ceil(s), 1, N).astype(int)
        u = s - (n - 1)
        out = np.empty_like(t)
        for k, piece in enumerate(self.pieces, start=1):
            mask = n == k
            if mask.any():
                out[mask] = piece(u[mask])
        return out

    def sup_norm(self) -> float:
        return max(p.sup_norm() for p in self.pieces)


def g_from_pieces(pw: PiecewiseG) -> RealFunction:
    """The period-1 generator g assembled from its pieces."""
    return RealFunction(pw.evaluate, PIECEWISE, 1.0, reduce_nodes, pw.sup_norm(),
                        f"piecewise[N={pw.N}]")


def _check_scale(a: float):
    if not abs(a) < 1:
        raise InvalidParameterError(f"need |a| < 1, got a={a!r}")


def interpolation_values(g, a: float, N: int) -> np.ndarray:
    """Values y_0..y_N of the solution at the nodes n/N, in closed form."""
    if a == 1:
        raise InvalidParameterError("a = 1 makes the closed forms singular")
    _check_scale(a)
    if N < 2:
        raise InvalidParameterError("N must be at least 2")
    g = g_from_pieces(g) if isinstance(g, PiecewiseG) else as_function(g)
    g0, g1 = float(g(0.0)), float(g(1.0))
    xs = np.arange(N + 1) / N
    y = np.asarray(g(xs), dtype=float) + a / (1.0 - a) * g1
    y[0] = g0 / (1.0 - a)
    y[-1] = g1 / (1.0 - a)
    return y


# -- IFS -----------------------------------------------------------------------

@dataclass(frozen=True)
class IfsMap:
    """w_n(x, y) = ((x + n - 1)/N, a y + g_n(x)) with n counted from 1."""

    n: int
    N: int
    a: float
    piece: Piece
    limit0: float

    def g(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x == 0.0, self.limit0, self.piece(x))

    def L(self, x):
        return (np.asarray(x, dtype=float) + self.n - 1) / self.N

    def __call__(self, x, y):
        return self.L(x), self.a * np.asarray(y, dtype=float) + self.g(x)


@dataclass(frozen=True)
class IfsSpec:
    N: int
    a: float
    maps: tuple
    approximate: bool = False


def ifs_from_g(pw, a: float) -> IfsSpec:
    """IFS whose attractor is the graph of the solution with generator ``pw``.

    Raises
    ------
    UnsupportedFunctionError
        If ``pw`` is a plain function without piece structure, so one-sided
        limits at the nodes are unavailable.
    """
    if not isinstance(pw, PiecewiseG):
        raise UnsupportedFunctionError(
            "one-sided limits at the nodes need a PiecewiseG; got a plain function")
    _check_scale(a)
    maps = tuple(IfsMap(n, pw.N, float(a), p, p.right_limit())
                 for n, p in enumerate(pw.pieces, start=1))
    return IfsSpec(pw.N, float(a), maps, not pw.exact_limits)


def continuity_condition(pw: PiecewiseG, a: float, atol: float = CONTINUITY_TOL) -> bool:
    """Whether the jump identity holds at every interior node.

    The identity is g(n/N+) - g(n/N) = a/(1-a) (g(1) - g(0)); it decides
    whether the solution is continuous.
    """
    _check_scale(a)
    rhs = a / (1.0 - a) * (pw.value_at_1 - pw.pieces[0].right_limit())
    for left, right in zip(pw.pieces[:-1], pw.pieces[1:]):
        jump = right.right_limit() - float(left(np.array(1.0)))
        if abs(jump - rhs) > atol:
            return False
    return True


def node_jumps(pw: PiecewiseG) -> np.ndarray:
    """g(n/N+) - g(n/N) at the interior nodes n = 1..N-1."""
    return np.array([r.right_limit() - float(l(np.array(1.0)))
                     for l, r in zip(pw.pieces[:-1], pw.pieces[1:])])


def g_from_base(f0, g0, a: float, N: int) -> PiecewiseG:
    """Generator g(x) = g0(x) + f0(x) - a f0(N x) split into N pieces.

    ``f0`` is read on [0, 1] and assumed to satisfy f0(x) = f0(x - 1) for
    x > 1; ``g0`` must be continuous with period 1 and vanish at 0 and 1.
    These are spot-checked at a few points.

    Raises
    ------
    ContractViolationError
        If a spot check fails; the message names the condition.
    """
    _check_scale(a)
    if N < 2:
        raise InvalidParameterError("N must be at least 2")
    f0, g0 = as_function(f0), as_function(g0)
    for xv, name in ((0.0, "g0(0) = 0"), (1.0, "g0(1) = 0")):
        if abs(float(g0(xv))) > NODE_TOL:
            raise ContractViolationError(f"base function violates {name}: value {float(g0(xv))!r}")
    probe = (np.arange(SPOT_CHECKS) + 0.5) / SPOT_CHECKS
    if np.max(np.abs(g0(probe + 1.0) - g0(probe))) > NODE_TOL:
        raise ContractViolationError("base function g0 is not 1-periodic at the spot checks")
    if np.max(np.abs(f0(probe + 1.0) - f0(probe))) > NODE_TOL:
        raise ContractViolationError("f0(x) = f0(x - 1) fails on (1, 2) at the spot checks")

    def make(n):
        return ContinuousPiece(lambda u: g0((u + n - 1) / N) + f0((u + n - 1) / N) - a * f0(u))

    return PiecewiseG([make(n) for n in range(1, N + 1)])


def evaluate_fif(pw: PiecewiseG, a: float, x, tol: float = DEFAULT_TOL):
    """Fractal interpolation function at ``x`` by the series solver."""
    return fif_solution(pw, a, tol)(x)


def fif_solution(pw: PiecewiseG, a: float, tol: float = DEFAULT_TOL) -> SeriesSolution:
    _check_scale(a)
    g = g_from_pieces(pw)
    return solve(EquationParams(float(a), float(pw.N)), g, g.sup_norm, tol)


# -- chaos game ----------------------------------------------------------------

@dataclass(frozen=True)
class PointCloud:
    x: np.ndarray
    y: np.ndarray

    def __len__(self):
        return len(self.x)


def render_attractor(ifs: IfsSpec, iterations: int, seed=(0.0, 0.0), burn_in: int = 100,
                     rng_seed: int = 0) -> PointCloud:
    """Chaos-game orbit of ``ifs``; returns ``iterations - burn_in`` points.

    Maps are chosen uniformly with ``numpy.random.default_rng(rng_seed)``.
    Both coordinates follow first-order linear recurrences and are run
    through :func:`scipy.signal.lfilter`.
    """
    if not iterations > burn_in >= 0:
        raise InvalidParameterError("need iterations > burn_in >= 0")
    rng = np.random.default_rng(rng_seed)
    idx = rng.integers(0, ifs.N, size=iterations)
    x0, y0 = float(seed[0]), float(seed[1])
    # x_{t+1} = x_t / N + idx_t / N
    xs = lfilter([1.0], [1.0, -1.0 / ifs.N], idx / ifs.N, zi=[x0 / ifs.N])[0]
    x_prev = np.concatenate(([x0], xs[:-1]))
    gv = np.empty(iterations)
    for k, m in enumerate(ifs.maps):
        mask = idx == k
        if mask.any():
            gv[mask] = m.g(x_prev[mask])
    # y_{t+1} = a y_t + g_idx(x_t)
    ys = lfilter([1.0], [1.0, -ifs.a], gv, zi=[ifs.a * y0])[0]
    return PointCloud(xs[burn_in:], ys[burn_in:])


# -- interpolation data ---------------------------------------------------------

@dataclass
class InterpolationProblem:
    """Data y_0..y_N at x_n = n/N together with the scale a."""

    y: np.ndarray
    a: float
    N: int = field(init=False)

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        if self.y.ndim != 1 or len(self.y) < 3:
            raise InputError("need at least 3 data points (N >= 2)")
        if not np.all(np.isfinite(self.y)):
            raise InputError("data values must be finite")
        _check_scale(self.a)
        self.N = len(self.y) - 1

    @classmethod
    def from_points(cls, xs, ys, a: float) -> "InterpolationProblem":
        xs = np.asarray(xs, dtype=float)
        order = np.argsort(xs)
        xs, ys = xs[order], np.asarray(ys, dtype=float)[order]
        N = len(xs) - 1
        if N < 2:
            raise InputError("need at least 3 data points (N >= 2)")
        bad = np.abs(xs - np.arange(N + 1) / N) > NODE_TOL
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise InputError(f"abscissa x={xs[i]!r} is not {i}/{N}: data must sit on a uniform partition")
        return cls(ys, a)

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.N + 1) / self.N

    def step_generator(self) -> PiecewiseG:
        """Generator with an affine first piece and constant remaining pieces.

        Piece 1 runs from (1-a) y_0 to y_1 - a y_N, piece n (1 < n < N) is
        y_n - a y_N and piece N is (1-a) y_N. The three-point data
        (0, 0), (1/2, a), (1, 1) reproduce the two-step generator 0, 1-a.
        """
        a, y, N = self.a, self.y, self.N
        first = PolynomialPiece([(1 - a) * y[0], (y[1] - a * y[N]) - (1 - a) * y[0]])
        middle = [ConstantPiece(y[n] - a * y[N]) for n in range(2, N)]
        return PiecewiseG([first, *middle, ConstantPiece((1 - a) * y[N])])

    def affine_generator(self) -> PiecewiseG:
        """Continuous generator built from a linear f0 and a piecewise-linear g0."""
        a, y, N = self.a, self.y, self.N
        nodes = self.nodes
        slope = y[N] - y[0]
        lin = lambda t: y[0] + slope * t
        f0 = RealFunction(lambda x: lin(reduce_half_open(x)), PIECEWISE, 1.0, reduce_half_open)
        dev = y - lin(nodes)
        dev[0] = dev[-1] = 0.0
        g0 = RealFunction(lambda x: np.interp(np.mod(x, 1.0), nodes, dev), PIECEWISE, 1.0)
        return g_from_base(f0, g0, a, N)

    def generator(self, construction: str = "step") -> PiecewiseG:
        if construction == "step":
            return self.step_generator()
        if construction == "affine":
            return self.affine_generator()
        raise InvalidParameterError(f"unknown construction {construction!r}; use step or affine")
