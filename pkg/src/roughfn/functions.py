"""Real functions of one variable with a little structure attached.

A :class:`RealFunction` is a vectorised evaluation rule plus metadata the
series solvers care about: a period (if any), a *reduction* map that sends
any abscissa to a canonical representative with the same function value,
and optionally a known sup norm.

Two periodic conventions occur:

* ordinary period ``P``: reduction is ``x mod P`` into ``[0, P)``;
* the half-open convention of fractal interpolation: period 1 on
  ``(0, inf)`` with intervals ``(n-1, n]``, so that ``g(1) = g(2) = ...``
  may differ from ``g(0)``.  Reduction sends ``x > 0`` into ``(0, 1]`` and
  keeps ``0`` fixed.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import InputError, InvalidParameterError

ANALYTIC = "analytic"
PIECEWISE = "piecewise"
SAMPLED = "sampled"
COMPOSITE = "composite"


def _scalar_or_array(x, out):
    if np.ndim(x) == 0:
        return float(out)
    return out


def reduce_half_open(x):
    """Map ``x`` to ``(0, 1]`` (integers go to 1), keeping 0 at 0.

    Exact in floating point for every finite ``x``.
    """
    x = np.asarray(x, dtype=float)
    t = x - (np.ceil(x) - 1.0)
    return np.where(x == 0.0, 0.0, t)


class RealFunction:
    """Vectorised real function with period/reduction metadata.

    Parameters
    ----------
    rule : callable
        Maps a float ndarray to an ndarray of the same shape.
    kind : str
        One of ``analytic``, ``piecewise``, ``sampled``, ``composite``.
    period : float, optional
        A period of the function, if it has one.
    reduce : callable, optional
        Canonical-representative map; defaults to ``x mod period``.
    sup_norm : float, optional
        Known (exact or certified) bound on ``|f|``.
    """

    def __init__(self, rule: Callable, kind: str = ANALYTIC, period: float | None = None,
                 reduce: Callable | None = None, sup_norm: float | None = None,
                 name: str | None = None):
        self.rule = rule
        self.kind = kind
        self.period = period
        self._reduce = reduce
        self.sup_norm = sup_norm
        self.name = name or getattr(rule, "__name__", "f")
        self.is_constant = False

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        out = np.asarray(self.rule(xa), dtype=float)
        if out.shape != xa.shape:
            out = np.broadcast_to(out, xa.shape).copy()
        return _scalar_or_array(x, out)

    def __repr__(self):
        return f"RealFunction({self.name!r}, kind={self.kind!r}, period={self.period!r})"

    @property
    def periodic(self) -> bool:
        return self.period is not None

    def reduce(self, x):
        """Canonical representative of ``x`` with the same function value."""
        if self._reduce is not None:
            return self._reduce(x)
        if self.period is None:
            return np.asarray(x, dtype=float)
        return np.mod(x, self.period)

    def _same_periodicity(self, other: "RealFunction"):
        """Period and reduction shared by ``self`` and ``other``, if any."""
        if self.is_constant:
            return other.period, other._reduce
        if other.is_constant:
            return self.period, self._reduce
        if self.period is None or self.period != other.period:
            return None, None
        if self._reduce is other._reduce:
            return self.period, self._reduce
        # the half-open map is a valid reduction for every period-1 function
        reds = {self._reduce, other._reduce}
        if self.period == 1.0 and reds == {None, reduce_half_open}:
            return 1.0, reduce_half_open
        return None, None

    def __add__(self, other):
        if not isinstance(other, RealFunction):
            return self + constant(float(other))
        period, red = self._same_periodicity(other)
        sup = None if self.sup_norm is None or other.sup_norm is None else self.sup_norm + other.sup_norm
        return RealFunction(lambda x: self.rule(x) + other.rule(x), COMPOSITE, period, red, sup,
                            f"({self.name} + {other.name})")

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, RealFunction):
            period, red = self._same_periodicity(c)
            sup = None if self.sup_norm is None or c.sup_norm is None else self.sup_norm * c.sup_norm
            return RealFunction(lambda x: self.rule(x) * c.rule(x), COMPOSITE, period, red, sup,
                                f"({self.name} * {c.name})")
        c = float(c)
        sup = None if self.sup_norm is None else abs(c) * self.sup_norm
        return RealFunction(lambda x: c * self.rule(x), COMPOSITE, self.period, self._reduce, sup,
                            f"{c!r}*{self.name}")

    __rmul__ = __mul__


def as_function(f) -> RealFunction:
    if isinstance(f, RealFunction):
        return f
    if callable(f):
        return RealFunction(f, COMPOSITE)
    return constant(float(f))


# -- builtin catalog ---------------------------------------------------------

def constant(v: float) -> RealFunction:
    v = float(v)
    f = RealFunction(lambda x: np.full(np.shape(x), v), ANALYTIC, 1.0, None, abs(v), f"const:{v!r}")
    f.is_constant = True
    return f


def identity() -> RealFunction:
    return RealFunction(lambda x: np.array(x, dtype=float), ANALYTIC, name="x")


def cospi() -> RealFunction:
    """cos(pi x), period 2: the classical Weierstrass generator."""
    return RealFunction(lambda x: np.cos(np.pi * x), ANALYTIC, 2.0, None, 1.0, "cospi")


def phase(k: int, x):
    """Fractional part of k x, reducing x first so large arguments stay accurate."""
    return np.mod(k * np.mod(x, 1.0), 1.0)


def cos2pik(k: int, normalized: bool = False) -> RealFunction:
    """cos(2 pi k x); with ``normalized`` the unit-norm ``sqrt(2) cos(2 pi k x)``."""
    c = math.sqrt(2.0) if normalized else 1.0
    return RealFunction(lambda x: c * np.cos(2.0 * np.pi * phase(k, x)), ANALYTIC, 1.0, None, c,
                        f"cos2pik:{k}")


def sin2pik(k: int, normalized: bool = False) -> RealFunction:
    c = math.sqrt(2.0) if normalized else 1.0
    return RealFunction(lambda x: c * np.sin(2.0 * np.pi * phase(k, x)), ANALYTIC, 1.0, None, c,
                        f"sin2pik:{k}")


def step(c: float, h: float) -> RealFunction:
    """0 on (0, c] and h on (c, 1], extended with the half-open period-1 rule.

    ``step(0.5, 1 - a)`` is the generator of the two-map interpolation
    example whose solution at ``a = 1/2`` is ``f(x) = x``.
    """
    if not 0.0 < c < 1.0:
        raise InvalidParameterError(f"step location must lie in (0, 1), got {c}")

    def rule(x):
        t = reduce_half_open(x)
        return np.where(t > c, h, 0.0)

    return RealFunction(rule, PIECEWISE, 1.0, reduce_half_open, abs(h), f"step:{c!r}:{h!r}")


def saw() -> RealFunction:
    """Sawtooth x - floor(x)."""
    return RealFunction(lambda x: np.mod(x, 1.0), PIECEWISE, 1.0, None, 1.0, "saw")


def xm05() -> RealFunction:
    """h(x) = x - 1/2 on [0, 1] (not periodised)."""
    return RealFunction(lambda x: np.asarray(x, dtype=float) - 0.5, ANALYTIC, name="xm05")


def indicator(lo: float, hi: float) -> RealFunction:
    return RealFunction(lambda x: ((x >= lo) & (x <= hi)).astype(float), PIECEWISE, sup_norm=1.0,
                        name=f"1[{lo},{hi}]")


def triangle_bump(lo: float, hi: float, height: float = 1.0) -> RealFunction:
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return RealFunction(lambda x: height * np.clip(1.0 - np.abs(x - mid) / half, 0.0, None),
                        PIECEWISE, sup_norm=abs(height), name=f"bump[{lo},{hi}]")


def periodic_extension(fn: Callable, name: str = "periodic") -> RealFunction:
    """Extend a rule given on [0, 1] with the half-open period-1 convention."""
    return RealFunction(lambda x: fn(reduce_half_open(x)), PIECEWISE, 1.0, reduce_half_open,
                        name=name)


def from_samples(xs, ys) -> RealFunction:
    """Periodic piecewise-linear interpolant of samples on [0, 1]."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 2:
        raise InputError("sampled data needs matching 1-D x and y arrays with at least 2 points")
    order = np.argsort(xs)
    xs, ys = xs[order], ys[order]
    if xs[0] < 0.0 or xs[-1] > 1.0 or np.any(np.diff(xs) <= 0):
        raise InputError("sample abscissae must be distinct and lie in [0, 1]")
    return RealFunction(lambda x: np.interp(np.mod(x, 1.0), xs, ys), SAMPLED, 1.0, None,
                        float(np.max(np.abs(ys))), "csv")


def parse_spec(spec: str, read_csv: Callable | None = None) -> RealFunction:
    """Build a function from a catalog string.

    Accepted forms: ``cospi``, ``cos2pik:<k>``, ``sin2pik:<k>``,
    ``step:<c>:<h>``, ``saw``, ``const:<v>``, ``xm05`` and ``csv:<path>``.
    """
    head, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    try:
        if head == "cospi" and not args:
            return cospi()
        if head == "cos2pik" and len(args) == 1:
            return cos2pik(int(args[0]))
        if head == "sin2pik" and len(args) == 1:
            return sin2pik(int(args[0]))
        if head == "step" and len(args) == 2:
            return step(float(args[0]), float(args[1]))
        if head == "saw" and not args:
            return saw()
        if head == "const" and len(args) == 1:
            return constant(float(args[0]))
        if head == "xm05" and not args:
            return xm05()
        if head == "csv" and rest:
            if read_csv is None:
                from .io import read_xy_csv as read_csv
            xs, ys = read_csv(rest)
            return from_samples(xs, ys)
    except ValueError as exc:
        raise InputError(f"bad function spec {spec!r}: {exc}") from exc
    raise InputError(
        f"unknown function spec {spec!r}; expected one of cospi, cos2pik:<k>, sin2pik:<k>, "
        "step:<c>:<h>, saw, const:<v>, xm05, csv:<path>")
