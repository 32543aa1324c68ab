"""Weierstrass-type Fourier bases on [0, 1] with dilation factor 2.

Classical basis: e = 1, c_k = sqrt(2) cos(2 pi k x), s_k = sqrt(2) sin(2 pi k x).

Hat basis: c^_k = sqrt(1 - a^2) M^{-1} c_k with M = I - a T_2, i.e.

    c^_k(x) = sqrt(1 - a^2) sum_n a^n c_k(2^n x),

and likewise s^_k; e^ = e.  Its Gram matrix is a^j when one index is 2^j
times the other and 0 otherwise.

Tilde basis: the orthonormalised hat basis. Odd indices keep c^_k; even
indices use sqrt(1 - a^2) c^_k - a c_{k/2}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .errors import InvalidParameterError, RegimeError
from .functions import cos2pik, phase, sin2pik
from .numerics import ACCEPTANCE_RESOLUTION, DEFAULT_RESOLUTION, UNIT, QuadratureSpec, _check_finite, midpoints
from .operators import DEFAULT_TOL, EquationParams, solve

CONST, COS, SIN = "const", "cos", "sin"
CLASSICAL, TILDE, HAT = "classical", "tilde", "hat"
TAIL_EPS = 1e-12
L2_POINTS = 512


@dataclass(frozen=True, order=True)
class BasisIndex:
    kind: str
    k: int = 0

    def __post_init__(self):
        if self.kind not in (CONST, COS, SIN):
            raise InvalidParameterError(f"basis kind must be const, cos or sin, got {self.kind!r}")
        if self.kind == CONST:
            if self.k != 0:
                raise InvalidParameterError("the constant basis function takes no index")
        elif not (isinstance(self.k, (int, np.integer)) and self.k >= 1):
            raise InvalidParameterError(f"index k must be a positive integer, got {self.k!r}")

    def __str__(self):
        return CONST if self.kind == CONST else f"{self.kind}{self.k}"


E = BasisIndex(CONST)


def cos_idx(k: int) -> BasisIndex:
    return BasisIndex(COS, k)


def sin_idx(k: int) -> BasisIndex:
    return BasisIndex(SIN, k)


def standard_indices(K: int) -> list[BasisIndex]:
    """1, c_1..c_K, s_1..s_K."""
    return [E] + [cos_idx(k) for k in range(1, K + 1)] + [sin_idx(k) for k in range(1, K + 1)]


@dataclass(frozen=True)
class WfParams:
    """Scale a (|a| < 1); the dilation factor is fixed at 2."""

    a: float

    def __post_init__(self):
        if not abs(self.a) < 1:
            raise InvalidParameterError(f"need |a| < 1, got a={self.a!r}")

    @property
    def b(self) -> int:
        return 2

    @property
    def norm_factor(self) -> float:
        return math.sqrt(1.0 - self.a * self.a)


# -- evaluation ----------------------------------------------------------------

def eval_classical(idx: BasisIndex, x):
    x = np.asarray(x, dtype=float)
    if idx.kind == CONST:
        return np.ones_like(x)
    t = phase(idx.k, x)
    if idx.kind == COS:
        return math.sqrt(2.0) * np.cos(2.0 * np.pi * t)
    return math.sqrt(2.0) * np.sin(2.0 * np.pi * t)


@lru_cache(maxsize=4096)
def _hat_solution(kind: str, k: int, a: float, tol: float):
    g = cos2pik(k, normalized=True) if kind == COS else sin2pik(k, normalized=True)
    return solve(EquationParams(a, 2.0), g, math.sqrt(2.0), tol)


def eval_hat(idx: BasisIndex, wp: WfParams, x, tol: float = DEFAULT_TOL):
    """Hat basis function at ``x`` (array or scalar)."""
    x = np.asarray(x, dtype=float)
    if idx.kind == CONST:
        return np.ones_like(x) if x.ndim else 1.0
    sol = _hat_solution(idx.kind, idx.k, float(wp.a), float(tol))
    return wp.norm_factor * sol(x)


def eval_tilde(idx: BasisIndex, wp: WfParams, x, tol: float = DEFAULT_TOL):
    """Orthonormal (tilde) basis function at ``x``."""
    if idx.kind == CONST or idx.k % 2:
        return eval_hat(idx, wp, x, tol)
    half = BasisIndex(idx.kind, idx.k // 2)
    return wp.norm_factor * eval_hat(idx, wp, x, tol) - wp.a * eval_classical(half, x)


def eval_tilde_alt(idx: BasisIndex, wp: WfParams, x, tol: float = DEFAULT_TOL):
    """Equivalent even-index form (h_k - a h_{k/2}) / sqrt(1 - a^2)."""
    if idx.kind == CONST or idx.k % 2:
        return eval_hat(idx, wp, x, tol)
    half = BasisIndex(idx.kind, idx.k // 2)
    return (eval_hat(idx, wp, x, tol) - wp.a * eval_hat(half, wp, x, tol)) / wp.norm_factor


def eval_basis(basis: str, idx: BasisIndex, wp: WfParams | None, x, tol: float = DEFAULT_TOL):
    if basis == CLASSICAL:
        return eval_classical(idx, x)
    if basis == HAT:
        return eval_hat(idx, wp, x, tol)
    if basis == TILDE:
        return eval_tilde(idx, wp, x, tol)
    raise InvalidParameterError(f"unknown basis {basis!r}")


# -- Gram matrices ---------------------------------------------------------------

def _as_index(i, kind=COS) -> BasisIndex:
    return i if isinstance(i, BasisIndex) else BasisIndex(kind, int(i))


def dyadic_exponent(k: int, l: int) -> int | None:
    """j with max(k, l) = 2**j min(k, l), or None."""
    lo, hi = min(k, l), max(k, l)
    if hi % lo:
        return None
    q = hi // lo
    if q & (q - 1):
        return None
    return q.bit_length() - 1


def gram_hat_analytic(k, l, wp: WfParams) -> float:
    """Closed-form inner product of two hat basis functions.

    ``k`` and ``l`` are BasisIndex values or positive integers (cosine family).
    """
    i, j = _as_index(k), _as_index(l)
    if i.kind == CONST or j.kind == CONST:
        return 1.0 if i.kind == j.kind else 0.0
    if i.kind != j.kind:
        return 0.0
    e = dyadic_exponent(i.k, j.k)
    return 0.0 if e is None else float(wp.a) ** e


@dataclass(frozen=True)
class GramMatrix:
    indices: tuple
    matrix: np.ndarray
    basis: str
    method: str

    @property
    def size(self) -> int:
        return len(self.indices)

    def max_deviation(self, other: "GramMatrix | np.ndarray") -> float:
        m = other.matrix if isinstance(other, GramMatrix) else np.asarray(other)
        return float(np.max(np.abs(self.matrix - m)))


def sample_basis(indices: Sequence[BasisIndex], basis: str, wp: WfParams | None, x,
                 tol: float = DEFAULT_TOL) -> np.ndarray:
    """Rows of basis function samples, one row per index."""
    x = np.asarray(x, dtype=float)
    return np.vstack([np.broadcast_to(eval_basis(basis, i, wp, x, tol), x.shape) for i in indices])


def gram_matrix(indices: Sequence[BasisIndex], wp: WfParams, method: str = "analytic",
                basis: str = HAT, q: QuadratureSpec = QuadratureSpec(ACCEPTANCE_RESOLUTION),
                tol: float = DEFAULT_TOL) -> GramMatrix:
    """Gram matrix of ``indices`` by closed form or by midpoint quadrature."""
    indices = tuple(_as_index(i) for i in indices)
    if method == "analytic":
        if basis == HAT:
            G = np.array([[gram_hat_analytic(i, j, wp) for j in indices] for i in indices])
        elif basis == TILDE:
            G = np.eye(len(indices))
        else:
            raise InvalidParameterError(f"no closed form for basis {basis!r}")
    elif method == "quadrature":
        V = sample_basis(indices, basis, wp, midpoints(UNIT, q), tol)
        G = (V @ V.T) / q.resolution
        G = 0.5 * (G + G.T)
    else:
        raise InvalidParameterError(f"unknown Gram method {method!r}; use analytic or quadrature")
    return GramMatrix(indices, G, basis, method)


def gram_quadrature(k, l, wp: WfParams, q: QuadratureSpec = QuadratureSpec(ACCEPTANCE_RESOLUTION),
                    tol: float = DEFAULT_TOL) -> float:
    """Quadrature inner product of two hat basis functions."""
    x = midpoints(UNIT, q)
    u = eval_hat(_as_index(k), wp, x, tol)
    v = eval_hat(_as_index(l), wp, x, tol)
    return float(np.sum(np.broadcast_to(u, x.shape) * v) / q.resolution)


@dataclass(frozen=True)
class GramDet:
    """Determinant of the leading hat Gram block of c^_1..c^_{2^m}.

    ``numeric`` is the LU determinant, ``conjectured`` is (1 - a^2)^(2^m) and
    ``closed_form`` is (1 - a^2)^floor(2^m / 2), which is what the leading
    block actually evaluates to.
    """

    m: int
    size: int
    numeric: float
    conjectured: float
    closed_form: float


def block_det(size: int, wp: WfParams) -> float:
    """LU determinant of the analytic Gram block of c^_1..c^_size."""
    G = gram_matrix([cos_idx(k) for k in range(1, size + 1)], wp).matrix
    lu, piv = scipy.linalg.lu_factor(G)
    sign = (-1.0) ** int(np.sum(piv != np.arange(size)))
    return float(sign * np.prod(np.diag(lu)))


def gram_det(m: int, wp: WfParams) -> GramDet:
    if not 0 <= m <= 6:
        raise InvalidParameterError(f"m must lie in 0..6, got {m}")
    size = 2**m
    r = 1.0 - wp.a**2
    return GramDet(m, size, block_det(size, wp), r ** (2**m), r ** (size // 2))


# -- inner products through the series ---------------------------------------------

def inner_product_series(k, l, a: float, b: float, base_ip: Callable[[int, str], float],
                         terms: int, space: str = "line") -> float:
    """Inner product <f_k, f_l> of f = M^{-1} g from base inner products.

    ``base_ip(m, "forward")`` must return <g_k, T_{b^m} g_l> and
    ``base_ip(m, "adjoint")`` must return <g_k, T*_{b^m} g_l>, where the
    g are orthonormal.

    On the line ``T_b`` has norm b^{-1/2}, so the weights are
    a^(2n-m) b^(m-n) and the diagonal constant is 1/(1 - a^2/b). On the
    period-1 space ``T_b`` is an isometry, the weights become a^(2n-m)
    and the constant 1/(1 - a^2). The constant enters only when k = l.
    """
    if terms < 1:
        raise InvalidParameterError("terms must be at least 1")
    if space == "line":
        w = float(b)
    elif space == "periodic":
        w = 1.0
    else:
        raise InvalidParameterError(f"space must be line or periodic, got {space!r}")
    if not a * a < w:
        raise RegimeError(f"series needs a^2 < {w!r}, got a={a!r}")
    c = 1.0 / (1.0 - a * a / w)
    total = 0.0
    for n in range(1, terms + 1):
        inner = 0.0
        for m in range(1, n + 1):
            fwd, adj = base_ip(m, "forward"), base_ip(m, "adjoint")
            if fwd or adj:
                inner += a ** (2 * n - m) * w ** (m - n) * (fwd + adj)
        total += inner
    return total + (c if k == l else 0.0)


def periodic_base_ip(k, l, b: int = 2, q: QuadratureSpec = QuadratureSpec(DEFAULT_RESOLUTION)):
    """Quadrature base inner products of classical basis functions with dilation.

    Returns a cached callable (m, which) -> <g_k, g_l(b^m .)> for ``forward``
    and <g_k(b^m .), g_l> for ``adjoint``.
    """
    i, j = _as_index(k), _as_index(l)
    x = midpoints(UNIT, q)
    gi, gj = eval_classical(i, x), eval_classical(j, x)
    cache: dict = {}

    def dilate(idx, m):
        # g(b^m x) with the argument kept inside one period
        return eval_classical(idx, np.mod(float(b) ** m * x, 1.0))

    def ip(m: int, which: str) -> float:
        key = (m, which)
        if key not in cache:
            if which == "forward":
                cache[key] = float(np.sum(gi * dilate(j, m)) / q.resolution)
            elif which == "adjoint":
                cache[key] = float(np.sum(dilate(i, m) * gj) / q.resolution)
            else:
                raise InvalidParameterError(f"which must be forward or adjoint, got {which!r}")
        return cache[key]

    return ip


# -- coefficients --------------------------------------------------------------------

@dataclass(frozen=True)
class CoeffVector:
    """alpha_0, alpha_1..K (cosine) and beta_1..K (sine) in one basis."""

    alpha0: float
    alphas: np.ndarray
    betas: np.ndarray
    basis: str = CLASSICAL

    def __post_init__(self):
        al = np.asarray(self.alphas, dtype=float)
        be = np.asarray(self.betas, dtype=float)
        object.__setattr__(self, "alphas", al)
        object.__setattr__(self, "betas", be)
        if al.shape != be.shape or al.ndim != 1:
            raise InvalidParameterError("alphas and betas must be 1-D of equal length")
        if not (np.isfinite(self.alpha0) and np.all(np.isfinite(al)) and np.all(np.isfinite(be))):
            raise InvalidParameterError("coefficients must be finite")
        if self.basis not in (CLASSICAL, TILDE):
            raise InvalidParameterError(f"basis must be classical or tilde, got {self.basis!r}")

    @property
    def K(self) -> int:
        return len(self.alphas)

    def truncated(self, K: int) -> "CoeffVector":
        return CoeffVector(self.alpha0, self.alphas[:K], self.betas[:K], self.basis)

    def energy(self) -> float:
        return float(self.alpha0**2 + np.sum(self.alphas**2) + np.sum(self.betas**2))

    def rows(self):
        """(basis, kind, k, value) tuples in CSV order."""
        yield self.basis, CONST, 0, float(self.alpha0)
        for n, v in enumerate(self.alphas, start=1):
            yield self.basis, COS, n, float(v)
        for n, v in enumerate(self.betas, start=1):
            yield self.basis, SIN, n, float(v)

    @classmethod
    def from_rows(cls, rows) -> "CoeffVector":
        rows = list(rows)
        if not rows:
            raise InvalidParameterError("no coefficient rows")
        bases = {r[0] for r in rows}
        if len(bases) != 1:
            raise InvalidParameterError(f"mixed bases in coefficient rows: {sorted(bases)}")
        K = max(int(r[2]) for r in rows)
        alpha0, al, be = 0.0, np.zeros(K), np.zeros(K)
        for _, kind, k, v in rows:
            k = int(k)
            if kind == CONST:
                alpha0 = float(v)
            elif kind == COS and k >= 1:
                al[k - 1] = float(v)
            elif kind == SIN and k >= 1:
                be[k - 1] = float(v)
            else:
                raise InvalidParameterError(f"bad coefficient row kind={kind!r} k={k}")
        return cls(alpha0, al, be, bases.pop())


def classical_coeffs(h, K: int, q: QuadratureSpec = QuadratureSpec(ACCEPTANCE_RESOLUTION)) -> CoeffVector:
    """Classical Fourier coefficients of ``h`` on [0, 1] by quadrature."""
    if K < 0:
        raise InvalidParameterError("K must be non-negative")
    x = midpoints(UNIT, q)
    hv = np.broadcast_to(np.asarray(h(x), dtype=float), x.shape)
    _check_finite(x, hv)
    alpha0 = float(np.sum(hv) / q.resolution)
    al, be = np.zeros(K), np.zeros(K)
    for n in range(1, K + 1):
        al[n - 1] = np.sum(hv * eval_classical(cos_idx(n), x)) / q.resolution
        be[n - 1] = np.sum(hv * eval_classical(sin_idx(n), x)) / q.resolution
    return CoeffVector(alpha0, al, be, CLASSICAL)


def quadrature_coeff_fn(h, q: QuadratureSpec = QuadratureSpec(ACCEPTANCE_RESOLUTION)):
    """Callback (kind, n) -> classical coefficient of ``h`` by quadrature.

    Indices above resolution/2 are returned as 0 (they are not resolved).
    """
    x = midpoints(UNIT, q)
    hv = np.asarray(h(x), dtype=float)
    cache: dict = {}

    def coeff(kind: str, n: int) -> float:
        if n > q.resolution // 2:
            return 0.0
        key = (kind, n)
        if key not in cache:
            cache[key] = float(np.sum(hv * eval_classical(BasisIndex(kind, n), x)) / q.resolution)
        return cache[key]

    return coeff


def default_tail_terms(a: float) -> int:
    """Smallest m >= 1 with |a|^m <= 1e-12."""
    if a == 0:
        return 1
    return max(1, math.ceil(math.log(TAIL_EPS) / math.log(abs(a))))


def transform_coeffs(cv: CoeffVector, wp: WfParams, tail_terms: int | None = None,
                     coeff_fn: Callable[[str, int], float] | None = None) -> CoeffVector:
    """Classical to tilde coefficients.

    Coefficients with index above ``cv.K`` come from ``coeff_fn(kind, n)``
    when supplied and are taken as 0 otherwise.
    """
    if cv.basis != CLASSICAL:
        raise InvalidParameterError("transform_coeffs expects classical coefficients")
    a = float(wp.a)
    M = default_tail_terms(a) if tail_terms is None else int(tail_terms)
    if M < 1:
        raise InvalidParameterError("tail_terms must be at least 1")
    K = cv.K

    def coeff(kind, n):
        if n <= K:
            return (cv.alphas if kind == COS else cv.betas)[n - 1]
        return coeff_fn(kind, n) if coeff_fn is not None else 0.0

    def dyadic_sum(kind, n):
        s, w = 0.0, 1.0
        for m in range(M):
            idx = n << m
            if idx > K and coeff_fn is None:
                break
            s += w * coeff(kind, idx)
            w *= a
        return s

    out = {COS: np.zeros(K), SIN: np.zeros(K)}
    r = 1.0 - a * a
    for kind in (COS, SIN):
        for n in range(1, K + 1):
            if n % 2:
                out[kind][n - 1] = math.sqrt(r) * dyadic_sum(kind, n)
            else:
                out[kind][n - 1] = -a * coeff(kind, n // 2) + r * dyadic_sum(kind, n)
    return CoeffVector(cv.alpha0, out[COS], out[SIN], TILDE)


def synthesize(cv: CoeffVector, wp: WfParams | None, x, tol: float = DEFAULT_TOL):
    """Partial sum alpha_0 + sum_n alpha_n u_n(x) + beta_n v_n(x)."""
    xa = np.asarray(x, dtype=float)
    total = np.full(xa.shape, float(cv.alpha0))
    for n in range(1, cv.K + 1):
        for kind, coeffs in ((COS, cv.alphas), (SIN, cv.betas)):
            c = coeffs[n - 1]
            if c:
                total = total + c * eval_basis(cv.basis, BasisIndex(kind, n), wp, xa, tol)
    return float(total) if xa.ndim == 0 else total


def l2_error_512(h, approx) -> float:
    """Root mean square difference over the 512 midpoints (i + 1/2)/512."""
    x = (np.arange(L2_POINTS) + 0.5) / L2_POINTS
    d = np.asarray(h(x), dtype=float) - np.asarray(approx(x), dtype=float)
    return float(np.sqrt(np.mean(d * d)))
