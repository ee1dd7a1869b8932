"""Weighted L_p spaces on [-1, 1] with weight (1-x^2)^alpha.

The norm is ``||f||_{p,alpha} = || f(x) (1-x^2)^alpha ||_p``.  p = infinity is
represented by ``math.inf`` so the sup-norm branch is selected exactly.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ContractError, DomainError, NumericsError
from .jacobi import JacobiBasis, PolynomialCoeffs, gauss_jacobi_rule

__all__ = [
    "INF",
    "SpaceParams",
    "Admissibility",
    "check_admissible",
    "FunctionHandle",
    "SampledFunction",
    "load_function_csv",
    "weighted_norm",
    "weighted_norm_with_error",
    "weighted_distance",
    "sup_norm_weighted",
    "chebyshev_grid",
]

INF = math.inf

_SUP_GRID = 2049
_QUAD_POINTS = 400


def _as_p(p) -> float:
    """Accept math.inf, the string 'inf', or a float >= 1."""
    if isinstance(p, str):
        if p.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        p = float(p)
    p = float(p)
    if not (p >= 1.0):
        raise DomainError(f"p must satisfy p >= 1 (or be inf), got {p}")
    return p


@dataclass(frozen=True)
class SpaceParams:
    """The triple (p, alpha, mu) defining a weighted space."""

    p: float
    alpha: float
    mu: float

    def __post_init__(self):
        object.__setattr__(self, "p", _as_p(self.p))
        if self.mu < 0.0:
            raise DomainError(f"mu must be nonnegative, got {self.mu}")

    @property
    def is_sup(self) -> bool:
        return self.p == INF


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    detail: str


def check_admissible(space: SpaceParams) -> Admissibility:
    """Check (p, alpha, mu) against the admissibility window.

    The window is stated for beta = alpha - mu/2:
      p = 1:        -1/2 <  beta <= 0
      1 < p < inf:  -1/(2p) < beta < 1/2 - 1/(2p)
      p = inf:       0   <= beta <  1/2
    """
    beta = space.alpha - 0.5 * space.mu
    p = space.p
    if p == 1.0:
        lo, hi = -0.5, 0.0
        if not beta > lo:
            return Admissibility(False, f"p=1 lower bound violated: alpha-mu/2={beta} <= {lo}")
        if not beta <= hi:
            return Admissibility(False, f"p=1 upper bound violated: alpha-mu/2={beta} > {hi}")
    elif p == INF:
        lo, hi = 0.0, 0.5
        if not beta >= lo:
            return Admissibility(False, f"p=inf lower bound violated: alpha-mu/2={beta} < {lo}")
        if not beta < hi:
            return Admissibility(False, f"p=inf upper bound violated: alpha-mu/2={beta} >= {hi}")
    else:
        lo, hi = -0.5 / p, 0.5 - 0.5 / p
        if not beta > lo:
            return Admissibility(False, f"lower bound violated: alpha-mu/2={beta} <= {lo}")
        if not beta < hi:
            return Admissibility(False, f"upper bound violated: alpha-mu/2={beta} >= {hi}")
    return Admissibility(True, f"admissible: alpha-mu/2={beta} in window for p={p}")


@dataclass(frozen=True)
class FunctionHandle:
    """A real function on [-1, 1] with optional analytic derivative rules.

    ``fn`` must accept numpy arrays.  When the function is a polynomial in a
    Jacobi basis, ``poly`` carries the coefficients so downstream code can
    size quadratures exactly.
    """

    fn: Callable = field(repr=False)
    d1: Optional[Callable] = field(default=None, repr=False)
    d2: Optional[Callable] = field(default=None, repr=False)
    label: str = ""
    poly: Optional[PolynomialCoeffs] = None

    def __call__(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    @classmethod
    def from_callable(cls, fn, label="", d1=None, d2=None, vectorized=True):
        if not vectorized:
            fn = np.vectorize(fn, otypes=[float])
            d1 = np.vectorize(d1, otypes=[float]) if d1 is not None else None
            d2 = np.vectorize(d2, otypes=[float]) if d2 is not None else None
        return cls(fn=fn, d1=d1, d2=d2, label=label)

    @classmethod
    def from_poly(cls, poly: PolynomialCoeffs, label=""):
        dp = poly.derivative()
        dpp = dp.derivative()
        return cls(fn=poly, d1=dp, d2=dpp, label=label or "poly", poly=poly)

    def minus(self, other: "FunctionHandle") -> "FunctionHandle":
        d1 = None
        d2 = None
        if self.d1 is not None and other.d1 is not None:
            sd1, od1 = self.d1, other.d1
            d1 = lambda x: np.asarray(sd1(x), dtype=float) - np.asarray(od1(x), dtype=float)
        if self.d2 is not None and other.d2 is not None:
            sd2, od2 = self.d2, other.d2
            d2 = lambda x: np.asarray(sd2(x), dtype=float) - np.asarray(od2(x), dtype=float)
        f, g = self.fn, other.fn
        return FunctionHandle(
            fn=lambda x: np.asarray(f(x), dtype=float) - np.asarray(g(x), dtype=float),
            d1=d1,
            d2=d2,
            label=f"({self.label})-({other.label})",
        )


@dataclass(frozen=True)
class SampledFunction:
    """User data on strictly increasing abscissae, interpolated monotonically.

    Interpolation is piecewise cubic (PCHIP), which reproduces the samples
    exactly and introduces no overshoot.  Outside the data range the end
    values are held constant so the handle is defined on all of [-1, 1].
    """

    abscissae: np.ndarray
    values: np.ndarray
    order: int = 3

    def __post_init__(self):
        xs = np.asarray(self.abscissae, dtype=float)
        ys = np.asarray(self.values, dtype=float)
        if xs.ndim != 1 or xs.size != ys.size or xs.size < 2:
            raise ContractError("need two columns of equal length >= 2")
        if np.any(np.diff(xs) <= 0.0):
            raise ContractError("abscissae must be strictly increasing")
        if xs[0] < -1.0 or xs[-1] > 1.0:
            raise DomainError("abscissae must lie within [-1, 1]")
        object.__setattr__(self, "abscissae", xs)
        object.__setattr__(self, "values", ys)

    def to_handle(self, label="user_csv") -> FunctionHandle:
        interp = PchipInterpolator(self.abscissae, self.values, extrapolate=False)
        d1 = interp.derivative(1)
        d2 = interp.derivative(2)
        lo, hi = self.abscissae[0], self.abscissae[-1]
        vlo, vhi = self.values[0], self.values[-1]

        def fn(x):
            x = np.asarray(x, dtype=float)
            xc = np.clip(x, lo, hi)
            return np.asarray(interp(xc), dtype=float)

        def dk(rule):
            def g(x):
                x = np.asarray(x, dtype=float)
                xc = np.clip(x, lo, hi)
                out = np.asarray(rule(xc), dtype=float)
                return np.where((x < lo) | (x > hi), 0.0, out)

            return g

        return FunctionHandle(fn=fn, d1=dk(d1), d2=dk(d2), label=label)


def load_function_csv(source) -> SampledFunction:
    """Read a two-column (x, value) CSV; a single header row is tolerated."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    xs, ys = [], []
    for row in csv.reader(io.StringIO(text)):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < 2:
            raise ContractError(f"expected two columns, got row {row!r}")
        try:
            xs.append(float(row[0]))
            ys.append(float(row[1]))
        except ValueError:
            if not xs:
                continue  # header row
            raise ContractError(f"non-numeric row {row!r}")
    return SampledFunction(np.array(xs), np.array(ys))


def chebyshev_grid(m: int) -> np.ndarray:
    """m Chebyshev points of the second kind on [-1, 1], ascending."""
    return np.cos(np.linspace(np.pi, 0.0, m))


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(g, a: float, b: float, iters: int = 80, tol: float = 1e-13):
    """Golden-section search for the maximum of g on [a, b]."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(iters):
        if b - a <= tol:
            break
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - _INVPHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _INVPHI * (b - a)
            gd = g(d)
    if gc >= gd:
        return c, gc
    return d, gd


def sup_norm_weighted(f, alpha: float, grid_size: int = _SUP_GRID, refine: bool = True):
    """max over [-1,1] of |f(x)| (1-x^2)^alpha; returns (value, argmax).

    Evaluates on a Chebyshev-distributed grid, then golden-section refines
    around the grid argmax.  Chebyshev clustering resolves the turnover of
    the weight near the endpoints.
    """
    xs = chebyshev_grid(grid_size)
    vals = np.abs(np.asarray(f(xs), dtype=float))
    if not np.all(np.isfinite(vals)):
        bad = xs[~np.isfinite(vals)][0]
        raise NumericsError(f"non-finite evaluation at x={bad}", details={"x": float(bad)})
    if alpha != 0.0:
        vals = vals * (1.0 - xs * xs) ** alpha
    i = int(np.argmax(vals))
    best_x, best = float(xs[i]), float(vals[i])
    if refine:
        lo = xs[max(i - 1, 0)]
        hi = xs[min(i + 1, grid_size - 1)]

        def g(x):
            v = abs(float(np.asarray(f(np.array([x])))[0]))
            return v * (1.0 - x * x) ** alpha if alpha != 0.0 else v

        xr, vr = _golden_max(g, float(lo), float(hi))
        if vr > best:
            best_x, best = xr, vr
    return best, best_x


def _abs_pow(vals: np.ndarray, p: float) -> np.ndarray:
    """|v|^p with explicit zero handling for fractional p."""
    av = np.abs(vals)
    if p == 1.0:
        return av
    if p == 2.0:
        return av * av
    out = np.zeros_like(av)
    nz = av > 0.0
    out[nz] = np.exp(p * np.log(av[nz]))
    return out


def weighted_norm(f, p, alpha: float, resolution: Optional[int] = None, refine: bool = True) -> float:
    """||f||_{p,alpha} on [-1, 1].

    For p < inf the integral of |f|^p (1-x^2)^{alpha p} is evaluated with a
    Gauss-Jacobi rule of basis (alpha p, alpha p); this requires
    alpha*p > -1.  For p = inf a Chebyshev grid plus golden-section
    refinement computes the weighted sup (``refine=False`` stops at the grid
    max, useful in experiment sweeps).
    """
    p = _as_p(p)
    if p == INF:
        value, _ = sup_norm_weighted(f, alpha, resolution or _SUP_GRID, refine=refine)
        return value
    ap = alpha * p
    if not ap > -1.0:
        raise DomainError(f"need alpha*p > -1 for integrability, got {ap}")
    m = resolution or _QUAD_POINTS
    rule = gauss_jacobi_rule(m, JacobiBasis(ap, ap))
    vals = np.asarray(f(rule.nodes), dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = rule.nodes[~np.isfinite(vals)][0]
        raise NumericsError(f"non-finite evaluation at x={bad}", details={"x": float(bad)})
    integral = float(rule.weights @ _abs_pow(vals, p))
    return integral ** (1.0 / p)


def weighted_norm_with_error(f, p, alpha: float, resolution: Optional[int] = None):
    """Norm plus a resolution-doubling error estimate: (value, est)."""
    p = _as_p(p)
    base = resolution or (_SUP_GRID if p == INF else _QUAD_POINTS)
    v1 = weighted_norm(f, p, alpha, base)
    v2 = weighted_norm(f, p, alpha, 2 * base + 1)
    return v2, abs(v2 - v1) + 1e-14 * (1.0 + abs(v2))


def weighted_distance(f, g, p, alpha: float, resolution: Optional[int] = None) -> float:
    """||f - g||_{p,alpha}; accepts FunctionHandles or plain callables."""
    fa = f if isinstance(f, FunctionHandle) else FunctionHandle(fn=f)
    ga = g if isinstance(g, FunctionHandle) else FunctionHandle(fn=g)
    return weighted_norm(fa.minus(ga), p, alpha, resolution)
