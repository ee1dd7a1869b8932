"""Jacobi polynomials normalized at x=1, the associated differential operator,
Gauss-Jacobi quadrature, and Fourier-Jacobi analysis.

Conventions used throughout the package:

* ``R_n^{(a,b)}(x) = P_n^{(a,b)}(x) / P_n^{(a,b)}(1)`` where ``P_n`` is the
  classical Jacobi polynomial, so every basis element equals 1 at x=1.
* The differential operator
  ``D_{nu,mu} = (1-x^2) d^2/dx^2 + (mu - nu - (nu+mu+2)x) d/dx``
  has the (nu,mu) Jacobi polynomials as eigenfunctions with eigenvalues
  ``-n(n+nu+mu+1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln, gammaln

from .errors import ContractError, DomainError, NumericsError

__all__ = [
    "JacobiBasis",
    "PolynomialCoeffs",
    "SturmLiouvilleParams",
    "QuadratureRule",
    "jacobi_at_one",
    "jacobi_eval",
    "jacobi_table",
    "sl_apply_coeffs",
    "sl_apply_pointwise",
    "sl_eigenvalue",
    "gauss_jacobi_rule",
    "fourier_jacobi_coeff",
    "fourier_jacobi_coeffs",
    "jacobi_norm_sq",
]


@dataclass(frozen=True)
class JacobiBasis:
    """Index pair (a, b) of a Jacobi weight (1-x)^a (1+x)^b on [-1, 1]."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > -1.0 and self.b > -1.0):
            raise DomainError(
                f"Jacobi exponents must exceed -1, got a={self.a}, b={self.b}"
            )

    def weight(self, x):
        x = np.asarray(x, dtype=float)
        return (1.0 - x) ** self.a * (1.0 + x) ** self.b

    @property
    def total_weight(self) -> float:
        """Integral of the weight over [-1, 1]."""
        return math.exp(
            (self.a + self.b + 1.0) * math.log(2.0) + betaln(self.a + 1.0, self.b + 1.0)
        )


def jacobi_at_one(n: int, basis: JacobiBasis) -> float:
    """P_n^{(a,b)}(1) = Gamma(n+a+1) / (Gamma(a+1) n!)."""
    return math.exp(gammaln(n + basis.a + 1.0) - gammaln(basis.a + 1.0) - gammaln(n + 1.0))


def _classical_table(nmax: int, basis: JacobiBasis, x: np.ndarray) -> np.ndarray:
    """Classical (unnormalized) Jacobi values P_0..P_nmax by three-term recurrence."""
    a, b = basis.a, basis.b
    out = np.empty((nmax + 1, x.size))
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 0.5 * (a + b + 2.0) * x + 0.5 * (a - b)
    for n in range(2, nmax + 1):
        c0 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0)
        c1 = 2.0 * n + a + b - 1.0
        c2 = (2.0 * n + a + b) * (2.0 * n + a + b - 2.0)
        c3 = a * a - b * b
        c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b)
        out[n] = (c1 * (c2 * x + c3) * out[n - 1] - c4 * out[n - 2]) / c0
    return out


def jacobi_table(nmax: int, basis: JacobiBasis, x) -> np.ndarray:
    """Normalized values R_n^{(a,b)}(x) for all n <= nmax, shape (nmax+1, x.size)."""
    xa = np.asarray(x, dtype=float).reshape(-1)
    table = _classical_table(nmax, basis, xa)
    scale = np.array([jacobi_at_one(n, basis) for n in range(nmax + 1)])
    return table / scale[:, None]


def jacobi_eval(n: int, basis: JacobiBasis, x):
    """Evaluate R_n^{(a,b)}(x), the Jacobi polynomial normalized so R_n(1)=1.

    Accepts scalars or arrays of any shape; the shape is preserved.
    """
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    xa = np.asarray(x, dtype=float)
    flat = xa.reshape(-1)
    vals = _classical_table(n, basis, flat)[n] / jacobi_at_one(n, basis)
    return float(vals[0]) if xa.ndim == 0 else vals.reshape(xa.shape)


@dataclass(frozen=True)
class PolynomialCoeffs:
    """A polynomial stored by its coefficients in a normalized Jacobi basis.

    ``coeffs[k]`` multiplies R_k^{(a,b)}; since each R_k(1) = 1, the value at
    x = 1 is the plain sum of the coefficients.
    """

    basis: JacobiBasis
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.atleast_1d(np.asarray(self.coeffs, dtype=float)))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def value_at_one(self) -> float:
        return float(self.coeffs.sum())

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        table = jacobi_table(self.degree, self.basis, xa.reshape(-1))
        vals = self.coeffs @ table
        return float(vals[0]) if xa.ndim == 0 else vals.reshape(xa.shape)

    def derivative(self) -> "PolynomialCoeffs":
        """Exact derivative, expressed in the (a+1, b+1) normalized basis.

        Uses d/dx P_k^{(a,b)} = (k+a+b+1)/2 * P_{k-1}^{(a+1,b+1)}.
        """
        a, b = self.basis.a, self.basis.b
        up = JacobiBasis(a + 1.0, b + 1.0)
        if self.degree == 0:
            return PolynomialCoeffs(up, np.zeros(1))
        out = np.zeros(self.degree)
        for k in range(1, self.degree + 1):
            out[k - 1] = (
                self.coeffs[k]
                * 0.5
                * (k + a + b + 1.0)
                * jacobi_at_one(k - 1, up)
                / jacobi_at_one(k, self.basis)
            )
        return PolynomialCoeffs(up, out)

    def _check_same_basis(self, other: "PolynomialCoeffs"):
        if self.basis != other.basis:
            raise ContractError(f"basis mismatch: {self.basis} vs {other.basis}")

    def __add__(self, other: "PolynomialCoeffs") -> "PolynomialCoeffs":
        self._check_same_basis(other)
        n = max(self.coeffs.size, other.coeffs.size)
        c = np.zeros(n)
        c[: self.coeffs.size] += self.coeffs
        c[: other.coeffs.size] += other.coeffs
        return PolynomialCoeffs(self.basis, c)

    def __sub__(self, other: "PolynomialCoeffs") -> "PolynomialCoeffs":
        return self + other.scaled(-1.0)

    def scaled(self, c: float) -> "PolynomialCoeffs":
        return PolynomialCoeffs(self.basis, c * self.coeffs)


@dataclass(frozen=True)
class SturmLiouvilleParams:
    """Parameters (nu, mu) of the differential operator D_{nu,mu}."""

    nu: float
    mu: float

    def __post_init__(self):
        if self.nu < 0.0 or self.mu < 0.0:
            raise DomainError(f"nu and mu must be nonnegative, got ({self.nu}, {self.mu})")


def sl_eigenvalue(n: int, params: SturmLiouvilleParams) -> float:
    """Eigenvalue of D_{nu,mu} on the degree-n (nu,mu) Jacobi polynomial."""
    return -float(n) * (n + params.nu + params.mu + 1.0)


def sl_apply_coeffs(c: PolynomialCoeffs, params: SturmLiouvilleParams) -> PolynomialCoeffs:
    """Apply D_{nu,mu} in coefficient space (exact, diagonal).

    The coefficient basis must match the operator indices: (a, b) = (nu, mu).
    """
    if not (
        math.isclose(c.basis.a, params.nu, abs_tol=1e-14)
        and math.isclose(c.basis.b, params.mu, abs_tol=1e-14)
    ):
        raise ContractError(
            f"coefficient basis {c.basis} does not match operator indices "
            f"({params.nu}, {params.mu})"
        )
    eig = np.array([sl_eigenvalue(k, params) for k in range(c.degree + 1)])
    return PolynomialCoeffs(c.basis, eig * c.coeffs)


def sl_apply_pointwise(f, params: SturmLiouvilleParams, x) -> float:
    """Evaluate (1-x^2) f''(x) + (mu - nu - (nu+mu+2) x) f'(x) at a point.

    ``f`` is a FunctionHandle-like object: callable, with optional analytic
    derivative rules ``d1``/``d2``.  Without analytic derivatives, central
    differences with step h = cbrt(eps) * max(1, |x|) are used, which requires
    x in the open interval.
    """
    nu, mu = params.nu, params.mu
    d1 = getattr(f, "d1", None)
    d2 = getattr(f, "d2", None)
    if d1 is not None and d2 is not None:
        fp = float(np.asarray(d1(x)))
        fpp = float(np.asarray(d2(x)))
    else:
        if not -1.0 < x < 1.0:
            raise DomainError(
                f"finite-difference evaluation needs x in (-1,1), got x={x}"
            )
        h = np.cbrt(np.finfo(float).eps) * max(1.0, abs(x))
        h = min(h, 0.5 * (1.0 - abs(x)))
        fm, f0, fp_ = (float(np.asarray(f(x - h))), float(np.asarray(f(x))), float(np.asarray(f(x + h))))
        fp = (fp_ - fm) / (2.0 * h)
        fpp = (fp_ - 2.0 * f0 + fm) / (h * h)
    return (1.0 - x * x) * fpp + (mu - nu - (nu + mu + 2.0) * x) * fp


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Jacobi nodes/weights for the weight (1-x)^a (1+x)^b on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray
    basis: JacobiBasis

    def integrate(self, f) -> float:
        return float(self.weights @ np.asarray(f(self.nodes), dtype=float))

    def integrate_values(self, values: np.ndarray) -> float:
        return float(self.weights @ np.asarray(values, dtype=float))


@lru_cache(maxsize=512)
def _rule_arrays(m: int, a: float, b: float):
    basis = JacobiBasis(a, b)
    ab = a + b
    i = np.arange(m, dtype=float)
    denom = (2.0 * i + ab) * (2.0 * i + ab + 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = np.where(denom == 0.0, 0.0, (b * b - a * a) / denom)
    diag[0] = (b - a) / (ab + 2.0)
    j = np.arange(1, m, dtype=float)
    s = 2.0 * j + ab
    with np.errstate(divide="ignore", invalid="ignore"):
        off = np.sqrt(4.0 * j * (j + a) * (j + b) * (j + ab) / (s * s * (s * s - 1.0)))
    if m >= 2:
        # j=1 in the cancelled form; the generic one is 0/0 when a+b = -1
        off[0] = math.sqrt(4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) ** 2 * (ab + 3.0)))
    try:
        nodes, vecs = eigh_tridiagonal(diag, off)
    except Exception as exc:  # pragma: no cover - eigensolver failure is exotic
        raise NumericsError(
            "Gauss-Jacobi eigenproblem failed to converge",
            details={"m": m, "basis": (a, b), "cause": repr(exc)},
        ) from exc
    weights = basis.total_weight * vecs[0, :] ** 2
    order = np.argsort(nodes)
    nodes, weights = nodes[order], weights[order]
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_jacobi_rule(m: int, basis: JacobiBasis) -> QuadratureRule:
    """m-point Gauss-Jacobi rule, exact for polynomial degree <= 2m-1.

    Nodes and weights come from the symmetric tridiagonal eigenproblem built
    from the three-term recurrence coefficients (Golub-Welsch); the zeroth
    moment is computed through log-gamma to stay finite for real exponents.
    Rules are cached per (m, a, b).
    """
    if m < 1:
        raise DomainError(f"node count must be >= 1, got {m}")
    nodes, weights = _rule_arrays(int(m), float(basis.a), float(basis.b))
    return QuadratureRule(nodes, weights, basis)


def jacobi_norm_sq(n: int, basis: JacobiBasis) -> float:
    """Integral of R_n^2 against the (a,b) weight (squared norm of R_n)."""
    a, b = basis.a, basis.b
    log_h = (
        (a + b + 1.0) * math.log(2.0)
        - math.log(2.0 * n + a + b + 1.0)
        + gammaln(n + a + 1.0)
        + gammaln(n + b + 1.0)
        - gammaln(n + a + b + 1.0)
        - gammaln(n + 1.0)
    )
    return math.exp(log_h) / jacobi_at_one(n, basis) ** 2


def _require_mu_rule(rule: QuadratureRule, mu: float):
    if not (
        math.isclose(rule.basis.a, mu, abs_tol=1e-14)
        and math.isclose(rule.basis.b, mu, abs_tol=1e-14)
    ):
        raise ContractError(
            f"quadrature basis {rule.basis} does not match the (mu,mu)=({mu},{mu}) weight"
        )


def fourier_jacobi_coeff(f, n: int, mu: float, rule: QuadratureRule) -> float:
    """a_n(f) = integral of f(x) R_n^{(mu,mu)}(x) (1-x^2)^mu dx by quadrature."""
    _require_mu_rule(rule, mu)
    vals = np.asarray(f(rule.nodes), dtype=float)
    rn = jacobi_table(n, rule.basis, rule.nodes)[n]
    return float(rule.weights @ (vals * rn))


def fourier_jacobi_coeffs(f, nmax: int, mu: float, rule: QuadratureRule) -> np.ndarray:
    """All coefficients a_0(f)..a_nmax(f) in one pass."""
    _require_mu_rule(rule, mu)
    vals = np.asarray(f(rule.nodes), dtype=float)
    table = jacobi_table(nmax, rule.basis, rule.nodes)
    return table @ (rule.weights * vals)
