"""Generalized translation operators on [-1, 1].

Two operators are provided:

* ``asym_translate``: the asymmetric operator

      tau_t(f, x) = 1 / (pi (1-x^2)^{mu/2} cos^{2mu}(t/2))
                    * int_0^pi (1-R^2)^{mu/2} f(R) cos(mu (phi1 - phi)) dphi1

  where R and phi come from the geodesic coordinate relations (see
  ``geodesic_frame``).  On the (mu,mu) Jacobi basis it acts diagonally with
  multiplier R_n^{(0,2mu)}(cos t).

* ``sym_translate``: the symmetric operator

      T_y(f, x) = (1/gamma_mu) int_{-1}^{1} (1-z^2)^{mu-1/2} f(R) dz,

  diagonal on the (mu,mu) basis with multiplier R_n^{(mu,mu)}(y).

Validity note for non-integer mu: the asymmetric integral representation
reproduces the diagonal action exactly when cos t > |x| (both roots of the
kernel's generating quadratic lie outside the unit circle, so the binomial
expansions converge).  For integer mu the identities hold for all
(x, t) in [-1,1] x (-pi, pi).  ``identity_domain_ok`` exposes the test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import ContractError, DomainError, NumericsError
from .jacobi import JacobiBasis, gauss_jacobi_rule
from .spaces import SpaceParams, weighted_norm

__all__ = [
    "TranslationConfig",
    "GeodesicFrame",
    "geodesic_frame",
    "asym_translate",
    "sym_translate",
    "translate_norm_bound_check",
    "BoundRatio",
    "duality_check",
    "identity_domain_ok",
]

_BOUNDARY_CLIP = 1.0 - 1e-9
_OVERSHOOT = 1e-14


@dataclass(frozen=True)
class TranslationConfig:
    """Quadrature control for the translation operators.

    ``kernel`` selects the kernel variant; "reflected" flips the angle sign
    (cos(mu(phi1+phi))) and exists only as a negative-control fixture.
    """

    quad_points: int = 64
    tol: float = 1e-12
    max_doublings: int = 6
    adaptive: bool = True
    strict: bool = True
    kernel: str = "cosine"
    selftest: bool = True

    def __post_init__(self):
        if self.quad_points < 8:
            raise DomainError(f"quad_points must be >= 8, got {self.quad_points}")
        if self.tol <= 0.0:
            raise DomainError("tolerance must be positive")
        if self.kernel not in ("cosine", "reflected"):
            raise DomainError(f"unknown kernel variant {self.kernel!r}")


_DEFAULT_CFG = TranslationConfig()


@dataclass(frozen=True)
class GeodesicFrame:
    """Geodesic coordinate bundle linking (x, t, phi1) to (R, phi).

    With x = cos(theta1), y = cos t, z = cos(phi1):
        R = x y - z sqrt(1-x^2) sqrt(1-y^2) = cos(theta)
        sin(theta) cos(phi) = cos(theta1) sin t + sin(theta1) cos t cos(phi1)
        sin(theta) sin(phi) = sin(theta1) sin(phi1)
    """

    x: float
    t: float
    phi1: float
    R: float
    phi: float

    def residuals(self) -> dict:
        """Defect of each defining relation (all should be ~1e-12)."""
        x, t, phi1 = self.x, self.t, self.phi1
        s1 = math.sqrt(max(0.0, 1.0 - x * x))
        sR = math.sqrt(max(0.0, 1.0 - self.R * self.R))
        r_prod = self.R - (x * math.cos(t) - math.cos(phi1) * s1 * math.sin(t))
        r_cos = sR * math.cos(self.phi) - (x * math.sin(t) + s1 * math.cos(t) * math.cos(phi1))
        r_sin = sR * math.sin(self.phi) - s1 * math.sin(phi1)
        r_pyth = (sR * math.cos(self.phi)) ** 2 + (sR * math.sin(self.phi)) ** 2 - (1.0 - self.R**2)
        return {"product": r_prod, "cos": r_cos, "sin": r_sin, "pythagoras": r_pyth}


def _clip_unit(v: float, name: str) -> float:
    if abs(v) > 1.0 + _OVERSHOOT:
        raise DomainError(f"{name}={v} outside [-1, 1]")
    return min(1.0, max(-1.0, v))


def geodesic_frame(x: float, t: float, phi1: float) -> GeodesicFrame:
    """Compute (R, phi) from (x, t, phi1); phi = 0 by convention when R = +-1."""
    x = _clip_unit(x, "x")
    if not -math.pi < t < math.pi:
        raise DomainError(f"t must lie in (-pi, pi), got {t}")
    if not 0.0 <= phi1 <= math.pi + _OVERSHOOT:
        raise DomainError(f"phi1 must lie in [0, pi], got {phi1}")
    s1 = math.sqrt(1.0 - x * x)
    z = math.cos(phi1)
    R = _clip_unit(x * math.cos(t) - z * s1 * math.sin(t), "R")
    stcf = x * math.sin(t) + s1 * math.cos(t) * z
    stsf = s1 * math.sin(phi1)
    if 1.0 - R * R <= _OVERSHOOT:
        phi = 0.0
    else:
        phi = math.atan2(stsf, stcf)
    return GeodesicFrame(x=x, t=t, phi1=phi1, R=R, phi=phi)


def identity_domain_ok(x, t, margin: float = 0.0) -> bool:
    """True where the non-integer-mu integral form is exact: cos t > |x|."""
    return bool(np.all(math.cos(t) > np.abs(np.asarray(x, dtype=float)) + margin))


def _asym_values(f, t: float, mu: float, xs: np.ndarray, M: int, kernel: str) -> np.ndarray:
    """Fixed-M midpoint-in-phi1 evaluation of the asymmetric operator on xs."""
    y = math.cos(t)
    st = abs(math.sin(t))
    ctil = 0.5 * (1.0 + y)  # cos^2(t/2)
    phi1 = (2.0 * np.arange(M) + 1.0) * (math.pi / (2.0 * M))
    z = np.cos(phi1)[None, :]
    sz = np.sin(phi1)[None, :]
    X = xs[:, None]
    eps2 = 1.0 - xs * xs
    E = np.sqrt(eps2)[:, None]
    R = np.clip(X * y - z * E * st, -1.0, 1.0)
    sR2 = 1.0 - R * R
    phi = np.arctan2(E * sz, X * st + E * y * z)
    ang = phi1[None, :] - phi if kernel == "cosine" else phi1[None, :] + phi
    if mu == 0.0:
        integrand = np.asarray(f(R), dtype=float) * np.cos(mu * ang)
    else:
        # prefactor folded into the power to avoid under/overflow near the edges
        ratio = sR2 / (eps2[:, None] * (ctil * ctil))
        integrand = ratio ** (0.5 * mu) * np.asarray(f(R), dtype=float) * np.cos(mu * ang)
    # pair z with -z before reducing so odd-part cancellation is exact
    integrand = integrand + integrand[:, ::-1]
    return 0.5 * integrand.mean(axis=1)


_SELFTEST_DONE: set = set()


def _run_selftest(mu: float):
    key = round(mu, 12)
    if key in _SELFTEST_DONE:
        return
    cfg = TranslationConfig(selftest=False)
    xs = np.array([-0.9, -0.4, 0.0, 0.4, 0.9])
    ts = [0.05, 0.25] if float(mu) != int(mu) else [0.3, 1.2, 2.4]
    one = lambda r: np.ones_like(r)
    for t in ts:
        vals = asym_translate(one, t, mu, xs, cfg)
        dev = float(np.max(np.abs(vals - 1.0)))
        if dev > 1e-10:
            raise NumericsError(
                f"translation kernel self-test failed at mu={mu}, t={t}: "
                f"|tau(1)-1| = {dev:.3e}",
                details={"mu": mu, "t": t, "deviation": dev},
            )
    _SELFTEST_DONE.add(key)


def asym_translate(f, t: float, mu: float, x, cfg: Optional[TranslationConfig] = None):
    """Asymmetric generalized translation tau_t(f, x).

    ``x`` may be a scalar or an array; values with |x| = 1 are evaluated at
    the clipped abscissa 1 - 1e-9 (continuous-limit convention).  The
    phi1-integral uses the Gauss-Chebyshev form in z = cos(phi1) (midpoint
    rule in phi1), doubling the node count until two successive refinements
    agree to ``cfg.tol`` or ``cfg.max_doublings`` is exhausted.
    """
    cfg = cfg or _DEFAULT_CFG
    if mu < 0.0:
        raise DomainError(f"mu must be nonnegative, got {mu}")
    if not -math.pi < t < math.pi:
        raise DomainError(f"|t| must be < pi, got t={t}")
    if cfg.selftest and cfg.kernel == "cosine":
        _run_selftest(mu)
    scalar = np.asarray(x).ndim == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(xs) > 1.0 + _OVERSHOOT):
        raise DomainError("x outside [-1, 1]")
    xs = np.clip(xs, -_BOUNDARY_CLIP, _BOUNDARY_CLIP)

    M = cfg.quad_points
    vals = _asym_values(f, t, mu, xs, M, cfg.kernel)
    if cfg.adaptive and cfg.max_doublings >= 1:
        converged = False
        for _ in range(cfg.max_doublings):
            M *= 2
            new = _asym_values(f, t, mu, xs, M, cfg.kernel)
            delta = float(np.max(np.abs(new - vals)))
            scale = max(1.0, float(np.max(np.abs(new))))
            prev, vals = vals, new
            if delta <= cfg.tol * scale:
                converged = True
                break
        if not converged and cfg.strict:
            raise NumericsError(
                f"translation quadrature did not converge (last change {delta:.3e})",
                details={
                    "t": t,
                    "mu": mu,
                    "M": M,
                    "last": vals.tolist(),
                    "previous": prev.tolist(),
                },
            )
    return float(vals[0]) if scalar else vals


def sym_translate(f, y: float, mu: float, x, cfg: Optional[TranslationConfig] = None):
    """Symmetric translation T_y(f, x) with measure (1-z^2)^{mu-1/2} dz.

    Self-normalizing: the divisor gamma_mu is the same rule applied to 1, so
    T_y(1, x) = 1 holds exactly.
    """
    cfg = cfg or _DEFAULT_CFG
    if mu < 0.0:
        raise DomainError(f"mu must be nonnegative, got {mu}")
    y = _clip_unit(float(y), "y")
    scalar = np.asarray(x).ndim == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(xs) > 1.0 + _OVERSHOOT):
        raise DomainError("x outside [-1, 1]")
    xs = np.clip(xs, -1.0, 1.0)

    def evaluate(m: int) -> np.ndarray:
        rule = gauss_jacobi_rule(m, JacobiBasis(mu - 0.5, mu - 0.5))
        R = np.clip(
            xs[:, None] * y
            - rule.nodes[None, :] * np.sqrt(1.0 - xs * xs)[:, None] * math.sqrt(1.0 - y * y),
            -1.0,
            1.0,
        )
        return (np.asarray(f(R), dtype=float) @ rule.weights) / rule.weights.sum()

    m = max(cfg.quad_points // 2, 16)
    vals = evaluate(m)
    if cfg.adaptive and cfg.max_doublings >= 1:
        converged = False
        for _ in range(cfg.max_doublings):
            m *= 2
            new = evaluate(m)
            delta = float(np.max(np.abs(new - vals)))
            scale = max(1.0, float(np.max(np.abs(new))))
            prev, vals = vals, new
            if delta <= cfg.tol * scale:
                converged = True
                break
        if not converged and cfg.strict:
            raise NumericsError(
                f"symmetric translation quadrature did not converge (last change {delta:.3e})",
                details={"y": y, "mu": mu, "m": m, "last": vals.tolist(), "previous": prev.tolist()},
            )
    return float(vals[0]) if scalar else vals


@dataclass(frozen=True)
class BoundRatio:
    """r(f,t) = ||tau_t f|| cos^{2mu}(t/2) / ||f|| and its ingredients."""

    ratio: float
    norm_translated: float
    norm_f: float
    cos_factor: float


def translate_norm_bound_check(
    f, t: float, space: SpaceParams, cfg: Optional[TranslationConfig] = None
) -> BoundRatio:
    """Boundedness diagnostic for the asymmetric operator in (p, alpha, mu)."""
    cfg = cfg or _DEFAULT_CFG
    mu = space.mu
    nf = weighted_norm(f, space.p, space.alpha)
    if nf == 0.0:
        raise ContractError("translate_norm_bound_check requires a nonzero function")
    tf = lambda xs: asym_translate(f, t, mu, xs, cfg)
    ntf = weighted_norm(tf, space.p, space.alpha)
    cos_factor = (0.5 * (1.0 + math.cos(t))) ** mu
    return BoundRatio(ratio=ntf * cos_factor / nf, norm_translated=ntf, norm_f=nf, cos_factor=cos_factor)


def duality_check(f, g, y: float, mu: float, cfg: Optional[TranslationConfig] = None, m: int = 48):
    """Both sides of the self-adjointness identity against (1-x^2)^mu.

    Returns (int f * tau_y g * w, int g * tau_y f * w), each by an m-point
    Gauss-Jacobi (mu,mu) rule.
    """
    cfg = cfg or _DEFAULT_CFG
    y = _clip_unit(float(y), "y")
    t = math.acos(y)
    rule = gauss_jacobi_rule(m, JacobiBasis(mu, mu))
    fx = np.asarray(f(rule.nodes), dtype=float)
    gx = np.asarray(g(rule.nodes), dtype=float)
    tau_g = asym_translate(g, t, mu, rule.nodes, cfg)
    tau_f = asym_translate(f, t, mu, rule.nodes, cfg)
    lhs = float(rule.weights @ (fx * tau_g))
    rhs = float(rule.weights @ (gx * tau_f))
    return lhs, rhs


def control_config(cfg: Optional[TranslationConfig] = None) -> TranslationConfig:
    """Config with the deliberately wrong (reflected) kernel, for negative controls."""
    base = cfg or _DEFAULT_CFG
    return replace(base, kernel="reflected", selftest=False)
