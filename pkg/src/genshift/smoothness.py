"""Generalized modulus of smoothness and the Peetre-type K-functional.

* ``modulus``: omega(f, delta)_{p,alpha} = sup_{|t| <= delta} ||tau_t f - f||.
* ``k_functional``: upper estimate of
  K(f, delta) = inf_g ( ||f - g|| + delta^2 ||D g|| ), minimized over
  polynomial candidates g in span{R_0..R_N^{(mu,mu)}}, where the operator
  D = D_{mu,mu} is diagonal in that basis.

The reported K value is an upper bound for the true infimum; the
lower-bound evidence comes from the equivalence sandwich with omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from .errors import DomainError, NumericsError
from .jacobi import (
    JacobiBasis,
    PolynomialCoeffs,
    SturmLiouvilleParams,
    gauss_jacobi_rule,
    jacobi_table,
    sl_eigenvalue,
)
from .spaces import (
    INF,
    FunctionHandle,
    SpaceParams,
    chebyshev_grid,
    weighted_norm,
)
from .translation import TranslationConfig, asym_translate

__all__ = [
    "ModulusConfig",
    "ModulusResult",
    "modulus",
    "KFunctionalConfig",
    "KFunctionalResult",
    "k_functional",
    "default_candidate_degree",
    "EquivalenceRow",
    "equivalence_ratio",
]


@dataclass(frozen=True)
class ModulusConfig:
    t_points: int = 65
    refine: bool = True          # golden-section refinement of the t-sup
    norm_refine: bool = True     # golden-section refinement inside p=inf norms
    norm_resolution: Optional[int] = None
    translation: TranslationConfig = field(
        default_factory=lambda: TranslationConfig(tol=1e-10, max_doublings=3, strict=False)
    )

    @staticmethod
    def fast() -> "ModulusConfig":
        """Lighter settings for ratio-grade experiment sweeps: fixed 192-point
        translation quadrature, 257-point norm grids, grid-level sups (the
        t-grid contains delta, where the sup typically sits)."""
        return ModulusConfig(
            t_points=17,
            refine=False,
            norm_refine=False,
            norm_resolution=257,
            translation=TranslationConfig(quad_points=192, adaptive=False),
        )


@dataclass(frozen=True)
class ModulusResult:
    delta: float
    value: float
    argmax_t: float
    t_grid_size: int
    diagnostics: dict = field(default_factory=dict)


def _t_grid(delta: float, n: int) -> np.ndarray:
    """Geometric spacing near 0 plus a uniform tail, always ending at delta."""
    n_geo = n // 2
    n_uni = n - n_geo
    geo = delta * np.geomspace(1e-3, 0.5, n_geo)
    uni = np.linspace(0.5 * delta, delta, n_uni)
    return np.unique(np.concatenate(([0.0], geo, uni)))


def modulus(f, delta: float, space: SpaceParams, cfg: Optional[ModulusConfig] = None) -> ModulusResult:
    """sup over t in [0, delta] of ||tau_t f - f||_{p,alpha} (even in t)."""
    cfg = cfg or ModulusConfig()
    if delta < 0.0 or delta >= math.pi:
        raise DomainError(f"delta must lie in [0, pi), got {delta}")
    if delta == 0.0:
        return ModulusResult(delta=0.0, value=0.0, argmax_t=0.0, t_grid_size=1)
    mu = space.mu

    def deviation_norm(t: float) -> float:
        if t == 0.0:
            return 0.0
        g = lambda xs: asym_translate(f, t, mu, xs, cfg.translation) - np.asarray(
            f(xs), dtype=float
        )
        return weighted_norm(g, space.p, space.alpha, cfg.norm_resolution, refine=cfg.norm_refine)

    ts = _t_grid(delta, cfg.t_points)
    vals = np.array([deviation_norm(t) for t in ts])
    i = int(np.argmax(vals))
    best_t, best = float(ts[i]), float(vals[i])
    if cfg.refine and 0 < i:
        lo = float(ts[max(i - 1, 0)])
        hi = float(ts[min(i + 1, ts.size - 1)])
        if hi > lo:
            invphi = (math.sqrt(5.0) - 1.0) / 2.0
            a, b = lo, hi
            c = b - invphi * (b - a)
            d = a + invphi * (b - a)
            gc, gd = deviation_norm(c), deviation_norm(d)
            for _ in range(24):
                if gc >= gd:
                    b, d, gd = d, c, gc
                    c = b - invphi * (b - a)
                    gc = deviation_norm(c)
                else:
                    a, c, gc = c, d, gd
                    d = a + invphi * (b - a)
                    gd = deviation_norm(d)
            tr, vr = (c, gc) if gc >= gd else (d, gd)
            if vr > best:
                best_t, best = float(tr), float(vr)
    return ModulusResult(
        delta=delta,
        value=best,
        argmax_t=best_t,
        t_grid_size=int(ts.size),
        diagnostics={"grid_max": float(vals[i]), "grid_argmax": float(ts[i])},
    )


def default_candidate_degree(delta: float) -> int:
    """Candidate-space degree rule N = max(32, ceil(4/delta))."""
    return max(32, int(math.ceil(4.0 / delta)))


@dataclass(frozen=True)
class KFunctionalConfig:
    max_iter: int = 60
    objective_tol: float = 1e-9
    grid_factor: int = 2
    min_grid: int = 384
    lp_grid_cap: int = 1600
    norm_resolution: Optional[int] = None


@dataclass(frozen=True)
class KFunctionalResult:
    delta: float
    value: float
    degree: int
    coeffs: PolynomialCoeffs
    iterations: int
    diagnostics: dict = field(default_factory=dict)


def _discrete_norm(vals: np.ndarray, q: np.ndarray, p: float) -> float:
    if p == 1.0:
        return float(q @ np.abs(vals))
    return float(q @ np.abs(vals) ** p) ** (1.0 / p)


def _kfun_irls(fvals, Phi, lam, q, p, delta2, cfg):
    """Minimize ||f - Phi c||_p + delta^2 ||Phi (lam*c)||_p on the quadrature grid.

    Majorize-minimize: each p-norm gets the tangent-line bound through u^{1/p},
    each |r|^p the quadratic bound with weights |r|^{p-2}; the resulting
    weighted least-squares problems are solved in closed form.
    """
    npts, ncoef = Phi.shape
    # start from the plain L2 fit
    w0 = np.sqrt(q)
    c = np.linalg.lstsq(Phi * w0[:, None], fvals * w0, rcond=None)[0]

    def objective(cv):
        r = fvals - Phi @ cv
        s = Phi @ (lam * cv)
        return _discrete_norm(r, q, p) + delta2 * _discrete_norm(s, q, p), r, s

    best_obj, r, s = objective(c)
    best_c = c.copy()
    it = 0
    floor = 1e-12
    for it in range(1, cfg.max_iter + 1):
        A = _discrete_norm(r, q, p)
        B = _discrete_norm(s, q, p)
        wr = q * np.maximum(np.abs(r), floor) ** (p - 2.0)
        ws = q * np.maximum(np.abs(s), floor) ** (p - 2.0)
        sa = max(A, floor) ** (1.0 - p)
        sb = delta2 * max(B, floor) ** (1.0 - p)
        # normal equations of the combined quadratic surrogate
        G = sa * (Phi.T * wr) @ Phi + sb * ((Phi * lam[None, :]).T * ws) @ (Phi * lam[None, :])
        rhs = sa * Phi.T @ (wr * fvals)
        try:
            c_new = np.linalg.solve(G, rhs)
        except np.linalg.LinAlgError:
            c_new = np.linalg.lstsq(G, rhs, rcond=None)[0]
        # damped acceptance
        step = c_new - c
        accepted = False
        for _ in range(6):
            cand = c + step
            obj, r_c, s_c = objective(cand)
            if obj <= best_obj * (1.0 + 1e-12):
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        c, r, s = cand, r_c, s_c
        improved = best_obj - obj
        if obj < best_obj:
            best_obj, best_c = obj, c.copy()
        if improved <= cfg.objective_tol * max(best_obj, 1e-14):
            break
    return best_c, best_obj, it


def _kfun_lp(fvals, Phi, lam, w, delta2):
    """Grid minimax: minimize u + delta^2 v subject to the two weighted blocks."""
    npts, ncoef = Phi.shape
    WPhi = Phi * w[:, None]
    WPhiL = (Phi * lam[None, :]) * w[:, None]
    wf = w * fvals
    nvar = ncoef + 2
    rows = []
    rhs = []
    ucol = np.zeros((npts, 1))
    vcol = np.zeros((npts, 1))
    one = np.ones((npts, 1))
    rows.append(np.hstack([-WPhi, -one, vcol]))
    rhs.append(-wf)
    rows.append(np.hstack([WPhi, -one, vcol]))
    rhs.append(wf)
    rows.append(np.hstack([-WPhiL, ucol, -one]))
    rhs.append(np.zeros(npts))
    rows.append(np.hstack([WPhiL, ucol, -one]))
    rhs.append(np.zeros(npts))
    A_ub = np.vstack(rows)
    b_ub = np.concatenate(rhs)
    cost = np.zeros(nvar)
    cost[-2] = 1.0
    cost[-1] = delta2
    bounds = [(None, None)] * ncoef + [(0.0, None), (0.0, None)]
    # interior point: the problem is heavily degenerate when f is (nearly)
    # in the candidate space and dual simplex stalls there
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs-ipm")
    if not res.success:
        res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise NumericsError("K-functional LP failed", details={"message": res.message})
    return res.x[:ncoef]


def k_functional(
    f,
    delta: float,
    space: SpaceParams,
    degree: Optional[int] = None,
    cfg: Optional[KFunctionalConfig] = None,
) -> KFunctionalResult:
    """Upper estimate of the K-functional by polynomial minimization.

    The candidate space is span{R_0..R_N^{(mu,mu)}} on which D acts
    diagonally.  For p < inf an IRLS scheme minimizes the two-norm sum on a
    Gauss-Jacobi grid; for p = inf the grid minimax problem is solved as a
    linear program.  The returned value re-evaluates the achieved objective
    with the honest norm evaluator, so it is always a valid upper bound.
    """
    cfg = cfg or KFunctionalConfig()
    if delta <= 0.0:
        raise DomainError(f"delta must be positive, got {delta}")
    N = degree if degree is not None else default_candidate_degree(delta)
    if N < 1:
        raise DomainError(f"candidate degree must be >= 1, got {N}")
    mu = space.mu
    basis = JacobiBasis(mu, mu)
    lam = np.array([sl_eigenvalue(k, SturmLiouvilleParams(mu, mu)) for k in range(N + 1)])
    delta2 = delta * delta
    p = space.p

    if p == INF:
        m = min(max(cfg.grid_factor * (N + 1) + 64, 512), cfg.lp_grid_cap)
        xs = chebyshev_grid(m + 2)[1:-1]
        w = (1.0 - xs * xs) ** space.alpha
        Phi = jacobi_table(N, basis, xs).T
        fvals = np.asarray(f(xs), dtype=float)
        c = _kfun_lp(fvals, Phi, lam, w, delta2)
        iters = 1
    else:
        m = max(cfg.grid_factor * (N + 1) + 64, cfg.min_grid)
        ap = space.alpha * p
        rule = gauss_jacobi_rule(m, JacobiBasis(ap, ap))
        xs = rule.nodes
        q = rule.weights
        Phi = jacobi_table(N, basis, xs).T
        fvals = np.asarray(f(xs), dtype=float)
        c, _, iters = _kfun_irls(fvals, Phi, lam, q, p, delta2, cfg)

    g = PolynomialCoeffs(basis, c)

    def value_of(coeffs: PolynomialCoeffs) -> float:
        gh = FunctionHandle.from_poly(coeffs)
        fh = f if isinstance(f, FunctionHandle) else FunctionHandle(fn=f)
        approx_err = weighted_norm(fh.minus(gh), p, space.alpha, cfg.norm_resolution)
        dg = FunctionHandle.from_poly(
            PolynomialCoeffs(basis, lam[: coeffs.coeffs.size] * coeffs.coeffs)
        )
        return approx_err + delta2 * weighted_norm(dg, p, space.alpha, cfg.norm_resolution)

    solver_value = value_of(g)
    candidates = [(solver_value, g, "solver")]
    zero = PolynomialCoeffs(basis, np.zeros(1))
    candidates.append((value_of(zero), zero, "g=0"))
    fpoly = getattr(f, "poly", None)
    if fpoly is not None and fpoly.basis == basis and fpoly.degree <= N:
        candidates.append((value_of(fpoly), fpoly, "g=f"))
    candidates.sort(key=lambda tup: tup[0])
    value, gbest, tag = candidates[0]
    return KFunctionalResult(
        delta=delta,
        value=value,
        degree=N,
        coeffs=gbest,
        iterations=iters,
        diagnostics={"winner": tag, "solver_value": solver_value},
    )


@dataclass(frozen=True)
class EquivalenceRow:
    delta: float
    omega: float
    k_value: float
    rho: float
    rho_weighted: float
    flagged: bool = False


def equivalence_ratio(
    f,
    deltas,
    space: SpaceParams,
    degree_rule=None,
    modulus_cfg: Optional[ModulusConfig] = None,
    k_cfg: Optional[KFunctionalConfig] = None,
):
    """Table of rho(delta) = omega/K and rho * cos^{2mu}(delta/2).

    Convention: omega = K = 0 reports rho = 1.  K = 0 with omega > 0 is
    flagged (solver failure) and excluded from spread statistics.
    """
    degree_rule = degree_rule or default_candidate_degree
    rows = []
    for delta in deltas:
        if not 0.0 < delta < math.pi:
            raise DomainError(f"delta must lie in (0, pi), got {delta}")
        om = modulus(f, delta, space, modulus_cfg).value
        kv = k_functional(f, delta, space, degree_rule(delta), k_cfg).value
        flagged = False
        if kv <= 1e-12:
            # 0/0 convention (constants): quadrature noise floor ~1e-9
            if om <= 1e-9:
                rho = 1.0
            else:
                rho = math.inf
                flagged = True
        else:
            rho = om / kv
        cw = (0.5 * (1.0 + math.cos(delta))) ** space.mu
        rows.append(
            EquivalenceRow(
                delta=float(delta),
                omega=om,
                k_value=kv,
                rho=rho,
                rho_weighted=rho * cw,
                flagged=flagged,
            )
        )
    return rows
