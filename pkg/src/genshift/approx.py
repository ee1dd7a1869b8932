"""Weighted best polynomial approximation, the constructive Jackson-type
operator, and Markov-Bernstein diagnostics.

``best_approx`` computes E_n(f)_{p,alpha}, the distance from f to algebraic
polynomials of degree <= n-1:

* p = inf: Remez-type single-point exchange on the weighted error
  e(x) = (f(x) - P(x)) (1-x^2)^alpha over a fine Chebyshev grid, with a
  grid LP as the fallback when the exchange cycles.
* p < inf: iteratively reweighted least squares on a Gauss-Jacobi grid
  (Lawson-style weights |e|^{p-2}).

``jackson_operator`` realizes the near-best approximant
Q = (1/gamma_m) int_0^pi T_{cos t}(f, x, mu) kernel(t) dt with the
normalized kernel (sin(mt/2)/sin(t/2))^{2(q+2)}, q = floor(mu) + 1,
m = floor((n-1)/(q+2)) + 1, which keeps deg Q <= n-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from .errors import ContractError, DomainError, NumericsError
from .jacobi import (
    JacobiBasis,
    PolynomialCoeffs,
    gauss_jacobi_rule,
    jacobi_norm_sq,
    jacobi_table,
)
from .spaces import (
    INF,
    FunctionHandle,
    SpaceParams,
    chebyshev_grid,
    weighted_norm,
    weighted_norm_with_error,
)
from .translation import TranslationConfig, sym_translate

__all__ = [
    "ApproxConfig",
    "BestApproxResult",
    "best_approx",
    "best_approx_sequence",
    "JacksonSpec",
    "make_jackson_spec",
    "jackson_kernel",
    "jackson_operator",
    "MarkovBernsteinRatios",
    "markov_bernstein_check",
]


@dataclass(frozen=True)
class ApproxConfig:
    grid_size: int = 4097
    max_iter: int = 500
    remez_tol: float = 1e-9
    irls_stagnation: float = 1e-10
    weight_floor: float = 1e-12
    quad_points: Optional[int] = None


@dataclass(frozen=True)
class BestApproxResult:
    n: int
    value: float
    coeffs: PolynomialCoeffs
    method: str
    error_estimate: float = 0.0
    diagnostics: dict = field(default_factory=dict)


def _as_handle(f) -> FunctionHandle:
    return f if isinstance(f, FunctionHandle) else FunctionHandle(fn=f)


def _remez_context(f, n_max, space, cfg):
    """Shared grid, weights, f-values, and basis table for Remez solves."""
    alpha = space.alpha
    basis = JacobiBasis(space.mu, space.mu)
    xs = chebyshev_grid(cfg.grid_size)
    if alpha > 0.0:
        xs = xs[(1.0 - xs * xs) > 0.0]
    w = (1.0 - xs * xs) ** alpha if alpha != 0.0 else np.ones_like(xs)
    fvals = np.asarray(f(xs), dtype=float)
    table = jacobi_table(n_max - 1, basis, xs)  # (n_max, npts)
    return xs, w, fvals, table


def _remez(f, n, space, cfg, context=None) -> BestApproxResult:
    alpha = space.alpha
    basis = JacobiBasis(space.mu, space.mu)
    if context is None:
        context = _remez_context(f, n, space, cfg)
    xs, w, fvals, full_table = context
    table = full_table[:n]  # (n, npts)

    # initial reference: n+1 interior Chebyshev (first-kind) points
    ref_x = np.cos((2.0 * np.arange(n + 1) + 1.0) * math.pi / (2.0 * (n + 1)))[::-1]
    ref = np.searchsorted(xs, ref_x)
    ref = np.clip(ref, 0, xs.size - 1)
    ref = np.unique(ref)
    while ref.size < n + 1:  # fill in case of collisions on the grid
        missing = n + 1 - ref.size
        extra = np.setdiff1d(
            np.linspace(0, xs.size - 1, n + 1 + missing, dtype=int), ref
        )
        ref = np.unique(np.concatenate([ref, extra[:missing]]))

    signs = np.array([1.0 if k % 2 == 0 else -1.0 for k in range(n + 1)])
    coeffs = np.zeros(n)
    h = 0.0
    status = "running"
    for iteration in range(cfg.max_iter):
        A = np.empty((n + 1, n + 1))
        A[:, :n] = table[:, ref].T
        A[:, n] = signs / w[ref]
        try:
            sol = np.linalg.solve(A, fvals[ref])
        except np.linalg.LinAlgError:
            sol = np.linalg.lstsq(A, fvals[ref], rcond=None)[0]
        coeffs, h = sol[:n], sol[n]
        err = w * (fvals - coeffs @ table)
        i_star = int(np.argmax(np.abs(err)))
        e_max = abs(err[i_star])
        if e_max <= abs(h) * (1.0 + cfg.remez_tol) + 1e-15:
            status = "converged"
            break
        # single exchange keeping the alternation pattern
        pos = np.searchsorted(ref, i_star)
        sgn = math.copysign(1.0, err[i_star])
        if pos == 0:
            if math.copysign(1.0, err[ref[0]]) == sgn:
                ref[0] = i_star
            else:
                ref = np.concatenate([[i_star], ref[:-1]])
        elif pos == ref.size:
            if math.copysign(1.0, err[ref[-1]]) == sgn:
                ref[-1] = i_star
            else:
                ref = np.concatenate([ref[1:], [i_star]])
        else:
            left = ref[pos - 1]
            if math.copysign(1.0, err[left]) == sgn:
                ref[pos - 1] = i_star
            else:
                ref[pos] = i_star
    else:
        status = "cycling"

    if status == "cycling":
        coeffs = _grid_lp(fvals, table, w)
        status = "lp-fallback"
        err = w * (fvals - coeffs @ table)
        i_star = int(np.argmax(np.abs(err)))

    poly = PolynomialCoeffs(basis, coeffs)
    # continuum value: refine the weighted error around every near-maximal
    # local maximum (the error equioscillates, so ties are the norm)
    fh = _as_handle(f)

    def weighted_err(x: float) -> float:
        e = float(np.asarray(fh(np.array([x])))[0]) - float(poly(x))
        return abs(e) * (1.0 - x * x) ** alpha if alpha != 0.0 else abs(e)

    from .spaces import _golden_max

    abs_err = np.abs(err)
    e_grid = float(abs_err[i_star])
    interior = (abs_err[1:-1] >= abs_err[:-2]) & (abs_err[1:-1] >= abs_err[2:])
    peaks = np.where(interior & (abs_err[1:-1] >= 0.999 * e_grid))[0] + 1
    for endpoint in (0, xs.size - 1):
        if abs_err[endpoint] >= 0.999 * e_grid:
            peaks = np.append(peaks, endpoint)
    value, argmax_x = e_grid, float(xs[i_star])
    for idx in peaks[:12]:
        lo = float(xs[max(idx - 1, 0)])
        hi = float(xs[min(idx + 1, xs.size - 1)])
        xr, vr = _golden_max(weighted_err, lo, hi, iters=48)
        if vr > value:
            value, argmax_x = vr, xr
    ref_errors = w[ref] * (fvals[ref] - coeffs @ table[:, ref])
    return BestApproxResult(
        n=n,
        value=value,
        coeffs=poly,
        method="remez" if status != "lp-fallback" else "remez+lp",
        error_estimate=abs(value - abs(h)),
        diagnostics={
            "status": status,
            "levelled_h": float(abs(h)),
            "reference_x": xs[ref].tolist(),
            "reference_errors": ref_errors.tolist(),
            "argmax_x": argmax_x,
            "iterations": iteration + 1,
        },
    )


def _grid_lp(fvals, table, w):
    """Grid-restricted minimax solve: min h s.t. |w (f - P)| <= h."""
    n, npts = table.shape
    WPhi = table.T * w[:, None]
    wf = w * fvals
    one = np.ones((npts, 1))
    A_ub = np.vstack(
        [np.hstack([-WPhi, -one]), np.hstack([WPhi, -one])]
    )
    b_ub = np.concatenate([-wf, wf])
    cost = np.zeros(n + 1)
    cost[-1] = 1.0
    bounds = [(None, None)] * n + [(0.0, None)]
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise NumericsError("minimax LP fallback failed", details={"message": res.message})
    return res.x[:n]


def _irls_context(f, n_max, space, cfg):
    """Shared quadrature grid, f-values, and basis table for IRLS solves."""
    p, alpha = space.p, space.alpha
    basis = JacobiBasis(space.mu, space.mu)
    ap = alpha * p
    if not ap > -1.0:
        raise DomainError(f"need alpha*p > -1, got {ap}")
    m = cfg.quad_points or max(8 * n_max, 256)
    rule = gauss_jacobi_rule(m, JacobiBasis(ap, ap))
    fvals = np.asarray(f(rule.nodes), dtype=float)
    table = jacobi_table(n_max - 1, basis, rule.nodes)  # (n_max, npts)
    return rule, fvals, table


def _irls(f, n, space, cfg, warm=None, context=None) -> BestApproxResult:
    p = space.p
    alpha = space.alpha
    basis = JacobiBasis(space.mu, space.mu)
    if context is None:
        context = _irls_context(f, n, space, cfg)
    rule, fvals, full_table = context
    xs, q = rule.nodes, rule.weights
    m = xs.size
    Phi = full_table[:n].T  # (npts, n)

    def objective(c):
        r = fvals - Phi @ c
        return float(q @ np.abs(r) ** p) ** (1.0 / p), r

    def wls_solve(weights):
        wts = q * weights
        G = (Phi * wts[:, None]).T @ Phi
        rhs = Phi.T @ (wts * fvals)
        try:
            return np.linalg.solve(G, rhs)
        except np.linalg.LinAlgError:
            return np.linalg.lstsq(G, rhs, rcond=None)[0]

    c = warm.copy() if warm is not None and warm.size == n else None
    if c is None:
        c = wls_solve(np.ones_like(q))
    best_obj, r = objective(c)
    best_c = c.copy()
    history = [best_obj]
    iteration = 0
    slow_progress = 0
    for iteration in range(1, cfg.max_iter + 1):
        u = np.maximum(np.abs(r), cfg.weight_floor) ** (p - 2.0)
        c_new = wls_solve(u)
        step = c_new - c
        accepted = False
        for _ in range(8):
            cand = c + step
            obj, r_c = objective(cand)
            if obj <= best_obj * (1.0 + 1e-12) or p == 2.0:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        stalled = float(np.max(np.abs(cand - c))) <= cfg.irls_stagnation * (
            1.0 + float(np.max(np.abs(cand)))
        )
        c, r = cand, r_c
        history.append(obj)
        if obj < best_obj * (1.0 - 1e-10):
            slow_progress = 0
        else:
            slow_progress += 1
        if obj < best_obj:
            best_obj, best_c = obj, c.copy()
        if stalled or p == 2.0 or slow_progress >= 3:
            break
    else:
        if history[-1] > 2.0 * min(history):
            raise NumericsError(
                "IRLS diverged", details={"n": n, "residual_history": history[-20:]}
            )

    poly = PolynomialCoeffs(basis, best_c)
    handle = _as_handle(f).minus(FunctionHandle.from_poly(poly))
    value, est = weighted_norm_with_error(handle, p, alpha, m)
    return BestApproxResult(
        n=n,
        value=value,
        coeffs=poly,
        method="irls",
        error_estimate=est,
        diagnostics={"iterations": iteration, "grid_objective": best_obj},
    )


def best_approx(f, n: int, space: SpaceParams, cfg: Optional[ApproxConfig] = None) -> BestApproxResult:
    """Best approximation E_n(f)_{p,alpha} by polynomials of degree <= n-1."""
    cfg = cfg or ApproxConfig()
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    f = _as_handle(f)
    if space.p == INF:
        return _remez(f, n, space, cfg)
    return _irls(f, n, space, cfg)


def best_approx_sequence(f, n_max: int, space: SpaceParams, cfg: Optional[ApproxConfig] = None):
    """E_1..E_{n_max} plus the weighted sums S(n) = n^{-2} sum_{v<=n} v E_v.

    The evaluation grid and basis table are shared across degrees; IRLS
    solves are warm-started from the previous degree.
    """
    cfg = cfg or ApproxConfig()
    f = _as_handle(f)
    values = []
    results = []
    warm = None
    if space.p == INF:
        context = _remez_context(f, n_max, space, cfg)
    else:
        context = _irls_context(f, n_max, space, cfg)
    for n in range(1, n_max + 1):
        if space.p == INF:
            res = _remez(f, n, space, cfg, context=context)
        else:
            res = _irls(
                f, n, space, cfg,
                warm=np.pad(warm, (0, 1)) if warm is not None else None,
                context=context,
            )
            warm = res.coeffs.coeffs
        values.append(res.value)
        results.append(res)
    sums = []
    acc = 0.0
    for n in range(1, n_max + 1):
        acc += n * values[n - 1]
        sums.append(acc / (n * n))
    return values, sums, results


@dataclass(frozen=True)
class JacksonSpec:
    """Bookkeeping of the Jackson-type kernel for target degree bound n-1.

    q is the smallest integer exceeding mu; m sits in the window
    ((n-1)/(q+2), (n-1)/(q+2) + 1], so (q+2)(m-1) <= n-1.  The kernel is
    integrated against the transplanted (mu,mu) measure (sin t)^{2mu+1} dt;
    orthogonality of the translated Jacobi factors against that measure is
    what truncates the smoothed translate to degree <= n-1 for arbitrary
    integrable inputs, and q > mu makes its second moment O(m^-2).
    """

    n: int
    q: int
    m: int
    exponent: int
    mu: float

    def __post_init__(self):
        if (self.q + 2) * (self.m - 1) > self.n - 1:
            raise ContractError(
                f"degree guarantee violated: (q+2)(m-1)={(self.q+2)*(self.m-1)} > n-1={self.n-1}"
            )
        if self.exponent != 2 * (self.q + 2):
            raise ContractError("kernel exponent must equal 2(q+2)")
        if not self.q > self.mu:
            raise ContractError(f"need q > mu, got q={self.q}, mu={self.mu}")


def make_jackson_spec(n: int, mu: float) -> JacksonSpec:
    if n < 2:
        raise DomainError(f"need n >= 2 for a nontrivial Jackson operator, got {n}")
    q = int(math.floor(mu)) + 1
    m = (n - 1) // (q + 2) + 1
    return JacksonSpec(n=n, q=q, m=m, exponent=2 * (q + 2), mu=mu)


def jackson_kernel(ts: np.ndarray, spec: JacksonSpec) -> np.ndarray:
    """(sin(mt/2)/sin(t/2))^{2(q+2)} (sin t)^{2mu+1}, removable point at 0."""
    ts = np.asarray(ts, dtype=float)
    s = np.sin(0.5 * ts)
    num = np.sin(0.5 * spec.m * ts)
    small = np.abs(s) < 1e-12
    safe = np.where(small, 1.0, s)
    ratio = np.where(small, float(spec.m), num / safe)
    return ratio ** spec.exponent * np.abs(np.sin(ts)) ** (2.0 * spec.mu + 1.0)


def _composite_gl(n_panels: int, pts_per_panel: int, a: float, b: float):
    """Composite Gauss-Legendre nodes/weights on [a, b]."""
    gx, gw = np.polynomial.legendre.leggauss(pts_per_panel)
    edges = np.linspace(a, b, n_panels + 1)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        nodes.append(mid + half * gx)
        weights.append(half * gw)
    return np.concatenate(nodes), np.concatenate(weights)


def jackson_operator(
    f,
    n: int,
    mu: float,
    spec: Optional[JacksonSpec] = None,
    cfg: Optional[TranslationConfig] = None,
    tail_tol: float = 1e-6,
) -> PolynomialCoeffs:
    """Smoothed translate Q of f: a polynomial of degree <= n-1.

    The t-integral uses composite Gauss-Legendre scaled with the kernel
    frequency; Q is then projected onto the (mu,mu) basis.  Coefficients
    above the degree guarantee must carry relative L2(w) mass <= tail_tol
    and are truncated; more mass than that is an error.
    """
    spec = spec or make_jackson_spec(n, mu)
    if spec.n != n or spec.q != int(math.floor(mu)) + 1:
        raise ContractError(f"Jackson spec {spec} inconsistent with n={n}, mu={mu}")
    f = _as_handle(f)
    # non-polynomial inputs carry harmonics far above the kernel band; both
    # quadratures must resolve them or aliasing shows up as fake tail mass
    fpoly = f.poly
    if cfg is None:
        mz = 2 * (fpoly.degree + 16) if fpoly is not None else 768
        cfg = TranslationConfig(adaptive=False, quad_points=mz, selftest=False)

    # total trigonometric degree of kernel * translate factor in t
    trig_degree = (spec.m - 1) * (spec.q + 2) + (n - 1)
    panels = max(8, (trig_degree + 7) // 8)
    if fpoly is None:
        panels += 16
    ts, wts = _composite_gl(panels, 24, 0.0, math.pi)
    krn = jackson_kernel(ts, spec)
    gamma = float(wts @ krn)

    extra = 8
    m_x = n + extra + 8
    basis = JacobiBasis(mu, mu)
    rule = gauss_jacobi_rule(m_x, basis)

    tvals = np.empty((ts.size, rule.nodes.size))
    for i, t in enumerate(ts):
        tvals[i] = sym_translate(f, math.cos(t), mu, rule.nodes, cfg)
    qvals = (wts * krn) @ tvals / gamma

    nmax = n - 1 + extra
    table = jacobi_table(nmax, basis, rule.nodes)
    raw = table @ (rule.weights * qvals)
    h = np.array([jacobi_norm_sq(k, basis) for k in range(nmax + 1)])
    coeffs = raw / h

    mass = coeffs * coeffs * h
    total = float(mass.sum())
    tail = float(mass[n:].sum())
    rel_tail = math.sqrt(tail / total) if total > 0.0 else 0.0
    if rel_tail > tail_tol:
        raise NumericsError(
            f"Jackson operator degree bookkeeping violated: above-degree mass {rel_tail:.3e}",
            details={"n": n, "mu": mu, "m": spec.m, "tail_mass": rel_tail},
        )
    return PolynomialCoeffs(basis, coeffs[:n])


@dataclass(frozen=True)
class MarkovBernsteinRatios:
    r1: float
    r2: float
    n: int
    rho: float


def markov_bernstein_check(P: PolynomialCoeffs, space: SpaceParams, rho: float = 0.0) -> MarkovBernsteinRatios:
    """Markov-Bernstein diagnostic ratios for a polynomial of degree <= n-1.

    r1 = ||P'||_{p,alpha+1/2} / (n ||P||_{p,alpha}),
    r2 = ||P||_{p,alpha} / (n^{2 rho} ||P||_{p,alpha+rho}).
    """
    if rho < 0.0:
        raise DomainError(f"rho must be nonnegative, got {rho}")
    if not np.any(P.coeffs != 0.0):
        raise ContractError("zero polynomial")
    p, alpha = space.p, space.alpha
    if p == INF:
        if alpha < 0.0:
            raise DomainError("need alpha >= 0 for p = inf")
    else:
        if not alpha > -1.0 / p:
            raise DomainError(f"need alpha > -1/p, got alpha={alpha}, p={p}")
    n = P.degree + 1
    handle = FunctionHandle.from_poly(P)
    dhandle = FunctionHandle.from_poly(P.derivative())
    norm_p = weighted_norm(handle, p, alpha)
    r1 = weighted_norm(dhandle, p, alpha + 0.5) / (n * norm_p)
    r2 = norm_p / (n ** (2.0 * rho) * weighted_norm(handle, p, alpha + rho))
    return MarkovBernsteinRatios(r1=r1, r2=r2, n=n, rho=rho)
