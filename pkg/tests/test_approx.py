import math

import numpy as np
import pytest

from genshift import (
    ContractError,
    DomainError,
    FunctionHandle,
    JacobiBasis,
    PolynomialCoeffs,
    SpaceParams,
    best_approx,
    best_approx_sequence,
    jackson_operator,
    make_jackson_spec,
    markov_bernstein_check,
    weighted_distance,
)
from genshift.approx import jackson_kernel
from genshift.corpus import corpus
from genshift.jacobi import gauss_jacobi_rule

SP_INF0 = SpaceParams("inf", 0.0, 0.0)
SP_INF = SpaceParams("inf", 0.5, 1.0)
SP_L1 = SpaceParams(1, 0.0, 0.0)

X2 = FunctionHandle(fn=lambda x: np.asarray(x, float) ** 2)
IDENT = FunctionHandle(fn=lambda x: np.asarray(x, float))


def brute_force_constant_scan(p_fn, n_grid=4001, c_grid=801):
    """Oracle for E_1 in L1: scan constants, dense trapezoid integration."""
    xs = np.linspace(-1, 1, n_grid)
    best = math.inf
    for c in np.linspace(-0.5, 0.5, c_grid):
        best = min(best, float(np.trapezoid(np.abs(p_fn(xs) - c), xs)))
    return best


class TestBestApproxSup:
    def test_chebyshev_x2(self):
        res = best_approx(X2, 2, SP_INF0)
        assert abs(res.value - 0.5) <= 1e-6
        assert np.allclose(res.coeffs.coeffs, [0.5, 0.0], atol=1e-9)

    def test_equioscillation_certificate(self):
        res = best_approx(X2, 2, SP_INF0)
        errs = np.asarray(res.diagnostics["reference_errors"])
        assert errs.size >= 3
        signs = np.sign(errs)
        assert np.all(signs[:-1] * signs[1:] < 0)
        assert np.max(np.abs(np.abs(errs) - res.value)) <= 1e-7 * max(res.value, 1e-30)

    def test_polynomial_reproduced(self):
        basis = JacobiBasis(0.0, 0.0)
        poly = PolynomialCoeffs(basis, [0.3, -1.0, 0.7])
        f = FunctionHandle.from_poly(poly)
        res = best_approx(f, 4, SP_INF0)
        assert res.value <= 1e-9
        assert np.allclose(res.coeffs.coeffs[:3], poly.coeffs, atol=1e-8)

    def test_weighted_equioscillation(self):
        f = corpus("abs_power", gamma=1.0).handle
        res = best_approx(f, 5, SP_INF)
        errs = np.asarray(res.diagnostics["reference_errors"])
        signs = np.sign(errs)
        assert np.all(signs[:-1] * signs[1:] < 0)
        assert np.max(np.abs(np.abs(errs) - res.diagnostics["levelled_h"])) <= 1e-9

    def test_n_validation(self):
        with pytest.raises(DomainError):
            best_approx(X2, 0, SP_INF0)


class TestBestApproxLp:
    def test_e1_of_x_l1(self):
        res = best_approx(IDENT, 1, SP_L1)
        oracle = brute_force_constant_scan(lambda x: x)
        assert abs(res.value - oracle) <= 1e-4
        assert abs(res.value - 1.0) <= 1e-4

    def test_polynomial_reproduced_l1(self):
        basis = JacobiBasis(0.0, 0.0)
        poly = PolynomialCoeffs(basis, [0.1, 0.5, -0.3, 0.2])
        f = FunctionHandle.from_poly(poly)
        res = best_approx(f, 5, SP_L1)
        assert res.value <= 1e-9

    def test_p2_matches_projection(self):
        # at p=2 the IRLS fixed point is the weighted L2 projection
        sp2 = SpaceParams(2, 0.25, 0.5)
        f = FunctionHandle(fn=lambda x: np.exp(np.asarray(x, float)))
        n = 5
        res = best_approx(f, n, sp2)
        basis = JacobiBasis(sp2.mu, sp2.mu)
        rule = gauss_jacobi_rule(max(8 * n, 256), JacobiBasis(0.5, 0.5))
        from genshift.jacobi import jacobi_table

        table = jacobi_table(n - 1, basis, rule.nodes)
        G = table @ (rule.weights[:, None] * table.T)
        rhs = table @ (rule.weights * f(rule.nodes))
        direct = np.linalg.solve(G, rhs)
        assert np.max(np.abs(res.coeffs.coeffs - direct)) <= 1e-9


class TestSequence:
    def test_monotone_and_zero_tail(self):
        basis = JacobiBasis(0.0, 0.0)
        poly = PolynomialCoeffs(basis, [0.0, 0.2, 0.0, 1.0])
        f = FunctionHandle.from_poly(poly)
        values, sums, _ = best_approx_sequence(f, 8, SP_INF0)
        for lo, hi in zip(values[1:], values[:-1]):
            assert lo <= hi + 1e-8
        assert all(v <= 1e-9 for v in values[4:])
        # S(n) = n^-2 sum nu E_nu
        acc = 0.0
        for n in range(1, 9):
            acc += n * values[n - 1]
            assert abs(sums[n - 1] - acc / n**2) <= 1e-14

    def test_self_consistency_two_resolutions(self):
        from genshift.approx import ApproxConfig

        f = corpus("abs_power", gamma=1.0).handle
        v1, _, _ = best_approx_sequence(f, 10, SP_INF0, ApproxConfig(grid_size=2049))
        v2, _, _ = best_approx_sequence(f, 10, SP_INF0, ApproxConfig(grid_size=4097))
        # n E_n stays bounded and stable across grid resolutions
        s1 = [n * v for n, v in enumerate(v1, start=1)]
        s2 = [n * v for n, v in enumerate(v2, start=1)]
        assert np.max(np.abs(np.array(s1) - np.array(s2))) <= 1e-3


class TestJackson:
    def test_spec_window(self):
        for n in [8, 16, 33, 64]:
            for mu in [0.5, 1.0, 2.0]:
                spec = make_jackson_spec(n, mu)
                assert spec.q == int(math.floor(mu)) + 1
                assert (spec.q + 2) * (spec.m - 1) <= n - 1
                assert spec.exponent == 2 * (spec.q + 2)

    def test_kernel_nonnegative_normalized(self):
        spec = make_jackson_spec(16, 1.0)
        ts = np.linspace(0, math.pi, 20001)
        k = jackson_kernel(ts, spec)
        assert np.all(k >= 0.0)
        # measure factor (sin t)^{2mu+1} vanishes at the endpoints
        assert k[0] == 0.0 and k[-1] <= 1e-12
        assert np.max(k) > 0.0

    def test_constant_reproduced(self):
        one = FunctionHandle(fn=lambda x: np.ones_like(np.asarray(x, float)))
        Q = jackson_operator(one, 8, 1.0)
        assert abs(Q.coeffs[0] - 1.0) <= 1e-12
        assert np.max(np.abs(Q.coeffs[1:])) <= 1e-12

    def test_degree_bound_for_corpus(self):
        for name, kw in [("bump", {"s": 2.0}), ("runge", {}), ("abs_power", {"gamma": 1.0})]:
            f = corpus(name, **kw)
            Q = jackson_operator(f.handle, 16, 1.0)
            assert Q.degree <= 15

    def test_r1_multiplier_decay(self):
        # Q(R_1) = lambda R_1 with 1 - lambda ~ m^-2 as m grows
        mu = 1.0
        basis = JacobiBasis(mu, mu)
        f = FunctionHandle.from_poly(PolynomialCoeffs(basis, [0.0, 1.0]))
        lam_defect = {}
        for n in [13, 25, 49, 97]:  # m = 4, 7, 13, 25 for q=2
            spec = make_jackson_spec(n, mu)
            Q = jackson_operator(f, n, mu, spec)
            lam_defect[spec.m] = abs(1.0 - Q.coeffs[1])
        ms = sorted(lam_defect)
        scaled = [lam_defect[m] * m * m for m in ms]
        assert max(scaled) / min(scaled) <= 2.0

    def test_error_rate_bump(self):
        f = corpus("bump", s=2.0)
        errs = {}
        for n in [8, 16, 32, 64]:
            Q = jackson_operator(f.handle, n, 1.0)
            errs[n] = weighted_distance(
                f.handle, FunctionHandle.from_poly(Q), SP_INF.p, SP_INF.alpha
            )
        scaled = [errs[n] * n * n for n in errs]
        assert max(scaled) / min(scaled) < 4.0

    def test_feasible_competitor(self):
        # ||f - Q_n|| >= E_n(f) - tolerance
        f = corpus("runge")
        n = 12
        Q = jackson_operator(f.handle, n, 1.0)
        err_q = weighted_distance(f.handle, FunctionHandle.from_poly(Q), SP_INF.p, SP_INF.alpha)
        e_n = best_approx(f.handle, n, SP_INF).value
        assert err_q >= e_n - 1e-8

    def test_spec_mismatch_rejected(self):
        spec = make_jackson_spec(16, 1.0)
        with pytest.raises(ContractError):
            jackson_operator(lambda x: x, 8, 1.0, spec)


class TestMarkovBernstein:
    def test_constant_r1_zero(self):
        basis = JacobiBasis(1.0, 1.0)
        P = PolynomialCoeffs(basis, [2.0])
        res = markov_bernstein_check(P, SP_INF, rho=0.5)
        assert res.r1 == 0.0

    def test_rho_zero_r2_one(self):
        basis = JacobiBasis(1.0, 1.0)
        rng = np.random.default_rng(1)
        P = PolynomialCoeffs(basis, rng.standard_normal(9))
        res = markov_bernstein_check(P, SP_INF, rho=0.0)
        assert res.r2 == pytest.approx(1.0, abs=1e-12)

    def test_zero_polynomial_rejected(self):
        P = PolynomialCoeffs(JacobiBasis(1.0, 1.0), [0.0, 0.0])
        with pytest.raises(ContractError):
            markov_bernstein_check(P, SP_INF)

    def test_window_rejected(self):
        P = PolynomialCoeffs(JacobiBasis(1.0, 1.0), [1.0, 1.0])
        with pytest.raises(DomainError):
            markov_bernstein_check(P, SpaceParams("inf", -0.25, 1.0))

    def test_random_sweep_stable(self):
        rng = np.random.default_rng(99)
        basis = JacobiBasis(1.0, 1.0)
        maxima = {}
        for deg in (8, 16):
            r1m = 0.0
            for _ in range(50):
                P = PolynomialCoeffs(basis, rng.standard_normal(deg + 1))
                r1m = max(r1m, markov_bernstein_check(P, SP_INF, 0.5).r1)
            maxima[deg] = r1m
        assert maxima[16] <= 2.0 * maxima[8]
