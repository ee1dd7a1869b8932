import math

import numpy as np
import pytest

from genshift import (
    DomainError,
    FunctionHandle,
    JacobiBasis,
    ModulusConfig,
    PolynomialCoeffs,
    SpaceParams,
    equivalence_ratio,
    jacobi_eval,
    k_functional,
    modulus,
    weighted_norm,
)
from genshift.corpus import corpus
from genshift.smoothness import default_candidate_degree

SP = SpaceParams("inf", 0.5, 1.0)

IDENT = FunctionHandle(
    fn=lambda x: np.asarray(x, float),
    d1=lambda x: np.ones_like(np.asarray(x, float)),
    d2=lambda x: np.zeros_like(np.asarray(x, float)),
    poly=PolynomialCoeffs(JacobiBasis(1.0, 1.0), [0.0, 1.0]),
)


class TestModulus:
    def test_constant_is_zero(self):
        const = FunctionHandle(fn=lambda x: np.full_like(np.asarray(x, float), 2.7))
        for delta in [0.1, 1.0, 2.5]:
            assert modulus(const, delta, SP).value <= 1e-10

    def test_vanishing_at_zero(self):
        r = modulus(IDENT, 0.0, SP)
        assert r.value == 0.0 and r.argmax_t == 0.0

    @pytest.mark.parametrize("delta", [0.1, 0.5, 1.0, 2.0])
    def test_identity_closed_form(self, delta):
        # tau_t(id) - id = -4 x sin^2(t/2); weighted sup = 2 sin^2(t/2),
        # increasing in t, so omega = 2 sin^2(delta/2)
        r = modulus(IDENT, delta, SP)
        assert abs(r.value - 2.0 * math.sin(delta / 2.0) ** 2) <= 1e-7

    def test_monotone_in_delta(self):
        f = corpus("abs_power", gamma=1.0).handle
        cfg = ModulusConfig.fast()
        vals = [modulus(f, d, SP, cfg).value for d in [0.25, 0.5, 1.0, 2.0]]
        for lo, hi in zip(vals[:-1], vals[1:]):
            assert lo <= hi + 2e-6

    def test_argmax_in_range(self):
        f = corpus("abs_power", gamma=1.0).handle
        r = modulus(f, 0.8, SP, ModulusConfig.fast())
        assert 0.0 <= r.argmax_t <= 0.8 + 1e-12

    def test_eigenfunction_factorization(self):
        # for f = R_n the deviation factorizes exactly:
        # omega = sup_t |1 - R_n^{(0,2mu)}(cos t)| * ||R_n||
        mu, n = 1.0, 3
        basis = JacobiBasis(mu, mu)
        f = FunctionHandle.from_poly(PolynomialCoeffs(basis, [0.0] * n + [1.0]))
        delta = 1.2
        r = modulus(f, delta, SP)
        ts = np.linspace(0, delta, 20001)
        factor = np.max(np.abs(1.0 - jacobi_eval(n, JacobiBasis(0.0, 2.0 * mu), np.cos(ts))))
        norm_rn = weighted_norm(f, SP.p, SP.alpha)
        assert abs(r.value - factor * norm_rn) <= 1e-6

    def test_delta_domain(self):
        with pytest.raises(DomainError):
            modulus(IDENT, math.pi, SP)


class TestKFunctional:
    def test_constant_gives_zero(self):
        const = FunctionHandle.from_poly(PolynomialCoeffs(JacobiBasis(1.0, 1.0), [1.0]))
        r = k_functional(const, 0.5, SP)
        assert r.value <= 1e-12

    def test_upper_bounds_identity(self):
        # candidates g=0 and g=f bound K from above
        norm_id = weighted_norm(IDENT, SP.p, SP.alpha)
        for delta in [0.1, 0.6]:
            r = k_functional(IDENT, delta, SP)
            bound = min(norm_id, delta**2 * 4.0 * norm_id)
            assert r.value <= bound + 1e-9

    def test_never_exceeds_norm(self):
        f = corpus("abs_power", gamma=1.0).handle
        nf = weighted_norm(f, SP.p, SP.alpha)
        for delta in [0.1, 0.8, 2.0]:
            assert k_functional(f, delta, SP).value <= nf + 1e-12

    def test_p1_solver(self):
        sp1 = SpaceParams(1, 0.5, 1.0)
        f = corpus("abs_power", gamma=1.0).handle
        r = k_functional(f, 0.5, sp1)
        assert 0.0 < r.value <= weighted_norm(f, 1, 0.5) + 1e-12

    def test_degree_rule(self):
        assert default_candidate_degree(1.0) == 32
        assert default_candidate_degree(0.01) == 400

    def test_invalid_delta(self):
        with pytest.raises(DomainError):
            k_functional(IDENT, 0.0, SP)


class TestEquivalence:
    def test_constant_convention(self):
        const = FunctionHandle.from_poly(PolynomialCoeffs(JacobiBasis(1.0, 1.0), [3.0]))
        rows = equivalence_ratio(const, [0.5], SP)
        assert rows[0].rho == 1.0 and not rows[0].flagged

    def test_polynomial_rho_finite_and_delta2_rate(self):
        f = corpus("bump", s=1.0)
        basis = JacobiBasis(1.0, 1.0)
        # re-express in the (mu,mu) basis so the g=f candidate is available
        from genshift.jacobi import fourier_jacobi_coeffs, gauss_jacobi_rule, jacobi_norm_sq

        rule = gauss_jacobi_rule(16, basis)
        coeffs = fourier_jacobi_coeffs(f.handle, 2, 1.0, rule)
        coeffs = coeffs / np.array([jacobi_norm_sq(k, basis) for k in range(3)])
        fh = FunctionHandle.from_poly(PolynomialCoeffs(basis, coeffs))
        deltas = [0.4, 0.2, 0.1, 0.05]
        rows = equivalence_ratio(fh, deltas, SP, modulus_cfg=ModulusConfig.fast())
        for r in rows:
            assert not r.flagged and 0.0 < r.rho < 50.0
        # both omega and K scale like delta^2 for smooth f: values drop ~4x per halving
        for r0, r1 in zip(rows[:-1], rows[1:]):
            assert 2.0 <= r0.omega / r1.omega <= 8.0
            assert 2.0 <= r0.k_value / r1.k_value <= 8.0
