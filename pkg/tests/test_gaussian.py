"""Gaussian encoding tests: basis, coefficients, quadrature, Monte Carlo,
and the two encoding-side checkers.

Moment oracles used here: E[Z^{2m}] = (2m-1)!! for a standard Gaussian, and
for a linear g = a + sum b_i z_i, E[g^4] = a^4 + 6 a^2 s^2 + 3 s^4 with
s^2 = sum b_i^2.
"""

import math

import numpy as np
import pytest

from hypercheck.errors import DomainError, UnsupportedError
from hypercheck.gaussian import (
    MAX_QUAD_VARS,
    beta_rate,
    canonical_basis,
    check_one_var_bound,
    check_tensorization,
    decode_table,
    encode_G,
    evaluate_at,
    gaussian_affine_moment,
    gaussian_qnorm,
    standardized_two_point,
)
from hypercheck.operators import chi_table
from hypercheck.space import (
    Domain,
    FunctionTable,
    ProductSpace,
    biased_space,
    constant_table,
    lp_norm,
    mask_coords,
    uniform_space,
)


def double_factorial(m):
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def random_table(n, k, seed, p=0.5):
    space = uniform_space(k) if k > 2 else biased_space(p)
    dom = Domain(space, n)
    rng = np.random.default_rng(seed)
    return FunctionTable(dom, rng.standard_normal(dom.size))


class TestCanonicalBasis:
    def test_two_point_matches_character_up_to_sign(self):
        p = 0.3
        basis = canonical_basis(biased_space(p))
        sigma = math.sqrt(p * (1 - p))
        chi = np.array([(0 - p) / sigma, (1 - p) / sigma])
        assert (np.allclose(basis.vectors[0], chi, atol=1e-12)
                or np.allclose(basis.vectors[0], -chi, atol=1e-12))

    def test_uniform_two_point(self):
        basis = canonical_basis(uniform_space(2))
        assert sorted(basis.vectors[0]) == pytest.approx([-1.0, 1.0], abs=1e-12)

    @pytest.mark.parametrize("space", [
        uniform_space(3),
        ProductSpace((0.2, 0.3, 0.5)),
        ProductSpace((0.1, 0.2, 0.3, 0.4)),
    ])
    def test_gram_matrix(self, space):
        basis = canonical_basis(space)
        mu = np.array(space.weights)
        k = space.k
        gram = basis.vectors @ np.diag(mu) @ basis.vectors.T
        np.testing.assert_allclose(gram, np.eye(k - 1), atol=1e-12)
        np.testing.assert_allclose(basis.vectors @ mu, 0.0, atol=1e-12)

    def test_deterministic(self):
        a = canonical_basis(ProductSpace((0.2, 0.3, 0.5)))
        b = canonical_basis(ProductSpace((0.2, 0.3, 0.5)))
        np.testing.assert_array_equal(a.vectors, b.vectors)


class TestEncoding:
    def test_empty_mask_is_identity_representation(self):
        f = random_table(2, 3, 0)
        enc = encode_G(f, 0, canonical_basis(f.domain.space))
        np.testing.assert_array_equal(enc.coeffs, f.values)
        np.testing.assert_array_equal(decode_table(enc).values, f.values)

    def test_constant(self):
        dom = Domain(uniform_space(3), 1)
        enc = encode_G(constant_table(dom, 2.5), 0b1, canonical_basis(dom.space))
        np.testing.assert_allclose(enc.coeffs, [2.5, 0.0, 0.0], atol=1e-12)

    def test_dictator_expansion(self):
        # x at bias p expands as p + sqrt(p(1-p)) * (basis vector), so the
        # encoding is p + sqrt(p(1-p)) z up to the basis sign
        p = 0.3
        f = FunctionTable(Domain(biased_space(p), 1), [0.0, 1.0])
        enc = encode_G(f, 0b1, canonical_basis(biased_space(p)))
        assert enc.coeffs[0] == pytest.approx(p, abs=1e-13)
        assert abs(enc.coeffs[1]) == pytest.approx(math.sqrt(p * (1 - p)), abs=1e-13)

    @pytest.mark.parametrize("n,k", [(3, 2), (2, 3)])
    def test_decode_roundtrip_all_masks(self, n, k):
        f = random_table(n, k, 1)
        basis = canonical_basis(f.domain.space)
        for mask in range(1 << n):
            enc = encode_G(f, mask, basis)
            np.testing.assert_allclose(decode_table(enc).values, f.values, atol=1e-10)

    def test_pointwise_evaluation_recovers_f(self):
        f = random_table(2, 3, 2)
        basis = canonical_basis(f.domain.space)
        mask = 0b01
        enc = encode_G(f, mask, basis)
        dom = f.domain
        for idx in range(dom.size):
            point = dom.unindex(idx)
            z = [basis.vectors[j][point[0]] for j in range(dom.k - 1)]
            free = [point[i] for i in range(dom.n) if not mask >> i & 1]
            assert evaluate_at(enc, free, z) == pytest.approx(f.values[idx], abs=1e-10)


class TestQNorm:
    def test_one_plus_z_fourth_moment(self):
        # E[(1+Z)^4] = 1 + 6 E[Z^2] + E[Z^4] = 10 by the moment oracle
        oracle = 1 + 6 * double_factorial(1) + double_factorial(3)
        assert oracle == 10
        dom = Domain(uniform_space(2), 1)
        basis = canonical_basis(dom.space)
        f = FunctionTable(dom, 1.0 + basis.vectors[0])
        est = gaussian_qnorm(encode_G(f, 0b1, basis), 4)
        assert est.method == "exact-quadrature"
        assert est.ci_halfwidth == 0.0
        assert est.value == pytest.approx(10.0 ** 0.25, abs=1e-12)

    def test_constant_all_q(self):
        dom = Domain(uniform_space(2), 1)
        enc = encode_G(constant_table(dom, -3.0), 0b1, canonical_basis(dom.space))
        for q in (2, 4, 6):
            assert gaussian_qnorm(enc, q).value == pytest.approx(3.0, abs=1e-12)

    def test_two_norm_preserved_every_mask(self):
        f = random_table(3, 3, 3)
        basis = canonical_basis(f.domain.space)
        for mask in range(8):
            est = gaussian_qnorm(encode_G(f, mask, basis), 2)
            assert est.value == pytest.approx(lp_norm(f, 2.0), abs=1e-11)

    def test_linear_fourth_moment_oracle(self):
        # fully encoded linear function against the closed-form moment
        rng = np.random.default_rng(4)
        dom = Domain(uniform_space(3), 2)
        basis = canonical_basis(dom.space)
        a = 0.7
        b = rng.standard_normal(4)
        tensor = np.zeros((3, 3))
        tensor[0, 0] = a
        tensor[0, 1], tensor[0, 2] = b[0], b[1]
        tensor[1, 0], tensor[2, 0] = b[2], b[3]
        vals = np.zeros(9)
        ev = basis.eval_matrix()
        for idx in range(9):
            x = dom.unindex(idx)
            vals[idx] = sum(tensor[b1, b0] * ev[x[1], b1] * ev[x[0], b0]
                            for b0 in range(3) for b1 in range(3))
        f = FunctionTable(dom, vals)
        enc = encode_G(f, 0b11, basis)
        np.testing.assert_allclose(enc.coeffs.reshape(3, 3), tensor, atol=1e-12)
        s2 = float(np.sum(b * b))
        oracle = a ** 4 + 6 * a * a * s2 + 3 * s2 * s2
        est = gaussian_qnorm(enc, 4)
        assert est.value ** 4 == pytest.approx(oracle, rel=1e-12)

    def test_monte_carlo_brackets_exact(self):
        f = random_table(3, 2, 5)
        basis = canonical_basis(f.domain.space)
        enc = encode_G(f, 0b101, basis)
        exact = gaussian_qnorm(enc, 4).value
        mc = gaussian_qnorm(enc, 4, "monte-carlo", seed=11, samples=100_000)
        assert mc.method == "monte-carlo"
        assert mc.sample_count == 100_000
        assert abs(mc.value - exact) <= mc.ci_halfwidth

    def test_exact_rejects_odd_q(self):
        f = random_table(1, 2, 6)
        enc = encode_G(f, 0b1, canonical_basis(f.domain.space))
        with pytest.raises(UnsupportedError):
            gaussian_qnorm(enc, 3)
        with pytest.raises(UnsupportedError):
            gaussian_qnorm(enc, 2.5)

    def test_quadrature_cap_forces_monte_carlo(self):
        f = random_table(6, 3, 7)
        enc = encode_G(f, 0b111111, canonical_basis(f.domain.space))
        assert enc.gaussian_vars == 12 > MAX_QUAD_VARS
        est = gaussian_qnorm(enc, 2, samples=2000, seed=1)
        assert est.method == "monte-carlo"

    def test_q_below_one_rejected(self):
        f = random_table(1, 2, 8)
        enc = encode_G(f, 0b1, canonical_basis(f.domain.space))
        with pytest.raises(DomainError):
            gaussian_qnorm(enc, 0.5)


class TestBetaRate:
    def test_reduces_to_rho_at_q_two(self):
        assert beta_rate(0.2, 2.0) == pytest.approx(0.2, abs=1e-15)

    def test_zero(self):
        assert beta_rate(0.0, 4.0) == 0.0

    def test_formula(self):
        rho, q = 0.1, 4.0
        assert beta_rate(rho, q) == pytest.approx(
            rho * (1 + 2 * (q - 2) / math.log(1 / rho)), abs=1e-15)

    def test_range(self):
        with pytest.raises(DomainError):
            beta_rate(0.5, 4.0)


class TestTensorization:
    def test_constant_is_tight(self):
        f = constant_table(Domain(biased_space(0.5), 2), 1.5)
        rep = check_tensorization(f, 0.2, 4)
        assert rep.passed
        assert rep.lhs == pytest.approx(1.5 ** 4, rel=1e-12)
        assert rep.margin == pytest.approx(0.0, abs=1e-9)

    def test_single_character_two_term_oracle(self):
        # n=1, f = chi, q = 2: the two summands are ||G chi||_2^2 = 1 and
        # beta^2 ||chi||_2^2 = rho^2; the side with noise is rho^2
        rho = 0.25
        chi = chi_table(Domain(biased_space(0.5), 1), 0b1)
        rep = check_tensorization(chi, rho, 2)
        assert rep.lhs == pytest.approx(rho ** 2, abs=1e-12)
        assert rep.rhs == pytest.approx(1.0 + rho ** 2, abs=1e-12)
        assert rep.margin == pytest.approx(1.0, abs=1e-12)
        assert rep.passed

    def test_random_biased_instance(self):
        f = random_table(3, 2, 9, p=1.0 / 3.0)
        rep = check_tensorization(f, 0.2, 4)
        assert rep.passed
        assert rep.margin > 0.0
        assert len(rep.params["summands"]) == 8

    def test_preconditions(self):
        f = random_table(2, 2, 10)
        with pytest.raises(DomainError):
            check_tensorization(f, 0.4, 4)
        with pytest.raises(DomainError):
            check_tensorization(f, 0.2, 3)


class TestOneVarBound:
    def test_d_zero_equality(self):
        rep = check_one_var_bound([(-1.0, 0.5), (1.0, 0.5)], 0.0, 0.2, 4)
        assert rep.lhs == pytest.approx(1.0, abs=1e-14)
        assert rep.rhs == pytest.approx(1.0, abs=1e-12)
        assert rep.passed

    def test_rademacher_moment_oracle(self):
        rho = 1.0 / 3.0
        rep = check_one_var_bound([(-1.0, 0.5), (1.0, 0.5)], 1.0, rho, 4)
        assert rep.lhs == pytest.approx(1 + 6 * rho ** 2 + rho ** 4, abs=1e-13)
        assert rep.params["gaussian_term"] == pytest.approx(10.0, abs=1e-11)
        assert rep.passed

    def test_biased_two_point_case(self):
        x = standardized_two_point(0.1)
        vals = dict(x)
        # direct two-atom recomputation of the discrete side
        d, rho, q = 2.0, 0.25, 6.0
        lhs = sum(p * abs(1 + rho * d * v) ** q for v, p in x)
        rep = check_one_var_bound(x, d, rho, q)
        assert rep.lhs == pytest.approx(lhs, rel=1e-13)
        assert rep.passed
        assert len(vals) == 2

    def test_odd_q_uses_adaptive_integration(self):
        rep = check_one_var_bound([(-1.0, 0.5), (1.0, 0.5)], 0.7, 0.3, 3.0)
        assert rep.passed
        assert rep.params["gaussian_term"] == pytest.approx(
            gaussian_affine_moment(0.7, 3.0), rel=1e-9)

    def test_rejects_nonstandardized(self):
        with pytest.raises(DomainError):
            check_one_var_bound([(-1.0, 0.25), (1.0, 0.75)], 1.0, 0.2, 4)


def test_affine_gaussian_moment_even_matches_quad():
    for d in (0.0, 0.5, 2.0):
        exact = gaussian_affine_moment(d, 4)
        oracle = 1 + 6 * d * d + 3 * d ** 4
        assert exact == pytest.approx(oracle, rel=1e-12)


def test_encoded_mask_positions():
    f = random_table(3, 2, 12)
    basis = canonical_basis(f.domain.space)
    enc = encode_G(f, 0b110, basis)
    assert mask_coords(enc.encoded_mask) == (1, 2)
    assert enc.gaussian_vars == 2
