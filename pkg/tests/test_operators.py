"""Operator calculus tests: averaging, Laplacians, decomposition, noise,
derivatives, and the two-point Fourier transform.

Derived expectations are computed by independent oracles defined here
(pointwise averaging, inclusion-exclusion over subsets, explicit character
expansions) and then compared against the library routes.
"""

import itertools
import math

import numpy as np
import pytest

from hypercheck.errors import DomainError, UnsupportedError
from hypercheck.operators import (
    average_E,
    chi_table,
    derivative_D,
    derivative_moment,
    efron_stein,
    es_part,
    fourier_spectrum,
    iter_derivatives,
    laplacian_L,
    level1_coefficients,
    level_part,
    noise_resample,
    noise_spectral,
    spectrum_to_table,
)
from hypercheck.families import and_t, dictator, sharpness_product
from hypercheck.space import (
    Domain,
    FunctionTable,
    biased_space,
    constant_table,
    expectation,
    inner_product,
    lp_norm,
    mask_coords,
    uniform_space,
)


def average_oracle(f, mask):
    """Pointwise resampling average, straight from the definition."""
    dom = f.domain
    coords = mask_coords(mask)
    w = dom.space.weights
    out = np.zeros(dom.size)
    for idx in range(dom.size):
        point = list(dom.unindex(idx))
        total = 0.0
        for assignment in itertools.product(range(dom.k), repeat=len(coords)):
            prob = 1.0
            for c, v in zip(coords, assignment):
                point[c] = v
                prob *= w[v]
            total += prob * f.values[dom.point_index(point)]
        out[idx] = total
    return out


def laplacian_oracle(f, mask):
    """Inclusion-exclusion over sub-subsets, independent of the axis route."""
    out = np.zeros(f.domain.size)
    coords = mask_coords(mask)
    for r in range(len(coords) + 1):
        for chosen in itertools.combinations(coords, r):
            sub = sum(1 << c for c in chosen)
            out += (-1.0) ** r * average_oracle(f, sub)
    return out


def random_table(n, k, seed, p=0.5):
    space = uniform_space(k) if k > 2 else biased_space(p)
    dom = Domain(space, n)
    rng = np.random.default_rng(seed)
    return FunctionTable(dom, rng.standard_normal(dom.size))


class TestAveraging:
    def test_empty_is_identity(self):
        f = random_table(3, 2, 0)
        np.testing.assert_array_equal(average_E(f, 0).values, f.values)

    def test_full_average_of_dictator(self):
        f = dictator(2, 0.25, 0)
        np.testing.assert_allclose(average_E(f, 0b11).values, 0.25, atol=1e-14)

    def test_single_coordinate_oracle(self):
        f = and_t(2, 0.5, 2)
        got = average_E(f, 0b01)
        np.testing.assert_allclose(got.values, average_oracle(f, 0b01), atol=1e-14)
        # averaging the first AND input leaves 0.5 * x_1
        np.testing.assert_allclose(got.values, [0.0, 0.0, 0.5, 0.5], atol=1e-14)

    def test_idempotent(self):
        f = random_table(3, 3, 1)
        once = average_E(f, 0b101)
        twice = average_E(once, 0b101)
        np.testing.assert_allclose(twice.values, once.values, atol=1e-13)


class TestLaplacian:
    def test_empty_is_identity(self):
        f = random_table(3, 2, 2)
        np.testing.assert_array_equal(laplacian_L(f, 0).values, f.values)

    def test_kills_constants(self):
        f = constant_table(Domain(biased_space(0.3), 2), 4.0)
        np.testing.assert_allclose(laplacian_L(f, 0b01).values, 0.0, atol=1e-14)

    def test_character_is_fixed(self):
        chi = chi_table(Domain(biased_space(0.5), 2), 0b01)
        got = laplacian_L(chi, 0b01)
        np.testing.assert_allclose(got.values, chi.values, atol=1e-13)
        np.testing.assert_allclose(got.values, laplacian_oracle(chi, 0b01), atol=1e-13)

    @pytest.mark.parametrize("mask", [0b001, 0b011, 0b111])
    def test_matches_inclusion_exclusion(self, mask):
        f = random_table(3, 3, 3)
        np.testing.assert_allclose(laplacian_L(f, mask).values,
                                   laplacian_oracle(f, mask), atol=1e-12)

    def test_sum_of_higher_parts(self):
        f = random_table(3, 2, 4, p=1.0 / 3.0)
        dec = efron_stein(f)
        for mask in range(8):
            acc = np.zeros(8)
            for t_mask, part in dec.parts.items():
                if t_mask & mask == mask:
                    acc += part.values
            np.testing.assert_allclose(laplacian_L(f, mask).values, acc, atol=1e-12)


class TestEfronStein:
    def test_constant(self):
        f = constant_table(Domain(biased_space(0.5), 2), 3.0)
        dec = efron_stein(f)
        np.testing.assert_allclose(dec.parts[0].values, 3.0, atol=1e-14)
        for mask in range(1, 4):
            np.testing.assert_allclose(dec.parts[mask].values, 0.0, atol=1e-14)

    def test_dictator_weight(self):
        # the non-constant part of x_0 at bias p has squared norm p(1-p)
        dec = efron_stein(dictator(2, 0.25, 0))
        assert dec.norm2_sq(0b01) == pytest.approx(0.25 * 0.75, abs=1e-13)
        assert dec.norm2_sq(0b10) == pytest.approx(0.0, abs=1e-13)
        assert dec.norm2_sq(0b11) == pytest.approx(0.0, abs=1e-13)

    def test_and_top_weight_via_character_expansion(self):
        # x_0 x_1 = (1 + chi_0)(1 + chi_1)/4 at uniform, so the top
        # coefficient is 1/4 and the top part has squared norm 1/16
        dec = efron_stein(and_t(2, 0.5, 2))
        assert dec.norm2_sq(0b11) == pytest.approx(1.0 / 16.0, abs=1e-13)

    def test_invariants_random(self):
        for seed, (n, k) in enumerate([(4, 2), (3, 3)]):
            f = random_table(n, k, 40 + seed)
            dec = efron_stein(f)
            parts = list(dec.parts.values())
            total = np.sum([t.values for t in parts], axis=0)
            np.testing.assert_allclose(total, f.values, atol=1e-11)
            for a, b in itertools.combinations(parts, 2):
                assert abs(inner_product(a, b)) < 1e-11

    def test_part_depends_only_on_its_coordinates(self):
        f = random_table(3, 3, 6)
        dec = efron_stein(f)
        for mask, part in dec.parts.items():
            for i in range(3):
                averaged = average_E(part, 1 << i)
                if mask >> i & 1:
                    np.testing.assert_allclose(averaged.values, 0.0, atol=1e-12)
                else:
                    np.testing.assert_allclose(averaged.values, part.values, atol=1e-12)

    def test_streamed_part_matches(self):
        f = random_table(3, 2, 7)
        dec = efron_stein(f)
        for mask in range(8):
            np.testing.assert_allclose(es_part(f, mask).values,
                                       dec.parts[mask].values, atol=1e-12)


class TestLevelPart:
    def test_level_zero_is_mean(self):
        f = random_table(3, 2, 8)
        np.testing.assert_allclose(level_part(f, 0).values, expectation(f), atol=1e-13)

    def test_and_level_one_weight(self):
        piece = level_part(and_t(2, 0.5, 2), 1)
        assert inner_product(piece, piece) == pytest.approx(2 * 0.25 ** 2, abs=1e-13)

    def test_pure_character_levels(self):
        chi = chi_table(Domain(biased_space(0.5), 2), 0b11)
        np.testing.assert_allclose(level_part(chi, 1).values, 0.0, atol=1e-13)
        np.testing.assert_allclose(level_part(chi, 2).values, chi.values, atol=1e-13)

    def test_levels_sum_and_orthogonal(self):
        f = random_table(3, 3, 9)
        pieces = [level_part(f, d) for d in range(4)]
        total = np.sum([t.values for t in pieces], axis=0)
        np.testing.assert_allclose(total, f.values, atol=1e-12)
        for a, b in itertools.combinations(pieces, 2):
            assert abs(inner_product(a, b)) < 1e-11

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            level_part(random_table(2, 2, 10), 3)


class TestNoise:
    def test_endpoints(self):
        f = random_table(3, 2, 11)
        np.testing.assert_allclose(noise_resample(f, 1.0).values, f.values, atol=1e-14)
        np.testing.assert_allclose(noise_resample(f, 0.0).values,
                                   expectation(f), atol=1e-13)

    def test_character_eigenvalue(self):
        dom = Domain(biased_space(0.25), 3)
        for mask in range(8):
            chi = chi_table(dom, mask)
            got = noise_resample(chi, 0.6)
            np.testing.assert_allclose(got.values,
                                       0.6 ** mask.bit_count() * chi.values,
                                       atol=1e-13)

    def test_sharpness_product_eigenfunction(self):
        f = sharpness_product(4, 2)
        for rho in (0.2, 0.9):
            np.testing.assert_allclose(noise_spectral(f, rho).values,
                                       rho ** 2 * f.values, atol=1e-12)

    def test_spectral_amplification_above_one(self):
        f = sharpness_product(4, 2)
        np.testing.assert_allclose(noise_spectral(f, 2.0).values, 4.0 * f.values,
                                   atol=1e-12)
        with pytest.raises(DomainError):
            noise_resample(f, 2.0)

    def test_composition(self):
        f = random_table(4, 2, 12)
        ab = noise_resample(noise_resample(f, 0.5), 0.5)
        np.testing.assert_allclose(ab.values, noise_resample(f, 0.25).values,
                                   atol=1e-12)

    @pytest.mark.parametrize("rho", [0.0, 0.3, 1.0 / math.sqrt(3.0), 1.0])
    def test_resample_equals_spectral(self, rho):
        for seed, (n, k) in enumerate([(3, 2), (2, 3)]):
            f = random_table(n, k, 50 + seed)
            np.testing.assert_allclose(noise_resample(f, rho).values,
                                       noise_spectral(f, rho).values, atol=1e-11)


class TestDerivatives:
    def test_constant_derivative_vanishes(self):
        f = constant_table(Domain(biased_space(0.5), 2), 2.0)
        np.testing.assert_allclose(derivative_D(f, 0b01, (1,)).values, 0.0, atol=1e-14)

    def test_dictator_norm_formula(self):
        # D_{0,x} of the dictator is hat f({0}) chi(x_0), a constant table
        p = 0.25
        f = dictator(2, p, 0)
        sigma = math.sqrt(p * (1 - p))
        for x, chi_val in ((0, -p / sigma), (1, (1 - p) / sigma)):
            dsx = derivative_D(f, 0b01, (x,))
            assert lp_norm(dsx, 2.0) == pytest.approx(sigma * abs(chi_val), abs=1e-12)

    def test_second_derivative_of_linear(self):
        dom = Domain(biased_space(0.5), 3)
        f = FunctionTable(dom, 1.5 + 0.5 * chi_table(dom, 0b001).values
                          - 2.0 * chi_table(dom, 0b100).values)
        np.testing.assert_allclose(derivative_D(f, 0b101, (1, 0)).values, 0.0,
                                   atol=1e-13)

    def test_fourier_formula(self):
        # D_{S,x} f = chi_S(x) * sum_{T >= S} hat f(T) chi_{T\S}, with the
        # right side assembled from an explicit character expansion
        p = 1.0 / 3.0
        f = random_table(3, 2, 13, p=p)
        spec = fourier_spectrum(f)
        sub_dom = Domain(biased_space(p), 2)
        sigma = math.sqrt(p * (1 - p))
        chi1 = [(-p) / sigma, (1 - p) / sigma]
        mask = 0b010
        for x in (0, 1):
            expected = np.zeros(4)
            for t_mask, coeff in spec.coeffs.items():
                if t_mask & mask != mask:
                    continue
                rest = np.ones(4)
                # remaining coordinates 0 and 2 map to sub-coordinates 0, 1
                for sub_pos, coord in enumerate((0, 2)):
                    if t_mask >> coord & 1:
                        for j in range(4):
                            rest[j] *= chi1[sub_dom.unindex(j)[sub_pos]]
                expected += coeff * chi1[x] * rest
            got = derivative_D(f, mask, (x,))
            np.testing.assert_allclose(got.values, expected, atol=1e-11)

    def test_swap_rule(self):
        f = random_table(3, 3, 14)
        rho = 0.4
        tf = noise_resample(f, rho)
        for mask in range(1, 8):
            s = mask.bit_count()
            for assignment, _, dsx in iter_derivatives(f, mask):
                left = derivative_D(tf, mask, assignment)
                right = rho ** s * noise_resample(dsx, rho).values
                np.testing.assert_allclose(left.values, right, atol=1e-11)

    def test_mean_square_derivative_is_laplacian_norm(self):
        f = random_table(3, 2, 15, p=0.25)
        for mask in range(8):
            lap = laplacian_L(f, mask)
            assert derivative_moment(f, mask, 2.0) == pytest.approx(
                inner_product(lap, lap), abs=1e-12)


class TestFourier:
    def test_dictator_coefficients(self):
        p = 0.3
        spec = fourier_spectrum(dictator(1, p, 0))
        assert spec.coeffs[0] == pytest.approx(p, abs=1e-13)
        assert spec.coeffs[1] == pytest.approx(math.sqrt(p * (1 - p)), abs=1e-13)

    def test_and_coefficients_by_expansion(self):
        # (1+chi_0)(1+chi_1)/4 at uniform: every coefficient is 1/4
        spec = fourier_spectrum(and_t(2, 0.5, 2))
        for mask in range(4):
            assert spec.coeffs[mask] == pytest.approx(0.25, abs=1e-13)

    def test_zero_function(self):
        spec = fourier_spectrum(constant_table(Domain(biased_space(0.5), 2), 0.0))
        assert all(abs(c) < 1e-14 for c in spec.coeffs.values())

    def test_parseval_and_reconstruction(self):
        f = random_table(3, 2, 16, p=0.2)
        spec = fourier_spectrum(f)
        total = math.fsum(c * c for c in spec.coeffs.values())
        assert total == pytest.approx(lp_norm(f, 2.0) ** 2, abs=1e-11)
        back = spectrum_to_table(spec, f.domain)
        np.testing.assert_allclose(back.values, f.values, atol=1e-11)

    def test_parts_are_coefficient_times_character(self):
        f = random_table(3, 2, 17, p=1.0 / 3.0)
        spec = fourier_spectrum(f)
        dec = efron_stein(f)
        for mask in range(8):
            chi = chi_table(f.domain, mask)
            np.testing.assert_allclose(dec.parts[mask].values,
                                       spec.coeffs[mask] * chi.values, atol=1e-11)

    def test_level1_shortcut(self):
        f = random_table(3, 2, 18, p=0.4)
        spec = fourier_spectrum(f)
        np.testing.assert_allclose(level1_coefficients(f),
                                   [spec.coeffs[1], spec.coeffs[2], spec.coeffs[4]],
                                   atol=1e-13)

    def test_requires_two_point_space(self):
        with pytest.raises(UnsupportedError):
            fourier_spectrum(random_table(2, 3, 19))


def test_half_noise_laplacian_identity():
    # sum over all S of ||L_S T_{1/sqrt 2} f||_2^2 recovers ||f||_2^2
    f = random_table(4, 2, 20, p=1.0 / 3.0)
    tf = noise_resample(f, 1.0 / math.sqrt(2.0))
    total = math.fsum(inner_product(laplacian_L(tf, mask), laplacian_L(tf, mask))
                      for mask in range(16))
    assert total == pytest.approx(inner_product(f, f), abs=1e-11)
