import math

import numpy as np
import pytest

from carpetdim import (CarpetSpec, ConstructionOptions, binary_entropy,
                       curvature, gap_g, majorant_F, objective_f,
                       objective_f_prime, pressure_bernoulli, shannon_entropy,
                       synthesize, uniform_conditional_weights)


class TestBinaryEntropy:
    def test_endpoints_are_zero(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_maximum_at_half(self):
        assert binary_entropy(0.5) == pytest.approx(math.log(2.0), abs=1e-15)

    def test_one_third_closed_form(self):
        expected = math.log(3.0) - (2.0 / 3.0) * math.log(2.0)
        assert binary_entropy(1.0 / 3.0) == pytest.approx(expected, abs=1e-12)
        # direct-summation oracle: H(1/3) = (1/3) log 3 + (2/3) log(3/2)
        direct = (1.0 / 3.0) * math.log(3.0) + (2.0 / 3.0) * math.log(1.5)
        assert binary_entropy(1.0 / 3.0) == pytest.approx(direct, abs=1e-12)

    def test_symmetry_on_grid_and_random(self):
        xs = np.linspace(0.0, 1.0, 2001)
        assert np.allclose(binary_entropy(xs), binary_entropy(1.0 - xs), atol=1e-13)
        rng = np.random.default_rng(11)
        for x in rng.random(500):
            assert binary_entropy(x) == pytest.approx(binary_entropy(1.0 - x), abs=1e-13)

    def test_bounds(self):
        xs = np.linspace(0.0, 1.0, 4001)
        h = binary_entropy(xs)
        assert np.all(h >= 0.0)
        assert np.all(h <= math.log(2.0) + 1e-15)

    @pytest.mark.parametrize("bad", [-0.1, 1.1, 2.0, -1e-9])
    def test_domain_error(self, bad):
        with pytest.raises(ValueError):
            binary_entropy(bad)

    def test_vectorized_matches_scalar(self):
        xs = np.array([0.0, 0.25, 0.5, 0.9, 1.0])
        vec = binary_entropy(xs)
        assert vec.shape == xs.shape
        for x, v in zip(xs, vec):
            assert binary_entropy(float(x)) == v


class TestShannonEntropy:
    def test_deterministic_vector(self):
        assert shannon_entropy([1.0, 0.0, 0.0]) == 0.0

    def test_matches_binary(self):
        assert shannon_entropy([0.5, 0.5]) == pytest.approx(binary_entropy(0.5), abs=1e-15)

    def test_uniform_four(self):
        assert shannon_entropy([0.25] * 4) == pytest.approx(math.log(4.0), abs=1e-14)

    def test_rejects_negative_and_bad_sum(self):
        with pytest.raises(ValueError):
            shannon_entropy([0.5, 0.6, -0.1])
        with pytest.raises(ValueError):
            shannon_entropy([0.5, 0.6])


class TestObjective:
    def test_at_zero(self, canonical_spec):
        # ell_b = 1 kills the linear term and H(0) = 0 kills the ratio
        assert objective_f(0.0, canonical_spec) == 0.0

    def test_at_one_is_log_ell_a_over_lambda(self, canonical_spec):
        expected = math.log(150.0) / canonical_spec.lam
        assert objective_f(1.0, canonical_spec) == pytest.approx(expected, abs=1e-15)
        assert expected == pytest.approx(0.16182292, abs=5e-7)

    def test_at_one_third_matches_dense_grid_max(self, canonical_spec):
        xs = np.linspace(0.0, 1.0, 1_000_001)
        grid_max = objective_f(xs, canonical_spec).max()
        assert objective_f(1.0 / 3.0, canonical_spec) == pytest.approx(grid_max, abs=1e-10)
        assert objective_f(1.0 / 3.0, canonical_spec) == pytest.approx(0.1744160, abs=5e-7)

    def test_derivative_matches_finite_differences(self, canonical_spec, small_spec):
        step = 1e-6
        for spec in (canonical_spec, small_spec):
            for x in np.linspace(0.01, 0.99, 197):
                fd = (objective_f(x + step, spec) - objective_f(x - step, spec)) / (2 * step)
                assert objective_f_prime(x, spec) == pytest.approx(fd, abs=1e-5)


class TestGap:
    def test_at_zero_is_minus_m(self, canonical_consts):
        expected = -(canonical_consts.a_param - canonical_consts.b_param / 4.0)
        assert gap_g(0.0, canonical_consts) == pytest.approx(expected, abs=1e-15)
        assert gap_g(0.0, canonical_consts) == pytest.approx(-0.1744160, abs=5e-7)

    def test_vanishes_at_one_third(self, canonical_consts):
        assert abs(gap_g(1.0 / 3.0, canonical_consts)) < 1e-10

    def test_strictly_negative_at_half(self, canonical_consts):
        assert gap_g(0.5, canonical_consts) < -1e-4

    def test_objective_minus_gap_is_constant(self, canonical):
        spec, consts, _ = canonical
        expected = consts.m_param + math.log(spec.ell_b) / spec.lam
        xs = np.linspace(0.0, 1.0, 1001)
        diff = objective_f(xs, spec) - gap_g(xs, consts)
        assert np.all(np.abs(diff - expected) < 1e-12)


class TestMajorant:
    def test_vertex(self):
        assert majorant_F(0.5, 1.0, 2.0) == 1.0

    def test_direct_arithmetic(self):
        assert majorant_F(0.0, 1.0, 2.0) == pytest.approx(0.5, abs=1e-15)

    def test_touches_entropy_at_one_third(self, canonical_consts):
        f13 = majorant_F(1.0 / 3.0, canonical_consts.a_param, canonical_consts.b_param)
        assert f13 == pytest.approx(binary_entropy(1.0 / 3.0), abs=1e-10)

    def test_polynomial_identity_random_constructions(self):
        # -(Ux - M)(1 + Vx) == A - B(x - 1/2)^2, checked coefficientwise and
        # at x in {0, 1/2, 1}, for constants produced by the pipeline
        rng = np.random.default_rng(23)
        opts = ConstructionOptions(alphabet_strategy="minimal")
        for b in 2.05 + rng.random(25) * 1.95:
            _, c, _ = synthesize(b, opts)
            assert abs(c.u_param * c.v_param - c.b_param) < 1e-12
            assert abs(c.m_param * c.v_param - c.u_param - c.b_param) < 1e-12
            assert abs(c.m_param - (c.a_param - c.b_param / 4.0)) < 1e-12
            for x in (0.0, 0.5, 1.0):
                lhs = -(c.u_param * x - c.m_param) * (1.0 + c.v_param * x)
                rhs = majorant_F(x, c.a_param, c.b_param)
                assert abs(lhs - rhs) < 1e-12


class TestCurvature:
    def test_entropy_value_at_half(self):
        assert curvature(-4.0, 0.0) == 4.0

    @pytest.mark.parametrize("b", np.linspace(2.05, 9.0, 20).tolist())
    def test_majorant_value_at_half(self, b):
        assert curvature(-2.0 * b, 0.0) == 2.0 * b

    def test_straight_line(self):
        assert curvature(0.0, 123.4) == 0.0


class TestPressure:
    def test_uniform_closed_form(self, small_spec):
        p = np.full(5, 0.2)
        x = 0.6
        h_marg = binary_entropy(x)
        expected = (math.log(5.0) - h_marg) / small_spec.lam + h_marg / (
            small_spec.psi_a * x + small_spec.psi_b * (1 - x))
        assert pressure_bernoulli(p, small_spec) == pytest.approx(expected, abs=1e-13)

    def test_uniform_conditionals_match_objective(self, small_spec):
        for x in (0.0, 0.17, 0.5, 0.83, 1.0):
            p = uniform_conditional_weights(small_spec, x)
            assert pressure_bernoulli(p, small_spec) == pytest.approx(
                objective_f(x, small_spec), abs=1e-12)

    def test_point_mass_on_one_a_symbol(self, small_spec):
        p = np.array([1.0, 0.0, 0.0, 0.0, 0.0])
        assert pressure_bernoulli(p, small_spec) == 0.0
        # non-uniform conditionals lose value: the marginal x = 1 optimum is higher
        assert objective_f(1.0, small_spec) > 0.0

    def test_dimension_mismatch(self, small_spec):
        with pytest.raises(ValueError):
            pressure_bernoulli(np.full(4, 0.25), small_spec)

    def test_never_exceeds_reduced_objective(self, small_spec):
        rng = np.random.default_rng(5)
        for _ in range(300):
            p = rng.dirichlet(np.ones(5))
            x = p[:3].sum()
            assert pressure_bernoulli(p, small_spec) <= objective_f(x, small_spec) + 1e-12


class TestSpecValidation:
    def test_rejects_lambda_below_psi(self):
        with pytest.raises(ValueError):
            CarpetSpec(lam=1.0, ell_a=2, ell_b=1, psi_a=2.0, psi_b=1.0)
        with pytest.raises(ValueError):
            CarpetSpec(lam=math.log(2.0), ell_a=1, ell_b=1,
                       psi_a=math.log(2.0), psi_b=math.log(2.0))

    def test_rejects_bad_counts_and_contractions(self):
        with pytest.raises(ValueError):
            CarpetSpec(lam=2.0, ell_a=0, ell_b=1, psi_a=1.0, psi_b=1.0)
        with pytest.raises(ValueError):
            CarpetSpec(lam=2.0, ell_a=1, ell_b=1, psi_a=-1.0, psi_b=1.0)

    def test_weights_helper(self, small_spec):
        w = uniform_conditional_weights(small_spec, 0.3)
        assert w.shape == (5,)
        assert w.sum() == pytest.approx(1.0, abs=1e-15)
        assert np.allclose(w[:3], 0.1)
        assert np.allclose(w[3:], 0.35)
        with pytest.raises(ValueError):
            uniform_conditional_weights(small_spec, 1.2)
