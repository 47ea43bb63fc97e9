import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cstardyn.core import is_psd
from cstardyn.cyclic_examples import (
    matrix_unit_family,
    matrix_unit_target,
    omega_example_rep,
    omega_example_vectors,
    omega_matrix_unit_coefficient,
    omega_system,
    sigma_example_rep,
    sigma_matrix_unit_coefficient,
    sigma_system,
    verify_matrix_units,
)
from cstardyn.equivrep import regular_rep, slot_embed, tensor_rep, trivial_rep
from cstardyn.generators import (
    random_equivariant_rep,
    random_multiplier_suite,
    random_vector,
    standard_systems,
)
from cstardyn.hilbmod import ModuleVector
from cstardyn.multiplier import (
    Multiplier,
    coefficient,
    evaluate_sample_witness,
    from_group_function,
    group_function_is_positive_definite,
    is_positive_definite,
    multiplier_distance,
    multiply,
    norm_bounds,
    pd_sample_oracle,
    realize_via_regular,
    span_dimension,
    trace_image_sample,
    truncate_realization,
    unit_multiplier,
    zero_multiplier,
)


class TestCoefficient:
    def test_trivial_rep_unit_vector(self, z3_cycle):
        rep = trivial_rep(z3_cycle)
        one = ModuleVector(rep.module, tuple(np.ones(1) for _ in range(3)))
        t = coefficient(rep, one, one)
        for g in range(3):
            assert np.allclose(t.mats[g], np.eye(3))

    @pytest.mark.parametrize("n", [2, 3])
    def test_omega_matrix_units(self, n):
        for k in range(n):
            for l in range(n):
                for p in range(n):
                    t = omega_matrix_unit_coefficient(n, k, l, p)
                    target = matrix_unit_target(omega_system(n), k, l, p)
                    assert multiplier_distance(t, target) == 0.0

    @pytest.mark.parametrize("n", [2, 3])
    def test_sigma_matrix_units(self, n):
        for k in range(n):
            for l in range(n):
                for p in range(n):
                    t = sigma_matrix_unit_coefficient(n, k, l, p)
                    target = matrix_unit_target(sigma_system(n), k, l, p)
                    assert multiplier_distance(t, target) == 0.0

    def test_module_mismatch(self, z2_flip):
        rep = trivial_rep(z2_flip)
        other = sigma_example_rep(2)
        xi = ModuleVector(other.module, tuple(np.ones(2) for _ in range(2)))
        with pytest.raises(ValueError):
            coefficient(rep, xi, xi)


class TestIsPositiveDefinite:
    def test_unit_multiplier(self, z2_trivial, z2_flip, z3_cycle):
        for system in (z2_trivial, z2_flip, z3_cycle):
            cert = is_positive_definite(unit_multiplier(system))
            assert cert.verdict and cert.min_eigenvalue >= -1e-12

    def test_off_diagonal_false(self, z2_trivial):
        t = Multiplier(z2_trivial, (np.zeros((2, 2)), np.eye(2)))
        cert = is_positive_definite(t)
        assert not cert.verdict
        assert cert.point is not None and cert.basis is not None

    def test_sign_multiplier_true(self, z2_trivial):
        t = Multiplier(z2_trivial, (np.eye(2), -np.eye(2)))
        assert is_positive_definite(t).verdict

    def test_agrees_with_sample_oracle(self, rng):
        for name, system in standard_systems().items():
            for t in random_multiplier_suite(system, 10, rng):
                criterion = is_positive_definite(t).verdict
                sampled = pd_sample_oracle(t, trials=400, seed=7).verdict
                assert criterion == sampled, name


class TestPdSampleOracle:
    def test_unit_clean(self, z2_flip):
        cert = pd_sample_oracle(unit_multiplier(z2_flip), trials=1000, seed=42)
        assert cert.verdict

    def test_violation_found_with_witness(self, z2_trivial):
        t = Multiplier(z2_trivial, (np.zeros((2, 2)), np.eye(2)))
        cert = pd_sample_oracle(t, trials=1000, seed=42)
        assert not cert.verdict
        m = evaluate_sample_witness(t, cert)
        herm = (m + m.conj().T) / 2
        defect = np.abs(m - m.conj().T).max()
        assert defect > 1e-9 or np.linalg.eigvalsh(herm).min() < -1e-9

    def test_diagonal_coefficients_clean(self, z3_cycle, rng):
        for _ in range(3):
            rep = random_equivariant_rep(z3_cycle, rng, max_dim=2)
            xi = random_vector(rep.module, rng)
            t = coefficient(rep, xi, xi)
            assert pd_sample_oracle(t, trials=300, seed=1).verdict

    def test_trials_validated(self, z2_flip):
        with pytest.raises(ValueError):
            pd_sample_oracle(unit_multiplier(z2_flip), trials=0)


class TestMultiply:
    def test_unit_is_identity(self, z2_flip, rng):
        t = Multiplier(z2_flip, tuple(rng.normal(size=(2, 2)) for _ in range(2)))
        assert multiplier_distance(multiply(t, unit_multiplier(z2_flip)), t) == 0.0

    def test_matrix_units_compose(self):
        n, p = 2, 1
        sys_ = omega_system(n)
        t_kl = matrix_unit_target(sys_, 0, 1, p)
        t_lq = matrix_unit_target(sys_, 1, 0, p)
        prod = multiply(t_kl, t_lq)
        assert multiplier_distance(prod, matrix_unit_target(sys_, 0, 0, p)) == 0.0

    def test_tensor_coefficient_fixes_order(self, z2_flip, rng):
        """coefficient(tensor(r1, r2)) equals multiply(coeff2, coeff1):
        the second factor's map is applied after the first's."""
        r1 = sigma_example_rep(2)
        r2 = trivial_rep(z2_flip)
        x1, y1 = random_vector(r1.module, rng), random_vector(r1.module, rng)
        x2, y2 = random_vector(r2.module, rng), random_vector(r2.module, rng)
        t1 = coefficient(r1, x1, y1)
        t2 = coefficient(r2, x2, y2)
        rt, tp = tensor_rep(r1, r2)
        tt = coefficient(rt, tp.embed(x1, x2), tp.embed(y1, y2))
        assert multiplier_distance(tt, multiply(t2, t1)) <= 1e-12
        assert multiplier_distance(tt, multiply(t1, t2)) > 1e-3  # order matters

    def test_support_ideal_property(self, z3_cycle, rng):
        suite = random_multiplier_suite(z3_cycle, 6, rng)
        for t, s in zip(suite[::2], suite[1::2]):
            prod_support = set(multiply(t, s).support())
            assert prod_support <= (set(t.support()) & set(s.support()))

    def test_system_mismatch(self, z2_flip, z2_trivial):
        with pytest.raises(ValueError):
            multiply(unit_multiplier(z2_flip), unit_multiplier(z2_trivial))


class TestNormBounds:
    def test_unit_via_trivial_rep(self, z2_flip):
        rep = trivial_rep(z2_flip)
        one = ModuleVector(rep.module, tuple(np.ones(1) for _ in range(2)))
        b = norm_bounds(unit_multiplier(z2_flip), [(rep, one, one)])
        assert b.lower == pytest.approx(1.0)
        assert b.upper == pytest.approx(1.0)

    def test_delta_e_via_regular(self, z2_flip):
        base = trivial_rep(z2_flip)
        reg = regular_rep(base)
        one = ModuleVector(base.module, tuple(np.ones(1) for _ in range(2)))
        xi = slot_embed(reg, 0, one)
        t = coefficient(reg, xi, xi)
        b = norm_bounds(t, [(reg, xi, xi)])
        assert b.lower == pytest.approx(1.0) and b.upper == pytest.approx(1.0)

    def test_matrix_unit_bounds(self):
        n, k, l, p = 2, 0, 1, 1
        rep = omega_example_rep(n, k, l)
        x, y = omega_example_vectors(n, k, p)
        t = omega_matrix_unit_coefficient(n, k, l, p)
        b = norm_bounds(t, [(rep, x, y)])
        assert b.lower == pytest.approx(1.0) and b.upper == pytest.approx(1.0)

    def test_empty_realizations_give_infinite_upper(self, z2_flip):
        b = norm_bounds(unit_multiplier(z2_flip))
        assert b.lower == pytest.approx(1.0) and math.isinf(b.upper)

    def test_non_realizing_triple_rejected(self, z2_flip):
        rep = trivial_rep(z2_flip)
        one = ModuleVector(rep.module, tuple(np.ones(1) for _ in range(2)))
        t = 2.0 * unit_multiplier(z2_flip)
        with pytest.raises(ValueError, match="triple 0"):
            norm_bounds(t, [(rep, one, one)])

    def test_contractive_group_embedding(self, z3_cycle, rng):
        for _ in range(10):
            mu = rng.normal(size=3) + 1j * rng.normal(size=3)
            mu /= max(1.0, np.abs(mu).max())
            b = norm_bounds(from_group_function(z3_cycle, mu))
            assert b.lower <= 1.0 + 1e-12


class TestTruncateRealization:
    def test_full_slots_no_truncation(self, z2_flip, rng):
        reg = regular_rep(trivial_rep(z2_flip))
        xi, eta = random_vector(reg.module, rng), random_vector(reg.module, rng)
        t_eps, bounds = truncate_realization(reg, xi, eta, [0, 1], [0, 1])
        assert multiplier_distance(t_eps, coefficient(reg, xi, eta)) == 0.0
        assert bounds.upper == pytest.approx(0.0)

    def test_already_supported_vectors(self, z2_flip):
        base = trivial_rep(z2_flip)
        reg = regular_rep(base)
        one = ModuleVector(base.module, tuple(np.ones(1) for _ in range(2)))
        xi = slot_embed(reg, 0, one)
        t_eps, bounds = truncate_realization(reg, xi, xi, [0], [0])
        assert multiplier_distance(t_eps, coefficient(reg, xi, xi)) == 0.0
        assert bounds.upper == pytest.approx(0.0)

    def test_bound_dominates_truth(self, z2_flip, rng):
        reg = regular_rep(trivial_rep(z2_flip))
        for _ in range(10):
            xi, eta = random_vector(reg.module, rng), random_vector(reg.module, rng)
            _, bounds = truncate_realization(reg, xi, eta, [0], [0])
            assert bounds.lower <= bounds.upper + 1e-12

    def test_requires_amplified_rep(self, z2_flip, rng):
        rep = trivial_rep(z2_flip)
        xi = random_vector(rep.module, rng)
        with pytest.raises(ValueError, match="amplified"):
            truncate_realization(rep, xi, xi, [0], [0])


class TestRealizeViaRegular:
    def test_unit_multiplier(self, z2_flip):
        rep = trivial_rep(z2_flip)
        one = ModuleVector(rep.module, tuple(np.ones(1) for _ in range(2)))
        t = unit_multiplier(z2_flip)
        reg, xi_s, eta_e = realize_via_regular(t, rep, one, one)
        assert multiplier_distance(coefficient(reg, xi_s, eta_e), t) == 0.0

    def test_matrix_unit(self):
        n, k, l, p = 2, 1, 0, 1
        rep = omega_example_rep(n, k, l)
        x, y = omega_example_vectors(n, k, p)
        t = omega_matrix_unit_coefficient(n, k, l, p)
        reg, xi_s, eta_e = realize_via_regular(t, rep, x, y)
        assert multiplier_distance(coefficient(reg, xi_s, eta_e), t) == 0.0

    def test_random_coefficients_exact(self, z3_cycle, rng):
        for _ in range(5):
            rep = random_equivariant_rep(z3_cycle, rng, max_dim=2)
            xi, eta = random_vector(rep.module, rng), random_vector(rep.module, rng)
            t = coefficient(rep, xi, eta)
            if not t.support():
                continue
            reg, xi_s, eta_e = realize_via_regular(t, rep, xi, eta)
            assert multiplier_distance(coefficient(reg, xi_s, eta_e), t) <= 1e-12

    def test_zero_multiplier_rejected(self, z2_flip):
        rep = trivial_rep(z2_flip)
        zero = ModuleVector(rep.module, tuple(np.zeros(1) for _ in range(2)))
        with pytest.raises(ValueError, match="support"):
            realize_via_regular(zero_multiplier(z2_flip), rep, zero, zero)


class TestFromGroupFunction:
    def test_constant_one_is_unit(self, z2_flip):
        t = from_group_function(z2_flip, [1.0, 1.0])
        assert multiplier_distance(t, unit_multiplier(z2_flip)) == 0.0
        assert is_positive_definite(t).verdict

    def test_sign_character(self, z2_flip):
        assert group_function_is_positive_definite(z2_flip, [1.0, -1.0])
        assert is_positive_definite(from_group_function(z2_flip, [1.0, -1.0])).verdict

    def test_unbalanced_function_not_pd(self, z2_flip):
        assert not group_function_is_positive_definite(z2_flip, [1.0, 2.0])
        assert not is_positive_definite(from_group_function(z2_flip, [1.0, 2.0])).verdict

    def test_group_pd_transfers(self, z3_cycle, rng):
        for _ in range(10):
            mu = rng.normal(size=3) + 1j * rng.normal(size=3)
            t = from_group_function(z3_cycle, mu)
            assert group_function_is_positive_definite(z3_cycle, mu) == is_positive_definite(t).verdict


class TestSpanDimension:
    @pytest.mark.parametrize("kind", ["omega_n", "sigma_n"])
    def test_matrix_unit_families_full_span(self, kind):
        family = matrix_unit_family(kind, 2)
        assert span_dimension(family) == 8

    def test_duplicates_do_not_change_rank(self):
        family = matrix_unit_family("omega_n", 2)
        assert span_dimension(family + family) == 8

    def test_empty(self):
        assert span_dimension([]) == 0


class TestConeStructure:
    def test_sums_and_scalings_stay_pd(self, rng):
        for system in standard_systems().values():
            for _ in range(4):
                r1 = random_equivariant_rep(system, rng, max_dim=2)
                r2 = random_equivariant_rep(system, rng, max_dim=2)
                t1 = coefficient(r1, *(random_vector(r1.module, rng),) * 2)
                t2 = coefficient(r2, *(random_vector(r2.module, rng),) * 2)
                lam = float(rng.random()) * 3.0
                assert is_positive_definite(t1 + t2).verdict
                assert is_positive_definite(lam * t1).verdict


class TestTraceImageSample:
    def test_trivial_action_traces(self):
        samples = trace_image_sample(omega_system(2), 500, seed=3)
        for s in samples:
            assert s.trace1.imag == 0.0
            assert s.trace0.real >= 0.0
            assert s.positive_definite

    def test_trivial_action_negative_real_reached(self):
        samples = trace_image_sample(omega_system(2), 300, seed=5)
        assert any(s.trace1.real < -0.1 for s in samples)

    def test_shift_action_nonreal_found_quickly(self):
        samples = trace_image_sample(sigma_system(2), 100, seed=42)
        assert any(abs(s.trace1.imag) >= 0.5 for s in samples)

    def test_formula_evaluations(self):
        # mixed-sign pattern at xi=(1,0), eta=(0,i): both diagonal entries i
        eps, xi, eta = (1, -1), (1.0, 0.0), (0.0, 1j)
        t1 = np.array(
            [
                [eps[0] * np.conj(xi[0]) * eta[1], eps[1] * np.conj(xi[1]) * eta[0]],
                [eps[0] * np.conj(eta[0]) * xi[1], eps[1] * np.conj(eta[1]) * xi[0]],
            ]
        )
        assert np.trace(t1) == pytest.approx(2j)
        # trivial-action pattern with eps_0 = -1, xi = (1, 0), eta = 0
        t1_triv = np.array([[-1.0 * 1.0, 0.0], [0.0, 0.0]])
        assert np.trace(t1_triv) == pytest.approx(-1.0)

    def test_shift_mixed_sign_patterns_fail_certificate(self):
        """Pins the documented-formula discrepancy: non-real second traces only
        arise from samples that are not positive definite, because the kernel
        condition forces T_1 = F conj(T_1) F and hence a real trace."""
        samples = trace_image_sample(sigma_system(2), 200, seed=42)
        flip = np.array([[0.0, 1.0], [1.0, 0.0]])
        for s in samples:
            t1 = s.multiplier.mats[1]
            pairing_holds = np.allclose(t1, flip @ t1.conj() @ flip, atol=1e-12)
            if abs(s.trace1.imag) > 1e-9:
                assert not s.positive_definite
                assert not pairing_holds
            if s.positive_definite:
                assert abs(s.trace1.imag) <= 1e-12

    def test_genuine_flip_coefficients_have_real_second_trace(self, z2_flip, rng):
        for _ in range(20):
            rep = random_equivariant_rep(z2_flip, rng, max_dim=2)
            xi = random_vector(rep.module, rng)
            t = coefficient(rep, xi, xi)
            assert abs(np.trace(t.mats[1]).imag) <= 1e-9

    def test_unknown_system_rejected(self, z3_cycle):
        with pytest.raises(ValueError):
            trace_image_sample(z3_cycle, 10)


class TestMatrixUnitDeviation:
    @pytest.mark.parametrize("kind", ["omega_n", "sigma_n"])
    @pytest.mark.parametrize("n", [2, 3])
    def test_families_exact(self, kind, n):
        assert verify_matrix_units(kind, n) <= 1e-12


class TestPdCertificateShape:
    def test_success_carries_min_eigenvalue(self, z2_flip):
        cert = is_positive_definite(unit_multiplier(z2_flip))
        assert cert.verdict and cert.eigenvector is None

    def test_failure_witness_reproducible(self, z2_trivial):
        t = Multiplier(z2_trivial, (np.zeros((2, 2)), np.eye(2)))
        cert = is_positive_definite(t)
        assert not cert.verdict
        from cstardyn.multiplier import pd_criterion_matrix

        m = pd_criterion_matrix(t, cert.point, cert.basis)
        assert not is_psd(m)


class TestAlgebraLaws:
    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=15, deadline=None)
    def test_multiply_associative_and_unital(self, seed):
        system = sigma_system(2)
        gen = np.random.default_rng(seed)
        draw = lambda: Multiplier(  # noqa: E731
            system, tuple(gen.normal(size=(2, 2)) + 1j * gen.normal(size=(2, 2)) for _ in range(2))
        )
        t, s, r = draw(), draw(), draw()
        assert multiplier_distance(multiply(multiply(t, s), r), multiply(t, multiply(s, r))) <= 1e-12
        assert multiplier_distance(multiply(unit_multiplier(system), t), t) == 0.0
        assert multiplier_distance(multiply(t, unit_multiplier(system)), t) == 0.0
