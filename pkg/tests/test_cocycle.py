import numpy as np
import pytest

from cstardyn.cocycle import (
    CocycleCompatibilityError,
    CocycleRep,
    EquivariantMap,
    GroupPart,
    NotBanachStoneError,
    banach_stone_extract,
    banach_stone_operator,
    cocycle_equivalent,
    cocycle_to_v,
    equivariant_maps,
    group_part,
    rho_from_sigma,
    v_to_cocycle,
    verify_cocycle,
)
from cstardyn.cyclic_examples import (
    omega_cocycle,
    omega_example_rep,
    omega_system,
    shift_matrix,
    sigma_cocycle,
    sigma_example_rep,
    sigma_system,
)
from cstardyn.equivrep import trivial_rep, verify_equivariant
from cstardyn.generators import random_cocycle, random_unitary
from cstardyn.hilbmod import SectionalModule


def _identity_cocycle(action, dims):
    module = SectionalModule(action.space, dims)
    u = tuple(
        tuple(np.eye(dims[x], dims[action.apply_inv(g, x)], dtype=complex) for x in range(action.space.size))
        for g in range(action.group.order)
    )
    return CocycleRep(action, module, u)


class TestVerifyCocycle:
    def test_shift_cocycle_exact(self):
        for n in (2, 3, 4):
            report = verify_cocycle(sigma_cocycle(n))
            assert report.passed and report.max_residual == 0.0

    def test_identity_cocycle(self, z3_cycle):
        report = verify_cocycle(_identity_cocycle(z3_cycle.action, (2, 2, 2)))
        assert report.passed

    def test_fault_injection(self):
        n = 3
        c = sigma_cocycle(n)
        u = [list(per) for per in c.u]
        u[2] = [shift_matrix(n)] * n  # should be shift^2
        broken = CocycleRep(c.action, c.module, tuple(tuple(p) for p in u))
        report = verify_cocycle(broken)
        assert not report.passed
        assert report.residual_of("cocycle identity") >= 1.0


class TestVToCocycle:
    def test_trivial_rep_flip(self, z2_flip):
        part = group_part(trivial_rep(z2_flip))
        c = v_to_cocycle(part)
        assert np.allclose(c.u[1][0], [[1.0]])
        assert part.src_perm[1][0] == 1

    def test_sigma_example_rep(self):
        for n in (2, 3):
            part = group_part(sigma_example_rep(n))
            c = v_to_cocycle(part)
            assert verify_cocycle(c).passed
            assert np.allclose(c.u[1][0], shift_matrix(n))

    def test_wrong_base_permutation(self):
        rep = sigma_example_rep(2)
        part = group_part(rep)
        bad_src = np.array([[0, 1], [0, 1]], dtype=np.intp)
        with pytest.raises(CocycleCompatibilityError, match="relation \\(iii\\)"):
            v_to_cocycle(GroupPart(part.action, part.module, bad_src, part.mats))

    def test_non_unitary_matrices(self):
        rep = sigma_example_rep(2)
        part = group_part(rep)
        mats = [list(per) for per in part.mats]
        mats[1][0] = 2.0 * mats[1][0]
        with pytest.raises(CocycleCompatibilityError, match="relation \\(ii\\)"):
            v_to_cocycle(GroupPart(part.action, part.module, part.src_perm, tuple(tuple(m) for m in mats)))


class TestCocycleToV:
    def test_identity_cocycle_gives_permutation_operators(self, z3_cycle):
        c = _identity_cocycle(z3_cycle.action, (1, 1, 1))
        part = cocycle_to_v(c)
        for g in range(3):
            for x in range(3):
                assert np.allclose(part.mats[g][x], [[1.0]])

    def test_shift_cocycle_gives_cyclic_shift(self):
        n = 3
        rep = sigma_example_rep(n)
        part = cocycle_to_v(sigma_cocycle(n))
        for g in range(n):
            for x in range(n):
                assert np.array_equal(part.mats[g][x], rep.v_mats[g][x])

    def test_round_trip_exact(self, z3_cycle, rng):
        c = random_cocycle(z3_cycle.action, rng)
        back = v_to_cocycle(cocycle_to_v(c))
        for g in range(3):
            for x in range(3):
                assert np.array_equal(back.u[g][x], c.u[g][x])

    def test_homomorphism_residual(self, z3_cycle, rng):
        c = random_cocycle(z3_cycle.action, rng)
        part = cocycle_to_v(c)
        group = z3_cycle.group
        res = 0.0
        for g in range(3):
            for h in range(3):
                gh = group.mul(g, h)
                for x in range(3):
                    src = z3_cycle.action.apply_inv(g, x)
                    res = max(
                        res,
                        np.abs(
                            part.mats[gh][x] - part.mats[g][x] @ part.mats[h][src]
                        ).max(),
                    )
        assert res <= 1e-12

    def test_invalid_cocycle_rejected(self):
        n = 3
        c = sigma_cocycle(n)
        u = [list(per) for per in c.u]
        u[2] = [shift_matrix(n)] * n
        broken = CocycleRep(c.action, c.module, tuple(tuple(p) for p in u))
        with pytest.raises(ValueError, match="cocycle"):
            cocycle_to_v(broken)


class TestCocycleEquivalence:
    def test_self(self, z3_cycle, rng):
        c = random_cocycle(z3_cycle.action, rng)
        mats = cocycle_equivalent(c, c)
        assert mats is not None

    def test_conjugate_found(self, z3_cycle, rng):
        c = random_cocycle(z3_cycle.action, rng)
        dims = c.module.fiber_dims
        w = [random_unitary(d, rng) for d in dims]
        u2 = tuple(
            tuple(
                w[x] @ c.u[g][x] @ w[z3_cycle.action.apply_inv(g, x)].conj().T
                for x in range(3)
            )
            for g in range(3)
        )
        other = CocycleRep(c.action, c.module, u2)
        mats = cocycle_equivalent(c, other)
        assert mats is not None
        for g in range(3):
            for x in range(3):
                y = z3_cycle.action.apply_inv(g, x)
                assert np.allclose(mats[x] @ c.u[g][x], other.u[g][x] @ mats[y], atol=1e-9)

    def test_distinct_characters_none(self, z2_trivial):
        action = z2_trivial.action
        plus = _identity_cocycle(action, (1, 1))
        u_minus = ((np.eye(1), np.eye(1)), (-np.eye(1), -np.eye(1)))
        minus = CocycleRep(action, plus.module, u_minus)
        assert verify_cocycle(minus).passed
        assert cocycle_equivalent(plus, minus) is None


class TestEquivariantMap:
    def test_identity_always_works(self, z3_cycle):
        EquivariantMap(z3_cycle.action, (0, 1, 2))

    def test_translations_for_free_action(self, z3_cycle):
        maps = equivariant_maps(z3_cycle.action)
        assert len(maps) == 3  # exactly the translations
        for m in maps:
            shift = (m.sigma[0] - 0) % 3
            assert all(m.sigma[x] == (x + shift) % 3 for x in range(3))

    def test_non_equivariant_rejected(self, z3_cycle):
        with pytest.raises(ValueError, match=r"\(g, x\) = \(\d, \d\)"):
            EquivariantMap(z3_cycle.action, (0, 0, 1))


class TestRhoFromSigma:
    def test_identity_map_on_flip_system(self, z2_flip):
        sigma = EquivariantMap(z2_flip.action, (0, 1))
        rep = rho_from_sigma(sigma, sigma_cocycle(2))
        assert verify_equivariant(rep).passed
        # algebra part acts by scalars per fiber: projection onto sigma-preimages
        assert np.allclose(rep.rho[0].blocks[0], np.eye(2))
        assert np.allclose(rep.rho[0].blocks[1], 0)

    def test_constant_map_gives_concentrated_example(self):
        n, k, l = 3, 1, 2
        rep = omega_example_rep(n, k, l)
        assert verify_equivariant(rep).passed
        assert rep.module.fiber_dims == (0, n, 0)
        assert np.allclose(rep.rho[l].blocks[k], np.eye(n))

    def test_translation_map_valid(self):
        n = 4
        system = sigma_system(n)
        sigma = EquivariantMap(system.action, tuple((x + 1) % n for x in range(n)))
        rep = rho_from_sigma(sigma, sigma_cocycle(n))
        assert verify_equivariant(rep).passed

    def test_non_equivariant_map_raises(self, z3_cycle):
        with pytest.raises(ValueError, match="not equivariant"):
            EquivariantMap(z3_cycle.action, (0, 0, 0))


class TestBanachStone:
    def test_identity(self):
        mod = SectionalModule(sigma_system(3).space, (2, 2, 2))
        sigma, u = banach_stone_extract(np.eye(6), mod)
        assert sigma == (0, 1, 2)
        for x in range(3):
            assert np.allclose(u[x], np.eye(2))

    def test_inverts_group_element(self):
        rep = sigma_example_rep(3)
        for g in range(3):
            v = rep.v_full_matrix(g)
            sigma, u = banach_stone_extract(v, rep.module)
            for x in range(3):
                assert sigma[x] == rep.system.action.apply_inv(g, x)
                assert np.allclose(u[x], rep.v_mats[g][x], atol=1e-12)

    def test_inverts_construction(self, rng):
        mod = SectionalModule(omega_system(3).space, (2, 1, 2))
        perm = (2, 1, 0)  # must match dimensions: 2<->2, 1->1
        u = [random_unitary(mod.fiber_dims[x], rng) for x in range(3)]
        v = banach_stone_operator(mod, perm, u)
        sigma, u_back = banach_stone_extract(v, mod)
        assert sigma == perm
        for x in range(3):
            assert np.allclose(u_back[x], u[x], atol=1e-12)

    def test_scaling_rejected(self):
        mod = SectionalModule(omega_system(2).space, (1, 1))
        with pytest.raises(NotBanachStoneError, match="unitary|isometry"):
            banach_stone_extract(2.0 * np.eye(2), mod)

    def test_smeared_support_rejected(self):
        mod = SectionalModule(omega_system(2).space, (1, 1))
        smeared = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)
        with pytest.raises(NotBanachStoneError, match="single point"):
            banach_stone_extract(smeared, mod)

    def test_zero_dim_fibers(self):
        mod = SectionalModule(omega_system(3).space, (0, 2, 0))
        v = np.eye(2)
        sigma, u = banach_stone_extract(v, mod)
        assert sigma[1] == 1
        assert sorted((sigma[0], sigma[2])) == [0, 2]


class TestOmegaCocycle:
    def test_concentrated_shift_cocycle(self):
        c = omega_cocycle(3, 1)
        assert verify_cocycle(c).passed
        assert c.u[1][1].shape == (3, 3)
        assert c.u[1][0].shape == (0, 0)


class TestHomomorphismIffCocycle:
    """The induced maps multiply like the group exactly when the cocycle
    identity holds; a broken cocycle breaks the homomorphism law."""

    @staticmethod
    def _v_matrix(action, module, u, g):
        dims = module.fiber_dims
        off = module.offsets()
        total = module.total_dim
        out = np.zeros((total, total), dtype=complex)
        for x in range(action.space.size):
            src = action.apply_inv(g, x)
            out[off[x] : off[x] + dims[x], off[src] : off[src] + dims[src]] = u[g][x]
        return out

    def test_valid_cocycle_gives_homomorphism(self, z3_cycle, rng):
        c = random_cocycle(z3_cycle.action, rng)
        mats = [self._v_matrix(z3_cycle.action, c.module, c.u, g) for g in range(3)]
        for g in range(3):
            for h in range(3):
                gh = z3_cycle.group.mul(g, h)
                assert np.abs(mats[gh] - mats[g] @ mats[h]).max() <= 1e-12

    def test_broken_cocycle_breaks_homomorphism(self):
        n = 3
        c = sigma_cocycle(n)
        u = [list(per) for per in c.u]
        u[2] = [shift_matrix(n)] * n  # injected fault: should be shift^2
        broken = tuple(tuple(p) for p in u)
        assert not verify_cocycle(CocycleRep(c.action, c.module, broken)).passed
        action = c.action
        mats = [self._v_matrix(action, c.module, broken, g) for g in range(n)]
        residual = max(
            np.abs(mats[action.group.mul(g, h)] - mats[g] @ mats[h]).max()
            for g in range(n)
            for h in range(n)
        )
        assert residual >= 1.0
