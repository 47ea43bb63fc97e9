import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cstardyn.core import (
    FiniteGroup,
    GroupAction,
    FiniteSpace,
    act_on_algebra,
    cyclic_group,
    cyclic_shift_action,
    direct_product,
    is_psd,
    psd_certificate,
    symmetric_group,
    trivial_action,
)


class TestFiniteGroup:
    def test_trivial_group(self):
        g = cyclic_group(1)
        assert g.order == 1
        assert g.mult.tolist() == [[0]]

    def test_order_two_table(self):
        g = cyclic_group(2)
        assert g.mul(1, 1) == 0

    def test_modular_addition(self):
        g = cyclic_group(4)
        assert g.mul(3, 2) == 1

    def test_zero_order_rejected(self):
        with pytest.raises(ValueError):
            cyclic_group(0)

    @pytest.mark.parametrize("n", range(1, 13))
    def test_cyclic_axioms_exhaustive(self, n):
        g = cyclic_group(n)  # construction scans associativity/identity/inverses
        assert g.identity == 0
        for a in g.elements():
            assert g.mul(a, g.inv(a)) == g.identity

    def test_symmetric_group_and_product(self):
        s3 = symmetric_group(3)
        assert s3.order == 6
        prod = direct_product(cyclic_group(2), cyclic_group(3))
        assert prod.order == 6
        # Z_2 x Z_3 is abelian, S_3 is not
        assert any(s3.mul(a, b) != s3.mul(b, a) for a in s3.elements() for b in s3.elements())
        assert all(
            prod.mul(a, b) == prod.mul(b, a) for a in prod.elements() for b in prod.elements()
        )

    def test_broken_table_rejected(self):
        bad = np.array([[0, 1], [1, 1]])
        with pytest.raises(ValueError):
            FiniteGroup(2, bad)


class TestGroupAction:
    def test_non_homomorphism_rejected(self):
        g = cyclic_group(2)
        with pytest.raises(ValueError, match="identity"):
            GroupAction(g, FiniteSpace(2), np.array([[1, 0], [0, 1]]))

    def test_act_trivial_fixes(self):
        act = trivial_action(cyclic_group(3), 2)
        a = np.array([1.0, 2.0j])
        for g in range(3):
            assert np.array_equal(act_on_algebra(act, g, a), a)

    def test_act_flip(self):
        act = cyclic_shift_action(2)
        assert np.allclose(act_on_algebra(act, 1, np.array([1.0, 5.0])), [5.0, 1.0])

    def test_act_cycle(self):
        act = cyclic_shift_action(3)
        assert np.allclose(act_on_algebra(act, 1, np.array([7.0, 8.0, 9.0])), [9.0, 7.0, 8.0])

    def test_length_mismatch(self):
        act = cyclic_shift_action(2)
        with pytest.raises(ValueError):
            act_on_algebra(act, 0, np.array([1.0, 2.0, 3.0]))

    @given(st.integers(2, 6), st.data())
    @settings(max_examples=25, deadline=None)
    def test_action_is_multiplicative(self, n, data):
        act = cyclic_shift_action(n)
        g = data.draw(st.integers(0, n - 1))
        h = data.draw(st.integers(0, n - 1))
        a = np.array(data.draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n)), dtype=complex)
        lhs = act_on_algebra(act, g, act_on_algebra(act, h, a))
        rhs = act_on_algebra(act, act.group.mul(g, h), a)
        assert np.array_equal(lhs, rhs)

    @given(st.integers(2, 5), st.data())
    @settings(max_examples=25, deadline=None)
    def test_action_preserves_norm_and_product(self, n, data):
        act = cyclic_shift_action(n)
        g = data.draw(st.integers(0, n - 1))
        draw_vec = lambda: np.array(  # noqa: E731
            data.draw(st.lists(st.integers(-4, 4), min_size=n, max_size=n)), dtype=complex
        )
        a, b = draw_vec(), draw_vec()
        assert np.abs(act_on_algebra(act, g, a)).max(initial=0) == np.abs(a).max(initial=0)
        lhs = act_on_algebra(act, g, a * b)
        rhs = act_on_algebra(act, g, a) * act_on_algebra(act, g, b)
        assert np.array_equal(lhs, rhs)


def _charpoly_eigs(m: np.ndarray) -> np.ndarray:
    """Independent eigenvalue oracle: roots of the characteristic polynomial
    assembled from trace and determinant identities (sizes up to 3)."""
    d = m.shape[0]
    if d == 1:
        return np.array([m[0, 0]])
    t = np.trace(m)
    if d == 2:
        det = np.linalg.det(m)
        return np.roots([1.0, -t, det])
    t2 = np.trace(m @ m)
    det = np.linalg.det(m)
    c2 = (t * t - t2) / 2.0
    return np.roots([1.0, -t, c2, -det])


class TestIsPsd:
    def test_simple_true(self):
        assert is_psd(np.array([[2.0, 1.0], [1.0, 2.0]]))

    def test_simple_false(self):
        assert not is_psd(np.array([[0.0, 1.0], [1.0, 0.0]]))

    def test_gram_matrices(self, rng):
        for _ in range(20):
            d = int(rng.integers(1, 5))
            b = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            assert is_psd(b.conj().T @ b)

    def test_zero_matrix_exact(self):
        assert is_psd(np.zeros((3, 3)), tol=0.0)

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            is_psd(np.zeros((2, 3)))

    def test_nan_rejected(self):
        m = np.full((2, 2), np.nan)
        with pytest.raises(ValueError):
            is_psd(m)

    def test_non_hermitian_rejected(self):
        verdict, mineig = psd_certificate(np.array([[1.0, 1.0], [0.0, 1.0]]))
        assert not verdict and mineig == -np.inf

    def test_agrees_with_charpoly_oracle(self, rng):
        for _ in range(60):
            d = int(rng.integers(1, 4))
            a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            h = (a + a.conj().T) / 2
            roots = np.sort(_charpoly_eigs(h).real)
            oracle = roots[0] >= -1e-9 * (1 + np.abs(h).max())
            assert is_psd(h) == oracle
