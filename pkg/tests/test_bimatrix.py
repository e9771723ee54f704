"""Bimatrix algebra against the embedding oracle."""

import numpy as np
import pytest

from cvlqr import (
    Bimatrix,
    HermitianBimatrix,
    SingularBimatrixError,
    StructureViolationError,
    bnorm,
    psd_leq,
)
from tests.conftest import crandn


def random_bimatrix(rng, n, p):
    return Bimatrix(crandn(rng, n, p), crandn(rng, n, p))


class TestEmbed:
    def test_identity(self):
        e = Bimatrix.identity(2).embed()
        assert np.array_equal(e, np.eye(4))

    def test_scalar_conjugation_block_pattern(self):
        a = 2.0 + 3.0j
        e = Bimatrix([[0]], [[a]]).embed()
        expected = np.array([[0, np.conj(a)], [a, 0]])
        assert np.array_equal(e, expected)

    def test_product_homomorphism_2x2(self, rng):
        for _ in range(20):
            x = random_bimatrix(rng, 2, 2)
            y = random_bimatrix(rng, 2, 2)
            lhs = (x @ y).embed()
            rhs = x.embed() @ y.embed()
            assert np.abs(lhs - rhs).max() < 1e-12

    def test_homomorphism_rectangular(self, rng):
        # add / multiply / adjoint / inverse all commute with embedding
        for _ in range(30):
            n, p, q = rng.integers(1, 6, size=3)
            x = random_bimatrix(rng, n, p)
            y = random_bimatrix(rng, p, q)
            z = random_bimatrix(rng, n, p)
            assert np.abs((x @ y).embed() - x.embed() @ y.embed()).max() < 1e-11
            assert np.abs((x + z).embed() - (x.embed() + z.embed())).max() < 1e-11
            assert np.abs(x.H.embed() - x.embed().conj().T).max() < 1e-11
        for _ in range(20):
            n = int(rng.integers(1, 6))
            x = random_bimatrix(rng, n, n) + 2 * Bimatrix.identity(n)
            assert np.abs(x.inverse().embed() - np.linalg.inv(x.embed())).max() < 1e-11

    def test_from_embedding_roundtrip(self, rng):
        x = random_bimatrix(rng, 3, 2)
        y = Bimatrix.from_embedding(x.embed())
        assert np.abs(y.m1 - x.m1).max() < 1e-15
        assert np.abs(y.m2 - x.m2).max() < 1e-15


class TestApply:
    def test_identity(self, rng):
        x = crandn(rng, 3)
        assert np.array_equal(Bimatrix.identity(3).apply(x), x)

    def test_pure_conjugation(self):
        out = Bimatrix([[0]], [[1]]).apply(np.array([1 + 1j]))
        assert out[0] == 1 - 1j

    def test_matches_embedding_route(self, rng):
        x = random_bimatrix(rng, 3, 3)
        v = crandn(rng, 3)
        stacked = x.embed() @ np.concatenate([v, v.conj()])
        assert np.abs(x.apply(v) - stacked[:3]).max() < 1e-14

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError):
            random_bimatrix(rng, 2, 3).apply(np.ones(2))


class TestMultiply:
    def test_identity_neutral(self, rng):
        b = random_bimatrix(rng, 2, 2)
        out = Bimatrix.identity(2) @ b
        assert np.abs(out.m1 - b.m1).max() < 1e-15
        assert np.abs(out.m2 - b.m2).max() < 1e-15

    def test_antilinear_composition_is_linear(self):
        a, b = 1.5 - 2j, 0.5 + 1j
        out = Bimatrix([[0]], [[a]]) @ Bimatrix([[0]], [[b]])
        assert abs(out.m1[0, 0] - np.conj(a) * b) < 1e-15
        assert abs(out.m2[0, 0]) == 0

    def test_action_composition(self, rng):
        for _ in range(100):
            n, p, q = rng.integers(1, 5, size=3)
            x = random_bimatrix(rng, n, p)
            y = random_bimatrix(rng, p, q)
            v = crandn(rng, q)
            assert np.abs((x @ y).apply(v) - x.apply(y.apply(v))).max() < 1e-11

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError):
            random_bimatrix(rng, 2, 3) @ random_bimatrix(rng, 2, 3)


class TestConjTranspose:
    def test_identity(self):
        h = Bimatrix.identity(2).H
        assert np.array_equal(h.m1, np.eye(2))
        assert np.array_equal(h.m2, np.zeros((2, 2)))

    def test_scalar(self):
        a, b = 1 + 2j, 3 - 1j
        h = Bimatrix([[a]], [[b]]).H
        assert h.m1[0, 0] == np.conj(a)
        assert h.m2[0, 0] == b  # 1x1 transpose leaves the value

    def test_embedding_adjoint(self, rng):
        x = random_bimatrix(rng, 2, 3)
        assert np.abs(x.H.embed() - x.embed().conj().T).max() < 1e-14

    def test_involution(self, rng):
        x = random_bimatrix(rng, 3, 2)
        y = x.H.H
        assert np.abs(y.m1 - x.m1).max() == 0
        assert np.abs(y.m2 - x.m2).max() == 0


class TestInverse:
    def test_block_diagonal(self, rng):
        a1 = crandn(rng, 3, 3) + 3 * np.eye(3)
        inv = Bimatrix(a1, np.zeros((3, 3))).inverse()
        assert np.abs(inv.m1 - np.linalg.inv(a1)).max() < 1e-11
        assert np.abs(inv.m2).max() < 1e-13

    def test_scalar_antilinear(self):
        # solving conj(a) conj(x) = y for a = 2j gives the pair {0, j/2}
        inv = Bimatrix([[0]], [[2j]]).inverse()
        assert abs(inv.m1[0, 0]) < 1e-15
        assert abs(inv.m2[0, 0] - 0.5j) < 1e-15

    def test_singular_raises(self):
        with pytest.raises(SingularBimatrixError):
            Bimatrix([[1]], [[1]]).inverse()

    def test_roundtrip(self, rng):
        x = random_bimatrix(rng, 4, 4) + 3 * Bimatrix.identity(4)
        prod = x @ x.inverse()
        assert np.abs(prod.m1 - np.eye(4)).max() < 1e-11
        assert np.abs(prod.m2).max() < 1e-11

    def test_rectangular_rejected(self, rng):
        with pytest.raises(ValueError):
            random_bimatrix(rng, 2, 3).inverse()


class TestHermitianStructure:
    def test_resymmetrization_records_correction(self, rng):
        p1 = crandn(rng, 3, 3)
        p1 = p1 @ p1.conj().T + np.eye(3)
        drift = 1e-12 * crandn(rng, 3, 3)
        h = HermitianBimatrix(p1 + (drift - drift.conj().T), np.zeros((3, 3)))
        assert 0 < h.correction < 1e-10
        assert np.abs(h.p1 - h.p1.conj().T).max() == 0

    def test_violation_raises(self):
        with pytest.raises(StructureViolationError):
            HermitianBimatrix([[1, 2], [5, 1]], np.zeros((2, 2)))
        with pytest.raises(StructureViolationError):
            HermitianBimatrix(np.eye(2), [[0, 1], [3, 0]])

    def test_positive_definite(self):
        assert HermitianBimatrix(np.eye(2), np.zeros((2, 2))).is_positive_definite()
        # embedding eigenvalues of the scalar pair {2, 1} are 1 and 3
        assert HermitianBimatrix([[2]], [[1]]).is_positive_definite()
        # {1, 1} embeds to [[1, 1], [1, 1]], which is singular
        assert not HermitianBimatrix([[1]], [[1]]).is_positive_definite()


class TestPsdOrder:
    def test_reflexive(self, rng):
        p1 = crandn(rng, 2, 2)
        x = HermitianBimatrix(p1 @ p1.conj().T + np.eye(2), np.zeros((2, 2)))
        assert psd_leq(x, x)

    def test_scaled_identity(self):
        one = HermitianBimatrix(np.eye(2), np.zeros((2, 2)))
        two = HermitianBimatrix(2 * np.eye(2), np.zeros((2, 2)))
        assert psd_leq(one, two)
        assert not psd_leq(two, one)

    def test_scalar_pair_vs_identity(self):
        # embedding of {2,1} minus I has eigenvalues 0 and 2
        lo = HermitianBimatrix([[1]], [[0]])
        hi = HermitianBimatrix([[2]], [[1]])
        assert psd_leq(lo, hi)

    def test_antisymmetry_and_transitivity_sampled(self, rng):
        for _ in range(20):
            w1 = crandn(rng, 3, 3)
            base = HermitianBimatrix(w1 @ w1.conj().T + np.eye(3), np.zeros((3, 3)))
            w2 = crandn(rng, 3, 3)
            bump1 = HermitianBimatrix(w2 @ w2.conj().T, np.zeros((3, 3)))
            mid = HermitianBimatrix.wrap(base + bump1)
            w3 = crandn(rng, 3, 3)
            top = HermitianBimatrix.wrap(mid + HermitianBimatrix(w3 @ w3.conj().T, np.zeros((3, 3))))
            assert psd_leq(base, mid) and psd_leq(mid, top) and psd_leq(base, top)
            # antisymmetry up to tolerance: both directions only for equal pairs
            if psd_leq(mid, base):
                assert bnorm(mid - base) < 1e-7


class TestQuadraticForm:
    def test_identity_gives_norm(self, rng):
        x = crandn(rng, 4)
        p = HermitianBimatrix(np.eye(4), np.zeros((4, 4)))
        assert abs(p.quadratic_form(x) - np.linalg.norm(x) ** 2) < 1e-12

    def test_pure_conjugate_slot(self):
        p = HermitianBimatrix([[0]], [[1]])
        assert abs(p.quadratic_form(np.array([1 + 1j]))) < 1e-15  # Re((1-j)^2) = 0

    def test_scalar_pair(self):
        p = HermitianBimatrix([[2]], [[1]])
        assert abs(p.quadratic_form(np.array([1.0])) - 3.0) < 1e-15

    def test_equals_half_embedding_form_and_real(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 5))
            w = crandn(rng, n, n)
            s = crandn(rng, n, n)
            p = HermitianBimatrix(w + w.conj().T, s + s.T)
            x = crandn(rng, n)
            z = np.concatenate([x, x.conj()])
            half_form = 0.5 * np.real(z.conj() @ p.embed() @ z)
            val = p.quadratic_form(x)
            assert isinstance(val, float)
            assert abs(val - half_form) < 1e-12 * max(1.0, abs(half_form))


class TestNorm:
    def test_zero(self):
        assert bnorm(Bimatrix.zeros(3, 2)) == 0.0

    def test_identity(self):
        assert abs(bnorm(Bimatrix.identity(2)) - 2.0) < 1e-15

    def test_scalar_pair(self):
        # embedding [[3,4],[4,3]] has squared Frobenius norm 50
        assert abs(bnorm(Bimatrix([[3]], [[4]])) - np.sqrt(50)) < 1e-15


class TestScalarMultiplication:
    def test_complex_scalar_rule(self, rng):
        # c * (X x) must equal (c * X) x for complex c
        c = 1.3 - 0.7j
        x = random_bimatrix(rng, 3, 3)
        v = crandn(rng, 3)
        assert np.abs((c * x).apply(v) - c * x.apply(v)).max() < 1e-13
