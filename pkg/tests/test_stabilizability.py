"""Rank-based stabilizability tests."""

import numpy as np

from cvlqr import (
    AntilinearSystem,
    ComplexLinearSystem,
    is_stabilizable_antilinear,
    is_stabilizable_complex,
    unstabilizable_modes_antilinear,
)
from tests.conftest import crandn


def test_stable_system_without_input_is_stabilizable(rng):
    a1 = crandn(rng, 3, 3)
    a1 *= 0.5 / np.abs(np.linalg.eigvals(a1)).max()
    sys = ComplexLinearSystem.from_matrices(a1, np.zeros((3, 3)), np.zeros((3, 1)), np.zeros((3, 1)))
    assert is_stabilizable_complex(sys)


def test_unstable_without_input_is_not():
    sys = ComplexLinearSystem.from_matrices([[2.0]], [[0.0]], [[0.0]], [[0.0]])
    assert not is_stabilizable_complex(sys)


def test_scalar_antilinear_cases():
    assert is_stabilizable_antilinear(AntilinearSystem([[2.0]], [[1.0]]))
    bad = AntilinearSystem([[2.0]], [[0.0]])
    assert not is_stabilizable_antilinear(bad)
    modes = unstabilizable_modes_antilinear(bad)
    assert len(modes) == 1 and abs(modes[0] - 4.0) < 1e-12
    # a2 conj(a2) = 0.25 is already stable
    assert is_stabilizable_antilinear(AntilinearSystem([[0.5]], [[0.0]]))


def test_agreement_with_lifted_complex_test(rng):
    agree = 0
    for _ in range(200):
        n = int(rng.integers(1, 5))
        m = int(rng.integers(1, 3))
        a2 = crandn(rng, n, n)
        rho = np.abs(np.linalg.eigvals(a2 @ a2.conj())).max() ** 0.5
        a2 *= rng.uniform(0.3, 1.6) / max(rho, 1e-9)
        # with probability ~1/2, cripple the input to exercise both verdicts
        b2 = crandn(rng, n, m) if rng.uniform() < 0.5 else np.zeros((n, m))
        sys = AntilinearSystem(a2, b2)
        assert is_stabilizable_antilinear(sys) == is_stabilizable_complex(sys.lift())
        agree += 1
    assert agree == 200


def test_similarity_invariance(rng):
    for _ in range(30):
        n = int(rng.integers(1, 4))
        a2 = crandn(rng, n, n)
        b2 = crandn(rng, n, 1) if rng.uniform() < 0.7 else np.zeros((n, 1))
        sys = AntilinearSystem(a2, b2)
        t = crandn(rng, n, n) + 2 * np.eye(n)
        tinv = np.linalg.inv(t)
        # state change x = T y maps the conjugate recursion coefficients to
        # (conj(T)^-1 a2 T, conj(T)^-1 b2); the verdict must not change
        mapped = AntilinearSystem(tinv.conj() @ a2 @ t, tinv.conj() @ b2)
        assert is_stabilizable_antilinear(sys) == is_stabilizable_antilinear(mapped)
