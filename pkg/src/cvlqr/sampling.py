"""Seeded random instance generators for tests and the bench command."""

from __future__ import annotations

import numpy as np

from .delay import DelaySystem
from .stabilizability import is_stabilizable_antilinear, is_stabilizable_complex
from .systems import AntilinearSystem, ComplexLinearSystem, CostWeights


def complex_gaussian(rng: np.random.Generator, *shape: int) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian_pd(rng: np.random.Generator, n: int, shift: float | None = None) -> np.ndarray:
    w = complex_gaussian(rng, n, n)
    shift = float(n) if shift is None else shift
    return w @ w.conj().T + shift * np.eye(n)


def random_spd(rng: np.random.Generator, n: int, shift: float | None = None) -> np.ndarray:
    w = rng.standard_normal((n, n))
    shift = float(n) if shift is None else shift
    return w @ w.T + shift * np.eye(n)


def random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    return complex_gaussian(rng, n)


def random_complex_system(
    rng: np.random.Generator,
    n: int,
    m: int,
    radius_range: tuple[float, float] = (0.3, 1.4),
    max_tries: int = 50,
) -> ComplexLinearSystem:
    """Random stabilizable complex-valued system, mixing stable and unstable draws.

    The embedded state matrix is rescaled to a spectral radius drawn from
    radius_range; non-stabilizable draws (rare) are rejected.
    """
    for _ in range(max_tries):
        a1 = complex_gaussian(rng, n, n)
        a2 = complex_gaussian(rng, n, n)
        a = np.block([[a1, a2.conj()], [a2, a1.conj()]])
        rho = np.abs(np.linalg.eigvals(a)).max()
        scale = rng.uniform(*radius_range) / max(rho, 1e-12)
        sys = ComplexLinearSystem.from_matrices(
            scale * a1, scale * a2, complex_gaussian(rng, n, m), complex_gaussian(rng, n, m)
        )
        if is_stabilizable_complex(sys):
            return sys
    raise RuntimeError("failed to draw a stabilizable complex system")


def random_antilinear_system(
    rng: np.random.Generator,
    n: int,
    m: int,
    radius_range: tuple[float, float] = (0.3, 1.4),
    max_tries: int = 50,
) -> AntilinearSystem:
    for _ in range(max_tries):
        a2 = complex_gaussian(rng, n, n)
        rho = np.abs(np.linalg.eigvals(a2 @ a2.conj())).max() ** 0.5
        a2 *= rng.uniform(*radius_range) / max(rho, 1e-12)
        sys = AntilinearSystem(a2, complex_gaussian(rng, n, m))
        if is_stabilizable_antilinear(sys):
            return sys
    raise RuntimeError("failed to draw a stabilizable antilinear system")


def random_cost_weights(rng: np.random.Generator, n: int, m: int) -> CostWeights:
    return CostWeights(random_hermitian_pd(rng, n), random_hermitian_pd(rng, m))


def random_delay_system(
    rng: np.random.Generator,
    n: int,
    p: int,
    max_radius: float = 1.0,
    diagonal_r0: bool = False,
) -> DelaySystem:
    """Random delay system with the augmented recursion scaled to max_radius.

    Keeping the open-loop radius at or below 1 keeps long open-loop
    simulations bounded, which the lifting-equivalence checks rely on.
    """
    a0 = rng.standard_normal((n, n))
    ad = rng.standard_normal((n, n))
    aug = np.block([[a0, ad], [np.eye(n), np.zeros((n, n))]])
    rho = np.abs(np.linalg.eigvals(aug)).max()
    scale = max_radius / max(rho, 1e-12)
    # ad scales with scale^2: one factor per delay slot keeps the augmented
    # matrix's radius at the target after rescaling both blocks consistently.
    a0 = a0 * scale
    ad = ad * scale**2
    g = rng.standard_normal((n, p))
    q0 = random_spd(rng, n)
    r0 = np.diag(rng.uniform(0.5, 2.0, size=p)) if diagonal_r0 else random_spd(rng, p)
    return DelaySystem(a0, ad, g, q0, r0)
