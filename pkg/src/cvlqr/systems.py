"""System containers, closed-loop construction, simulation and truncated cost."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bimatrix import Bimatrix, HermitianBimatrix, STRUCTURE_RTOL
from .exceptions import InvalidWeightsError


def _is_hermitian_pd(m: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        return False
    return True


@dataclass(frozen=True, eq=False)
class ComplexLinearSystem:
    """x(k+1) = {a1, a2} x(k) + {b1, b2} u(k) with a = {a1,a2}, b = {b1,b2}."""

    a: Bimatrix
    b: Bimatrix

    def __post_init__(self):
        n, p = self.a.shape
        if n != p:
            raise ValueError(f"state bimatrix must be square, got {self.a.shape}")
        if self.b.shape[0] != n:
            raise ValueError(f"input bimatrix must have {n} rows, got {self.b.shape[0]}")
        if n < 1 or self.b.shape[1] < 1:
            raise ValueError("state and input dimensions must be at least 1")

    @classmethod
    def from_matrices(cls, a1, a2, b1, b2) -> "ComplexLinearSystem":
        return cls(Bimatrix(a1, a2), Bimatrix(b1, b2))

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def m(self) -> int:
        return self.b.shape[1]


@dataclass(frozen=True, eq=False)
class AntilinearSystem:
    """x(k+1) = conj(a2) conj(x(k)) + conj(b2) conj(u(k))."""

    a2: np.ndarray
    b2: np.ndarray

    def __post_init__(self):
        a2 = np.array(self.a2, dtype=complex)
        b2 = np.array(self.b2, dtype=complex)
        if a2.ndim != 2 or a2.shape[0] != a2.shape[1]:
            raise ValueError(f"a2 must be square, got shape {a2.shape}")
        if b2.ndim != 2 or b2.shape[0] != a2.shape[0]:
            raise ValueError(f"b2 must have {a2.shape[0]} rows, got shape {b2.shape}")
        a2.setflags(write=False)
        b2.setflags(write=False)
        object.__setattr__(self, "a2", a2)
        object.__setattr__(self, "b2", b2)

    @property
    def n(self) -> int:
        return self.a2.shape[0]

    @property
    def m(self) -> int:
        return self.b2.shape[1]

    def lift(self) -> ComplexLinearSystem:
        """The same system viewed as a complex-valued linear system (a1 = b1 = 0)."""
        n, m = self.n, self.m
        return ComplexLinearSystem(
            Bimatrix(np.zeros((n, n)), self.a2),
            Bimatrix(np.zeros((n, m)), self.b2),
        )


@dataclass(frozen=True, eq=False)
class CostWeights:
    """Hermitian positive definite state weight q (n x n) and input weight r (m x m)."""

    q: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        for name in ("q", "r"):
            m = np.array(getattr(self, name), dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise InvalidWeightsError(f"{name} must be square, got shape {m.shape}")
            herm_defect = np.abs(m - m.conj().T).max() if m.size else 0.0
            if herm_defect > STRUCTURE_RTOL * max(np.abs(m).max(), 1.0):
                raise InvalidWeightsError(f"{name} is not Hermitian (deviation {herm_defect:.3e})")
            m = (m + m.conj().T) / 2
            if not _is_hermitian_pd(m):
                raise InvalidWeightsError(f"{name} is not positive definite")
            m.setflags(write=False)
            object.__setattr__(self, name, m)

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @property
    def m(self) -> int:
        return self.r.shape[0]

    def q_bimatrix(self) -> HermitianBimatrix:
        return HermitianBimatrix(self.q, np.zeros_like(self.q))

    def r_bimatrix(self) -> HermitianBimatrix:
        return HermitianBimatrix(self.r, np.zeros_like(self.r))


@dataclass(frozen=True, eq=False)
class FeedbackGain:
    """u(k) = {k1, k2} x(k); k2 = 0 encodes a normal (conjugate-free) feedback."""

    k: Bimatrix

    @classmethod
    def from_matrices(cls, k1, k2=None) -> "FeedbackGain":
        k1 = np.atleast_2d(np.asarray(k1, dtype=complex))
        if k2 is None:
            k2 = np.zeros_like(k1)
        return cls(Bimatrix(k1, k2))

    @classmethod
    def zero(cls, m: int, n: int) -> "FeedbackGain":
        return cls(Bimatrix.zeros(m, n))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Closed-loop run: states[k] for k = 0..horizon, inputs[k] for k = 0..horizon-1."""

    states: np.ndarray
    inputs: np.ndarray
    horizon: int

    def __post_init__(self):
        if self.states.shape[0] != self.horizon + 1:
            raise ValueError("states must have horizon + 1 rows")
        if self.inputs.shape[0] != self.horizon:
            raise ValueError("inputs must have horizon rows")


def closed_loop(sys: ComplexLinearSystem, gain: FeedbackGain) -> Bimatrix:
    """State bimatrix of x(k+1) = (a + b k) x(k)."""
    if gain.k.shape != (sys.m, sys.n):
        raise ValueError(f"gain shape {gain.k.shape} does not conform to system ({sys.m}, {sys.n})")
    return sys.a + sys.b @ gain.k


def spectral_radius(x: Bimatrix) -> float:
    """Largest eigenvalue modulus of the embedding; < 1 means asymptotic stability."""
    if x.shape[0] != x.shape[1]:
        raise ValueError("spectral radius requires a square bimatrix")
    return float(np.abs(np.linalg.eigvals(x.embed())).max())


def simulate(
    sys: ComplexLinearSystem,
    gain: FeedbackGain,
    x0: np.ndarray,
    horizon: int,
) -> Trajectory:
    """Run the closed loop for `horizon` steps from x0."""
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    x0 = np.asarray(x0, dtype=complex)
    if x0.shape != (sys.n,):
        raise ValueError(f"x0 must have length {sys.n}, got shape {x0.shape}")
    acl = closed_loop(sys, gain)
    states = np.empty((horizon + 1, sys.n), dtype=complex)
    inputs = np.empty((horizon, sys.m), dtype=complex)
    states[0] = x0
    for k in range(horizon):
        inputs[k] = gain.k.apply(states[k])
        states[k + 1] = acl.apply(states[k])
    return Trajectory(states, inputs, horizon)


def cost_truncated(traj: Trajectory, w: CostWeights) -> float:
    """Partial sum of x^H q x + u^H r u over k = 0..horizon-1."""
    total = 0.0
    for k in range(traj.horizon):
        x = traj.states[k]
        u = traj.inputs[k]
        total += float(np.real(x.conj() @ w.q @ x)) + float(np.real(u.conj() @ w.r @ u))
    return total


def closed_loop_cost(
    sys: ComplexLinearSystem,
    gain: FeedbackGain,
    w: CostWeights,
    x0: np.ndarray,
    rel_tol: float = 1e-9,
    max_steps: int = 10**5,
) -> float:
    """Infinite-horizon cost by horizon doubling.

    Extends the simulation until the increment over the last doubling is
    below rel_tol times the running sum, or max_steps is reached. Under a
    stable closed loop the tail is geometric, so this terminates quickly.
    """
    acl = closed_loop(sys, gain)
    x = np.asarray(x0, dtype=complex)
    total = 0.0
    steps = 0
    block = 8
    while steps < max_steps:
        increment = 0.0
        for _ in range(min(block, max_steps - steps)):
            u = gain.k.apply(x)
            increment += float(np.real(x.conj() @ w.q @ x)) + float(np.real(u.conj() @ w.r @ u))
            x = acl.apply(x)
            steps += 1
        total += increment
        if increment <= rel_tol * max(total, np.finfo(float).tiny):
            break
        block = min(2 * block, max_steps)
    return total
