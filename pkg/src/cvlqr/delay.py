"""One-step-delay LQR reduced to the complex-valued setting.

The real delay recursion

    xi(k+1) = a0 xi(k) + ad xi(k-1) + g v(k)

with quadratic weights (q0, r0) is lifted through x(k) = xi(k) + j xi(k-1)
into a complex-valued linear system, solved there, and the optimal complex
gain is realized back as a real feedback on the stacked state
[xi(k); xi(k-1)].

Pipeline: pad an odd input count with a zero column -> block-diagonalize the
input weight -> lift -> complex LQR -> realize and undo the input transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bimatrix import HermitianBimatrix
from .exceptions import InvalidWeightsError, NotPositiveDefiniteError
from .lqr import ComplexLqr, lqr_complex
from .riccati import RiccatiSolution, SolverOptions
from .systems import ComplexLinearSystem, CostWeights, FeedbackGain

DEFAULT_SLACK_WEIGHT = 1.0


def _as_real_matrix(a, name: str) -> np.ndarray:
    m = np.array(a, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"{name} must be a 2-D real matrix")
    m.setflags(write=False)
    return m


def _check_spd(m: np.ndarray, name: str):
    if np.abs(m - m.T).max() > 1e-10 * max(np.abs(m).max(), 1.0):
        raise InvalidWeightsError(f"{name} is not symmetric")
    try:
        np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        raise InvalidWeightsError(f"{name} is not positive definite") from None


@dataclass(frozen=True, eq=False)
class DelaySystem:
    """Real one-step-delay system with weights; p = g.shape[1] inputs."""

    a0: np.ndarray
    ad: np.ndarray
    g: np.ndarray
    q0: np.ndarray
    r0: np.ndarray

    def __post_init__(self):
        a0 = _as_real_matrix(self.a0, "a0")
        ad = _as_real_matrix(self.ad, "ad")
        g = _as_real_matrix(self.g, "g")
        q0 = _as_real_matrix(self.q0, "q0")
        r0 = _as_real_matrix(self.r0, "r0")
        n = a0.shape[0]
        if a0.shape != (n, n) or ad.shape != (n, n):
            raise ValueError("a0 and ad must be square with matching sizes")
        if g.shape[0] != n or g.shape[1] < 1:
            raise ValueError(f"g must have {n} rows and at least one column")
        if q0.shape != (n, n):
            raise ValueError(f"q0 must be {n} x {n}")
        if r0.shape != (g.shape[1], g.shape[1]):
            raise ValueError(f"r0 must be {g.shape[1]} x {g.shape[1]}")
        _check_spd(q0, "q0")
        _check_spd(r0, "r0")
        for name, m in (("a0", a0), ("ad", ad), ("g", g), ("q0", q0), ("r0", r0)):
            object.__setattr__(self, name, m)

    @property
    def n(self) -> int:
        return self.a0.shape[0]

    @property
    def p(self) -> int:
        return self.g.shape[1]


@dataclass(frozen=True, eq=False)
class DelayInitialCondition:
    """xi(0) and xi(-1)."""

    xi0: np.ndarray
    xim1: np.ndarray

    def __post_init__(self):
        xi0 = np.asarray(self.xi0, dtype=float)
        xim1 = np.asarray(self.xim1, dtype=float)
        if xi0.shape != xim1.shape or xi0.ndim != 1:
            raise ValueError("xi0 and xim1 must be 1-D with equal length")
        object.__setattr__(self, "xi0", xi0)
        object.__setattr__(self, "xim1", xim1)


@dataclass(frozen=True, eq=False)
class RealFeedback:
    """v(k) = f @ [xi(k); xi(k-1)], a plain real matrix p x 2n."""

    f: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.f, dtype=float)
        if f.ndim != 2 or f.shape[1] % 2:
            raise ValueError("f must be p x 2n")
        object.__setattr__(self, "f", f)

    def apply(self, xi: np.ndarray, xi_prev: np.ndarray) -> np.ndarray:
        return self.f @ np.concatenate([xi, xi_prev])


@dataclass(frozen=True, eq=False)
class DelayTrajectory:
    """states[k] = xi(k) for k = 0..horizon; inputs[k] = v(k) for k < horizon."""

    states: np.ndarray
    inputs: np.ndarray
    ic: DelayInitialCondition
    horizon: int


def pad_odd_input(ds: DelaySystem, slack_weight: float = DEFAULT_SLACK_WEIGHT) -> DelaySystem:
    """Append a zero input column (and a diagonal weight entry) if p is odd.

    The slack input never reaches the state, so the optimal controller zeroes
    it and the minimum cost does not depend on slack_weight (> 0).
    """
    if ds.p % 2 == 0:
        return ds
    g = np.hstack([ds.g, np.zeros((ds.n, 1))])
    r0 = np.block([
        [ds.r0, np.zeros((ds.p, 1))],
        [np.zeros((1, ds.p)), np.array([[slack_weight]])],
    ])
    return DelaySystem(ds.a0, ds.ad, g, ds.q0, r0)


def normalize_input_weight(r0: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (l0, r) with l0^T r0 l0 = blockdiag(r, r), r the leading m x m block.

    Requires an even input count. The substitution v = l0 vhat turns the
    input cost v^T r0 v into vhat^T blockdiag(r, r) vhat.
    """
    r0 = np.asarray(r0, dtype=float)
    p = r0.shape[0]
    if p % 2:
        raise ValueError("normalize_input_weight requires an even input count")
    m = p // 2
    r01 = r0[:m, :m]
    r02 = r0[:m, m:]
    r03 = r0[m:, m:]
    schur = r03 - r02.T @ np.linalg.solve(r01, r02)
    eigs, vecs = np.linalg.eigh((schur + schur.T) / 2)
    if eigs[0] <= 0:
        raise NotPositiveDefiniteError("Schur complement of r0 is not positive definite")
    schur_inv_sqrt = vecs @ np.diag(eigs ** -0.5) @ vecs.T
    eigs1, vecs1 = np.linalg.eigh((r01 + r01.T) / 2)
    if eigs1[0] <= 0:
        raise NotPositiveDefiniteError("leading block of r0 is not positive definite")
    r01_sqrt = vecs1 @ np.diag(eigs1 ** 0.5) @ vecs1.T
    corner = schur_inv_sqrt @ r01_sqrt
    l0 = np.block([
        [np.eye(m), -np.linalg.solve(r01, r02) @ corner],
        [np.zeros((m, m)), corner],
    ])
    return l0, r01


def to_complex_system(ds: DelaySystem) -> tuple[ComplexLinearSystem, CostWeights]:
    """Lift a normalized delay system (even p, r0 = blockdiag(r, r)).

    Coefficients of the lifted recursion in x(k) = xi(k) + j xi(k-1):
    a1 = a0/2 + (j/2)(I - ad), a2 = a0/2 - (j/2)(I + ad),
    b1 = b2 = g1/2 - (j/2) g2, weights q = q0/2 and r.
    """
    if ds.p % 2:
        raise ValueError("to_complex_system requires an even input count (pad first)")
    m = ds.p // 2
    r = ds.r0[:m, :m]
    off = max(np.abs(ds.r0[:m, m:]).max(), np.abs(ds.r0[m:, m:] - r).max())
    if off > 1e-9 * max(np.abs(r).max(), 1.0):
        raise ValueError("r0 is not in blockdiag(r, r) form; apply normalize_input_weight first")
    n = ds.n
    eye = np.eye(n)
    a1 = 0.5 * ds.a0 + 0.5j * (eye - ds.ad)
    a2 = 0.5 * ds.a0 - 0.5j * (eye + ds.ad)
    g1 = ds.g[:, :m]
    g2 = ds.g[:, m:]
    b = 0.5 * g1 - 0.5j * g2
    sys = ComplexLinearSystem.from_matrices(a1, a2, b, b)
    w = CostWeights(0.5 * ds.q0, r)
    return sys, w


def lift_state(ic: DelayInitialCondition) -> np.ndarray:
    """x(0) = xi(0) + j xi(-1)."""
    return ic.xi0 + 1j * ic.xim1


def realize_gain(gain: FeedbackGain) -> RealFeedback:
    """Separate a complex gain into the real feedback on [xi(k); xi(k-1)].

    With u = k1 x + conj(k2) conj(x) and x = xi + j xi_prev, the stacked
    real input [v1; v2] (u = v1 + j v2) is
        [[Re(k1+k2), -Im(k1+k2)], [Im(k1-k2), Re(k1-k2)]] @ [xi; xi_prev].
    """
    k1, k2 = gain.k.m1, gain.k.m2
    top = np.hstack([np.real(k1 + k2), -np.imag(k1 + k2)])
    bottom = np.hstack([np.imag(k1 - k2), np.real(k1 - k2)])
    return RealFeedback(np.vstack([top, bottom]))


@dataclass(frozen=True, eq=False)
class DelayLqr:
    """Full delay pipeline output.

    feedback acts on the original (pre-padding) inputs. jmin is the delay
    cost (with the initial-condition correction); jmin_lifted is the raw
    lifted cost, which exceeds jmin by xim1^T q xim1.
    """

    feedback: RealFeedback
    solution: RiccatiSolution
    gain: FeedbackGain
    lifted: ComplexLinearSystem
    weights: CostWeights
    l0: np.ndarray
    padded: bool
    jmin: Callable[[DelayInitialCondition], float]
    jmin_lifted: Callable[[DelayInitialCondition], float]


def solve_delay_lqr(
    ds: DelaySystem,
    opts: SolverOptions | None = None,
    slack_weight: float = DEFAULT_SLACK_WEIGHT,
) -> DelayLqr:
    """pad -> normalize -> lift -> complex LQR -> realize.

    The returned feedback is expressed in the original input coordinates
    (slack rows dropped when padding was applied).
    """
    p_orig = ds.p
    padded = ds.p % 2 == 1
    ds_even = pad_odd_input(ds, slack_weight)
    l0, r = normalize_input_weight(ds_even.r0)
    ds_norm = DelaySystem(
        ds_even.a0,
        ds_even.ad,
        ds_even.g @ l0,
        ds_even.q0,
        np.block([
            [r, np.zeros_like(r)],
            [np.zeros_like(r), r],
        ]),
    )
    sys, w = to_complex_system(ds_norm)
    res: ComplexLqr = lqr_complex(sys, w, opts)
    fhat = realize_gain(res.gain)
    f_full = l0 @ fhat.f
    feedback = RealFeedback(f_full[:p_orig])

    p_bim: HermitianBimatrix = res.solution.p
    q = w.q.real

    def jmin_lifted(ic: DelayInitialCondition) -> float:
        return p_bim.quadratic_form(lift_state(ic))

    def jmin(ic: DelayInitialCondition) -> float:
        return jmin_lifted(ic) - float(ic.xim1 @ q @ ic.xim1)

    return DelayLqr(
        feedback=feedback,
        solution=res.solution,
        gain=res.gain,
        lifted=sys,
        weights=w,
        l0=l0,
        padded=padded,
        jmin=jmin,
        jmin_lifted=jmin_lifted,
    )


def simulate_delay(
    ds: DelaySystem,
    f: RealFeedback,
    ic: DelayInitialCondition,
    horizon: int,
) -> tuple[DelayTrajectory, float]:
    """Closed-loop delay recursion and the truncated cost over k < horizon."""
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    if f.f.shape != (ds.p, 2 * ds.n):
        raise ValueError(f"feedback must be {ds.p} x {2 * ds.n}, got {f.f.shape}")
    states = np.empty((horizon + 1, ds.n))
    inputs = np.empty((horizon, ds.p))
    states[0] = ic.xi0
    prev = ic.xim1
    cost = 0.0
    for k in range(horizon):
        v = f.apply(states[k], prev)
        inputs[k] = v
        cost += float(states[k] @ ds.q0 @ states[k]) + float(v @ ds.r0 @ v)
        nxt = ds.a0 @ states[k] + ds.ad @ prev + ds.g @ v
        prev = states[k]
        states[k + 1] = nxt
    return DelayTrajectory(states, inputs, ic, horizon), cost
