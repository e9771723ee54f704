"""Controller synthesis: Riccati solutions to gains, minimum costs, certificates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .riccati import (
    NormalData,
    RiccatiSolution,
    SolverOptions,
    build_normal_data,
    solve_anti_riccati,
    solve_bimatrix_riccati,
    solve_normal_riccati,
)
from .systems import AntilinearSystem, ComplexLinearSystem, CostWeights, FeedbackGain


@dataclass(frozen=True, eq=False)
class ComplexLqr:
    """Optimal full-state feedback for a complex-valued linear system."""

    gain: FeedbackGain
    solution: RiccatiSolution
    jmin: Callable[[np.ndarray], float]


def lqr_complex(
    sys: ComplexLinearSystem,
    w: CostWeights,
    opts: SolverOptions | None = None,
) -> ComplexLqr:
    """Gain -s^-1 b^H p a from the converged cost bimatrix p.

    The closed loop is asymptotically stable whenever the solver converges;
    jmin(x0) is the quadratic form of x0 in p.
    """
    sol = solve_bimatrix_riccati(sys, w, opts)
    gain = FeedbackGain(-(sol.s.inverse() @ sys.b.H @ sol.p @ sys.a))
    return ComplexLqr(gain=gain, solution=sol, jmin=sol.p.quadratic_form)


@dataclass(frozen=True, eq=False)
class AntilinearLqr:
    """Optimal normal state feedback u = k1 x for an antilinear system."""

    k1: np.ndarray
    p: np.ndarray
    solution: RiccatiSolution
    jmin: Callable[[np.ndarray], float]


def _quad_jmin(p: np.ndarray) -> Callable[[np.ndarray], float]:
    def jmin(x0: np.ndarray) -> float:
        x0 = np.asarray(x0, dtype=complex)
        return float(np.real(x0.conj() @ p @ x0))

    return jmin


def lqr_antilinear_anti(
    sys: AntilinearSystem,
    w: CostWeights,
    opts: SolverOptions | None = None,
) -> AntilinearLqr:
    """Gain -(r + b2^H conj(p) b2)^-1 b2^H conj(p) a2 from the anti-Riccati solution."""
    sol = solve_anti_riccati(sys, w, opts)
    p = sol.p.p1
    pc = p.conj()
    s = w.r + sys.b2.conj().T @ pc @ sys.b2
    k1 = -np.linalg.solve(s, sys.b2.conj().T @ pc @ sys.a2)
    return AntilinearLqr(k1=k1, p=p, solution=sol, jmin=_quad_jmin(p))


def normal_gain(nd: NormalData, p_n: np.ndarray, sys: AntilinearSystem, w: CostWeights) -> np.ndarray:
    """Two-term gain recovered from the normal-Riccati route."""
    m = sys.m
    s_q = w.r + sys.b2.conj().T @ w.q.conj() @ sys.b2
    first = np.linalg.solve(s_q, sys.b2.conj().T @ w.q.conj() @ sys.a2)
    s_n = nd.r_n + nd.b_n.conj().T @ p_n @ nd.b_n
    second = np.linalg.solve(s_n, nd.b_n.conj().T @ p_n @ nd.a_n)[m:, :]
    return -(first + second)


def lqr_antilinear_normal(
    sys: AntilinearSystem,
    w: CostWeights,
    opts: SolverOptions | None = None,
) -> AntilinearLqr:
    """Same controller as the anti-Riccati route, computed via the normal equation."""
    nd = build_normal_data(sys, w)
    sol = solve_normal_riccati(nd, opts)
    p_n = sol.p.p1
    k1 = normal_gain(nd, p_n, sys, w)
    return AntilinearLqr(k1=k1, p=p_n, solution=sol, jmin=_quad_jmin(p_n))


@dataclass(frozen=True, eq=False)
class AntilinearCrossCheck:
    """Agreement report for the three antilinear solution routes."""

    p_bimatrix: np.ndarray        # p1 slot of the bimatrix solution
    p2_norm: float                # size of the p2 slot (should vanish)
    p_anti: np.ndarray
    p_normal: np.ndarray
    k_bimatrix: np.ndarray        # k1 slot of the bimatrix gain
    k2_norm: float                # size of the k2 slot (should vanish)
    k_anti: np.ndarray
    k_normal: np.ndarray
    iterations: dict[str, int]
    jmin_probe: dict[str, float]  # three jmin values at the all-ones state

    @property
    def max_p_discrepancy(self) -> float:
        scale = max(np.linalg.norm(self.p_bimatrix, "fro"), np.finfo(float).tiny)
        return max(
            np.linalg.norm(self.p_bimatrix - self.p_anti, "fro"),
            np.linalg.norm(self.p_bimatrix - self.p_normal, "fro"),
            np.linalg.norm(self.p_anti - self.p_normal, "fro"),
            self.p2_norm,
        ) / scale

    @property
    def max_gain_discrepancy(self) -> float:
        scale = max(np.linalg.norm(self.k_anti, "fro"), np.finfo(float).tiny)
        return max(
            np.linalg.norm(self.k_bimatrix - self.k_anti, "fro"),
            np.linalg.norm(self.k_bimatrix - self.k_normal, "fro"),
            np.linalg.norm(self.k_anti - self.k_normal, "fro"),
            self.k2_norm,
        ) / scale


def cross_validate_antilinear(
    sys: AntilinearSystem,
    w: CostWeights,
    opts: SolverOptions | None = None,
) -> AntilinearCrossCheck:
    """Run all three pipelines on the same antilinear system and compare."""
    bim = lqr_complex(sys.lift(), w, opts)
    anti = lqr_antilinear_anti(sys, w, opts)
    normal = lqr_antilinear_normal(sys, w, opts)
    probe = np.ones(sys.n, dtype=complex)
    return AntilinearCrossCheck(
        p_bimatrix=bim.solution.p.p1,
        p2_norm=float(np.linalg.norm(bim.solution.p.p2, "fro")),
        p_anti=anti.p,
        p_normal=normal.p,
        k_bimatrix=bim.gain.k.m1,
        k2_norm=float(np.linalg.norm(bim.gain.k.m2, "fro")),
        k_anti=anti.k1,
        k_normal=normal.k1,
        iterations={
            "bimatrix": bim.solution.iterations,
            "anti": anti.solution.iterations,
            "normal": normal.solution.iterations,
        },
        jmin_probe={
            "bimatrix": bim.jmin(probe),
            "anti": anti.jmin(probe),
            "normal": normal.jmin(probe),
        },
    )
