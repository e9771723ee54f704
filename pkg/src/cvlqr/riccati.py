"""Fixed-point solvers for the three Riccati equations and the NME bridge.

Three routes to the same optimal cost operator:

  * the bimatrix Riccati equation for general complex-valued systems,
    iterated in bimatrix algebra;
  * the anti-Riccati equation for antilinear systems, a conjugate-twisted
    matrix iteration of half the embedded dimension;
  * a normal (standard) discrete Riccati equation in transformed data
    (a_n, b_n, q_n, r_n), again for antilinear systems.

For stabilizable systems all three iterations are monotone nondecreasing in
the semidefinite order and bounded above by the solution, hence convergent;
unbounded growth is therefore a reliable non-stabilizability signal and is
reported as DivergedError.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bimatrix import Bimatrix, HermitianBimatrix, bnorm
from .exceptions import (
    DivergedError,
    NotConvergentError,
    NotPositiveDefiniteError,
    SingularBimatrixError,
)
from .systems import AntilinearSystem, ComplexLinearSystem, CostWeights

DIVERGENCE_FACTOR = 1e12


@dataclass(frozen=True)
class SolverOptions:
    """Knobs shared by all fixed-point solvers.

    tol              relative step tolerance: stop when the step norm falls
                     below tol * norm of the current iterate
    max_iter         iteration budget
    divergence_bound absolute norm bound treated as divergence; None means
                     DIVERGENCE_FACTOR * norm of the initial iterate
    record_trace     keep (iteration, residual, step) rows
    residual_factor  accept the converged iterate only if the equation
                     residual is below residual_factor * tol * norm
    """

    tol: float = 1e-12
    max_iter: int = 100_000
    divergence_bound: float | None = None
    record_trace: bool = False
    residual_factor: float = 100.0

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.divergence_bound is not None and not self.divergence_bound > 0:
            raise ValueError("divergence_bound must be positive")


@dataclass(frozen=True, eq=False)
class RiccatiSolution:
    """Converged solution plus diagnostics.

    For the specialized (anti / normal) solvers the plain Hermitian solution
    occupies slot p1 with p2 = 0. `s` is the input-weighted denominator
    {r, 0} + b^H p b at the solution; `gramian` is b {r, 0}^-1 b^H.
    trace rows are (iterate index, residual of that iterate, arriving step);
    the arriving step is None for the initial iterate.
    """

    p: HermitianBimatrix
    s: HermitianBimatrix
    gramian: HermitianBimatrix
    iterations: int
    residual: float
    trace: list[tuple[int, float, float | None]] | None = None


def _run_fixed_point(update, p0, diff_norm, norm_of, opts: SolverOptions):
    """Drive p(k+1) = update(p(k)) to the relative step tolerance.

    Returns (final iterate, iterations, trace). The residual column of the
    trace uses the identity residual(p(k)) = ||update(p(k)) - p(k)||, exact
    for these fixed-point maps.
    """
    initial_size = norm_of(p0)
    bound = opts.divergence_bound
    if bound is None:
        bound = DIVERGENCE_FACTOR * initial_size
    trace = [] if opts.record_trace else None
    p = p0
    prev_step = None
    for k in range(1, opts.max_iter + 1):
        try:
            pn = update(p)
        except (SingularBimatrixError, np.linalg.LinAlgError) as e:
            # an iterate whose conditioning collapsed while growing without
            # bound is the divergence signal arriving before the norm bound
            if norm_of(p) > 1e3 * max(initial_size, 1.0):
                raise DivergedError(
                    f"iterate became numerically singular while growing "
                    f"(norm {norm_of(p):.3e}) at iteration {k}; system not stabilizable",
                    iterations=k,
                ) from None
            raise e
        step = diff_norm(pn, p)
        if trace is not None:
            trace.append((k - 1, step, prev_step))
        size = norm_of(pn)
        if not np.isfinite(size) or size > bound:
            raise DivergedError(
                f"iterate norm {size:.3e} exceeded divergence bound {bound:.3e} "
                f"at iteration {k}; system not stabilizable",
                iterations=k,
            )
        if step < opts.tol * size:
            return pn, k, trace
        prev_step = step
        p = pn
    raise NotConvergentError(
        f"no convergence within {opts.max_iter} iterations (last step {step:.3e})",
        iterations=opts.max_iter,
    )


def _check_residual(residual: float, size: float, opts: SolverOptions, iterations: int):
    if residual > opts.residual_factor * opts.tol * max(size, 1.0):
        raise NotConvergentError(
            f"converged step-wise but equation residual {residual:.3e} exceeds "
            f"{opts.residual_factor:g} * tol * norm",
            iterations=iterations,
        )


# ---------------------------------------------------------------------------
# bimatrix Riccati equation
# ---------------------------------------------------------------------------


def gramian_bimatrix(sys: ComplexLinearSystem, w: CostWeights) -> HermitianBimatrix:
    """b {r, 0}^-1 b^H, the input gramian entering the compact iteration."""
    rinv = Bimatrix(np.linalg.inv(w.r), np.zeros((w.m, w.m)))
    return HermitianBimatrix.wrap(sys.b @ rinv @ sys.b.H)


def riccati_step(
    p: Bimatrix,
    sys: ComplexLinearSystem,
    w: CostWeights,
    form: str = "compact",
    gram: HermitianBimatrix | None = None,
) -> Bimatrix:
    """One update of the cost bimatrix.

    form="compact":  {q,0} + a^H (p^-1 + gramian)^-1 a   (one inversion of p)
    form="expanded": {q,0} + a^H p a - a^H p b s^-1 b^H p a with
                     s = {r,0} + b^H p b
    Both forms agree on positive definite iterates.
    """
    q0 = Bimatrix(w.q, np.zeros_like(w.q))
    if form == "compact":
        if gram is None:
            gram = gramian_bimatrix(sys, w)
        inner = (p.inverse() + gram).inverse()
        return q0 + sys.a.H @ inner @ sys.a
    if form == "expanded":
        r0 = Bimatrix(w.r, np.zeros_like(w.r))
        s = r0 + sys.b.H @ p @ sys.b
        pa = p @ sys.a
        cross = sys.b.H @ pa
        return q0 + sys.a.H @ pa - cross.H @ s.inverse() @ cross
    raise ValueError(f"unknown iteration form {form!r}")


def bimatrix_riccati_iterates(
    sys: ComplexLinearSystem,
    w: CostWeights,
    form: str = "compact",
):
    """Yield the iterate sequence p(0) = {q, 0}, p(1), ... without end.

    Every yielded value is re-symmetrized into a HermitianBimatrix; the
    pre-symmetrization structure drift is available as .correction.
    """
    if w.n != sys.n or w.m != sys.m:
        raise ValueError("weights do not conform to the system dimensions")
    gram = gramian_bimatrix(sys, w) if form == "compact" else None
    p = HermitianBimatrix(w.q, np.zeros_like(w.q))
    yield p
    while True:
        p = HermitianBimatrix.wrap(riccati_step(p, sys, w, form=form, gram=gram))
        yield p


def bimatrix_riccati_residual(
    p: HermitianBimatrix,
    sys: ComplexLinearSystem,
    w: CostWeights,
) -> float:
    """bnorm of a^H (p^-1 + gramian)^-1 a + {q, 0} - p."""
    return bnorm(riccati_step(p, sys, w, form="compact") - p)


def solve_bimatrix_riccati(
    sys: ComplexLinearSystem,
    w: CostWeights,
    opts: SolverOptions | None = None,
    form: str = "compact",
) -> RiccatiSolution:
    """Iterate from {q, 0} until the relative step tolerance is met.

    Raises DivergedError when the iterates blow up (non-stabilizable system)
    and NotConvergentError when the budget is exhausted.
    """
    opts = opts or SolverOptions()
    it = bimatrix_riccati_iterates(sys, w, form=form)
    p0 = next(it)

    def update(_p):
        return next(it)

    p, iters, trace = _run_fixed_point(update, p0, lambda a, b: bnorm(a - b), bnorm, opts)
    residual = bimatrix_riccati_residual(p, sys, w)
    _check_residual(residual, bnorm(p), opts, iters)
    r0 = Bimatrix(w.r, np.zeros_like(w.r))
    s = HermitianBimatrix.wrap(r0 + sys.b.H @ p @ sys.b)
    return RiccatiSolution(
        p=p,
        s=s,
        gramian=gramian_bimatrix(sys, w),
        iterations=iters,
        residual=residual,
        trace=trace,
    )


# ---------------------------------------------------------------------------
# anti-Riccati equation (antilinear systems)
# ---------------------------------------------------------------------------


def _hermitize(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def anti_riccati_step(p: np.ndarray, sys: AntilinearSystem, w: CostWeights) -> np.ndarray:
    """q + a2^H (conj(p)^-1 + b2 r^-1 b2^H)^-1 a2."""
    gram = sys.b2 @ np.linalg.inv(w.r) @ sys.b2.conj().T
    inner = np.linalg.inv(np.linalg.inv(p).conj() + gram)
    return w.q + sys.a2.conj().T @ inner @ sys.a2


def anti_riccati_iterates(sys: AntilinearSystem, w: CostWeights):
    """Yield p(0) = q, p(1), ... for the conjugate-twisted iteration."""
    p = w.q.copy()
    yield p
    while True:
        p = _hermitize(anti_riccati_step(p, sys, w))
        yield p


def anti_riccati_residual(p_a: np.ndarray, sys: AntilinearSystem, w: CostWeights) -> float:
    """Frobenius norm of the defining equation's defect at p_a."""
    pc = np.asarray(p_a, dtype=complex).conj()
    a2, b2 = sys.a2, sys.b2
    s = w.r + b2.conj().T @ pc @ b2
    quad = a2.conj().T @ pc @ a2
    cross = b2.conj().T @ pc @ a2
    defect = quad - cross.conj().T @ np.linalg.solve(s, cross) - p_a + w.q
    return float(np.linalg.norm(defect, "fro"))


def solve_anti_riccati(
    sys: AntilinearSystem,
    w: CostWeights,
    opts: SolverOptions | None = None,
) -> RiccatiSolution:
    """Solve the conjugate-twisted equation; solution lands in slot p1 (p2 = 0)."""
    opts = opts or SolverOptions()
    if w.n != sys.n or w.m != sys.m:
        raise ValueError("weights do not conform to the system dimensions")
    it = anti_riccati_iterates(sys, w)
    p0 = next(it)
    fro = lambda m: float(np.linalg.norm(m, "fro"))
    p, iters, trace = _run_fixed_point(
        lambda _p: next(it), p0, lambda a, b: fro(a - b), fro, opts
    )
    residual = anti_riccati_residual(p, sys, w)
    _check_residual(residual, fro(p), opts, iters)
    zero_n = np.zeros((sys.n, sys.n))
    pc = p.conj()
    s1 = _hermitize(w.r + sys.b2.conj().T @ pc @ sys.b2)
    gram = _hermitize((sys.b2 @ np.linalg.inv(w.r) @ sys.b2.conj().T).conj())
    return RiccatiSolution(
        p=HermitianBimatrix(p, zero_n),
        s=HermitianBimatrix(s1, np.zeros_like(s1)),
        gramian=HermitianBimatrix(gram, zero_n),
        iterations=iters,
        residual=residual,
        trace=trace,
    )


# ---------------------------------------------------------------------------
# normal Riccati equation in transformed data (antilinear systems)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NormalData:
    """Standard DARE data (a_n, b_n, q_n, r_n) equivalent to an antilinear LQR.

    b_n is n x 2m and r_n is the 2m x 2m block-diagonal weight; q_n and r_n
    are Hermitian positive definite by construction when q, r are.
    """

    a_n: np.ndarray
    b_n: np.ndarray
    q_n: np.ndarray
    r_n: np.ndarray


def build_normal_data(sys: AntilinearSystem, w: CostWeights) -> NormalData:
    a2, b2, q, r = sys.a2, sys.b2, w.q, w.r
    n, m = sys.n, sys.m
    qs = q.conj()
    s_q = r + b2.conj().T @ qs @ b2
    a_n = a2.conj() @ (np.eye(n) - b2 @ np.linalg.solve(s_q, b2.conj().T @ qs)) @ a2
    b_n = np.hstack([b2.conj(), a2.conj() @ b2])
    q_n = _hermitize(
        q + a2.conj().T @ np.linalg.inv(np.linalg.inv(q).conj() + b2 @ np.linalg.inv(r) @ b2.conj().T) @ a2
    )
    r_n = np.block([
        [r.conj(), np.zeros((m, m))],
        [np.zeros((m, m)), _hermitize(s_q)],
    ])
    return NormalData(a_n=a_n, b_n=b_n, q_n=q_n, r_n=r_n)


def normal_riccati_step(p: np.ndarray, nd: NormalData) -> np.ndarray:
    gram = nd.b_n @ np.linalg.inv(nd.r_n) @ nd.b_n.conj().T
    return nd.q_n + nd.a_n.conj().T @ np.linalg.inv(np.linalg.inv(p) + gram) @ nd.a_n


def normal_riccati_iterates(nd: NormalData):
    p = nd.q_n.copy()
    yield p
    while True:
        p = _hermitize(normal_riccati_step(p, nd))
        yield p


def normal_riccati_residual(p_n: np.ndarray, nd: NormalData) -> float:
    """Frobenius defect of the standard DARE at p_n."""
    a, b = nd.a_n, nd.b_n
    s = nd.r_n + b.conj().T @ p_n @ b
    pa = p_n @ a
    cross = b.conj().T @ pa
    defect = a.conj().T @ pa - cross.conj().T @ np.linalg.solve(s, cross) - p_n + nd.q_n
    return float(np.linalg.norm(defect, "fro"))


def solve_normal_riccati(nd: NormalData, opts: SolverOptions | None = None) -> RiccatiSolution:
    """Standard DARE fixed-point iteration started at q_n."""
    opts = opts or SolverOptions()
    it = normal_riccati_iterates(nd)
    p0 = next(it)
    fro = lambda m: float(np.linalg.norm(m, "fro"))
    p, iters, trace = _run_fixed_point(
        lambda _p: next(it), p0, lambda a, b: fro(a - b), fro, opts
    )
    residual = normal_riccati_residual(p, nd)
    _check_residual(residual, fro(p), opts, iters)
    zero_n = np.zeros_like(p)
    s1 = _hermitize(nd.r_n + nd.b_n.conj().T @ p @ nd.b_n)
    gram = _hermitize(nd.b_n @ np.linalg.inv(nd.r_n) @ nd.b_n.conj().T)
    return RiccatiSolution(
        p=HermitianBimatrix(p, zero_n),
        s=HermitianBimatrix(s1, np.zeros_like(s1)),
        gramian=HermitianBimatrix(gram, zero_n),
        iterations=iters,
        residual=residual,
        trace=trace,
    )


# ---------------------------------------------------------------------------
# nonlinear matrix equation bridge
# ---------------------------------------------------------------------------


def _hermitian_pd_inv_sqrt(m: np.ndarray, name: str) -> np.ndarray:
    eigs, vecs = np.linalg.eigh(_hermitize(m))
    if eigs[0] <= 0:
        raise NotPositiveDefiniteError(f"{name} is not positive definite (min eig {eigs[0]:.3e})")
    return vecs @ np.diag(eigs ** -0.5) @ vecs.conj().T


@dataclass(frozen=True, eq=False)
class NmeBridge:
    """Data (a, x) of the equation x + a^H conj(x)^-1 a = I and its defect.

    q0 is the positive definite normalizer whose inverse square root
    conjugates the anti-Riccati data into the equation's scale.
    """

    a: np.ndarray
    x: np.ndarray
    q0: np.ndarray
    residual: float


def nme_transform(sys: AntilinearSystem, w: CostWeights, p_a: np.ndarray) -> NmeBridge:
    """Map an anti-Riccati solution p_a to a solution of x + a^H conj(x)^-1 a = I.

    p_a must solve the anti-Riccati equation (small residual); then the
    returned x satisfies the nonlinear matrix equation to a comparable
    accuracy.
    """
    a2, b2, q, r = sys.a2, sys.b2, w.q, w.r
    qinv = np.linalg.inv(q)
    term_a = (a2 @ qinv @ a2.conj().T).conj()
    term_b = (b2 @ np.linalg.inv(r) @ b2.conj().T).conj()
    q0 = _hermitize(qinv + term_a + term_b)
    q0_inv_sqrt = _hermitian_pd_inv_sqrt(q0, "q0")
    a = q0_inv_sqrt.conj() @ a2 @ qinv @ q0_inv_sqrt
    x = _hermitize(q0_inv_sqrt @ (np.linalg.inv(p_a) + term_a + term_b) @ q0_inv_sqrt)
    eigs = np.linalg.eigvalsh(x)
    if eigs[0] <= 0:
        raise NotPositiveDefiniteError(f"x is not positive definite (min eig {eigs[0]:.3e})")
    defect = x + a.conj().T @ np.linalg.inv(x.conj()) @ a - np.eye(x.shape[0])
    return NmeBridge(a=a, x=x, q0=q0, residual=float(np.linalg.norm(defect, "fro")))


def compare_iteration_counts(
    sys: AntilinearSystem,
    w: CostWeights,
    opts: SolverOptions | None = None,
) -> tuple[int, int]:
    """(anti iterations, normal iterations) to the same relative tolerance."""
    opts = opts or SolverOptions()
    anti = solve_anti_riccati(sys, w, opts)
    normal = solve_normal_riccati(build_normal_data(sys, w), opts)
    return anti.iterations, normal.iterations
