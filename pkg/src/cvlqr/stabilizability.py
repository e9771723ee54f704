"""Stabilizability tests for complex-valued and antilinear systems.

Both tests are rank conditions of the form "rank is full for every |lambda| >= 1".
Rank can only drop at eigenvalues of the relevant state matrix, so the check
reduces to the finitely many eigenvalues on or outside the unit circle
(the usual PBH reduction). Eigenvalues within BOUNDARY_TOL of the circle are
conservatively treated as on it.
"""

from __future__ import annotations

import numpy as np

from .systems import AntilinearSystem, ComplexLinearSystem

BOUNDARY_TOL = 1e-9
RANK_RTOL = 1e-10


def _rank(m: np.ndarray) -> int:
    svals = np.linalg.svd(m, compute_uv=False)
    if svals.size == 0:
        return 0
    return int(np.count_nonzero(svals > RANK_RTOL * svals[0]))


def unstabilizable_modes_complex(sys: ComplexLinearSystem) -> list[complex]:
    """Eigenvalues of the embedded state matrix that fail the rank test."""
    ae = sys.a.embed()
    be = sys.b.embed()
    n2 = ae.shape[0]
    bad = []
    for lam in np.linalg.eigvals(ae):
        if abs(lam) < 1.0 - BOUNDARY_TOL:
            continue
        pencil = np.hstack([lam * np.eye(n2) - ae, be])
        if _rank(pencil) < n2:
            bad.append(complex(lam))
    return bad


def is_stabilizable_complex(sys: ComplexLinearSystem) -> bool:
    return not unstabilizable_modes_complex(sys)


def unstabilizable_modes_antilinear(sys: AntilinearSystem) -> list[complex]:
    """Eigenvalues of a2 @ conj(a2) that fail the reduced rank test.

    The antilinear system is stabilizable iff the normal pair
    (a2 conj(a2), [b2, a2 conj(b2)]) is.
    """
    m = sys.a2 @ sys.a2.conj()
    n = sys.n
    binput = np.hstack([sys.b2, sys.a2 @ sys.b2.conj()])
    bad = []
    for lam in np.linalg.eigvals(m):
        if abs(lam) < 1.0 - BOUNDARY_TOL:
            continue
        pencil = np.hstack([lam * np.eye(n) - m, binput])
        if _rank(pencil) < n:
            bad.append(complex(lam))
    return bad


def is_stabilizable_antilinear(sys: AntilinearSystem) -> bool:
    return not unstabilizable_modes_antilinear(sys)
