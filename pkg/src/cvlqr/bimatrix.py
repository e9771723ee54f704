"""Bimatrix algebra.

A bimatrix {M1, M2} is an ordered pair of equally sized complex matrices
acting on a complex vector x as

    {M1, M2} x = M1 @ x + conj(M2) @ conj(x),

which is a real-linear (but not complex-linear) map. All algebra here is
grounded in the canonical embedding

    embed({M1, M2}) = [[M1, conj(M2)], [M2, conj(M1)]],

a 2n x 2p complex matrix acting on the stacked vector [x; conj(x)]. The
embedding is an injective homomorphism for addition, multiplication,
conjugate transposition and inversion, which is what every correctness
test in this package leans on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import SingularBimatrixError, StructureViolationError

# Tolerances (relative, double precision at n <= 1e2):
STRUCTURE_RTOL = 1e-10   # Hermitian / complex-symmetric structure check
PD_RTOL = 1e-10          # positive-definiteness eigenvalue threshold, scaled by bnorm
RANK_RTOL = 1e-12        # singularity threshold for inversion, scaled by sigma_max
PSD_TOL = 1e-9           # default absolute eigenvalue slack for the semidefinite order


def _as_complex_matrix(a, name: str) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"{name} must be a 2-D matrix, got ndim={m.ndim}")
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class Bimatrix:
    """Ordered pair of equally sized complex matrices {m1, m2}.

    Immutable after construction; all operations return new values.
    """

    m1: np.ndarray
    m2: np.ndarray

    def __post_init__(self):
        m1 = _as_complex_matrix(self.m1, "m1")
        m2 = _as_complex_matrix(self.m2, "m2")
        if m1.shape != m2.shape:
            raise ValueError(f"m1 and m2 must have identical shapes, got {m1.shape} vs {m2.shape}")
        object.__setattr__(self, "m1", m1)
        object.__setattr__(self, "m2", m2)

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "Bimatrix":
        return cls(np.eye(n), np.zeros((n, n)))

    @classmethod
    def zeros(cls, n: int, p: int | None = None) -> "Bimatrix":
        p = n if p is None else p
        return cls(np.zeros((n, p)), np.zeros((n, p)))

    @classmethod
    def from_embedding(cls, e: np.ndarray) -> "Bimatrix":
        """Extract {m1, m2} from a 2n x 2p block matrix of embedding form.

        Off-structure parts (roundoff) are averaged away.
        """
        e = np.asarray(e, dtype=complex)
        if e.ndim != 2 or e.shape[0] % 2 or e.shape[1] % 2:
            raise ValueError(f"embedding must have even dimensions, got {e.shape}")
        n, p = e.shape[0] // 2, e.shape[1] // 2
        m1 = (e[:n, :p] + e[n:, p:].conj()) / 2
        m2 = (e[n:, :p] + e[:n, p:].conj()) / 2
        return cls(m1, m2)

    # -- basic queries -----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.m1.shape

    def embed(self) -> np.ndarray:
        """Canonical 2n x 2p complex representation."""
        return np.block([[self.m1, self.m2.conj()], [self.m2, self.m1.conj()]])

    def norm(self) -> float:
        """Frobenius norm of the embedding; zero iff the bimatrix is zero."""
        return np.sqrt(2.0) * np.sqrt(
            np.linalg.norm(self.m1, "fro") ** 2 + np.linalg.norm(self.m2, "fro") ** 2
        )

    # -- algebra -----------------------------------------------------------

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Action m1 @ x + conj(m2) @ conj(x) on a vector x."""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.shape[1],):
            raise ValueError(f"vector of length {self.shape[1]} expected, got shape {x.shape}")
        return self.m1 @ x + self.m2.conj() @ x.conj()

    def conj_transpose(self) -> "Bimatrix":
        """Adjoint: embed(result) == embed(self)^H."""
        return Bimatrix(self.m1.conj().T, self.m2.T)

    @property
    def H(self) -> "Bimatrix":
        return self.conj_transpose()

    def inverse(self) -> "Bimatrix":
        """Multiplicative inverse, computed through the embedding.

        Raises SingularBimatrixError when the smallest singular value of the
        embedding falls below RANK_RTOL times the largest.
        """
        n, p = self.shape
        if n != p:
            raise ValueError("only square bimatrices can be inverted")
        e = self.embed()
        svals = np.linalg.svd(e, compute_uv=False)
        if svals[-1] <= RANK_RTOL * svals[0]:
            raise SingularBimatrixError(
                f"bimatrix is singular to working precision (sigma_min/sigma_max = "
                f"{svals[-1] / max(svals[0], np.finfo(float).tiny):.2e})"
            )
        # The inverse of an embedding-form matrix has embedding form again;
        # averaging removes roundoff drift from that structure.
        return Bimatrix.from_embedding(np.linalg.inv(e))

    def __add__(self, other: "Bimatrix") -> "Bimatrix":
        return Bimatrix(self.m1 + other.m1, self.m2 + other.m2)

    def __sub__(self, other: "Bimatrix") -> "Bimatrix":
        return Bimatrix(self.m1 - other.m1, self.m2 - other.m2)

    def __neg__(self) -> "Bimatrix":
        return Bimatrix(-self.m1, -self.m2)

    def __mul__(self, c: complex) -> "Bimatrix":
        # Left scalar action c * ({M1,M2} x) is the bimatrix {c*M1, conj(c)*M2}.
        c = complex(c)
        return Bimatrix(c * self.m1, np.conj(c) * self.m2)

    __rmul__ = __mul__

    def __matmul__(self, other: "Bimatrix") -> "Bimatrix":
        """Composition, so that (X @ Y).apply(v) == X.apply(Y.apply(v))."""
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"inner dimensions do not conform: {self.shape} @ {other.shape}")
        c1 = self.m1 @ other.m1 + self.m2.conj() @ other.m2
        c2 = self.m1.conj() @ other.m2 + self.m2 @ other.m1
        return Bimatrix(c1, c2)


@dataclass(frozen=True, eq=False)
class HermitianBimatrix(Bimatrix):
    """Bimatrix equal to its own conjugate transpose: m1 Hermitian, m2 complex symmetric.

    The constructor re-symmetrizes both parts and records the size of the
    correction (max absolute entry removed). Pairs whose structure deviation
    exceeds STRUCTURE_RTOL relative to the overall norm are rejected.
    """

    correction: float = field(init=False, default=0.0)

    def __post_init__(self):
        super().__post_init__()
        m1, m2 = self.m1, self.m2
        if m1.shape[0] != m1.shape[1]:
            raise ValueError(f"Hermitian bimatrix must be square, got {m1.shape}")
        d1 = (m1 - m1.conj().T) / 2
        d2 = (m2 - m2.T) / 2
        correction = max(
            np.abs(d1).max() if d1.size else 0.0,
            np.abs(d2).max() if d2.size else 0.0,
        )
        sym1 = m1 - d1
        sym2 = m2 - d2
        scale = max(np.abs(sym1).max() if sym1.size else 0.0,
                    np.abs(sym2).max() if sym2.size else 0.0, 1.0)
        if correction > STRUCTURE_RTOL * scale:
            raise StructureViolationError(
                f"structure deviation {correction:.3e} exceeds tolerance "
                f"{STRUCTURE_RTOL * scale:.3e}"
            )
        sym1.setflags(write=False)
        sym2.setflags(write=False)
        object.__setattr__(self, "m1", sym1)
        object.__setattr__(self, "m2", sym2)
        object.__setattr__(self, "correction", float(correction))

    # p1/p2 are the conventional slot names for cost bimatrices.
    @property
    def p1(self) -> np.ndarray:
        return self.m1

    @property
    def p2(self) -> np.ndarray:
        return self.m2

    @classmethod
    def wrap(cls, bm: Bimatrix) -> "HermitianBimatrix":
        return cls(bm.m1, bm.m2)

    def is_positive_definite(self) -> bool:
        """True iff the embedding is Hermitian positive definite.

        The eigenvalue threshold is PD_RTOL * norm(), so the zero bimatrix
        is not positive definite.
        """
        eigs = np.linalg.eigvalsh(self.embed())
        return bool(eigs[0] > PD_RTOL * self.norm())

    def quadratic_form(self, x: np.ndarray) -> float:
        """Re(x^H p1 x + x^H conj(p2) conj(x)); equals the half embedding form."""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.shape[0],):
            raise ValueError(f"vector of length {self.shape[0]} expected, got shape {x.shape}")
        return float(np.real(x.conj() @ self.m1 @ x + x.conj() @ self.m2.conj() @ x.conj()))


def bnorm(x: Bimatrix) -> float:
    """Frobenius norm of the embedding of x."""
    return x.norm()


def psd_leq(x: HermitianBimatrix, y: HermitianBimatrix, tol: float = PSD_TOL) -> bool:
    """Semidefinite order: embed(y) - embed(x) has min eigenvalue >= -tol."""
    if x.shape != y.shape:
        raise ValueError(f"shapes do not conform: {x.shape} vs {y.shape}")
    diff = (y - x)
    e = diff.embed()
    e = (e + e.conj().T) / 2
    return bool(np.linalg.eigvalsh(e)[0] >= -tol)


def quadratic_form(p: HermitianBimatrix, x: np.ndarray) -> float:
    return p.quadratic_form(x)
