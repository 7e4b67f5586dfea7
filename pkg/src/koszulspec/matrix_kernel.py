"""Dense complex matrix helpers: norms, polar factors, Hermitian functional calculus.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; ``as_matrix``
normalises any array-like input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ShapeError
from .scalar_function import ScalarFunction

BASE_TOL = 1e-10


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a 2-D complex array, rejecting empty input."""
    A = np.asarray(M, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got ndim={A.ndim}")
    if A.size == 0:
        raise DimensionError("empty matrix")
    return A


def as_square(M) -> np.ndarray:
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {A.shape}")
    return A


def adjoint(M) -> np.ndarray:
    return np.conj(np.asarray(M)).T


def op_norm(M) -> float:
    """Spectral (operator 2-) norm; 0 for empty blocks."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def singular_values(M) -> np.ndarray:
    return np.linalg.svd(as_matrix(M), compute_uv=False)


def min_singular_value(M) -> float:
    """Smallest singular value; for wide matrices the missing ones count as 0."""
    A = as_matrix(M)
    s = np.linalg.svd(A, compute_uv=False)
    if A.shape[0] < A.shape[1]:
        return 0.0
    return float(s[-1])


def is_hermitian(M, tol: float = BASE_TOL) -> bool:
    A = as_square(M)
    return op_norm(A - adjoint(A)) <= tol * (1.0 + op_norm(A))


def normality_defect(M) -> float:
    """``||A*A - AA*||`` in operator norm."""
    A = as_square(M)
    return op_norm(adjoint(A) @ A - A @ adjoint(A))


def hermitian_function(H, f: ScalarFunction, tol: float = BASE_TOL) -> np.ndarray:
    """Apply ``f`` to a Hermitian matrix through its eigendecomposition.

    Eigenvalues that miss a closed lower domain end by less than
    ``tol * (1 + ||H||)`` are treated as roundoff and clipped onto it.
    """
    H = as_square(H)
    scale = 1.0 + op_norm(H)
    if op_norm(H - adjoint(H)) > tol * scale:
        raise ShapeError("hermitian_function requires a Hermitian matrix")
    H = 0.5 * (H + adjoint(H))
    lam, V = np.linalg.eigh(H)
    f.check_domain(lam, tol * scale, what="eigenvalue")
    dom = f.domain
    if not dom.lo_open:
        lam = np.maximum(lam, dom.lo)
    out = (V * f(lam)) @ adjoint(V)
    return 0.5 * (out + adjoint(out))


@dataclass(frozen=True, eq=False)
class PolarFactors:
    """``M = unitary @ positive`` with ``positive = (M*M)^{1/2}``."""

    unitary: np.ndarray
    positive: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.unitary @ self.positive


def polar_decompose(M) -> PolarFactors:
    """Right polar decomposition from the full SVD ``M = W diag(s) V*``.

    ``U = W V*`` is always a full unitary: on the null space it pairs the
    trailing left and right singular vectors in order, which is the
    completion convention for singular ``M``.
    """
    A = as_square(M)
    W, s, Vh = np.linalg.svd(A)
    P = (adjoint(Vh) * s) @ Vh
    return PolarFactors(unitary=W @ Vh, positive=0.5 * (P + adjoint(P)))


def modulus(M) -> np.ndarray:
    """``|M| = (M*M)^{1/2}``."""
    return polar_decompose(M).positive


def eigenvalues(M) -> np.ndarray:
    """Eigenvalues with multiplicity, sorted by real part then imaginary part."""
    A = as_square(M)
    lam = np.linalg.eigvals(A)
    return lam[np.lexsort((lam.imag, lam.real))]
