"""Koszul complex of a commuting tuple.

``E_k`` is ``H`` tensored with the ``k``-th exterior power of ``C^n``; its
summands are indexed by ``k``-subsets of ``{1..n}`` in *split order*
(:func:`enumerate_basis`). The boundary ``D_k : E_k -> E_{k-1}`` removes
the ``i``-th smallest index ``j_i`` of a subset with sign ``(-1)**(i-1)``
and applies ``T_{j_i}``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .errors import NotApplicableError, SizeError, SpecError
from .matrix_kernel import adjoint, op_norm
from .operator_tuple import OperatorTuple

DEFAULT_MAX_ROWS = 4096
MAX_DIM_ENV = "KOSZULSPEC_MAX_DIM"


def max_assembly_rows() -> int:
    raw = os.environ.get(MAX_DIM_ENV)
    if raw is None:
        return DEFAULT_MAX_ROWS
    try:
        value = int(raw)
    except ValueError:
        raise SpecError(f"{MAX_DIM_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise SpecError(f"{MAX_DIM_ENV} must be positive")
    return value


def check_size(n: int, d: int) -> None:
    """Refuse complexes whose largest chain space exceeds the row guard."""
    peak = comb(n, n // 2) * d
    limit = max_assembly_rows()
    if peak > limit:
        raise SizeError(
            f"Koszul assembly needs {peak} rows (n={n}, d={d}); limit is {limit} "
            f"(override with {MAX_DIM_ENV})"
        )


@lru_cache(maxsize=None)
def _split_order(n: int, k: int) -> tuple:
    if k < 0 or k > n:
        return ()
    if k == 0:
        return ((),)
    return _split_order(n - 1, k) + tuple(s + (n,) for s in _split_order(n - 1, k - 1))


@dataclass(frozen=True)
class ExteriorBasis:
    """Ordered ``k``-subsets of ``{1..n}`` (1-based) indexing the summands of ``E_k``."""

    n: int
    k: int
    subsets: tuple

    def __len__(self):
        return len(self.subsets)

    def index(self, subset) -> int:
        return _basis_index(self.n, self.k)[tuple(subset)]


@lru_cache(maxsize=None)
def _basis_index(n: int, k: int) -> dict:
    return {s: i for i, s in enumerate(_split_order(n, k))}


def enumerate_basis(n: int, k: int) -> ExteriorBasis:
    """Canonical basis of ``E_k^n``.

    Subsets without ``n`` come first, in the order of ``E_k^{n-1}``, followed
    by ``S + (n,)`` for ``S`` in the order of ``E_{k-1}^{n-1}``. Applied
    recursively this is colexicographic order; for ``n <= 4`` it coincides
    with "lexicographic within each half".
    """
    if n < 1:
        raise SpecError("n must be positive")
    if not 0 <= k <= n:
        raise SpecError(f"k={k} outside [0, {n}]")
    return ExteriorBasis(n, k, _split_order(n, k))


@lru_cache(maxsize=None)
def sign_matrices(n: int, k: int) -> np.ndarray:
    """``(n, C(n,k-1), C(n,k))`` array ``E`` with ``D_k = sum_j kron(E[j], T_j)``."""
    if not 1 <= k <= n:
        raise SpecError(f"boundary index k={k} outside [1, {n}]")
    rows = _basis_index(n, k - 1)
    cols = _split_order(n, k)
    E = np.zeros((n, len(rows), len(cols)))
    for c, S in enumerate(cols):
        for i, j in enumerate(S):
            E[j - 1, rows[S[:i] + S[i + 1:]], c] = (-1) ** i
    E.setflags(write=False)
    return E


def _assemble(E: np.ndarray, mats) -> np.ndarray:
    return sum(np.kron(E[j], A) for j, A in enumerate(mats))


def boundary_map(T: OperatorTuple, k: int) -> np.ndarray:
    """Dense ``D_k`` of shape ``(C(n,k-1) d, C(n,k) d)``."""
    check_size(T.n, T.dim)
    return _assemble(sign_matrices(T.n, k), T.matrices)


def _boundary_or_zero(T: OperatorTuple, k: int) -> np.ndarray:
    if 1 <= k <= T.n:
        return boundary_map(T, k)
    # D_0 : E_0 -> 0 and D_{n+1} : 0 -> E_n
    if k == 0:
        return np.zeros((0, T.dim), dtype=complex)
    return np.zeros((T.dim, 0), dtype=complex)


def laplacian(T: OperatorTuple, k: int) -> np.ndarray:
    """``Delta_k = D_k* D_k + D_{k+1} D_{k+1}*`` on ``E_k`` (size ``C(n,k) d``)."""
    if not 0 <= k <= T.n:
        raise SpecError(f"k={k} outside [0, {T.n}]")
    check_size(T.n, T.dim)
    Dk = _boundary_or_zero(T, k)
    Dk1 = _boundary_or_zero(T, k + 1)
    L = adjoint(Dk) @ Dk + Dk1 @ adjoint(Dk1)
    return 0.5 * (L + adjoint(L))


def laplacian_factor(T: OperatorTuple, k: int) -> np.ndarray:
    """Stacked ``[D_k; D_{k+1}*]`` with ``G* G = Delta_k``.

    Singular values of ``G`` are the square roots of the eigenvalues of
    ``Delta_k``, obtained without squaring the condition number.
    """
    if not 0 <= k <= T.n:
        raise SpecError(f"k={k} outside [0, {T.n}]")
    check_size(T.n, T.dim)
    return np.vstack([_boundary_or_zero(T, k), adjoint(_boundary_or_zero(T, k + 1))])


@dataclass(frozen=True, eq=False)
class KoszulComplex:
    tuple: OperatorTuple
    boundaries: tuple  # D_1 .. D_n
    laplacians: tuple  # Delta_0 .. Delta_n

    def boundary(self, k: int) -> np.ndarray:
        return self.boundaries[k - 1]

    def chain_defect(self) -> float:
        return max(
            (op_norm(self.boundaries[k - 1] @ self.boundaries[k]) for k in range(1, self.tuple.n)),
            default=0.0,
        )


def build_complex(T: OperatorTuple) -> KoszulComplex:
    check_size(T.n, T.dim)
    return KoszulComplex(
        T,
        tuple(boundary_map(T, k) for k in range(1, T.n + 1)),
        tuple(laplacian(T, k) for k in range(T.n + 1)),
    )


def chain_defect(T: OperatorTuple) -> float:
    """``max_k ||D_k D_{k+1}||``; zero exactly when the tuple commutes."""
    return build_complex(T).chain_defect()


def chain_dimensions(n: int, d: int) -> list:
    """``[dim E_0, ..., dim E_n]``."""
    return [comb(n, k) * d for k in range(n + 1)]


def euler_characteristic(n: int, d: int) -> int:
    return sum((-1) ** k * m for k, m in enumerate(chain_dimensions(n, d)))


def split_blocks(T: OperatorTuple, k: int) -> np.ndarray:
    """Assemble ``[[F_k, (-1)**(k+1) diag(T_n)], [0, F_{k-1}]]``.

    ``F`` is the complex of ``(T_1, ..., T_{n-1})``; ``diag(T_n)`` repeats
    ``T_n`` over the ``C(n-1, k-1)`` summands of ``E_{k-1}^{n-1}``.
    """
    n, d = T.n, T.dim
    if n < 2:
        raise NotApplicableError("the recursive split needs n >= 2")
    if not 1 <= k <= n - 1:
        raise SpecError(f"split check needs 1 <= k <= {n - 1}, got k={k}")
    head = OperatorTuple(T.matrices[:-1], checked=False)
    Fk = boundary_map(head, k)
    Fk1 = boundary_map(head, k - 1) if k >= 2 else np.zeros((0, d), dtype=complex)
    m = comb(n - 1, k - 1)
    corner = (-1) ** (k + 1) * np.kron(np.eye(m), T.matrices[-1])
    lower_left = np.zeros((Fk1.shape[0], Fk.shape[1]), dtype=complex)
    return np.block([[Fk, corner], [lower_left, Fk1]])


def recursive_split_check(T: OperatorTuple, k: int) -> float:
    """``||D_k - split_blocks(T, k)||``; zero by construction of the basis order."""
    return op_norm(boundary_map(T, k) - split_blocks(T, k))
