"""Seeded generators for test tuples.

Every random instance is a pure function of its arguments and seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SpecError
from .matrix_kernel import adjoint, as_square
from .operator_tuple import OperatorTuple


@dataclass(frozen=True)
class JointDiagonalSpec:
    """``dim`` joint values in ``C^n``; entry ``i`` is the ``i``-th diagonal across the tuple."""

    dim: int
    joint_values: tuple

    def __post_init__(self):
        vals = tuple(tuple(complex(c) for c in np.atleast_1d(v)) for v in self.joint_values)
        if self.dim < 1 or len(vals) != self.dim:
            raise SpecError(f"expected {self.dim} joint values, got {len(vals)}")
        if len({len(v) for v in vals}) != 1 or not vals[0]:
            raise SpecError("joint values must all have the same positive length n")
        object.__setattr__(self, "joint_values", vals)

    @property
    def n(self) -> int:
        return len(self.joint_values[0])

    def as_array(self) -> np.ndarray:
        """``(dim, n)`` array of joint values."""
        return np.array(self.joint_values, dtype=complex)


def diagonal_tuple(spec: JointDiagonalSpec) -> OperatorTuple:
    vals = spec.as_array()
    return OperatorTuple(tuple(np.diag(vals[:, j]) for j in range(spec.n)))


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR factorisation of a Ginibre matrix."""
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    phases = np.diag(R) / np.abs(np.diag(R))
    return Q * phases


def conjugated_normal_tuple(spec: JointDiagonalSpec, seed: int) -> OperatorTuple:
    """``Q D_j Q*`` for a seeded Haar unitary ``Q``: normal, doubly commuting."""
    Q = haar_unitary(spec.dim, np.random.default_rng(seed))
    return diagonal_tuple(spec).conjugated(Q)


def tensor_pair(A, B) -> OperatorTuple:
    """``(A (x) I_b, I_a (x) B)``; doubly commuting for every ``A``, ``B``."""
    A, B = as_square(A), as_square(B)
    return OperatorTuple(
        (np.kron(A, np.eye(B.shape[0])), np.kron(np.eye(A.shape[0]), B))
    )


def tensor_tuple(factors) -> OperatorTuple:
    """n-fold version of :func:`tensor_pair`: leg ``j`` acts on tensor slot ``j``."""
    factors = [as_square(F) for F in factors]
    legs = []
    for j, F in enumerate(factors):
        leg = np.ones((1, 1), dtype=complex)
        for i, G in enumerate(factors):
            leg = np.kron(leg, F if i == j else np.eye(G.shape[0]))
        legs.append(leg)
    return OperatorTuple(tuple(legs))


def truncated_weighted_shift(weights) -> np.ndarray:
    """``(d+1) x (d+1)`` matrix with ``weights`` on the first subdiagonal."""
    w = np.asarray(weights, dtype=float).ravel()
    if w.size == 0:
        raise SpecError("weights must be nonempty")
    if np.any(w <= 0):
        raise SpecError("weights must be positive")
    return np.diag(w, k=-1).astype(complex)


def random_joint_spec(n: int, d: int, seed: int, radius: float = 2.0) -> JointDiagonalSpec:
    """Joint values drawn uniformly from the polydisc of the given radius."""
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.uniform(size=(d, n)))
    theta = rng.uniform(-np.pi, np.pi, size=(d, n))
    return JointDiagonalSpec(d, tuple(map(tuple, r * np.exp(1j * theta))))


def random_normal_tuple(n: int, d: int, seed: int, radius: float = 2.0) -> OperatorTuple:
    """Random commuting normal tuple: a random joint spectrum, conjugated."""
    return conjugated_normal_tuple(random_joint_spec(n, d, seed, radius), seed + 1)


def random_commuting_tuple(n: int, d: int, seed: int, degree: int = 2) -> OperatorTuple:
    """Generally non-normal commuting tuple: random polynomials in one Ginibre matrix."""
    rng = np.random.default_rng(seed)
    A = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2 * d)
    powers = [np.eye(d, dtype=complex)]
    for _ in range(degree):
        powers.append(powers[-1] @ A)
    legs = []
    for _ in range(n):
        c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
        legs.append(sum(ck * P for ck, P in zip(c, powers)))
    return OperatorTuple(tuple(legs))


def random_normal_matrix(d: int, rng: np.random.Generator, moduli=(0.2, 3.0)):
    """Return ``(A, eigenvalues, Q)`` with ``A = Q diag(eigenvalues) Q*``."""
    r = rng.uniform(*moduli, size=d)
    lam = r * np.exp(1j * rng.uniform(-np.pi, np.pi, size=d))
    Q = haar_unitary(d, rng)
    return (Q * lam) @ adjoint(Q), lam, Q
