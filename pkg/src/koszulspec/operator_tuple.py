"""Commuting operator tuples and the single-operator class predicates.

The p-hyponormal and log-hyponormal predicates return :class:`Verdict`
objects carrying the least eigenvalue that decided them, so callers can see
how far from the boundary an instance sits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from .errors import CommutationError, DimensionError, SpecError
from .matrix_kernel import (
    BASE_TOL,
    adjoint,
    as_square,
    hermitian_function,
    min_singular_value,
    modulus,
    normality_defect,
    op_norm,
)
from .scalar_function import ScalarFunction

COMMUTATION_TOL = 1e-10
PSD_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class OperatorTuple:
    """``n`` square ``d x d`` complex matrices ``(T_1, ..., T_n)``.

    With ``checked=True`` (the default) construction fails with
    :class:`CommutationError` unless every commutator is below
    ``COMMUTATION_TOL * (1 + max ||T_j||)**2``. Use :meth:`unchecked` to build
    non-commuting tuples for negative tests and classification.
    """

    matrices: tuple
    checked: bool = True

    def __post_init__(self):
        mats = []
        for M in self.matrices:
            A = np.array(as_square(M), dtype=complex)
            A.setflags(write=False)
            mats.append(A)
        if not mats:
            raise SpecError("an operator tuple needs at least one matrix")
        d = mats[0].shape[0]
        if any(A.shape[0] != d for A in mats):
            raise DimensionError("all matrices in a tuple must share one dimension")
        object.__setattr__(self, "matrices", tuple(mats))
        if self.checked:
            defect = self.defects[0]
            if defect > self.commutation_tol:
                raise CommutationError(
                    f"tuple does not commute: max ||[T_i, T_j]|| = {defect:.3e} "
                    f"> {self.commutation_tol:.3e}"
                )

    @classmethod
    def unchecked(cls, matrices) -> OperatorTuple:
        return cls(tuple(matrices), checked=False)

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, j):
        return self.matrices[j]

    @property
    def n(self) -> int:
        return len(self.matrices)

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]

    @cached_property
    def norms(self) -> tuple:
        return tuple(op_norm(A) for A in self.matrices)

    @property
    def max_norm(self) -> float:
        return max(self.norms)

    @property
    def scale(self) -> float:
        """``1 + max_j ||T_j||``; tolerances are relative to this."""
        return 1.0 + self.max_norm

    @property
    def commutation_tol(self) -> float:
        return COMMUTATION_TOL * self.scale**2

    @cached_property
    def defects(self) -> tuple:
        """``(commuting defect, double-commuting defect)``, see :func:`commutation_defects`."""
        comm = 0.0
        for A, B in combinations(self.matrices, 2):
            comm = max(comm, op_norm(_commutator(A, B)))
        double = 0.0
        for A, B in permutations(self.matrices, 2):
            double = max(double, op_norm(_commutator(adjoint(A), B)))
        return comm, double

    def _like(self, mats) -> OperatorTuple:
        return OperatorTuple(tuple(mats), checked=self.checked)

    def shifted(self, z) -> OperatorTuple:
        """The tuple ``T - z = (T_1 - z_1, ..., T_n - z_n)``."""
        z = np.asarray(z, dtype=complex).ravel()
        if z.size != self.n:
            raise SpecError(f"point has {z.size} coordinates, tuple has n={self.n}")
        eye = np.eye(self.dim)
        return self._like(A - zj * eye for A, zj in zip(self.matrices, z))

    def scaled(self, c: complex) -> OperatorTuple:
        return self._like(c * A for A in self.matrices)

    def adjoint(self) -> OperatorTuple:
        return self._like(adjoint(A) for A in self.matrices)

    def conjugated(self, Q) -> OperatorTuple:
        """Simultaneous unitary conjugation ``T_j -> Q T_j Q*``."""
        Q = as_square(Q)
        return self._like(Q @ A @ adjoint(Q) for A in self.matrices)


def _real_split_product(X, Y) -> np.ndarray:
    """``X @ Y`` through four real products.

    Complex GEMM kernels round the two operands asymmetrically, so ``XY`` and
    ``YX`` can differ in the last bit even when each entry is a single
    product (tensor legs). Real products keep such commutators exactly zero.
    """
    Xr, Xi, Yr, Yi = X.real, X.imag, Y.real, Y.imag
    return (Xr @ Yr - Xi @ Yi) + 1j * (Xr @ Yi + Xi @ Yr)


def _commutator(X, Y) -> np.ndarray:
    return _real_split_product(X, Y) - _real_split_product(Y, X)


def commutation_defects(T: OperatorTuple) -> tuple:
    """Return ``(max_{i<j} ||T_iT_j - T_jT_i||, max_{i!=j} ||T_i*T_j - T_jT_i*||)``."""
    return T.defects


def is_doubly_commuting(T: OperatorTuple) -> bool:
    comm, double = T.defects
    return comm <= T.commutation_tol and double <= T.commutation_tol


@dataclass(frozen=True)
class Verdict:
    """Outcome of a class predicate.

    ``holds`` is ``None`` when the predicate does not apply (for example
    log-hyponormality of a singular matrix); ``margin`` is the least
    eigenvalue that decided the verdict.
    """

    holds: bool | None
    margin: float | None = None
    reason: str = ""

    @property
    def applicable(self) -> bool:
        return self.holds is not None

    def to_dict(self) -> dict:
        status = "not-applicable" if self.holds is None else bool(self.holds)
        out = {"holds": status, "margin": self.margin}
        if self.reason:
            out["reason"] = self.reason
        return out


def _psd_margin(H) -> float:
    return float(np.linalg.eigvalsh(0.5 * (H + adjoint(H)))[0])


def is_p_hyponormal(A, p: float) -> Verdict:
    """Test ``(A*A)^p >= (AA*)^p`` in the semidefinite order."""
    A = as_square(A)
    if not p > 0:
        raise SpecError("p must be positive")
    f = ScalarFunction.power(p)
    AhA = adjoint(A) @ A
    AAh = A @ adjoint(A)
    margin = _psd_margin(hermitian_function(AhA, f) - hermitian_function(AAh, f))
    tol = PSD_TOL * (1.0 + op_norm(A) ** (2 * p))
    return Verdict(margin >= -tol, margin)


def is_semi_hyponormal(A) -> Verdict:
    """``|A| >= |A*|``, computed from the polar moduli directly."""
    A = as_square(A)
    margin = _psd_margin(modulus(A) - modulus(adjoint(A)))
    return Verdict(margin >= -PSD_TOL * (1.0 + op_norm(A)), margin)


def is_log_hyponormal(A) -> Verdict:
    """Invertible ``A`` with ``log|A| >= log|A*|``; not applicable when singular."""
    A = as_square(A)
    smin = min_singular_value(A)
    if smin <= BASE_TOL * (1.0 + op_norm(A)):
        return Verdict(None, None, "matrix is not invertible")
    log = ScalarFunction.log()
    D = hermitian_function(modulus(A), log) - hermitian_function(modulus(adjoint(A)), log)
    margin = _psd_margin(D)
    scale = 1.0 + max(abs(np.log(smin)), abs(np.log(op_norm(A))))
    return Verdict(margin >= -PSD_TOL * scale, margin)


def satisfies_condition1(A, tol: float = BASE_TOL) -> bool:
    """Adjoint-vanishing condition, checked as normality of ``A``.

    The condition asks that ``(A - z)x_k -> 0`` force ``(A - z)*x_k -> 0``.
    In finite dimension, asking this for every ``z`` is the same as
    ``ker(A - z) = ker(A - z)*`` for all ``z``, i.e. normality.
    """
    A = as_square(A)
    return normality_defect(A) <= tol * (1.0 + op_norm(A) ** 2)


@dataclass
class OperatorReport:
    is_normal: bool
    normality_defect: float
    p_hyponormal_for: list
    is_log_hyponormal: Verdict
    satisfies_condition1: bool

    def to_dict(self) -> dict:
        return {
            "is_normal": self.is_normal,
            "normality_defect": self.normality_defect,
            "p_hyponormal_for": [
                {"p": p, **v.to_dict()} for p, v in self.p_hyponormal_for
            ],
            "is_log_hyponormal": self.is_log_hyponormal.to_dict(),
            "satisfies_condition1": self.satisfies_condition1,
        }


@dataclass
class ClassificationReport:
    commuting_defect: float
    double_commuting_defect: float
    per_operator: list = field(default_factory=list)
    tolerance: float = 0.0

    @property
    def commuting(self) -> bool:
        return self.commuting_defect <= self.tolerance

    @property
    def doubly_commuting(self) -> bool:
        return self.commuting and self.double_commuting_defect <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "commuting_defect": self.commuting_defect,
            "double_commuting_defect": self.double_commuting_defect,
            "commuting": self.commuting,
            "doubly_commuting": self.doubly_commuting,
            "tolerance": self.tolerance,
            "per_operator": [r.to_dict() for r in self.per_operator],
        }


def classify(T: OperatorTuple, ps: Sequence[float] = (0.25, 0.5, 0.75)) -> ClassificationReport:
    ps = [float(p) for p in ps]
    if not ps or any(not 0 < p <= 1 for p in ps):
        raise SpecError("ps must be a nonempty list of values in (0, 1]")
    comm, double = T.defects
    reports = []
    for A in T:
        normal = satisfies_condition1(A)
        reports.append(
            OperatorReport(
                is_normal=normal,
                normality_defect=normality_defect(A),
                p_hyponormal_for=[(p, is_p_hyponormal(A, p)) for p in ps],
                is_log_hyponormal=is_log_hyponormal(A),
                satisfies_condition1=normal,
            )
        )
    return ClassificationReport(comm, double, reports, T.commutation_tol)


__all__ = [
    "ClassificationReport",
    "OperatorReport",
    "OperatorTuple",
    "Verdict",
    "classify",
    "commutation_defects",
    "is_doubly_commuting",
    "is_log_hyponormal",
    "is_p_hyponormal",
    "is_semi_hyponormal",
    "satisfies_condition1",
]
