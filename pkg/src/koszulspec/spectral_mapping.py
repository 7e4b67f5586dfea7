"""The polar transform ``S_j = U_j f(|T_j|)`` and spectral mapping checks.

Spectral points move radially: ``r e^{i theta} -> e^{i theta} f(r)``. The
verification workflows compare point clouds with one-sided Hausdorff
distances; the forward side (mapped source into target) is the inclusion
statement, both sides together are set equality.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError, HypothesisError, IntegrityError, SpecError
from .matrix_kernel import BASE_TOL, hermitian_function, min_singular_value, polar_decompose
from .operator_tuple import (
    OperatorTuple,
    is_log_hyponormal,
    is_p_hyponormal,
    satisfies_condition1,
)
from .scalar_function import ScalarFunction
from .taylor_spectrum import (
    Polydisc,
    SpectrumPoint,
    SpectrumPointCloud,
    coverage_threshold,
    default_threshold,
    grid_scan,
    joint_eigenvalues,
    singularity_residual,
)

__all__ = [
    "MappingReport",
    "evaluate_polynomial",
    "hausdorff",
    "map_cloud",
    "map_points",
    "polynomial_map_verify",
    "transform_tuple",
    "verify_mapping",
]


def transform_tuple(T: OperatorTuple, f: ScalarFunction) -> OperatorTuple:
    """``S = (U_1 f(|T_1|), ..., U_n f(|T_n|))``.

    Raises :class:`DomainError` when some ``sigma(|T_j|)`` leaves the domain of
    ``f``. For doubly commuting normal input the result is checked to be
    doubly commuting again (:class:`IntegrityError` otherwise); other inputs
    yield an unchecked tuple.
    """
    legs = []
    for j, A in enumerate(T, start=1):
        scale = 1.0 + T.norms[j - 1]
        if f.domain.lo_open and min_singular_value(A) <= BASE_TOL * scale:
            raise DomainError(f"T_{j} is not invertible; {f.label} needs sigma(|T_{j}|) > 0")
        polar = polar_decompose(A)
        try:
            fP = hermitian_function(polar.positive, f)
        except DomainError as exc:
            raise DomainError(f"T_{j}: {exc}") from None
        legs.append(polar.unitary @ fP)

    normal_input = T.checked and all(satisfies_condition1(A) for A in T)
    S = OperatorTuple.unchecked(legs)
    if normal_input and max(T.defects) <= T.commutation_tol:
        if max(S.defects) > S.commutation_tol:
            raise IntegrityError(
                f"transformed tuple lost double commutativity (defects {S.defects})"
            )
        return OperatorTuple(S.matrices)
    return S


def map_points(Z, f: ScalarFunction) -> np.ndarray:
    """Apply ``r e^{i theta} -> e^{i theta} f(r)`` coordinatewise.

    ``theta`` is the principal argument in ``(-pi, pi]``, taken as 0 at
    ``r = 0``. Computed as ``z * (f(r) / r)`` so the identity is exact.
    """
    Z = np.asarray(Z, dtype=complex)
    r = np.abs(Z)
    f.check_domain(r.ravel(), what="modulus")
    zero = r == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(zero, 0.0, f(np.where(zero, 1.0, r)) / np.where(zero, 1.0, r))
    W = Z * ratio
    if zero.any():
        W = np.where(zero, f(np.zeros_like(r)).astype(complex), W)
    # -0.0 imaginary parts would put the argument at -pi
    return W.real + 1j * np.where((W.imag == 0) & (W.real < 0), 0.0, W.imag)


def map_cloud(cloud: SpectrumPointCloud, f: ScalarFunction) -> SpectrumPointCloud:
    """Image of a cloud under the radial map; residuals are not carried over."""
    W = map_points(cloud.coords(), f)
    points = [SpectrumPoint(tuple(complex(c) for c in w)) for w in W]
    return SpectrumPointCloud(cloud.n, points)


def _coords(cloud) -> np.ndarray:
    if isinstance(cloud, SpectrumPointCloud):
        return cloud.coords()
    Z = np.asarray(cloud, dtype=complex)
    return Z.reshape(len(Z), -1) if Z.ndim < 2 else Z


def hausdorff(A, B) -> tuple:
    """``(sup_a dist(a, B), sup_b dist(b, A))`` in ``C^n = R^{2n}``."""
    ZA, ZB = _coords(A), _coords(B)
    if len(ZA) == 0 or len(ZB) == 0:
        raise SpecError("Hausdorff distance needs two nonempty clouds")
    if ZA.shape[1] != ZB.shape[1]:
        raise SpecError(f"dimension mismatch: n={ZA.shape[1]} vs n={ZB.shape[1]}")
    XA = np.hstack([ZA.real, ZA.imag])
    XB = np.hstack([ZB.real, ZB.imag])
    forward = cKDTree(XB).query(XA)[0].max()
    backward = cKDTree(XA).query(XB)[0].max()
    return float(forward), float(backward)


def _hausdorff_or_empty(A, B) -> tuple:
    na, nb = len(_coords(A)), len(_coords(B))
    if na and nb:
        return hausdorff(A, B)
    # an empty side is vacuously within range; the nonempty side is not
    return (math.inf if na else 0.0), (math.inf if nb else 0.0)


@dataclass
class MappingReport:
    forward_hausdorff: float
    backward_hausdorff: float
    mode: str
    passed: bool
    tolerance: float
    metadata: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        meta = dict(self.metadata)
        return {
            "mode": self.mode,
            "forward": self.forward_hausdorff,
            "backward": self.backward_hausdorff,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
            "f": meta.pop("f", None),
            "thresholds": meta.pop("thresholds", {}),
            "warnings": list(self.warnings),
            **meta,
        }


def _decide(forward: float, backward: float, mode: str, tol: float) -> bool:
    if mode == "inclusion":
        return forward <= tol
    return forward <= tol and backward <= tol


def _check_theorem_hypotheses(T: OperatorTuple, f: ScalarFunction) -> None:
    comm, double = T.defects
    if comm > T.commutation_tol or double > T.commutation_tol:
        raise HypothesisError(
            f"tuple is not doubly commuting (defects {comm:.3e}, {double:.3e})"
        )
    for j, A in enumerate(T, start=1):
        if not satisfies_condition1(A):
            raise HypothesisError(f"T_{j} is not normal, so (T_{j} - z)x -> 0 need not force (T_{j} - z)* x -> 0")
    for j, A in enumerate(T, start=1):
        s = np.linalg.svd(A, compute_uv=False)
        if f.domain.lo_open and s[-1] <= BASE_TOL * (1.0 + s[0]):
            raise HypothesisError(f"f = {f.label} is not admissible: T_{j} is not invertible")
        try:
            f.check_domain(s, BASE_TOL * (1.0 + s[0]), what=f"singular value of T_{j}")
        except DomainError as exc:
            raise HypothesisError(f"f is not admissible: {exc}") from None


def _equality_gate(T: OperatorTuple, f: ScalarFunction) -> str | None:
    """Check the equality-mode hypotheses; return a downgrade warning or ``None``.

    Raises :class:`HypothesisError` when ``f`` has an equality theorem whose
    hypotheses fail.
    """
    if f.kind == "identity" or (f.kind == "power" and 0 < f.exponent < 2):
        p = 0.5 if f.kind == "identity" else f.exponent / 2
        for j, A in enumerate(T, start=1):
            if not is_p_hyponormal(A, p).holds:
                raise HypothesisError(f"T_{j} is not p-hyponormal for p = {p:g}")
        return None
    if f.kind == "log":
        for j, A in enumerate(T, start=1):
            if not min_singular_value(A) > 1.0 + BASE_TOL:
                raise HypothesisError(f"log|T_j| > 0 fails for T_{j}: a singular value is <= 1")
            if not is_log_hyponormal(A).holds:
                raise HypothesisError(f"T_{j} is not log-hyponormal")
        return None
    return (
        f"no set-equality result covers f = {f.label}; "
        "verifying the inclusion direction only"
    )


def _target_radius(T: OperatorTuple, region: Polydisc, f: ScalarFunction) -> float:
    """Largest ``|f(r)|`` over the moduli the source spectrum can have."""
    centre = np.abs(np.asarray(region.center))
    s_min = min(np.linalg.svd(A, compute_uv=False)[-1] for A in T)
    r_lo = max(0.0, float(centre.min()) - region.radius, float(s_min))
    r_hi = min(float(centre.max()) + region.radius, T.max_norm)
    r_lo = min(r_lo, r_hi)
    if f.domain.lo_open:
        r_lo = max(r_lo, np.nextafter(0.0, 1.0))
    grid = np.linspace(r_lo, r_hi, 513)
    return float(np.abs(f(grid)).max())


def verify_mapping(
    T: OperatorTuple,
    f: ScalarFunction,
    region: Polydisc,
    resolution: int = 41,
    mode: str = "equality",
    tol: float | None = None,
    *,
    workers: int | None = None,
) -> MappingReport:
    """Scan ``sigma_T(T)`` and ``sigma_T(S)`` and compare the mapped source cloud with the target.

    Both scans use the pitch ``h`` of the source grid; the target grid is the
    centred polydisc covering the image of the source moduli, padded by one
    cell. Clouds keep the residual minima among grid nodes within one cell
    half-diagonal, so each isolated spectral point contributes the node
    nearest to it. ``tol`` defaults to ``1.5 h``.
    """
    if mode not in ("inclusion", "equality"):
        raise SpecError(f"mode must be 'inclusion' or 'equality', got {mode!r}")
    if resolution < 2 or region.radius <= 0:
        raise SpecError("verification needs resolution >= 2 and a positive radius")
    _check_theorem_hypotheses(T, f)
    notes = []
    requested = mode
    if mode == "equality":
        downgrade = _equality_gate(T, f)
        if downgrade:
            warnings.warn(downgrade, stacklevel=2)
            notes.append(downgrade)
            mode = "inclusion"

    S = transform_tuple(T, f)
    h = region.pitch(resolution)
    tol = 1.5 * h if tol is None else float(tol)

    source_threshold = coverage_threshold(h, T.n) + default_threshold(T)
    source = grid_scan(T, region, resolution, source_threshold, local_minima=True, workers=workers)

    cells = math.ceil((_target_radius(T, region, f) + h) / h)
    target_region = Polydisc((0.0,) * T.n, cells * h)
    target_threshold = coverage_threshold(h, T.n) + default_threshold(S)
    target = grid_scan(
        S, target_region, 2 * cells + 1, target_threshold,
        local_minima=True, workers=workers, pitch=h,
    )

    mapped = map_cloud(source, f)
    forward, backward = _hausdorff_or_empty(mapped, target)
    meta = {
        "f": f.describe(),
        "thresholds": {"source": source_threshold, "target": target_threshold},
        "requested_mode": requested,
        "pitch": h,
        "source_region": region.to_dict(resolution),
        "target_region": target_region.to_dict(2 * cells + 1),
        "source_points": len(source),
        "target_points": len(target),
    }
    return MappingReport(forward, backward, mode, _decide(forward, backward, mode, tol), tol, meta, notes)


Polynomial = Mapping[Sequence[int], complex]


def evaluate_polynomial(T: OperatorTuple, poly: Polynomial) -> np.ndarray:
    """``sum_alpha c_alpha T_1^alpha_1 ... T_n^alpha_n`` for ``poly = {alpha: c_alpha}``."""
    out = np.zeros((T.dim, T.dim), dtype=complex)
    for alpha, c in poly.items():
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != T.n or min(alpha) < 0:
            raise SpecError(f"exponent {alpha} does not fit an n={T.n} tuple")
        term = np.eye(T.dim, dtype=complex)
        for A, a in zip(T, alpha):
            term = term @ np.linalg.matrix_power(A, a)
        out += complex(c) * term
    return out


def _evaluate_scalar(poly: Polynomial, w: np.ndarray) -> complex:
    return sum(complex(c) * np.prod(w ** np.asarray(alpha)) for alpha, c in poly.items())


def polynomial_map_verify(
    T: OperatorTuple,
    polys: Sequence[Polynomial],
    tol: float | None = None,
    seed: int = 0,
) -> MappingReport:
    """Compare ``sigma_T(p(T))`` with ``p(sigma_T(T))`` for polynomials ``p = (p_1..p_m)``.

    The forward side is the largest singularity residual of ``p(T)`` at the
    image points (for normal ``p(T)`` this is exactly the distance to its
    spectrum); the backward side measures the joint eigenvalues of ``p(T)``
    against the image set.
    """
    comm, _ = T.defects
    if comm > T.commutation_tol:
        raise HypothesisError(f"tuple does not commute (defect {comm:.3e})")
    if not polys:
        raise SpecError("need at least one polynomial")
    joint = joint_eigenvalues(T, seed)
    image = np.array([[_evaluate_scalar(p, w) for p in polys] for w in joint], dtype=complex)
    image = np.unique(image, axis=0)
    F = OperatorTuple(tuple(evaluate_polynomial(T, p) for p in polys))
    forward = max(singularity_residual(F, w).residual for w in image)
    target = joint_eigenvalues(F, seed)
    backward = hausdorff(target, image)[0]
    tol = default_threshold(F) if tol is None else float(tol)
    meta = {
        "f": {"kind": "polynomial-map", "polynomials": [
            {"terms": [[list(map(int, a)), [complex(c).real, complex(c).imag]] for a, c in p.items()]}
            for p in polys
        ]},
        "thresholds": {"membership": default_threshold(F)},
        "image_points": len(image),
        "target_points": len(target),
    }
    return MappingReport(forward, backward, "equality", _decide(forward, backward, "equality", tol), tol, meta)
