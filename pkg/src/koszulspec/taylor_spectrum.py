"""Taylor joint spectrum of commuting matrix tuples.

A point ``z`` belongs to the spectrum when the shifted tuple ``T - z`` has a
non-exact Koszul complex, i.e. some Laplacian ``Delta_k(T - z)`` is
singular. The *residual* of ``z`` is

    min_k  sigma_min([D_k; D_{k+1}*](T - z))  =  min_k  sqrt(lambda_min(Delta_k(T - z)))

which is 1-Lipschitz in ``z`` and, for commuting normal tuples, equals the
Euclidean distance from ``z`` to the spectrum. Grid scans use the Lipschitz
bound to discard whole boxes of the grid from a single evaluation at the
box centre.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import HypothesisError, IntegrityError, NotApplicableError, SizeError, SpecError
from .koszul import check_size, enumerate_basis, laplacian_factor, sign_matrices
from .matrix_kernel import BASE_TOL, adjoint, as_square, hermitian_function, min_singular_value, polar_decompose
from .operator_tuple import OperatorTuple, satisfies_condition1
from .scalar_function import ScalarFunction

MEMBERSHIP_TOL = 1e-8
WITNESS_TOL = 1e-8
_CHUNK = 4096


def default_threshold(T: OperatorTuple) -> float:
    """Membership threshold ``1e-8 * (1 + max_j ||T_j||)**2``."""
    return MEMBERSHIP_TOL * T.scale**2


def _as_point(z, n: int) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    if z.size != n:
        raise SpecError(f"point has {z.size} coordinates, tuple has n={n}")
    return z


@dataclass(frozen=True)
class SpectrumPoint:
    """A point of ``C^n`` with its singularity residuals.

    ``residual`` is ``None`` for points of mapped clouds, which are target
    sets rather than measurements.
    """

    coords: tuple
    residual: float | None = None
    per_k: tuple = ()

    @property
    def n(self) -> int:
        return len(self.coords)

    def is_member(self, threshold: float) -> bool:
        return self.residual is not None and self.residual <= threshold


@dataclass(frozen=True)
class Polydisc:
    """Product of discs ``|z_j - center_j| <= radius``."""

    center: tuple
    radius: float

    def __post_init__(self):
        c = tuple(complex(v) for v in np.atleast_1d(self.center))
        if not c:
            raise SpecError("polydisc center must have at least one coordinate")
        if not self.radius >= 0:
            raise SpecError("polydisc radius must be non-negative")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def n(self) -> int:
        return len(self.center)

    def pitch(self, resolution: int) -> float:
        return 2.0 * self.radius / (resolution - 1)

    def contains(self, Z: np.ndarray) -> np.ndarray:
        slack = 1e-12 * (1.0 + self.radius)
        return np.all(np.abs(Z - np.asarray(self.center)) <= self.radius + slack, axis=-1)

    def to_dict(self, resolution: int | None = None) -> dict:
        out = {"center": [[c.real, c.imag] for c in self.center], "radius": self.radius}
        if resolution is not None:
            out["resolution"] = resolution
        return out


@dataclass
class SpectrumPointCloud:
    n: int
    points: list = field(default_factory=list)
    threshold: float | None = None
    region: Polydisc | None = None
    resolution: int | None = None

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def coords(self) -> np.ndarray:
        """``(m, n)`` complex array of point coordinates."""
        if not self.points:
            return np.zeros((0, self.n), dtype=complex)
        return np.array([p.coords for p in self.points], dtype=complex)


@dataclass(frozen=True)
class AdjointWitness:
    point: SpectrumPoint
    vector: np.ndarray
    residuals: tuple
    source_block: int
    degree: int
    subset: tuple

    @property
    def max_residual(self) -> float:
        return max(self.residuals)


class ShiftedFactors:
    """Batched evaluation of ``sigma_min([D_k; D_{k+1}*](T - z))`` over many ``z``.

    The stacked factor is affine in ``z``: ``G_k(T - z) = G_k(T) - sum_j
    (z_j P_kj + conj(z_j) Q_kj)`` with ``P``, ``Q`` the scalar Koszul sign
    patterns tensored with the identity.
    """

    def __init__(self, T: OperatorTuple):
        check_size(T.n, T.dim)
        self.tuple = T
        n, d = T.n, T.dim
        eye = np.eye(d)
        self.base, self.P, self.Q, self.wide = [], [], [], []
        for k in range(n + 1):
            G = laplacian_factor(T, k)
            top = comb(n, k - 1) * d if k >= 1 else 0
            P = np.zeros((n,) + G.shape, dtype=complex)
            Q = np.zeros((n,) + G.shape, dtype=complex)
            if k >= 1:
                E = sign_matrices(n, k)
                for j in range(n):
                    P[j, :top] = np.kron(E[j], eye)
            if k < n:
                E = sign_matrices(n, k + 1)
                for j in range(n):
                    Q[j, top:] = np.kron(E[j], eye).T
            self.base.append(G)
            self.P.append(P)
            self.Q.append(Q)
            self.wide.append(G.shape[0] < G.shape[1])

    def factor(self, z, k: int) -> np.ndarray:
        z = _as_point(z, self.tuple.n)
        return (
            self.base[k]
            - np.tensordot(z, self.P[k], axes=1)
            - np.tensordot(z.conj(), self.Q[k], axes=1)
        )

    def per_k(self, Z: np.ndarray) -> np.ndarray:
        """``(m, n+1)`` array of per-degree residuals at the rows of ``Z``."""
        Z = np.asarray(Z, dtype=complex).reshape(-1, self.tuple.n)
        out = np.empty((Z.shape[0], self.tuple.n + 1))
        for start in range(0, Z.shape[0], _CHUNK):
            Zc = Z[start:start + _CHUNK]
            for k, G in enumerate(self.base):
                if self.wide[k]:
                    out[start:start + _CHUNK, k] = 0.0
                    continue
                batch = (
                    G[None]
                    - np.einsum("mj,jrc->mrc", Zc, self.P[k])
                    - np.einsum("mj,jrc->mrc", Zc.conj(), self.Q[k])
                )
                out[start:start + _CHUNK, k] = np.linalg.svd(batch, compute_uv=False)[:, -1]
        return out

    def residuals(self, Z: np.ndarray, workers: int | None = None) -> np.ndarray:
        Z = np.asarray(Z, dtype=complex).reshape(-1, self.tuple.n)
        if workers is None or workers <= 1 or Z.shape[0] <= _CHUNK:
            return self.per_k(Z)
        chunks = [Z[i:i + _CHUNK] for i in range(0, Z.shape[0], _CHUNK)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(self.per_k, chunks))
        return np.vstack(parts)


def singularity_residual(T: OperatorTuple, z) -> SpectrumPoint:
    """Residuals of every Laplacian of ``T - z``; the point is in the spectrum
    when ``residual <= default_threshold(T)``."""
    z = _as_point(z, T.n)
    per_k = ShiftedFactors(T).per_k(z[None])[0]
    return SpectrumPoint(tuple(complex(c) for c in z), float(per_k.min()), tuple(map(float, per_k)))


def in_taylor_spectrum(T: OperatorTuple, z, threshold: float | None = None) -> bool:
    threshold = default_threshold(T) if threshold is None else threshold
    return singularity_residual(T, z).residual <= threshold


def coverage_threshold(pitch: float, n: int) -> float:
    """Half the diagonal of a grid cell in ``R^{2n}``: every point of the
    region has a grid node at most this far away."""
    return 0.5 * pitch * math.sqrt(2 * n)


def _axes(region: Polydisc, resolution: int, pitch: float | None = None):
    """Per real axis: node count, centre and step.

    Nodes sit at ``centre + (i - (m - 1) / 2) * step`` so that two grids with
    the same step and centre share their nodes bit for bit.
    """
    m = 1 if region.radius == 0 else resolution
    step = 0.0 if m == 1 else (region.pitch(m) if pitch is None else float(pitch))
    centres = [part for c in region.center for part in (c.real, c.imag)]
    return m, np.array(centres), np.full(len(centres), step)


def _nodes(idx: np.ndarray, centres, steps, m: int) -> np.ndarray:
    xy = centres + (idx - 0.5 * (m - 1)) * steps
    return xy[:, 0::2] + 1j * xy[:, 1::2]


def grid_scan(
    T: OperatorTuple,
    region: Polydisc,
    resolution: int,
    threshold: float | None = None,
    *,
    local_minima: bool = False,
    workers: int | None = None,
    leaf_size: int = 256,
    pitch: float | None = None,
) -> SpectrumPointCloud:
    """Grid nodes of ``region`` whose residual is at most ``threshold``.

    Each complex coordinate is sampled on a ``resolution x resolution``
    square grid spanning the bounding square of its disc; nodes outside the
    polydisc are dropped. With ``local_minima=True`` only members with no
    strictly smaller residual among their axis neighbours are kept, which for
    normal tuples leaves the node nearest each spectral point. ``pitch``
    overrides the node spacing (default ``2 * radius / (resolution - 1)``).
    """
    if resolution < 2:
        raise SpecError("resolution must be at least 2")
    if region.n != T.n:
        raise SpecError(f"region has n={region.n}, tuple has n={T.n}")
    if T.n > 2:
        raise SizeError("full grid scans support n <= 2; use point queries for larger n")
    threshold = default_threshold(T) if threshold is None else float(threshold)
    factors = ShiftedFactors(T)
    m, centres, steps = _axes(region, resolution, pitch)
    D = 2 * T.n
    slack = 1e-12 * T.scale

    lo = np.zeros((1, D), dtype=int)
    hi = np.full((1, D), m - 1, dtype=int)
    found = []
    while lo.shape[0]:
        centre = centres + (0.5 * (lo + hi) - 0.5 * (m - 1)) * steps
        radius = 0.5 * np.sqrt((((hi - lo) * steps) ** 2).sum(axis=1))
        zc = centre[:, 0::2] + 1j * centre[:, 1::2]
        res = factors.residuals(zc, workers).min(axis=1)
        keep = res - radius <= threshold + slack
        lo, hi = lo[keep], hi[keep]
        count = np.prod(hi - lo + 1, axis=1)
        leaf = count <= leaf_size
        found.extend(_box_nodes(a, b) for a, b in zip(lo[leaf], hi[leaf]))
        lo, hi = _split(lo[~leaf], hi[~leaf])

    if found:
        idx = np.unique(np.vstack(found), axis=0)
    else:
        idx = np.zeros((0, D), dtype=int)
    Z = _nodes(idx, centres, steps, m)
    inside = region.contains(Z)
    idx, Z = idx[inside], Z[inside]
    per_k = factors.residuals(Z, workers)
    resid = per_k.min(axis=1) if len(Z) else np.zeros(0)
    member = resid <= threshold
    idx, Z, per_k, resid = idx[member], Z[member], per_k[member], resid[member]
    if local_minima and len(idx):
        keep = _local_minima(idx, resid, m)
        idx, Z, per_k, resid = idx[keep], Z[keep], per_k[keep], resid[keep]

    points = [
        SpectrumPoint(tuple(complex(c) for c in z), float(r), tuple(map(float, pk)))
        for z, r, pk in zip(Z, resid, per_k)
    ]
    return SpectrumPointCloud(T.n, points, threshold, region, resolution)


def _box_nodes(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
    return np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, len(axes))


def _split(lo: np.ndarray, hi: np.ndarray):
    if not lo.shape[0]:
        return lo, hi
    D = lo.shape[1]
    mid = (lo + hi) // 2
    children_lo, children_hi = [], []
    for bits in itertools.product((0, 1), repeat=D):
        bits = np.array(bits, dtype=bool)
        c_lo = np.where(bits, mid + 1, lo)
        c_hi = np.where(bits, hi, mid)
        ok = np.all(c_lo <= c_hi, axis=1)
        children_lo.append(c_lo[ok])
        children_hi.append(c_hi[ok])
    return np.vstack(children_lo), np.vstack(children_hi)


def _local_minima(idx: np.ndarray, resid: np.ndarray, m: int) -> np.ndarray:
    # non-member neighbours exceed the threshold, hence every member residual
    lookup = {tuple(i): r for i, r in zip(idx.tolist(), resid)}
    keep = np.ones(len(idx), dtype=bool)
    for row, (i, r) in enumerate(zip(idx.tolist(), resid)):
        for axis in range(len(i)):
            for step in (-1, 1):
                nb = list(i)
                nb[axis] += step
                other = lookup.get(tuple(nb))
                if other is not None and other < r:
                    keep[row] = False
                    break
            if not keep[row]:
                break
    return keep


def vasilescu_matrix(T: OperatorTuple, z) -> np.ndarray:
    """``[[T_1 - z_1, T_2 - z_2], [-(T_2 - z_2)*, (T_1 - z_1)*]]``."""
    if T.n != 2:
        raise NotApplicableError("the alpha-matrix test is defined for pairs only")
    A, B = T.shifted(_as_point(z, 2)).matrices
    return np.block([[A, B], [-adjoint(B), adjoint(A)]])


def vasilescu_residual(T: OperatorTuple, z) -> float:
    return min_singular_value(vasilescu_matrix(T, z))


def joint_adjoint_residual(T: OperatorTuple, z, y) -> tuple:
    """``(||(T_j - z_j)* y||)_j`` for a nonzero vector ``y`` (normalised first)."""
    z = _as_point(z, T.n)
    y = np.asarray(y, dtype=complex).ravel()
    norm = np.linalg.norm(y)
    if norm == 0:
        raise SpecError("witness vector must be nonzero")
    y = y / norm
    return tuple(float(np.linalg.norm(adjoint(A - zj * np.eye(T.dim)) @ y)) for A, zj in zip(T, z))


def extract_adjoint_witness(
    T: OperatorTuple,
    z,
    threshold: float | None = None,
    witness_tol: float | None = None,
) -> AdjointWitness:
    """Unit ``y`` with ``(T_j - z_j)* y ~ 0`` for all ``j``, for ``z`` in the spectrum.

    Takes the degree ``k`` with the smallest Laplacian residual, its least
    singular vector ``x = (x^S)_S`` split over the summands of ``E_k``, and
    normalises the summand of largest norm.
    """
    z = _as_point(z, T.n)
    threshold = default_threshold(T) if threshold is None else threshold
    witness_tol = WITNESS_TOL * T.scale if witness_tol is None else witness_tol
    comm, double = T.defects
    if comm > T.commutation_tol or double > T.commutation_tol:
        raise HypothesisError(f"tuple is not doubly commuting (defects {comm:.3e}, {double:.3e})")
    for j, A in enumerate(T, start=1):
        if not satisfies_condition1(A):
            raise HypothesisError(f"T_{j} is not normal, so (T_{j} - z)x -> 0 need not force (T_{j} - z)* x -> 0")
    point = singularity_residual(T, z)
    if point.residual > threshold:
        raise HypothesisError(
            f"z is not in the Taylor spectrum (residual {point.residual:.3e} > {threshold:.3e})"
        )
    k = int(np.argmin(point.per_k))
    G = ShiftedFactors(T).factor(z, k)
    _, _, Vh = np.linalg.svd(G)
    x = Vh[-1].conj().reshape(comb(T.n, k), T.dim)
    s = int(np.argmax(np.linalg.norm(x, axis=1)))
    y = x[s] / np.linalg.norm(x[s])
    residuals = joint_adjoint_residual(T, z, y)
    if max(residuals) > witness_tol:
        raise IntegrityError(
            f"witness residual {max(residuals):.3e} exceeds tolerance {witness_tol:.3e}"
        )
    subset = enumerate_basis(T.n, k).subsets[s]
    return AdjointWitness(point, y, residuals, s, k, subset)


def polar_factor_residuals(A, z, x, f: ScalarFunction) -> tuple:
    """``(||(U - e^{i theta})x||, ||(|A| - r)x||, ||(f(|A|) - f(r))x||)`` at ``z = r e^{i theta}``."""
    A = as_square(A)
    z = complex(z)
    r, theta = abs(z), float(np.angle(z))
    if r <= BASE_TOL:
        raise NotApplicableError("the unitary direction is undefined at r = 0")
    x = np.asarray(x, dtype=complex).ravel()
    if abs(np.linalg.norm(x) - 1.0) > 1e-8:
        raise SpecError("x must be a unit vector")
    polar = polar_decompose(A)
    fP = hermitian_function(polar.positive, f)
    fr = float(f(r))
    return (
        float(np.linalg.norm(polar.unitary @ x - np.exp(1j * theta) * x)),
        float(np.linalg.norm(polar.positive @ x - r * x)),
        float(np.linalg.norm(fP @ x - fr * x)),
    )


def joint_eigenvalues(T: OperatorTuple, seed: int = 0, cluster_tol: float = 1e-6) -> np.ndarray:
    """Joint eigenvalues of a commuting tuple, one row per invariant cluster.

    Clusters the eigenvalues of a seeded random combination ``C = sum c_j T_j``;
    on each generalised eigenspace every ``T_j`` has a single eigenvalue,
    read off as a normalised trace. Structurally diagonal tuples are read
    directly.
    """
    mats = T.matrices
    if all(np.count_nonzero(A - np.diag(np.diag(A))) == 0 for A in mats):
        vals = np.stack([np.diag(A) for A in mats], axis=1)
        return np.unique(vals, axis=0)
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(T.n) + 1j * rng.standard_normal(T.n)
    C = sum(cj * A for cj, A in zip(c, mats))
    mu = np.linalg.eigvals(C)
    tol = cluster_tol * (1.0 + np.abs(mu).max())
    clusters = []
    for val in mu[np.lexsort((mu.imag, mu.real))]:
        for cl in clusters:
            if abs(cl[0] - val) <= tol:
                cl.append(val)
                break
        else:
            clusters.append([val])
    rows = []
    for cl in clusters:
        mult = len(cl)
        centre = np.mean(cl)
        M = np.linalg.matrix_power(C - centre * np.eye(T.dim), mult)
        V = adjoint(np.linalg.svd(M)[2])[:, -mult:]
        rows.append([np.trace(adjoint(V) @ A @ V) / mult for A in mats])
    return np.array(rows, dtype=complex)
