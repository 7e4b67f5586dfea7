"""Independent reference computations used by the tests.

Nothing here calls into the Koszul assembly or the spectrum code; the
helpers rebuild the same objects from their defining formulas.
"""

from itertools import combinations

import numpy as np


def literal_split_order(n, k):
    """Subsets without ``n`` first (lexicographic), then those containing ``n``."""
    subsets = list(combinations(range(1, n + 1), k))
    return sorted(subsets, key=lambda S: (n in S, tuple(j for j in S if j != n)))


def colex_order(n, k):
    return sorted(combinations(range(1, n + 1), k), key=lambda S: tuple(reversed(S)))


def brute_boundary(mats, k, order):
    """Block matrix of ``D_k`` from the deletion formula, summand by summand."""
    n, d = len(mats), mats[0].shape[0]
    rows, cols = order(n, k - 1), order(n, k)
    D = np.zeros((len(rows) * d, len(cols) * d), dtype=complex)
    for c, S in enumerate(cols):
        for i, j in enumerate(S, start=1):
            r = rows.index(tuple(x for x in S if x != j))
            D[r * d:(r + 1) * d, c * d:(c + 1) * d] += (-1) ** (i - 1) * mats[j - 1]
    return D


def distance_to_joint_values(values, z):
    """Euclidean distance in ``C^n`` from ``z`` to the finite set ``values``."""
    values = np.atleast_2d(np.asarray(values, dtype=complex))
    z = np.asarray(z, dtype=complex).ravel()
    return float(np.sqrt((np.abs(values - z) ** 2).sum(axis=1)).min())


def brute_hausdorff(A, B):
    A, B = np.atleast_2d(A), np.atleast_2d(B)
    dist = np.sqrt((np.abs(A[:, None, :] - B[None, :, :]) ** 2).sum(axis=2))
    return float(dist.min(axis=1).max()), float(dist.min(axis=0).max())


def sqrtm_psd(H):
    w, V = np.linalg.eigh(H)
    return (V * np.sqrt(np.clip(w, 0, None))) @ V.conj().T


def lattice_values(rng, d, n, h, m, lo=0.0, hi=np.inf):
    """``d`` joint values whose coordinates lie on ``h * (Z + iZ)`` with ``|a|, |b| <= m``."""
    grid = [complex(a, b) * h for a in range(-m, m + 1) for b in range(-m, m + 1)]
    grid = [g for g in grid if lo < abs(g) < hi]
    picks = rng.integers(len(grid), size=(d, n))
    return tuple(tuple(grid[i] for i in row) for row in picks)
