"""Generators for valid pointwise data: canonical families, equality-case
families and seeded random totally real instances."""

from __future__ import annotations

import itertools
from typing import Mapping, Sequence

import numpy as np

from .curvature import SubmanifoldInstance
from .errors import DomainError, InvariantError, StructuralError

_PERMS = list(itertools.permutations(range(3)))


def symmetrize3(C: np.ndarray) -> np.ndarray:
    """Orthogonal projection of a cubic 3-array onto totally symmetric arrays.

    The result is made bit-exactly symmetric by reading every entry from its
    sorted index triple; an exactly symmetric input is returned unchanged, so
    the map is idempotent in floating point as well.
    """
    C = np.asarray(C, dtype=float)
    n = C.shape[0]
    if C.shape != (n, n, n):
        raise StructuralError(f"expected a cubic 3-array, got shape {C.shape}")
    if all(np.array_equal(C, C.transpose(p)) for p in _PERMS[1:]):
        return C.copy()
    avg = sum(C.transpose(p) for p in _PERMS) / 6.0
    idx = np.sort(np.indices((n, n, n)).reshape(3, -1), axis=0)
    return avg[idx[0], idx[1], idx[2]].reshape(n, n, n)


def _zeros(n: int, m: int) -> np.ndarray:
    return np.zeros((2 * m - n, n, n))


def _check_dims(n: int, m: int):
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if m < n:
        raise DomainError(f"ambient dimension m must be >= n, got m={m}, n={n}")


def totally_geodesic(n: int, m: int, c: float) -> SubmanifoldInstance:
    _check_dims(n, m)
    return SubmanifoldInstance(n, m, c, _zeros(n, m))


def umbilical_non_j(n: int, m: int, c: float, lam: float) -> SubmanifoldInstance:
    """h = lam * I along the first non-J normal e_{n+1}; constant curvature c + lam^2."""
    _check_dims(n, m)
    if m <= n:
        raise DomainError(f"umbilical_non_j needs a non-J normal direction, i.e. m > n (got m={m}, n={n})")
    if lam == 0:
        raise DomainError("lambda must be nonzero (use totally_geodesic for lambda = 0)")
    h = _zeros(n, m)
    h[0] = lam * np.eye(n)
    return SubmanifoldInstance(n, m, c, h)


def block_minimal(
    k: int,
    m: int,
    c: float,
    blocks: Mapping[int, Sequence] | Sequence | None = None,
    tol_trace: float = 1e-14,
) -> SubmanifoldInstance:
    """Block-diagonal trace-free shape operators on n = 2k.

    ``blocks`` maps a 1-based normal index r to k symmetric 2x2 blocks (or is a
    sequence of length 2m-n with None for zero directions).
    """
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    n = 2 * k
    _check_dims(n, m)
    h = _zeros(n, m)
    if blocks is None:
        blocks = {}
    if not isinstance(blocks, Mapping):
        blocks = {r + 1: b for r, b in enumerate(blocks) if b is not None}
    for r, blist in blocks.items():
        if not 1 <= r <= 2 * m - n:
            raise StructuralError(f"normal index r={r} out of range 1..{2 * m - n}")
        blist = [np.asarray(b, dtype=float) for b in blist]
        if len(blist) != k:
            raise StructuralError(f"normal r={r}: expected {k} blocks, got {len(blist)}")
        for i, b in enumerate(blist):
            if b.shape != (2, 2):
                raise StructuralError(f"normal r={r}, block {i + 1}: expected 2x2, got {b.shape}")
            if b[0, 1] != b[1, 0]:
                raise InvariantError("symmetric_block", f"normal r={r}, block {i + 1} is not symmetric")
            if abs(b[0, 0] + b[1, 1]) > tol_trace:
                raise InvariantError(
                    "trace_free_block", f"normal r={r}, block {i + 1} has trace {b[0, 0] + b[1, 1]!r}"
                )
            h[r - 1, 2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = b
    return SubmanifoldInstance(n, m, c, h)


def random_totally_real(n: int, m: int, c: float, scale: float, seed: int) -> SubmanifoldInstance:
    """Seeded random instance honoring symmetry of every h[r] and total symmetry
    of <h(e_i, e_j), Je_k>. Entries are uniform in [-scale, scale]."""
    _check_dims(n, m)
    rng = np.random.default_rng(seed)
    h = _zeros(n, m)
    off = m - n
    for r in range(off):
        h[r] = _random_symmetric(rng, n, scale)
    h[off : off + n] = symmetrize3(rng.uniform(-scale, scale, (n, n, n)))
    for r in range(off + n, 2 * m - n):
        h[r] = _random_symmetric(rng, n, scale)
    return SubmanifoldInstance(n, m, c, h)


def _random_symmetric(rng: np.random.Generator, n: int, scale: float) -> np.ndarray:
    A = rng.uniform(-scale, scale, (n, n))
    return np.triu(A) + np.triu(A, 1).T
