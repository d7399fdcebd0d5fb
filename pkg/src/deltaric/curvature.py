"""Pointwise data model and closed-form curvature of totally real submanifolds.

A point of an n-dimensional totally real submanifold M of the complex space
form N^m(4c) is described by the coefficients of its second fundamental form
in an adapted frame

    e_1..e_n (tangent), e_{n+1}..e_m (non-J normals), Je_1..Je_m (J-normals).

``h[r]`` is the symmetric n x n matrix of the r-th normal component, with
r = 0..m-n-1 the non-J normals and r = m-n..2m-n-1 the J-normals Je_1..Je_m.
Everything intrinsic follows from the Gauss equation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .config import Config
from .errors import InvariantError, PreconditionError, StructuralError


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SubmanifoldInstance:
    n: int
    m: int
    c: float
    h: np.ndarray
    tol_sym: float = 1e-12

    def __post_init__(self):
        n, m = int(self.n), int(self.m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "c", float(self.c))
        if n < 2:
            raise StructuralError(f"n must be >= 2, got {n}")
        if m < n:
            raise StructuralError(f"m must be >= n, got m={m}, n={n}")
        h = _frozen(self.h)
        if h.shape != (2 * m - n, n, n):
            raise StructuralError(
                f"h must have shape {(2 * m - n, n, n)} for n={n}, m={m}; got {h.shape}"
            )
        object.__setattr__(self, "h", h)
        self._validate()

    def _validate(self):
        asym = np.argwhere(self.h != np.swapaxes(self.h, 1, 2))
        if asym.size:
            r, i, j = asym[0]
            raise InvariantError(
                "symmetric_h",
                f"h[r={r + 1}] is not symmetric at ({i + 1},{j + 1}): "
                f"{self.h[r, i, j]!r} != {self.h[r, j, i]!r}",
            )
        defect = j_symmetry_defect(self)
        if defect > self.tol_sym:
            raise InvariantError(
                "totally_real_symmetry",
                f"<h(e_i,e_j),Je_k> is not totally symmetric (max defect {defect:.3e} > {self.tol_sym:.1e})",
            )

    @property
    def n_normals(self) -> int:
        return 2 * self.m - self.n

    @property
    def j_offset(self) -> int:
        """0-based index of the normal Je_1."""
        return self.m - self.n

    def j_block(self) -> np.ndarray:
        """C[k, i, j] = <h(e_i, e_j), Je_k> for tangent k."""
        return self.h[self.j_offset : self.j_offset + self.n]

    def __eq__(self, other):
        if not isinstance(other, SubmanifoldInstance):
            return NotImplemented
        return (
            (self.n, self.m, self.c) == (other.n, other.m, other.c)
            and np.array_equal(self.h, other.h)
        )

    __hash__ = None


def j_symmetry_defect(inst: SubmanifoldInstance) -> float:
    C = inst.j_block()
    if C.size == 0:
        return 0.0
    return float(np.max(np.abs(C - np.transpose(C, (1, 0, 2)))))


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    R: np.ndarray

    def __post_init__(self):
        R = _frozen(self.R)
        n = R.shape[0]
        if R.ndim != 4 or R.shape != (n,) * 4:
            raise StructuralError(f"curvature tensor must be n x n x n x n, got {R.shape}")
        object.__setattr__(self, "R", R)

    @property
    def n(self) -> int:
        return self.R.shape[0]

    def symmetry_defects(self) -> dict[str, float]:
        R = self.R
        return {
            "antisym_ij": float(np.max(np.abs(R + R.transpose(1, 0, 2, 3)))),
            "antisym_kl": float(np.max(np.abs(R + R.transpose(0, 1, 3, 2)))),
            "pair_sym": float(np.max(np.abs(R - R.transpose(2, 3, 0, 1)))),
            "bianchi": float(
                np.max(np.abs(R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)))
            ),
        }

    def as_matrix(self) -> np.ndarray:
        """R as a quadratic form on n x n matrices: K(u,v) = w M w with w = vec(u v^T)."""
        n = self.n
        return self.R.reshape(n * n, n * n)


def constant_curvature_tensor(n: int, a: float) -> CurvatureTensor:
    d = np.eye(n)
    R = a * (np.einsum("ik,jl->ijkl", d, d) - np.einsum("il,jk->ijkl", d, d))
    return CurvatureTensor(R)


def gauss_curvature_tensor(inst: SubmanifoldInstance) -> CurvatureTensor:
    """Intrinsic curvature R(e_i,e_j,e_k,e_l) from the Gauss equation.

    The ambient J-terms drop out because J maps tangent vectors to normals.
    Sign convention: K(e_i ^ e_j) = R[i, j, i, j].
    """
    h = inst.h
    quad = np.einsum("rik,rjl->ijkl", h, h)
    R = constant_curvature_tensor(inst.n, inst.c).R + quad - quad.transpose(0, 1, 3, 2)
    return CurvatureTensor(R)


def sectional_curvature(R: CurvatureTensor, u, v, tol: float = 1e-10) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    gram = np.array([[u @ u, u @ v], [v @ u, v @ v]])
    if np.max(np.abs(gram - np.eye(2))) > tol:
        raise PreconditionError(f"u, v are not orthonormal (Gram matrix {gram.tolist()})")
    return float(np.einsum("ijkl,i,j,k,l->", R.R, u, v, u, v))


@dataclass(frozen=True, eq=False)
class RicciData:
    ric: np.ndarray
    tau: float
    einstein_defect: float
    quasi_einstein_defect: float
    eigenvalues: np.ndarray

    def ric_of(self, X) -> float:
        X = np.asarray(X, dtype=float)
        return float(X @ self.ric @ X)

    def is_einstein(self, tol: float = 1e-8) -> bool:
        return self.einstein_defect <= tol


def ricci_data(R: CurvatureTensor) -> RicciData:
    ric = np.einsum("ikjk->ij", R.R)
    ric = 0.5 * (ric + ric.T)
    lam = np.linalg.eigvalsh(ric)
    spread = float(lam[-1] - lam[0])
    if lam.size > 2:
        quasi = float(min(lam[-1] - lam[1], lam[-2] - lam[0]))
    else:
        quasi = 0.0
    return RicciData(
        ric=_frozen(ric),
        tau=0.5 * float(np.trace(ric)),
        einstein_defect=spread,
        quasi_einstein_defect=quasi,
        eigenvalues=_frozen(lam),
    )


@dataclass(frozen=True, eq=False)
class MeanCurvatureData:
    H_vec: np.ndarray
    H: float


def mean_curvature(inst: SubmanifoldInstance) -> MeanCurvatureData:
    H_vec = np.trace(inst.h, axis1=1, axis2=2) / inst.n
    return MeanCurvatureData(H_vec=_frozen(H_vec), H=float(np.linalg.norm(H_vec)))


class PointClass(str, enum.Enum):
    TOTALLY_GEODESIC = "totally_geodesic"
    MINIMAL = "minimal"
    PSEUDO_UMBILICAL = "pseudo_umbilical"
    GENERIC = "generic"


def shape_operator_along_mean(inst: SubmanifoldInstance) -> np.ndarray | None:
    """A_{H/|H|} = sum_r (H_r/|H|) h[r]; None when H vanishes."""
    mc = mean_curvature(inst)
    if mc.H == 0:
        return None
    return np.einsum("r,rij->ij", mc.H_vec / mc.H, inst.h)


def classify_pointwise(inst: SubmanifoldInstance, cfg: Config | None = None) -> PointClass:
    cfg = cfg or Config()
    if inst.h.size == 0 or np.max(np.abs(inst.h)) <= cfg.tol_tg:
        return PointClass.TOTALLY_GEODESIC
    mc = mean_curvature(inst)
    if mc.H <= cfg.tol_min:
        return PointClass.MINIMAL
    A = shape_operator_along_mean(inst)
    scalar = np.trace(A) / inst.n
    if np.max(np.abs(A - scalar * np.eye(inst.n))) <= cfg.tol_pu:
        return PointClass.PSEUDO_UMBILICAL
    return PointClass.GENERIC
