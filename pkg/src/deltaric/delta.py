"""Chen's Ricci invariant delta_q^Ric = sup Ric - (2q/n) K_q^inf.

K_q^inf is an infimum over q mutually orthogonal planes, i.e. over orthonormal
n x 2q frames F whose consecutive column pairs span the planes. It is found by
multi-start Riemannian gradient descent on the Stiefel manifold (QR retraction,
Armijo backtracking with Barzilai-Borwein trial steps), then clamped against
the exact minimum over coordinate-plane pairings. sup Ric is the top eigenvalue
of the Ricci operator.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import Config, OptimizerConfig
from .curvature import (
    CurvatureTensor,
    RicciData,
    SubmanifoldInstance,
    gauss_curvature_tensor,
    ricci_data,
)
from .errors import DomainError, PreconditionError


@dataclass(frozen=True, eq=False)
class PlaneSectionSet:
    F: np.ndarray

    def __post_init__(self):
        F = np.array(self.F, dtype=float, copy=True)
        if F.ndim != 2 or F.shape[1] % 2 or F.shape[1] == 0:
            raise PreconditionError(f"frame must be n x 2q with q >= 1, got shape {F.shape}")
        if F.shape[1] > F.shape[0]:
            raise DomainError(f"2q = {F.shape[1]} exceeds n = {F.shape[0]}")
        err = np.max(np.abs(F.T @ F - np.eye(F.shape[1])))
        if err > 1e-10:
            raise PreconditionError(f"frame columns are not orthonormal (max |F^T F - I| = {err:.2e})")
        F.setflags(write=False)
        object.__setattr__(self, "F", F)

    @property
    def q(self) -> int:
        return self.F.shape[1] // 2

    @property
    def n(self) -> int:
        return self.F.shape[0]

    def planes(self):
        return [(self.F[:, 2 * l], self.F[:, 2 * l + 1]) for l in range(self.q)]


def _plane_terms(M: np.ndarray, F: np.ndarray):
    n, p = F.shape
    q = p // 2
    U, V = F[:, 0::2], F[:, 1::2]
    W = np.einsum("il,jl->lij", U, V).reshape(q, n * n)
    MW = W @ M
    return U, V, np.einsum("li,li->l", W, MW), MW.reshape(q, n, n)


def _objective(M: np.ndarray, F: np.ndarray) -> float:
    return float(_plane_terms(M, F)[2].sum() / (F.shape[1] // 2))


def _objective_and_grad(M: np.ndarray, F: np.ndarray):
    U, V, K, G = _plane_terms(M, F)
    q = U.shape[1]
    grad = np.empty_like(F)
    # dK/du = 2 R(., v, u, v), dK/dv = 2 R(u, ., u, v)  (pair symmetry)
    grad[:, 0::2] = 2.0 * np.einsum("lij,jl->il", G, V) / q
    grad[:, 1::2] = 2.0 * np.einsum("lij,il->jl", G, U) / q
    return float(K.sum() / q), grad


def plane_set_objective(R: CurvatureTensor, F: PlaneSectionSet) -> float:
    """Mean sectional curvature (1/q) sum_l K(span{f_2l-1, f_2l})."""
    if F.n != R.n:
        raise PreconditionError(f"frame has {F.n} rows but curvature tensor is {R.n}-dimensional")
    return _objective(R.as_matrix(), F.F)


def plane_set_gradient(R: CurvatureTensor, F) -> np.ndarray:
    """Euclidean gradient of the mean plane curvature with respect to the frame matrix."""
    F = F.F if isinstance(F, PlaneSectionSet) else np.asarray(F, dtype=float)
    return _objective_and_grad(R.as_matrix(), F)[1]


def plane_set_objective_batch(R: CurvatureTensor, frames: np.ndarray) -> np.ndarray:
    """Objective for a stack of frames of shape (N, n, 2q); frames need not be validated."""
    n = R.n
    M = R.as_matrix()
    q = frames.shape[2] // 2
    U, V = frames[:, :, 0::2], frames[:, :, 1::2]
    W = np.einsum("sil,sjl->slij", U, V).reshape(-1, n * n)
    K = np.einsum("ti,ti->t", W @ M, W)
    return K.reshape(frames.shape[0], q).sum(axis=1) / q


def qr_retract(X: np.ndarray) -> np.ndarray:
    """Orthonormalize columns, sign-fixed so diag(R) > 0 (unique Q factor)."""
    Q, Rf = np.linalg.qr(X)
    s = np.sign(np.diagonal(Rf, axis1=-2, axis2=-1)).copy()
    s[s == 0] = 1.0
    return Q * s[..., None, :]


def random_frames(n: int, p: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed n x p orthonormal frames, shape (count, n, p)."""
    return qr_retract(rng.standard_normal((count, n, p)))


def _stiefel_project(F: np.ndarray, G: np.ndarray) -> np.ndarray:
    S = F.T @ G
    return G - F @ (0.5 * (S + S.T))


@dataclass
class DescentResult:
    value: float
    frame: np.ndarray
    iterations: int
    converged: bool
    evaluations: int


def descend(M: np.ndarray, F0: np.ndarray, max_iter: int = 10_000, ftol: float = 1e-12) -> DescentResult:
    """Riemannian steepest descent from F0; returns the best frame ever evaluated."""
    F = qr_retract(F0)
    f, G = _objective_and_grad(M, F)
    xi = _stiefel_project(F, G)
    best_f, best_F = f, F
    t = 1.0 / max(1.0, float(np.abs(M).max()))
    evals = 1
    prev_F = prev_xi = None
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        gnorm2 = float(np.sum(xi * xi))
        if gnorm2 < 1e-28:
            converged = True
            break
        if prev_F is not None:
            s = F - prev_F
            y = xi - prev_xi
            sy = float(np.sum(s * y))
            if sy > 0:
                t = float(np.sum(s * s)) / sy
        accepted = False
        for _ in range(60):
            F_new = qr_retract(F - t * xi)
            f_new = _objective(M, F_new)
            evals += 1
            if f_new < best_f:
                best_f, best_F = f_new, F_new
            if f_new <= f - 1e-4 * t * gnorm2:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            converged = True
            break
        decrease = f - f_new
        prev_F, prev_xi = F, xi
        F = F_new
        f, G = _objective_and_grad(M, F)
        evals += 1
        xi = _stiefel_project(F, G)
        if decrease < ftol:
            converged = True
            break
    return DescentResult(best_f, best_F, it, converged, evals)


def coordinate_pairings(n: int, q: int):
    """All ways to choose q disjoint index pairs from range(n)."""

    def rec(free: tuple[int, ...], need: int):
        if need == 0:
            yield ()
            return
        if len(free) < 2 * need:
            return
        first, rest = free[0], free[1:]
        # first index left unpaired
        yield from rec(rest, need)
        for idx, partner in enumerate(rest):
            for tail in rec(rest[:idx] + rest[idx + 1 :], need - 1):
                yield ((first, partner),) + tail

    yield from rec(tuple(range(n)), q)


def count_pairings(n: int, q: int) -> int:
    return math.comb(n, 2 * q) * math.prod(range(1, 2 * q, 2))


def enumerate_coordinate_planes(R: CurvatureTensor, q: int):
    """Exact minimum of the objective over frames built from coordinate axes."""
    n = R.n
    Kc = np.einsum("ijij->ij", R.R)
    best_val, best_pairs = math.inf, None
    for pairs in coordinate_pairings(n, q):
        val = sum(Kc[i, j] for i, j in pairs) / q
        if val < best_val:
            best_val, best_pairs = val, pairs
    F = np.zeros((n, 2 * q))
    for l, (i, j) in enumerate(best_pairs):
        F[i, 2 * l] = 1.0
        F[j, 2 * l + 1] = 1.0
    return float(best_val), F


@dataclass
class KqDiagnostics:
    restarts_used: int
    converged: bool
    best_restart: int | None
    source: str
    optimizer_value: float
    enumeration_value: float | None
    restart_values: list[float] = field(default_factory=list)
    iterations: list[int] = field(default_factory=list)


def _check_q(n: int, q: int):
    if not (1 <= q and 2 * q <= n):
        raise DomainError(f"q must satisfy 1 <= q <= n/2, got q={q}, n={n}")


def k_q_inf(R: CurvatureTensor, q: int, cfg: OptimizerConfig | None = None):
    """Infimum of the mean sectional curvature over q mutually orthogonal planes.

    Returns ``(value, PlaneSectionSet, KqDiagnostics)``. Restart i starts from the
    Haar frame drawn with ``default_rng([seed, i])``, so results do not depend on
    ``workers``.
    """
    cfg = cfg or OptimizerConfig()
    n = R.n
    _check_q(n, q)
    M = R.as_matrix()
    if cfg.restarts < 1 and count_pairings(n, q) > cfg.max_pairings:
        raise DomainError("need at least one restart when coordinate enumeration is disabled")

    def run(i: int) -> DescentResult:
        rng = np.random.default_rng([cfg.seed, i])
        F0 = random_frames(n, 2 * q, 1, rng)[0]
        return descend(M, F0, cfg.max_iter, cfg.ftol)

    if cfg.workers > 1 and cfg.restarts > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(run, range(cfg.restarts)))
    else:
        results = [run(i) for i in range(cfg.restarts)]

    best_i, best = None, None
    for i, res in enumerate(results):
        if best is None or res.value < best.value:
            best_i, best = i, res

    opt_value = best.value if best is not None else math.inf
    value, frame, source = opt_value, best.frame if best is not None else None, "optimizer"
    enum_value = None
    if count_pairings(n, q) <= cfg.max_pairings:
        enum_value, enum_frame = enumerate_coordinate_planes(R, q)
        if enum_value < value:
            value, frame, source = enum_value, enum_frame, "enumeration"

    diag = KqDiagnostics(
        restarts_used=len(results),
        converged=any(r.converged for r in results) if results else source == "enumeration",
        best_restart=best_i,
        source=source,
        optimizer_value=opt_value,
        enumeration_value=enum_value,
        restart_values=[r.value for r in results],
        iterations=[r.iterations for r in results],
    )
    return float(value), PlaneSectionSet(frame), diag


def sup_ric(ricci: RicciData):
    """Largest eigenvalue of the Ricci operator and a unit eigenvector."""
    lam, vecs = np.linalg.eigh(ricci.ric)
    X = vecs[:, -1]
    return float(lam[-1]), X / np.linalg.norm(X)


def haar_oracle(R: CurvatureTensor, q: int, samples: int, seed: int = 0, batch: int = 20_000):
    """Best objective among ``samples`` Haar-random frames: (value, frame)."""
    _check_q(R.n, q)
    rng = np.random.default_rng(seed)
    best_val, best_F = math.inf, None
    done = 0
    while done < samples:
        k = min(batch, samples - done)
        frames = random_frames(R.n, 2 * q, k, rng)
        vals = plane_set_objective_batch(R, frames)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best_F = float(vals[i]), frames[i]
        done += k
    return best_val, best_F


@dataclass(frozen=True, eq=False)
class DeltaReport:
    q: int
    n: int
    sup_ric: float
    sup_ric_vector: np.ndarray
    k_q_inf: float
    delta_q_ric: float
    argmin_frame: PlaneSectionSet
    restarts_used: int
    converged: bool
    oracle_gap: float | None = None
    diagnostics: KqDiagnostics | None = None


def assemble_delta(sup: float, kinf: float, q: int, n: int) -> float:
    return sup - (2.0 * q / n) * kinf


def delta_from_tensor(R: CurvatureTensor, q: int, cfg: Config | None = None, ricci: RicciData | None = None) -> DeltaReport:
    cfg = cfg or Config()
    n = R.n
    _check_q(n, q)
    ricci = ricci or ricci_data(R)
    sup, X = sup_ric(ricci)
    kinf, frame, diag = k_q_inf(R, q, cfg.optimizer)
    gap = None
    if cfg.optimizer.oracle_samples > 0:
        oracle_val, _ = haar_oracle(R, q, cfg.optimizer.oracle_samples, seed=cfg.optimizer.seed)
        gap = kinf - oracle_val
    return DeltaReport(
        q=q,
        n=n,
        sup_ric=sup,
        sup_ric_vector=X,
        k_q_inf=kinf,
        delta_q_ric=assemble_delta(sup, kinf, q, n),
        argmin_frame=frame,
        restarts_used=diag.restarts_used,
        converged=diag.converged,
        oracle_gap=gap,
        diagnostics=diag,
    )


def delta_q_ric(inst: SubmanifoldInstance, q: int, cfg: Config | None = None) -> DeltaReport:
    _check_q(inst.n, q)
    return delta_from_tensor(gauss_curvature_tensor(inst), q, cfg)
