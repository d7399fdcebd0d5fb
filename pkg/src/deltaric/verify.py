"""Checks of the two delta_q^Ric upper bounds for Einstein totally real
submanifolds, their equality cases, the Cauchy step inequalities, and the two
non-existence criteria."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .config import Config
from .curvature import (
    CurvatureTensor,
    PointClass,
    SubmanifoldInstance,
    classify_pointwise,
    gauss_curvature_tensor,
    mean_curvature,
    ricci_data,
)
from .delta import DeltaReport, delta_from_tensor
from .errors import DomainError

STEP_TOL = 1e-12


class Theorem(str, enum.Enum):
    T1 = "T1"
    T2 = "T2"


class EqualityCase(str, enum.Enum):
    T1_MINIMAL = "T1_minimal"
    T1_PSEUDO_UMBILICAL = "T1_pseudo_umbilical"
    T2_TOTALLY_GEODESIC = "T2_totally_geodesic"


@dataclass(frozen=True, eq=False)
class EqualityCertificate:
    case: EqualityCase
    frame: np.ndarray
    block_traces: np.ndarray  # (normals, number of 2x2 blocks)
    mu: np.ndarray | None
    residual: float
    # case (ii) only: orthonormal normal basis whose first column is H/|H|,
    # and the shape operator along H (left unconstrained by the block test)
    normal_frame: np.ndarray | None = None
    mean_direction_operator: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class TheoremReport:
    theorem: Theorem
    q: int
    hypothesis_ok: bool
    lhs: float
    rhs: float
    slack: float
    equality: bool
    certificate: EqualityCertificate | None
    H: float
    einstein_defect: float
    delta: DeltaReport
    certificate_failure: str | None = None

    @property
    def violated(self) -> bool:
        return self.hypothesis_ok and self.slack < 0 and not self.equality


# ---------------------------------------------------------------------------
# frame utilities


def complete_frame(F: np.ndarray) -> np.ndarray:
    """Extend an n x p orthonormal frame to an orthogonal n x n matrix."""
    n, p = F.shape
    if p == n:
        return F.copy()
    _, _, Vt = np.linalg.svd(F.T)
    return np.hstack([F, Vt[p:].T])


def rotate_shape_operators(h: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Shape operators expressed in the tangent frame given by the columns of P."""
    return np.einsum("ia,rij,jb->rab", P, h, P)


def _block_mask(n: int, nblocks: int) -> np.ndarray:
    mask = np.zeros((n, n), dtype=bool)
    for l in range(nblocks):
        mask[2 * l : 2 * l + 2, 2 * l : 2 * l + 2] = True
    return mask


def block_traces(h: np.ndarray, nblocks: int) -> np.ndarray:
    d = np.diagonal(h, axis1=1, axis2=2)
    return d[:, 0 : 2 * nblocks : 2] + d[:, 1 : 2 * nblocks : 2]


def _max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


# ---------------------------------------------------------------------------
# certificates


def certify_theorem1(inst: SubmanifoldInstance, frame: np.ndarray, cfg: Config):
    """Match the case (i)/(ii) block pattern in the optimizer's frame.

    Returns ``(certificate, None)`` or ``(None, reason)``.
    """
    n, k = inst.n, inst.n // 2
    P = complete_frame(frame)
    cls = classify_pointwise(inst, cfg)
    off_block = ~_block_mask(n, k)
    if cls in (PointClass.TOTALLY_GEODESIC, PointClass.MINIMAL):
        A = rotate_shape_operators(inst.h, P)
        traces = block_traces(A, k)
        residual = _max_abs(A[:, off_block])
        cert = EqualityCertificate(EqualityCase.T1_MINIMAL, P, traces, None, residual)
        if residual > cfg.tol_cert:
            return None, f"off-block residual {residual:.3e} exceeds {cfg.tol_cert:.1e}"
        if _max_abs(traces) > 1e-8:
            return None, f"block traces not zero (max {_max_abs(traces):.3e})"
        return cert, None
    if cls is PointClass.PSEUDO_UMBILICAL:
        mc = mean_curvature(inst)
        U = complete_frame((mc.H_vec / mc.H)[:, None])
        h_rot = np.einsum("rs,rij->sij", U, inst.h)
        A = rotate_shape_operators(h_rot, P)
        rest = A[1:]
        traces = block_traces(A, k)
        residual = _max_abs(rest[:, off_block])
        cert = EqualityCertificate(
            EqualityCase.T1_PSEUDO_UMBILICAL, P, traces, None, residual,
            normal_frame=U, mean_direction_operator=A[0],
        )
        if residual > cfg.tol_cert:
            return None, f"off-block residual {residual:.3e} exceeds {cfg.tol_cert:.1e}"
        if _max_abs(traces[1:]) > 1e-8:
            return None, "block traces off the mean-curvature direction are not zero"
        return cert, None
    return None, f"pointwise class {cls.value} admits no equality case"


def certify_theorem2(inst: SubmanifoldInstance, q: int, frame: np.ndarray, cfg: Config):
    n = inst.n
    P = complete_frame(frame)
    A = rotate_shape_operators(inst.h, P)
    traces = block_traces(A, q)
    tail = A[:, 2 * q :, 2 * q :]
    mu = np.trace(tail, axis1=1, axis2=2) / (n - 2 * q)
    pattern = np.zeros_like(A)
    mask = _block_mask(n, q)
    pattern[:, mask] = A[:, mask]
    pattern[:, 2 * q :, 2 * q :] = mu[:, None, None] * np.eye(n - 2 * q)
    residual = max(_max_abs(A - pattern), _max_abs(traces - mu[:, None]))
    cert = EqualityCertificate(EqualityCase.T2_TOTALLY_GEODESIC, P, traces, mu, residual)
    if residual > cfg.tol_cert:
        return None, f"block-pattern residual {residual:.3e} exceeds {cfg.tol_cert:.1e}"
    if _max_abs(inst.h) > cfg.tol_tg:
        return None, "block pattern matched but h is not zero; equality requires a totally geodesic point"
    return cert, None


# ---------------------------------------------------------------------------
# theorems


def _reject_small(n: int):
    if n <= 2:
        raise DomainError(f"n = {n}: neither bound applies in dimension 2")


def theorem1_bound(k: int, c: float, H: float) -> float:
    return 2.0 * (k - 1) * (c + H * H)


def theorem2_bound(n: int, q: int, c: float, H: float) -> float:
    return (n - 1 - 2.0 * q / n) * c + n * (n - q - 1) / (n - q) * H * H


def check_theorem1(inst: SubmanifoldInstance, cfg: Config | None = None) -> TheoremReport:
    """delta_k^Ric <= 2(k-1)(c + H^2) for n = 2k, k >= 2."""
    cfg = cfg or Config()
    n = inst.n
    if n % 2 or n < 4:
        raise DomainError(f"theorem 1 needs even n = 2k with k >= 2, got n = {n}")
    k = n // 2
    R = gauss_curvature_tensor(inst)
    rd = ricci_data(R)
    H = mean_curvature(inst).H
    rep = delta_from_tensor(R, k, cfg, rd)
    rhs = theorem1_bound(k, inst.c, H)
    return _finish(Theorem.T1, k, inst, rd.einstein_defect, H, rep, rhs, cfg)


def check_theorem2(inst: SubmanifoldInstance, q: int, cfg: Config | None = None) -> TheoremReport:
    """delta_q^Ric <= (n-1-2q/n)c + n(n-q-1)/(n-q) H^2 for 1 <= q < n/2."""
    cfg = cfg or Config()
    n = inst.n
    _reject_small(n)
    if not (1 <= q and 2 * q < n):
        raise DomainError(f"theorem 2 needs 1 <= q < n/2, got q = {q}, n = {n}")
    R = gauss_curvature_tensor(inst)
    rd = ricci_data(R)
    H = mean_curvature(inst).H
    rep = delta_from_tensor(R, q, cfg, rd)
    rhs = theorem2_bound(n, q, inst.c, H)
    return _finish(Theorem.T2, q, inst, rd.einstein_defect, H, rep, rhs, cfg)


def _finish(theorem, q, inst, einstein_defect, H, rep, rhs, cfg) -> TheoremReport:
    lhs = rep.delta_q_ric
    slack = rhs - lhs
    hyp = einstein_defect <= cfg.tol_einstein
    cert, failure = None, None
    if abs(slack) <= cfg.tol_eq:
        frame = rep.argmin_frame.F
        if theorem is Theorem.T1:
            cert, failure = certify_theorem1(inst, frame, cfg)
        else:
            cert, failure = certify_theorem2(inst, q, frame, cfg)
    return TheoremReport(
        theorem=theorem,
        q=q,
        hypothesis_ok=hyp,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        equality=cert is not None,
        certificate=cert,
        H=H,
        einstein_defect=einstein_defect,
        delta=rep,
        certificate_failure=failure,
    )


# ---------------------------------------------------------------------------
# Cauchy step inequalities


@dataclass(frozen=True)
class StepResult:
    lhs: float
    rhs: float
    holds: bool
    equality: bool

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs


def _holds(lhs: float, rhs: float) -> bool:
    # absolute 1e-12 for O(1) inputs, relative beyond that (rounding grows with lhs)
    return lhs >= rhs - STEP_TOL * max(1.0, abs(lhs))


def _all_equal(x: np.ndarray) -> bool:
    scale = max(1.0, float(np.max(np.abs(x))))
    return float(np.ptp(x)) <= STEP_TOL * scale


def step_inequality_33(traces) -> StepResult:
    """sum_l s_l^2 >= (sum_l s_l)^2 / k over the k pair-sums s_l = h_{2l-1} + h_{2l}."""
    s = np.asarray(traces, dtype=float).ravel()
    if s.size == 0:
        raise DomainError("need at least one pair-sum")
    lhs = float(np.sum(s * s))
    rhs = float(np.sum(s)) ** 2 / s.size
    return StepResult(lhs, rhs, _holds(lhs, rhs), _all_equal(s))


def step_inequality_46(pair_sums, singles) -> StepResult:
    """sum pair-sum^2 + sum single^2 >= (total)^2 / (n - q) with q pairs and n-2q singles."""
    p = np.asarray(pair_sums, dtype=float).ravel()
    s = np.asarray(singles, dtype=float).ravel()
    if p.size == 0 or s.size == 0:
        raise DomainError("need q >= 1 pair-sums and n - 2q >= 1 singles")
    x = np.concatenate([p, s])
    lhs = float(np.sum(x * x))
    rhs = float(np.sum(x)) ** 2 / x.size
    return StepResult(lhs, rhs, _holds(lhs, rhs), _all_equal(x))


# ---------------------------------------------------------------------------
# proof chains, evaluated in an arbitrary orthonormal frame


def proof_chain_theorem1(inst: SubmanifoldInstance, frame: np.ndarray) -> dict[str, float]:
    """Terms of the theorem 1 estimate for the planes span{f_1,f_2}, ..., span{f_2k-1,f_2k}.

    ``defect`` is tau - sum_l K(pi_l); it equals k * delta_k^Ric for an Einstein
    point when the frame attains K_k^inf. The chain reads
    defect <= gauss_bound <= cauchy_bound.
    """
    n = inst.n
    k = n // 2
    P = complete_frame(frame)
    A = rotate_shape_operators(inst.h, P)
    R = gauss_curvature_tensor(inst).R
    Rr = np.einsum("ijkl,ia,jb,kc,ld->abcd", R, P, P, P, P)
    tau = 0.5 * float(np.einsum("ikik->", Rr))
    planes = sum(Rr[2 * l, 2 * l + 1, 2 * l, 2 * l + 1] for l in range(k))
    tr = np.trace(A, axis1=1, axis2=2)
    ps = block_traces(A, k)
    gauss_bound = 2 * k * (k - 1) * inst.c + 0.5 * float(np.sum(tr**2 - np.sum(ps**2, axis=1)))
    H = mean_curvature(inst).H
    return {
        "defect": tau - float(planes),
        "gauss_bound": gauss_bound,
        "cauchy_bound": 2 * k * (k - 1) * (inst.c + H * H),
    }


def proof_chain_theorem2(inst: SubmanifoldInstance, q: int, frame: np.ndarray) -> dict[str, float]:
    """Terms I and II of the theorem 2 estimate with their bounds.

    I = sum_{i<=2q} Ric(f_i) - 2 sum_l K(pi_l) and II = sum_{i>2q} Ric(f_i);
    their sum equals n * delta_q^Ric for an Einstein point when the frame
    attains K_q^inf.
    """
    n, c = inst.n, inst.c
    P = complete_frame(frame)
    A = rotate_shape_operators(inst.h, P)
    R = gauss_curvature_tensor(inst).R
    Rr = np.einsum("ijkl,ia,jb,kc,ld->abcd", R, P, P, P, P)
    ric = np.einsum("ikjk->ij", Rr)
    planes = sum(Rr[2 * l, 2 * l + 1, 2 * l, 2 * l + 1] for l in range(q))
    term_I = float(np.trace(ric[: 2 * q, : 2 * q]) - 2 * planes)
    term_II = float(np.trace(ric[2 * q :, 2 * q :]))

    d = np.diagonal(A, axis1=1, axis2=2)
    head, tail = d[:, : 2 * q], d[:, 2 * q :]
    ps = block_traces(A, q)
    head_sum = head.sum(axis=1)
    tail_sum = tail.sum(axis=1)
    cross = float(np.sum(head_sum * tail_sum))
    tail_pairs = 0.5 * float(np.sum(tail_sum**2 - np.sum(tail**2, axis=1)))
    bound_I = 2 * q * (n - 2) * c + cross + float(np.sum(head_sum**2 - np.sum(ps**2, axis=1)))
    bound_II = (n - 2 * q) * (n - 1) * c + 2 * tail_pairs + cross
    H = mean_curvature(inst).H
    squares = float(np.sum(ps**2) + np.sum(tail**2))
    assembled = (n * n - n - 2 * q) * c + n * n * H * H - squares
    return {
        "I": term_I,
        "II": term_II,
        "bound_I": bound_I,
        "bound_II": bound_II,
        "assembled": assembled,
        "cauchy_bound": (n * n - n - 2 * q) * c + n * n * (n - q - 1) / (n - q) * H * H,
    }


# ---------------------------------------------------------------------------
# non-existence criteria


class Corollary1Verdict(str, enum.Enum):
    NOT_EINSTEIN_CERTIFIED = "not_einstein_certified"
    INCONCLUSIVE = "inconclusive"


class Corollary2Verdict(str, enum.Enum):
    NO_MINIMAL_IMMERSION_CERTIFIED = "no_minimal_immersion_certified"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CorollaryReport:
    verdict: enum.Enum
    delta: float
    threshold: float
    note: str | None = None


def corollary1(inst: SubmanifoldInstance, q: int, cfg: Config | None = None) -> CorollaryReport:
    """In complex Euclidean space, delta_q^Ric > n(n-q-1)/(n-q) H^2 rules out Einstein."""
    cfg = cfg or Config()
    if inst.c != 0:
        raise DomainError(f"corollary 1 concerns complex Euclidean space (c = 0), got c = {inst.c}")
    n = inst.n
    _reject_small(n)
    if not (1 <= q and 2 * q <= n):
        raise DomainError(f"need 1 <= q <= n/2, got q = {q}, n = {n}")
    H = mean_curvature(inst).H
    threshold = n * (n - q - 1) / (n - q) * H * H
    delta = delta_from_tensor(gauss_curvature_tensor(inst), q, cfg).delta_q_ric
    verdict = (
        Corollary1Verdict.NOT_EINSTEIN_CERTIFIED
        if delta > threshold + cfg.tol_eq
        else Corollary1Verdict.INCONCLUSIVE
    )
    return CorollaryReport(verdict, delta, threshold)


def corollary2(R: CurvatureTensor, q: int, c: float, cfg: Config | None = None) -> CorollaryReport:
    """An Einstein curvature tensor with delta_q^Ric > (n-1-2q/n)c admits no
    totally real minimal immersion into N(4c). Uses intrinsic data only."""
    cfg = cfg or Config()
    n = R.n
    _reject_small(n)
    if not (1 <= q and 2 * q <= n):
        raise DomainError(f"need 1 <= q <= n/2, got q = {q}, n = {n}")
    rd = ricci_data(R)
    threshold = (n - 1 - 2.0 * q / n) * c
    delta = delta_from_tensor(R, q, cfg, rd).delta_q_ric
    if rd.einstein_defect > cfg.tol_einstein:
        return CorollaryReport(
            Corollary2Verdict.INCONCLUSIVE, delta, threshold,
            note=f"not Einstein (Ricci eigenvalue spread {rd.einstein_defect:.3e})",
        )
    verdict = (
        Corollary2Verdict.NO_MINIMAL_IMMERSION_CERTIFIED
        if delta > threshold + cfg.tol_eq
        else Corollary2Verdict.INCONCLUSIVE
    )
    return CorollaryReport(verdict, delta, threshold)
