import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rotation
from deltaric import (
    Config,
    OptimizerConfig,
    PointClass,
    SubmanifoldInstance,
    check_theorem1,
    check_theorem2,
    classify_pointwise,
    corollary1,
    corollary2,
    gauss_curvature_tensor,
    random_totally_real,
    step_inequality_33,
    step_inequality_46,
    totally_geodesic,
    umbilical_non_j,
)
from deltaric.curvature import constant_curvature_tensor
from deltaric.delta import delta_q_ric
from deltaric.errors import DomainError
from deltaric.verify import (
    Corollary1Verdict,
    Corollary2Verdict,
    EqualityCase,
    complete_frame,
    proof_chain_theorem1,
    proof_chain_theorem2,
)

CFG = Config(optimizer=OptimizerConfig(restarts=12))


def alternating_minimal(k, c, a, Q=None, extra_normals=1):
    """h = diag(a, -a, ..., a, -a) along e_{n+1}: Einstein, minimal, not constant curvature."""
    n = 2 * k
    m = n + extra_normals
    h = np.zeros((2 * m - n, n, n))
    h[0] = np.diag([a, -a] * k)
    if Q is not None:
        h = np.einsum("ia,rij,jb->rab", Q, h, Q)
        h = 0.5 * (h + h.transpose(0, 2, 1))
    return SubmanifoldInstance(n, m, c, h)


# ---- theorem 1


def test_theorem1_totally_geodesic():
    rep = check_theorem1(totally_geodesic(4, 5, 1.0), CFG)
    assert rep.lhs == pytest.approx(2.0, abs=1e-10)
    assert rep.rhs == 2.0
    assert rep.equality and rep.certificate.case is EqualityCase.T1_MINIMAL
    assert rep.slack == rep.rhs - rep.lhs


def test_theorem1_umbilical_equality():
    rep = check_theorem1(umbilical_non_j(4, 5, 0.0, 1.0), CFG)
    assert rep.hypothesis_ok
    assert rep.lhs == pytest.approx(2.0, abs=1e-10)
    assert rep.rhs == pytest.approx(2.0, abs=1e-14)
    assert rep.equality and rep.certificate.case is EqualityCase.T1_PSEUDO_UMBILICAL
    assert rep.certificate.residual <= 1e-6


def test_theorem1_perturbed_off_einstein():
    inst = umbilical_non_j(4, 5, 0.0, 1.0)
    h = inst.h.copy()
    h[0, 0, 0] += 0.1
    rep = check_theorem1(SubmanifoldInstance(4, 5, 0.0, h), CFG)
    assert not rep.hypothesis_ok
    assert rep.einstein_defect > 1e-3
    assert np.isfinite(rep.lhs) and np.isfinite(rep.rhs)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_theorem1_domain(n):
    with pytest.raises(DomainError):
        check_theorem1(totally_geodesic(n, n + 1, 0.0))


@pytest.mark.parametrize("k,a,c", [(2, 0.5, 1.0), (3, 1.0, 0.0), (2, 2.0, -1.0)])
def test_theorem1_minimal_equality_in_rotated_frame(k, a, c):
    Q = rotation(2 * k, np.random.default_rng(k))
    rep = check_theorem1(alternating_minimal(k, c, a, Q), CFG)
    assert rep.hypothesis_ok
    assert abs(rep.slack) <= 1e-8
    cert = rep.certificate
    assert cert.case is EqualityCase.T1_MINIMAL
    assert cert.residual <= 1e-6
    assert np.max(np.abs(cert.block_traces)) <= 1e-8
    np.testing.assert_allclose(cert.frame.T @ cert.frame, np.eye(2 * k), atol=1e-10)


def test_theorem1_case_ii_with_extra_blocks():
    # lambda*I along e_5 plus a trace-free block direction along e_6, then mix the
    # two non-J normals so the mean curvature vector is not a coordinate direction
    n, m, lam, a = 4, 6, 0.8, 0.6
    h = np.zeros((2 * m - n, n, n))
    h[0] = lam * np.eye(n)
    h[1] = np.diag([a, -a, a, -a])
    t = 0.4
    mixed = h.copy()
    mixed[0] = np.cos(t) * h[0] - np.sin(t) * h[1]
    mixed[1] = np.sin(t) * h[0] + np.cos(t) * h[1]
    inst = SubmanifoldInstance(n, m, 0.3, mixed)
    assert classify_pointwise(inst) is PointClass.PSEUDO_UMBILICAL
    rep = check_theorem1(inst, CFG)
    assert rep.hypothesis_ok and rep.equality
    cert = rep.certificate
    assert cert.case is EqualityCase.T1_PSEUDO_UMBILICAL
    assert np.max(np.abs(cert.block_traces[1:])) <= 1e-8
    np.testing.assert_allclose(cert.mean_direction_operator, lam * np.eye(n), atol=1e-8)


# ---- theorem 2


def test_theorem2_totally_geodesic():
    rep = check_theorem2(totally_geodesic(4, 5, 1.0), 1, CFG)
    assert rep.lhs == pytest.approx(2.5, abs=1e-10)
    assert rep.rhs == pytest.approx(2.5, abs=1e-15)
    assert rep.equality and rep.certificate.case is EqualityCase.T2_TOTALLY_GEODESIC
    assert classify_pointwise(totally_geodesic(4, 5, 1.0)) is PointClass.TOTALLY_GEODESIC


def test_theorem2_umbilical_strict():
    rep = check_theorem2(umbilical_non_j(4, 5, 0.0, 1.0), 1, CFG)
    assert rep.lhs == pytest.approx(2.5, abs=1e-10)
    assert rep.rhs == pytest.approx(8 / 3, abs=1e-14)
    assert not rep.equality and rep.certificate is None


def test_theorem2_negative_curvature():
    rep = check_theorem2(totally_geodesic(6, 7, -1.0), 2, CFG)
    assert rep.lhs == pytest.approx(-13 / 3, abs=1e-10)
    assert rep.rhs == pytest.approx(-13 / 3, abs=1e-14)
    assert rep.equality
    np.testing.assert_allclose(rep.certificate.mu, 0.0)


@pytest.mark.parametrize("n,q", [(4, 2), (5, 3), (6, 3), (6, 0)])
def test_theorem2_domain(n, q):
    with pytest.raises(DomainError):
        check_theorem2(totally_geodesic(n, n, 0.0), q)


def test_theorem2_minimal_einstein_not_certified_as_equality():
    rep = check_theorem2(alternating_minimal(2, 0.0, 1.0), 1, CFG)
    assert rep.hypothesis_ok
    assert rep.slack > 1e-3


# ---- soundness over the constructed Einstein families


@settings(max_examples=20, deadline=None)
@given(
    k=st.integers(2, 3),
    c=st.floats(-1, 1),
    lam=st.floats(0.05, 2),
    q=st.integers(1, 2),
)
def test_bounds_never_violated_on_umbilical_family(k, c, lam, q):
    inst = umbilical_non_j(2 * k, 2 * k + 1, c, lam)
    r1 = check_theorem1(inst, CFG)
    assert r1.hypothesis_ok and r1.slack >= -1e-8
    if 2 * q < 2 * k:
        r2 = check_theorem2(inst, q, CFG)
        assert r2.hypothesis_ok and r2.slack >= -1e-8
        assert not r2.equality


@settings(max_examples=10, deadline=None)
@given(k=st.integers(2, 3), c=st.floats(-1, 1), a=st.floats(0.1, 1.5), seed=st.integers(0, 1000))
def test_bounds_never_violated_on_minimal_family(k, c, a, seed):
    inst = alternating_minimal(k, c, a, rotation(2 * k, np.random.default_rng(seed)))
    r1 = check_theorem1(inst, CFG)
    assert r1.hypothesis_ok and r1.slack >= -1e-8
    if r1.equality:
        assert np.max(np.abs(r1.certificate.block_traces)) <= 1e-8
    r2 = check_theorem2(inst, 1, CFG)
    assert r2.slack >= -1e-8


# ---- proof chains in arbitrary frames


@settings(max_examples=25, deadline=None)
@given(k=st.integers(2, 4), c=st.floats(-1, 1), seed=st.integers(0, 2**32 - 1))
def test_theorem1_chain_holds_in_every_frame(k, c, seed):
    n = 2 * k
    inst = random_totally_real(n, n + 1, c, 1.0, seed)
    F = rotation(n, np.random.default_rng(seed))
    chain = proof_chain_theorem1(inst, F)
    assert chain["defect"] <= chain["gauss_bound"] + 1e-10
    assert chain["gauss_bound"] <= chain["cauchy_bound"] + 1e-10


@settings(max_examples=25, deadline=None)
@given(nq=st.sampled_from([(3, 1), (4, 1), (5, 2), (6, 2), (7, 3)]), c=st.floats(-1, 1), seed=st.integers(0, 2**32 - 1))
def test_theorem2_chain_holds_in_every_frame(nq, c, seed):
    n, q = nq
    inst = random_totally_real(n, n + 1, c, 1.0, seed)
    F = rotation(n, np.random.default_rng(seed))[:, : 2 * q]
    ch = proof_chain_theorem2(inst, q, F)
    assert ch["I"] <= ch["bound_I"] + 1e-10
    assert ch["II"] <= ch["bound_II"] + 1e-10
    assert ch["bound_I"] + ch["bound_II"] == pytest.approx(ch["assembled"], abs=1e-10)
    assert ch["assembled"] <= ch["cauchy_bound"] + 1e-10


def test_chains_reproduce_delta_at_argmin_for_einstein_points():
    inst = alternating_minimal(2, 0.3, 0.7, rotation(4, np.random.default_rng(1)))
    rep = delta_q_ric(inst, 2, CFG)
    chain = proof_chain_theorem1(inst, rep.argmin_frame.F)
    assert chain["defect"] == pytest.approx(2 * rep.delta_q_ric, abs=1e-9)

    inst = umbilical_non_j(5, 6, 0.2, 0.9)
    rep = delta_q_ric(inst, 2, CFG)
    ch = proof_chain_theorem2(inst, 2, rep.argmin_frame.F)
    assert ch["I"] + ch["II"] == pytest.approx(5 * rep.delta_q_ric, abs=1e-9)


def test_complete_frame_is_orthogonal(rng):
    F = rotation(6, rng)[:, :2]
    P = complete_frame(F)
    np.testing.assert_allclose(P.T @ P, np.eye(6), atol=1e-12)
    np.testing.assert_array_equal(P[:, :2], F)


# ---- step inequalities


def test_step33_examples():
    r = step_inequality_33([1.0, 0.0])
    assert (r.lhs, r.rhs, r.holds, r.equality) == (1.0, 0.5, True, False)
    s = 0.3
    r = step_inequality_33([s, s])
    assert r.lhs == pytest.approx(2 * s * s) and r.rhs == pytest.approx(2 * s * s)
    assert r.holds and r.equality
    with pytest.raises(DomainError):
        step_inequality_33([])


def test_step46_examples():
    r = step_inequality_46([2.0], [2.0, 2.0])
    assert r.lhs == 12.0 and r.rhs == 12.0 and r.equality
    r = step_inequality_46([1.0], [0.0, 0.0])
    assert r.lhs == 1.0 and r.rhs == pytest.approx(1 / 3) and r.holds and not r.equality
    with pytest.raises(DomainError):
        step_inequality_46([1.0], [])
    with pytest.raises(DomainError):
        step_inequality_46([], [1.0])


finite = st.floats(-1e3, 1e3, allow_nan=False)


@given(st.lists(finite, min_size=1, max_size=6))
def test_step33_property(xs):
    r = step_inequality_33(xs)
    assert r.holds
    if len(set(xs)) == 1:
        assert r.equality


@given(st.lists(finite, min_size=1, max_size=4), st.lists(finite, min_size=1, max_size=4))
def test_step46_property(ps, ss):
    r = step_inequality_46(ps, ss)
    assert r.holds
    if len(set(ps + ss)) == 1:
        assert r.equality


# ---- corollaries


def test_corollary1_totally_geodesic_inconclusive():
    r = corollary1(totally_geodesic(4, 5, 0.0), 1, CFG)
    assert r.verdict is Corollary1Verdict.INCONCLUSIVE
    assert r.delta == pytest.approx(0.0, abs=1e-12) and r.threshold == 0.0


def test_corollary1_equality_case_inconclusive():
    r = corollary1(umbilical_non_j(4, 5, 0.0, 1.0), 2, CFG)
    assert r.verdict is Corollary1Verdict.INCONCLUSIVE


def test_corollary1_certifies_a_random_instance():
    # search seeded random instances until the criterion fires
    for seed in range(50):
        inst = random_totally_real(4, 5, 0.0, 1.0, seed)
        r = corollary1(inst, 1, CFG)
        if r.verdict is Corollary1Verdict.NOT_EINSTEIN_CERTIFIED:
            break
    else:
        pytest.fail("no certifying instance among 50 seeds")
    assert r.delta > r.threshold + 1e-8
    # consistency with the contrapositive: the instance really is not Einstein
    rep = check_theorem2(inst, 1, CFG)
    assert not rep.hypothesis_ok


def test_corollary1_requires_euclidean_ambient():
    with pytest.raises(DomainError):
        corollary1(totally_geodesic(4, 5, 1.0), 1)


def test_corollary2_examples():
    R = constant_curvature_tensor(4, 1.5)
    r = corollary2(R, 1, 1.0, CFG)
    assert r.verdict is Corollary2Verdict.NO_MINIMAL_IMMERSION_CERTIFIED
    assert r.delta == pytest.approx(2.5 * 1.5, abs=1e-10)
    assert corollary2(constant_curvature_tensor(4, 1.0), 1, 1.0, CFG).verdict is Corollary2Verdict.INCONCLUSIVE
    r = corollary2(constant_curvature_tensor(4, 1.0), 1, 0.0, CFG)
    assert r.verdict is Corollary2Verdict.NO_MINIMAL_IMMERSION_CERTIFIED
    assert r.delta == pytest.approx(2.5, abs=1e-10)


def test_corollary2_is_intrinsic():
    # three sources of the same curvature tensor: lambda*I on e_5, on e_6, and the tensor itself
    lam, c = 0.7, 0.2
    a = umbilical_non_j(4, 6, c, lam)
    h = np.zeros_like(a.h)
    h[1] = lam * np.eye(4)
    b = SubmanifoldInstance(4, 6, c, h)
    Ra, Rb = gauss_curvature_tensor(a), gauss_curvature_tensor(b)
    np.testing.assert_array_equal(Ra.R, Rb.R)
    Rc = constant_curvature_tensor(4, c + lam**2)
    verdicts = {corollary2(R, 2, c, CFG).verdict for R in (Ra, Rb, Rc)}
    assert verdicts == {Corollary2Verdict.NO_MINIMAL_IMMERSION_CERTIFIED}


def test_corollary2_requires_einstein():
    R = gauss_curvature_tensor(random_totally_real(4, 5, 0.0, 1.0, 1))
    r = corollary2(R, 1, -10.0, CFG)
    assert r.verdict is Corollary2Verdict.INCONCLUSIVE and "Einstein" in r.note
