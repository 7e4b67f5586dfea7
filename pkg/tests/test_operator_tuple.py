import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszulspec.errors import CommutationError, SpecError
from koszulspec.instances import (
    JointDiagonalSpec,
    conjugated_normal_tuple,
    diagonal_tuple,
    random_commuting_tuple,
    random_normal_matrix,
    random_normal_tuple,
    tensor_pair,
    truncated_weighted_shift,
)
from koszulspec.matrix_kernel import adjoint
from koszulspec.operator_tuple import (
    OperatorTuple,
    classify,
    commutation_defects,
    is_log_hyponormal,
    is_p_hyponormal,
    is_semi_hyponormal,
    satisfies_condition1,
)
from oracles import sqrtm_psd

J = np.array([[0, 1], [0, 0]], dtype=complex)


def test_defect_examples():
    assert commutation_defects(OperatorTuple((np.diag([1, 2]), np.diag([3, 4])))) == (0.0, 0.0)
    A, B = np.random.default_rng(0).standard_normal((2, 3, 3))
    assert commutation_defects(tensor_pair(A, B)) == (0.0, 0.0)
    comm, _ = commutation_defects(OperatorTuple.unchecked((J, adjoint(J))))
    assert comm == pytest.approx(1.0)


def test_construction_rejects_noncommuting():
    with pytest.raises(CommutationError):
        OperatorTuple((J, adjoint(J)))


@pytest.mark.parametrize(
    "mats",
    [(), (np.zeros((2, 3)),), (np.eye(2), np.eye(3)), (np.zeros((0, 0)),)],
)
def test_construction_rejects_bad_shapes(mats):
    with pytest.raises(SpecError):
        OperatorTuple(mats)


def test_tuple_is_immutable_copy():
    A = np.diag([1.0, 2.0])
    T = OperatorTuple((A,))
    A[0, 0] = 9
    assert T[0][0, 0] == 1
    with pytest.raises(ValueError):
        T[0][0, 0] = 5


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_defects_scale_quadratically(seed, c):
    T = OperatorTuple.unchecked(tuple(np.random.default_rng(seed).standard_normal((2, 3, 3))))
    base = np.array(commutation_defects(T))
    scaled = np.array(commutation_defects(T.scaled(c)))
    np.testing.assert_allclose(scaled, abs(c) ** 2 * base, rtol=1e-12, atol=1e-300)


def test_p_hyponormal_examples():
    A, _, _ = random_normal_matrix(4, np.random.default_rng(3))
    for p in (0.1, 0.5, 1.0):
        v = is_p_hyponormal(A, p)
        assert v.holds and abs(v.margin) <= 1e-9
    assert is_p_hyponormal(np.array([[2.0]]), 0.3).holds
    shift = truncated_weighted_shift([1, 2])
    v = is_p_hyponormal(shift, 0.5)
    assert not v.holds and v.margin == pytest.approx(-2.0)


def test_shift_difference_oracle():
    T = truncated_weighted_shift([1, 2])
    np.testing.assert_allclose(adjoint(T) @ T - T @ adjoint(T), np.diag([1, 3, -4]))
    for p in (0.25, 0.5, 0.75, 1.0):
        assert is_p_hyponormal(T, p).holds is False


def test_log_hyponormal_examples():
    Q = np.linalg.qr(np.random.default_rng(1).standard_normal((3, 3)))[0]
    assert is_log_hyponormal(Q).holds
    v = is_log_hyponormal(np.zeros((2, 2)))
    assert v.holds is None and not v.applicable
    assert is_log_hyponormal(np.diag([2, -3])).holds


def test_condition1_examples():
    assert satisfies_condition1(np.diag([1j, -1j]))
    assert not satisfies_condition1(J)
    H = np.random.default_rng(2).standard_normal((4, 4))
    assert satisfies_condition1(H + H.T)


def test_classify_examples():
    rep = classify(diagonal_tuple(JointDiagonalSpec(2, ((1, 3), (2, 4)))))
    assert rep.doubly_commuting
    for op in rep.per_operator:
        assert op.is_normal and all(v.holds for _, v in op.p_hyponormal_for)
    rep = classify(OperatorTuple.unchecked((J, adjoint(J))))
    assert rep.commuting_defect == pytest.approx(1.0)
    A, _, _ = random_normal_matrix(2, np.random.default_rng(5), moduli=(1.5, 3.0))
    B, _, _ = random_normal_matrix(3, np.random.default_rng(6), moduli=(1.5, 3.0))
    rep = classify(tensor_pair(A, B))
    assert all(op.is_log_hyponormal.holds for op in rep.per_operator)
    d = rep.to_dict()
    assert d["double_commuting_defect"] == 0.0 and len(d["per_operator"]) == 2


def test_classify_rejects_bad_p():
    with pytest.raises(SpecError):
        classify(diagonal_tuple(JointDiagonalSpec(1, ((1,),))), [1.5])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**31), st.sampled_from([0.25, 0.5, 1.0]))
def test_p_hyponormal_invertible_implies_log_hyponormal(d, seed, p):
    rng = np.random.default_rng(seed)
    A, _, _ = random_normal_matrix(d, rng, moduli=(0.3, 3.0))
    if rng.uniform() < 0.5:
        # non-normal counter-candidate
        A = A + 0.5 * np.triu(rng.standard_normal((d, d)), 1)
    if is_p_hyponormal(A, p).holds and np.linalg.svd(A, compute_uv=False)[-1] > 1e-6:
        assert is_log_hyponormal(A).holds


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**31))
def test_semi_hyponormal_is_half_power(d, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    if rng.uniform() < 0.5:
        A, _, _ = random_normal_matrix(d, rng)
    diff = sqrtm_psd(adjoint(A) @ A) - sqrtm_psd(A @ adjoint(A))
    oracle = np.linalg.eigvalsh(diff).min() >= -1e-9 * (1 + np.linalg.norm(A, 2))
    assert is_semi_hyponormal(A).holds == is_p_hyponormal(A, 0.5).holds == oracle


def test_shifted_and_conjugated():
    T = conjugated_normal_tuple(JointDiagonalSpec(2, ((1, 3), (2, 4))), seed=4)
    S = T.shifted((1, 3))
    np.testing.assert_allclose(S[0], T[0] - np.eye(2))
    Q = np.linalg.qr(np.random.default_rng(0).standard_normal((2, 2)))[0]
    C = T.conjugated(Q)
    np.testing.assert_allclose(C[1], Q @ T[1] @ Q.T, atol=1e-14)


def test_random_tuples_commute():
    for seed in range(5):
        assert commutation_defects(random_commuting_tuple(3, 4, seed))[0] <= 1e-12
        assert max(commutation_defects(random_normal_tuple(2, 4, seed))) <= 1e-12
