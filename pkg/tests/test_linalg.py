import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepcert import (
    DEFAULT_TOLERANCE,
    DegenerateInputError,
    NumericError,
    ShapeError,
    SizeBudgetError,
    TolerancePolicy,
    frobenius,
    kron,
    numerical_rank,
    proportional,
    realign_bipartite,
    schmidt_rank,
    span_dimension,
    unvectorize,
    vectorize,
)
from sepcert.linalg import as_matrix

I2 = np.eye(2)
SX = np.array([[0, 1], [1, 0]], dtype=complex)


def crand(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def realign_reference(s, dims):
    """Element-by-element reshuffle; the vectorized implementation must agree."""
    a_out, a_in, b_out, b_in = dims
    out = np.zeros((b_out * b_in, a_out * a_in), dtype=complex)
    for i in range(a_out):
        for k in range(a_in):
            for j in range(b_out):
                for l in range(b_in):
                    out[j + l * b_out, i + k * a_out] = s[i * b_out + j, k * b_in + l]
    return out


def test_vectorize_stacks_columns():
    m = np.array([[1, 2], [3, 4]])
    np.testing.assert_array_equal(vectorize(m).ravel(), [1, 3, 2, 4])


def test_vectorize_unvectorize_roundtrip():
    rng = np.random.default_rng(0)
    m = crand(rng, 3, 5)
    np.testing.assert_array_equal(unvectorize(vectorize(m), (3, 5)), m)


def test_unvectorize_rejects_bad_length():
    with pytest.raises(ShapeError):
        unvectorize(np.arange(5), (2, 3))


def test_kron_first_factor_is_slow_index():
    np.testing.assert_array_equal(
        kron(np.diag([1.0, 2.0]), I2), np.diag([1.0, 1.0, 2.0, 2.0])
    )


def test_kron_enforces_size_budget():
    wide = np.ones((1, 1 << 13))
    with pytest.raises(SizeBudgetError):
        kron(wide, wide)


@pytest.mark.parametrize("dims", [(2, 2, 2, 2), (2, 3, 4, 2), (3, 2, 2, 4), (1, 2, 3, 1)])
def test_realign_matches_loop_reference(dims):
    rng = np.random.default_rng(hash(dims) % 2**32)
    a_out, a_in, b_out, b_in = dims
    s = crand(rng, a_out * b_out, a_in * b_in)
    np.testing.assert_allclose(
        realign_bipartite(s, dims), realign_reference(s, dims), atol=0
    )


def test_realign_of_product_is_vec_outer_product():
    rng = np.random.default_rng(1)
    a = crand(rng, 3, 2)
    b = crand(rng, 2, 4)
    r = realign_bipartite(np.kron(a, b), (3, 2, 2, 4))
    np.testing.assert_allclose(r, vectorize(b) @ vectorize(a).T, atol=1e-14)
    assert numerical_rank(r) == 1


def test_realign_of_weighted_sum_factorizes():
    # realign(sum_j c_j A_j (x) B_j) equals (B columns) diag(c) (A columns)^T
    rng = np.random.default_rng(2)
    n = 5
    a_list = [crand(rng, 2, 3) for _ in range(n)]
    b_list = [crand(rng, 4, 2) for _ in range(n)]
    c = crand(rng, n, 1).ravel()
    s = sum(cj * np.kron(aj, bj) for cj, aj, bj in zip(c, a_list, b_list))
    a_mat = np.hstack([vectorize(a) for a in a_list])
    b_mat = np.hstack([vectorize(b) for b in b_list])
    np.testing.assert_allclose(
        realign_bipartite(s, (2, 3, 4, 2)),
        b_mat @ np.diag(c) @ a_mat.T,
        atol=1e-13,
    )


def test_realign_rejects_shape_mismatch():
    with pytest.raises(ShapeError):
        realign_bipartite(np.eye(4), (2, 2, 2, 3))


def test_swap_gate_has_full_schmidt_rank():
    swap = np.zeros((4, 4))
    for i in range(2):
        for j in range(2):
            swap[j * 2 + i, i * 2 + j] = 1.0
    assert schmidt_rank(swap, (2, 2, 2, 2)) == 4


def test_product_operator_has_schmidt_rank_one():
    rng = np.random.default_rng(3)
    s = np.kron(crand(rng, 2, 2), crand(rng, 3, 3))
    assert schmidt_rank(s, (2, 2, 3, 3)) == 1


def test_numerical_rank_default_cutoff():
    assert numerical_rank(np.diag([1.0, 1e-16])) == 1
    assert numerical_rank(np.diag([1.0, 1e-8])) == 2
    assert numerical_rank(np.zeros((3, 3))) == 0


def test_numerical_rank_absolute_floor():
    # Tiny overall scale: everything sits below the absolute floor.
    rng = np.random.default_rng(4)
    assert numerical_rank(1e-20 * crand(rng, 3, 3)) == 0


def test_numerical_rank_explicit_relative_threshold():
    policy = TolerancePolicy(relative_rank_threshold=1e-3)
    assert numerical_rank(np.diag([1.0, 1e-4]), policy) == 1
    assert numerical_rank(np.diag([1.0, 1e-2]), policy) == 2


def test_tolerance_policy_validates():
    with pytest.raises(ValueError):
        TolerancePolicy(relative_rank_threshold=1.5)
    with pytest.raises(ValueError):
        TolerancePolicy(absolute_floor=-1.0)
    assert DEFAULT_TOLERANCE.relative_for(4, 2) == 4 * np.finfo(float).eps * 1e3


def test_span_dimension_basic_cases():
    assert span_dimension([I2, SX, I2 + SX]) == 2
    assert span_dimension([I2, 2 * I2]) == 1
    assert span_dimension([]) == 0
    with pytest.raises(ShapeError):
        span_dimension([I2, np.eye(3)])


def test_proportional_recovers_scalar():
    rng = np.random.default_rng(5)
    b = crand(rng, 3, 3)
    lam = proportional((2 + 1j) * b, b)
    assert lam is not None
    assert abs(lam - (2 + 1j)) < 1e-12
    assert proportional(I2, SX) is None


def test_proportional_rejects_zero():
    with pytest.raises(DegenerateInputError):
        proportional(np.zeros((2, 2)), I2)


def test_as_matrix_rejections():
    with pytest.raises(ShapeError):
        as_matrix(np.arange(4))
    with pytest.raises(NumericError):
        as_matrix(np.array([[np.inf, 0], [0, 1]]))


def test_frobenius():
    assert frobenius(np.array([[3, 4]])) == pytest.approx(5.0)


@given(st.integers(0, 2**31 - 1), st.integers(2, 3), st.integers(2, 3))
@settings(max_examples=40, deadline=None)
def test_realign_is_linear(seed, da, db):
    rng = np.random.default_rng(seed)
    dims = (da, da, db, db)
    s = crand(rng, da * db, da * db)
    t = crand(rng, da * db, da * db)
    a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
    np.testing.assert_allclose(
        realign_bipartite(a * s + b * t, dims),
        a * realign_bipartite(s, dims) + b * realign_bipartite(t, dims),
        atol=1e-12,
    )


@given(st.integers(0, 2**31 - 1), st.integers(1, 5))
@settings(max_examples=40, deadline=None)
def test_span_dimension_invariant_under_nonzero_scaling(seed, n):
    rng = np.random.default_rng(seed)
    mats = [crand(rng, 2, 3) for _ in range(n)]
    scales = np.exp(1j * rng.uniform(0, 2 * np.pi, n)) * rng.uniform(0.5, 2.0, n)
    scaled = [s * m for s, m in zip(scales, mats)]
    assert span_dimension(scaled) == span_dimension(mats)
