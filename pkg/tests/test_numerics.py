import numpy as np
import pytest

from orbitsym.errors import (
    AmbiguousLabels,
    DimensionMismatch,
    EmptyInput,
    FieldMismatch,
)
from orbitsym.numerics import (
    FieldTag,
    TolerancePolicy,
    cluster_scalars,
    inner_product,
    span_rank,
)


def test_inner_product_orthogonal_basis():
    assert inner_product([1.0, 0.0], [0.0, 1.0]) == 0.0


def test_inner_product_conjugate_linear_first_argument():
    # conj(i) * 1 = -i under the first-argument convention
    assert inner_product([1j, 0.0], [1.0 + 0j, 0.0]) == pytest.approx(-1j)


def test_inner_product_squared_norm():
    assert inner_product([1.0, 2.0], [1.0, 2.0]) == pytest.approx(5.0)


def test_inner_product_errors():
    with pytest.raises(DimensionMismatch):
        inner_product([1.0, 0.0], [1.0, 0.0, 0.0])
    with pytest.raises(FieldMismatch):
        inner_product([1.0, 0.0], [1j, 0.0])


def test_inner_product_hermitian_and_nonnegative():
    rng = np.random.default_rng(0)
    for _ in range(25):
        u = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        assert inner_product(u, v) == pytest.approx(
            np.conj(inner_product(v, u)), abs=1e-12
        )
        norm = inner_product(u, u)
        assert abs(norm.imag) < 1e-12
        assert norm.real > 0
    assert inner_product(np.zeros(3), np.zeros(3)) == 0.0


def test_cluster_scalars_clear_gap():
    policy = TolerancePolicy(label_tol=1e-9)
    assert cluster_scalars([1.0, 1.0 + 1e-12, 2.0], policy) == [[0, 1], [2]]


def test_cluster_scalars_distinct_values():
    assert cluster_scalars([5.0, 0.0, -5.0]) == [[0], [1], [2]]


def test_cluster_scalars_borderline_gap_is_ambiguous():
    # second value sits at half the required separation from the first
    policy = TolerancePolicy(label_tol=1e-6, gap_factor=10.0)
    with pytest.raises(AmbiguousLabels):
        cluster_scalars([0.0, 0.5 * 1e-6 * 10.0, 100.0], policy)


def test_cluster_scalars_transitive_chaining():
    policy = TolerancePolicy(label_tol=1.0, gap_factor=2.0)
    # 0 ~ 0.8 ~ 1.6 chain into one class even though 0 and 1.6 are far
    assert cluster_scalars([0.0, 0.8, 1.6, 50.0], policy) == [[0, 1, 2], [3]]


def test_cluster_scalars_complex_plane_distance():
    policy = TolerancePolicy(label_tol=1e-6)
    values = [1.0 + 1.0j, 1.0 - 1.0j, 1.0 + 1.0j + 1e-9]
    assert cluster_scalars(values, policy) == [[0, 2], [1]]


def test_cluster_scalars_is_partition():
    rng = np.random.default_rng(1)
    for _ in range(20):
        values = rng.choice([0.0, 1.0, 3.5, -2.0], size=12) + rng.standard_normal(
            12
        ) * 1e-13
        classes = cluster_scalars(values)
        seen = sorted(i for cls in classes for i in cls)
        assert seen == list(range(12))


def test_cluster_scalars_empty():
    with pytest.raises(EmptyInput):
        cluster_scalars([])


def test_span_rank_full():
    rank, basis = span_rank([[1.0, 0.0], [0.0, 1.0]])
    assert rank == 2
    assert np.allclose(basis @ basis.conj().T, np.eye(2), atol=1e-12)


def test_span_rank_collinear():
    rank, basis = span_rank([[1.0, 1.0], [2.0, 2.0]])
    assert rank == 1
    assert basis.shape == (1, 2)


def test_span_rank_zero_vector():
    rank, basis = span_rank([[0.0, 0.0]])
    assert rank == 0
    assert basis.shape == (0, 2)


def test_span_rank_empty():
    with pytest.raises(EmptyInput):
        span_rank(np.zeros((0, 3)))


def test_span_rank_bounded_by_count_and_dimension():
    rng = np.random.default_rng(2)
    for _ in range(20):
        k, d = rng.integers(1, 6), rng.integers(1, 6)
        pts = rng.standard_normal((k, d))
        rank, _ = span_rank(pts)
        assert rank <= min(k, d)


def test_policy_validation():
    with pytest.raises(ValueError):
        TolerancePolicy(label_tol=0.0)
    with pytest.raises(ValueError):
        TolerancePolicy(gap_factor=1.0)
    with pytest.raises(ValueError):
        TolerancePolicy(rank_tol=-1e-9)


def test_field_tag_extension_degree():
    assert FieldTag.REAL.ext_degree == 2
    assert FieldTag.COMPLEX.ext_degree == 1
